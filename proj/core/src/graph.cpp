#include "sgnlap/graph.hpp"

#include <algorithm>
#include <unordered_set>

#include <json.hpp>

namespace sgnlap {

namespace {

// Dense graphs only; keeps every matrix in this toolkit comfortably dense.
constexpr int kMaxBoundarySlots = 10000;

void check_unique(std::unordered_set<std::string>& seen, const std::string& id,
                  const char* what) {
  if (!seen.insert(id).second)
    throw std::invalid_argument(std::string("duplicate ") + what + " id: " + id);
}

}  // namespace

char to_char(Sign s) { return s == Sign::positive ? '+' : '-'; }

Sign sign_from_string(const std::string& s) {
  if (s == "+") return Sign::positive;
  if (s == "-") return Sign::negative;
  throw std::invalid_argument("sign must be \"+\" or \"-\", got \"" + s + "\"");
}

MetricGraph::MetricGraph(std::vector<std::string> vertices,
                         std::vector<ExternalEdge> external,
                         std::vector<InternalEdge> internal)
    : vertices_(std::move(vertices)),
      external_(std::move(external)),
      internal_(std::move(internal)) {
  if (external_.empty() && internal_.empty())
    throw std::invalid_argument("empty graph: no edges declared");

  std::unordered_set<std::string> vset;
  for (const auto& v : vertices_) check_unique(vset, v, "vertex");

  std::unordered_set<std::string> eset;
  for (const auto& e : external_) {
    check_unique(eset, e.id, "edge");
    if (!vset.count(e.at))
      throw std::invalid_argument("external edge " + e.id +
                                  " attached to undeclared vertex " + e.at);
  }
  for (const auto& i : internal_) {
    check_unique(eset, i.id, "edge");
    if (!vset.count(i.from) || !vset.count(i.to))
      throw std::invalid_argument("internal edge " + i.id +
                                  " attached to undeclared vertex");
    if (!(i.length > 0.0))
      throw std::invalid_argument("internal edge " + i.id +
                                  " must have positive length");
  }

  const std::size_t slots = external_.size() + 2 * internal_.size();
  if (slots > kMaxBoundarySlots)
    throw std::invalid_argument("graph exceeds the boundary slot cap");
}

std::size_t MetricGraph::count_external(Sign s) const {
  return std::count_if(external_.begin(), external_.end(),
                       [s](const ExternalEdge& e) { return e.sign == s; });
}

std::size_t MetricGraph::count_internal(Sign s) const {
  return std::count_if(internal_.begin(), internal_.end(),
                       [s](const InternalEdge& e) { return e.sign == s; });
}

double MetricGraph::total_length(Sign s) const {
  double sum = 0.0;
  for (const auto& i : internal_)
    if (i.sign == s) sum += i.length;
  return sum;
}

const ExternalEdge* MetricGraph::find_external(const std::string& id) const {
  for (const auto& e : external_)
    if (e.id == id) return &e;
  return nullptr;
}

const InternalEdge* MetricGraph::find_internal(const std::string& id) const {
  for (const auto& i : internal_)
    if (i.id == id) return &i;
  return nullptr;
}

MetricGraph parse_graph(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument(std::string("graph document: ") + err.what());
  }
  if (!doc.is_object())
    throw std::invalid_argument("graph document must be a JSON object");

  std::vector<std::string> vertices;
  for (const auto& v : doc.value("vertices", nlohmann::json::array()))
    vertices.push_back(v.get<std::string>());

  std::vector<ExternalEdge> external;
  for (const auto& e : doc.value("external", nlohmann::json::array())) {
    external.push_back({e.at("id").get<std::string>(),
                        sign_from_string(e.at("sign").get<std::string>()),
                        e.at("at").get<std::string>()});
  }

  std::vector<InternalEdge> internal;
  for (const auto& e : doc.value("internal", nlohmann::json::array())) {
    internal.push_back({e.at("id").get<std::string>(),
                        sign_from_string(e.at("sign").get<std::string>()),
                        e.at("from").get<std::string>(),
                        e.at("to").get<std::string>(),
                        e.at("length").get<double>()});
  }

  return MetricGraph(std::move(vertices), std::move(external),
                     std::move(internal));
}

std::string write_graph(const MetricGraph& g) {
  nlohmann::ordered_json doc;
  doc["vertices"] = g.vertices();
  doc["external"] = nlohmann::ordered_json::array();
  for (const auto& e : g.external_edges()) {
    doc["external"].push_back({{"id", e.id},
                               {"sign", std::string(1, to_char(e.sign))},
                               {"at", e.at}});
  }
  doc["internal"] = nlohmann::ordered_json::array();
  for (const auto& e : g.internal_edges()) {
    doc["internal"].push_back({{"id", e.id},
                               {"sign", std::string(1, to_char(e.sign))},
                               {"from", e.from},
                               {"to", e.to},
                               {"length", e.length}});
  }
  return doc.dump(2);
}

BoundaryIndex::BoundaryIndex(const MetricGraph& g) {
  auto add_slot = [this](SlotInfo info, Endpoint end) {
    const std::string key =
        info.edge_id + (end == Endpoint::origin ? "/0" : "/1");
    map_.emplace(key, static_cast<int>(slots_.size()));
    slots_.push_back(std::move(info));
  };

  for (Sign s : {Sign::positive, Sign::negative}) {
    const auto& ext = g.external_edges();
    for (std::size_t j = 0; j < ext.size(); ++j)
      if (ext[j].sign == s)
        add_slot({SlotInfo::Kind::external, s, j, ext[j].id}, Endpoint::origin);
    const auto& in = g.internal_edges();
    for (std::size_t j = 0; j < in.size(); ++j)
      if (in[j].sign == s)
        add_slot({SlotInfo::Kind::internal_origin, s, j, in[j].id},
                 Endpoint::origin);
    for (std::size_t j = 0; j < in.size(); ++j)
      if (in[j].sign == s)
        add_slot({SlotInfo::Kind::internal_terminus, s, j, in[j].id},
                 Endpoint::terminus);
    int block = static_cast<int>(slots_.size());
    if (s == Sign::positive)
      n_ = block;
    else
      m_ = block - n_;
  }

  for (Sign s : {Sign::positive, Sign::negative})
    for (const auto& e : g.external_edges())
      if (e.sign == s) external_slots_.push_back(slot(e.id, Endpoint::origin));
}

int BoundaryIndex::slot(const std::string& edge_id, Endpoint end) const {
  const std::string key = edge_id + (end == Endpoint::origin ? "/0" : "/1");
  auto it = map_.find(key);
  if (it == map_.end())
    throw std::invalid_argument("no boundary slot for edge " + edge_id);
  return it->second;
}

double BoundaryIndex::edge_length(int slot, const MetricGraph& g) const {
  const SlotInfo& info = slots_.at(slot);
  if (info.kind == SlotInfo::Kind::external)
    throw std::invalid_argument("external slots have no length");
  return g.internal_edges()[info.edge_index].length;
}

std::string glue_rename_prefix(const MetricGraph& g1, const MetricGraph& g2) {
  std::unordered_set<std::string> ids1;
  for (const auto& v : g1.vertices()) ids1.insert(v);
  for (const auto& e : g1.external_edges()) ids1.insert(e.id);
  for (const auto& e : g1.internal_edges()) ids1.insert(e.id);

  auto collides = [&](const std::string& prefix) {
    auto hit = [&](const std::string& id) { return ids1.count(prefix + id); };
    for (const auto& v : g2.vertices())
      if (hit(v)) return true;
    for (const auto& e : g2.external_edges())
      if (hit(e.id)) return true;
    for (const auto& e : g2.internal_edges())
      if (hit(e.id)) return true;
    return false;
  };

  std::string prefix;
  while (collides(prefix)) prefix += "g2:";
  return prefix;
}

MetricGraph glue_graphs(
    const MetricGraph& g1, const MetricGraph& g2,
    const std::vector<std::pair<std::string, std::string>>& identified,
    const std::vector<double>& lengths) {
  if (identified.size() != lengths.size())
    throw std::invalid_argument("one length per identified pair required");
  for (double a : lengths)
    if (!(a > 0.0))
      throw std::invalid_argument("glue lengths must be positive");

  std::unordered_set<std::string> used1, used2;
  for (const auto& [id1, id2] : identified) {
    const ExternalEdge* e1 = g1.find_external(id1);
    const ExternalEdge* e2 = g2.find_external(id2);
    if (!e1 || !e2)
      throw std::invalid_argument("identified edge is not external: " +
                                  (e1 ? id2 : id1));
    if (e1->sign != e2->sign)
      throw std::invalid_argument("sign mismatch gluing " + id1 + " to " + id2);
    if (!used1.insert(id1).second || !used2.insert(id2).second)
      throw std::invalid_argument("edge identified twice");
  }

  const std::string prefix = glue_rename_prefix(g1, g2);

  std::vector<std::string> vertices = g1.vertices();
  for (const auto& v : g2.vertices()) vertices.push_back(prefix + v);

  std::vector<ExternalEdge> external;
  for (const auto& e : g1.external_edges())
    if (!used1.count(e.id)) external.push_back(e);
  for (const auto& e : g2.external_edges())
    if (!used2.count(e.id))
      external.push_back({prefix + e.id, e.sign, prefix + e.at});

  std::vector<InternalEdge> internal = g1.internal_edges();
  for (const auto& e : g2.internal_edges())
    internal.push_back(
        {prefix + e.id, e.sign, prefix + e.from, prefix + e.to, e.length});
  for (std::size_t p = 0; p < identified.size(); ++p) {
    const ExternalEdge* e1 = g1.find_external(identified[p].first);
    const ExternalEdge* e2 = g2.find_external(identified[p].second);
    internal.push_back(
        {e1->id, e1->sign, e1->at, prefix + e2->at, lengths[p]});
  }

  return MetricGraph(std::move(vertices), std::move(external),
                     std::move(internal));
}

}  // namespace sgnlap
