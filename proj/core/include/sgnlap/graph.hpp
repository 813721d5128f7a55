#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sgnlap {

/// Sign carried by an edge: the operator acts as -d^2/dx^2 on positive
/// edges and as +d^2/dx^2 on negative edges.
enum class Sign : int { positive = +1, negative = -1 };

inline Sign opposite(Sign s) {
  return s == Sign::positive ? Sign::negative : Sign::positive;
}

char to_char(Sign s);
Sign sign_from_string(const std::string& s);

struct ExternalEdge {
  std::string id;
  Sign sign;
  std::string at;  // initial vertex; the edge is the half line [0, inf)

  bool operator==(const ExternalEdge&) const = default;
};

struct InternalEdge {
  std::string id;
  Sign sign;
  std::string from;  // vertex at x = 0
  std::string to;    // vertex at x = length
  double length;

  bool operator==(const InternalEdge&) const = default;
};

/// A finite metric graph with a sign partition of its edges.
///
/// Vertices are opaque identifiers; edges keep their declaration order,
/// which fixes the canonical boundary-slot ordering used everywhere else.
/// Instances are immutable after construction and safe to share between
/// threads.
class MetricGraph {
 public:
  /// Validates and freezes a graph description.
  /// Throws std::invalid_argument on duplicate ids, dangling endpoints,
  /// non-positive internal lengths or an empty edge set.
  MetricGraph(std::vector<std::string> vertices,
              std::vector<ExternalEdge> external,
              std::vector<InternalEdge> internal);

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<ExternalEdge>& external_edges() const { return external_; }
  const std::vector<InternalEdge>& internal_edges() const { return internal_; }

  bool compact() const { return external_.empty(); }

  std::size_t count_external(Sign s) const;
  std::size_t count_internal(Sign s) const;

  /// Sum of internal edge lengths of one sign.
  double total_length(Sign s) const;

  const ExternalEdge* find_external(const std::string& id) const;
  const InternalEdge* find_internal(const std::string& id) const;

  bool operator==(const MetricGraph&) const = default;

 private:
  std::vector<std::string> vertices_;
  std::vector<ExternalEdge> external_;
  std::vector<InternalEdge> internal_;
};

/// Parses the JSON graph document:
///   {"vertices": [...],
///    "external": [{"id":..,"sign":"+"|"-","at":..}, ...],
///    "internal": [{"id":..,"sign":..,"from":..,"to":..,"length":..}, ...]}
MetricGraph parse_graph(const std::string& json_text);

/// Inverse of parse_graph; parse_graph(write_graph(g)) == g exactly.
std::string write_graph(const MetricGraph& g);

enum class Endpoint { origin, terminus };

struct SlotInfo {
  enum class Kind { external, internal_origin, internal_terminus };
  Kind kind;
  Sign sign;
  std::size_t edge_index;  // into external_edges() or internal_edges()
  std::string edge_id;
};

/// Canonical indexing of the boundary space K.
///
/// Slots are ordered
///   [E+ origins | I+ origins | I+ termini | E- origins | I- origins | I- termini]
/// with declaration order inside each group. The first n = |E+| + 2|I+|
/// slots span K+, the remaining m = |E-| + 2|I-| slots span K-. The same
/// index enumerates the coefficient space of the per-edge solution Ansatz:
/// an external slot carries the coefficient s_e, an internal origin slot
/// the coefficient alpha_i and an internal terminus slot the coefficient
/// beta_i of the edge.
class BoundaryIndex {
 public:
  explicit BoundaryIndex(const MetricGraph& g);

  int n() const { return n_; }
  int m() const { return m_; }
  int dim() const { return n_ + m_; }

  int slot(const std::string& edge_id, Endpoint end) const;
  const std::vector<SlotInfo>& slots() const { return slots_; }

  /// Slots of the external edges, E+ first then E-, declaration order.
  const std::vector<int>& external_slots() const { return external_slots_; }

  /// Length of the internal edge a slot belongs to.
  double edge_length(int slot, const MetricGraph& g) const;

 private:
  int n_ = 0, m_ = 0;
  std::vector<SlotInfo> slots_;
  std::vector<int> external_slots_;
  std::unordered_map<std::string, int> map_;  // "id/0" and "id/1" keys
};

/// Glues two graphs along the external edge pairs listed in `identified`
/// (first id from g1, second from g2). Each identified pair must carry
/// equal sign and becomes an internal edge of the given length running
/// from the g1 attachment vertex to the g2 attachment vertex; the new
/// edge inherits the id of the g1 member. All remaining data is kept.
/// If id sets of the two graphs collide, every g2 id is prefixed with
/// "g2:" (repeated until free) so that two copies of the same graph can
/// be glued.
MetricGraph glue_graphs(
    const MetricGraph& g1, const MetricGraph& g2,
    const std::vector<std::pair<std::string, std::string>>& identified,
    const std::vector<double>& lengths);

/// Id prefix applied by glue_graphs to the second graph, exposed so that
/// callers can translate edge and vertex names. Empty when no collision.
std::string glue_rename_prefix(const MetricGraph& g1, const MetricGraph& g2);

}  // namespace sgnlap
