// Batch front end: validation, spectra, scattering sweeps, resolvent dumps
// and gluing experiments on signed metric graphs, with CSV reports.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <sgnlap/bc.hpp>
#include <sgnlap/csv.hpp>
#include <sgnlap/graph.hpp>
#include <sgnlap/resolvent.hpp>
#include <sgnlap/scattering.hpp>
#include <sgnlap/spectral.hpp>

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace sgnlap;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct System {
  MetricGraph graph;
  BoundaryIndex index;
  BoundaryConditions bc;
};

System load_system(const std::string& graph_path, const std::string& bc_path) {
  MetricGraph g = parse_graph(read_file(graph_path));
  BoundaryIndex index(g);
  BoundaryConditions bc = parse_bc(read_file(bc_path), g, index);
  return {std::move(g), std::move(index), std::move(bc)};
}

std::string joined_argv(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

std::vector<std::pair<std::string, std::string>> parse_ident(
    const std::string& spec) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("identification entries look like edge1=edge2");
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

std::vector<double> parse_lengths(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

int run_validate(const std::string& graph_path, const std::string& bc_path) {
  const System sys = load_system(graph_path, bc_path);
  const auto rep = check_self_adjoint(sys.bc);
  const auto lap = check_laplacian_self_adjoint(sys.bc);
  std::cout << "boundary space: n = " << sys.index.n()
            << ", m = " << sys.index.m() << "\n";
  std::cout << "self-adjoint: " << (rep.ok() ? "yes" : "no") << "\n";
  std::cout << "  rank ok: " << (rep.rank_ok ? "yes" : "no")
            << " (defect " << format_float(rep.rank_residual) << ")\n";
  std::cout << "  symmetry residual: " << format_float(rep.symmetry_residual)
            << "\n";
  std::cout << "laplacian (Krein) self-adjoint: " << (lap.ok() ? "yes" : "no")
            << " (residual " << format_float(lap.symmetry_residual) << ")\n";
  if (sys.graph.compact())
    std::cout << "form invertibility margin: "
              << format_float(form_invertibility_margin(sys.graph)) << "\n";
  return rep.ok() ? 0 : 1;
}

Branch parse_branch(const std::string& name) {
  if (name == "positive") return Branch::positive;
  if (name == "negative") return Branch::negative;
  throw std::runtime_error("branch must be positive or negative");
}

int run_spectrum(const std::string& graph_path, const std::string& bc_path,
                 const std::string& branch, double kmin, double kmax,
                 double step, double residual_tol, const std::string& out,
                 const std::string& command, bool resonances_only) {
  const System sys = load_system(graph_path, bc_path);
  ScanOptions opts;
  opts.accept_residual = residual_tol;

  CsvWriter csv(out);
  csv.comment(command);
  csv.comment(std::string("sgnlap ") + kVersion +
              ", accept_residual=" + format_float(opts.accept_residual) +
              ", bracket_threshold=" + format_float(opts.bracket_threshold));

  std::vector<Branch> branches;
  if (branch == "both") {
    branches = {Branch::positive, Branch::negative};
  } else {
    branches = {parse_branch(branch)};
  }

  if (resonances_only) {
    csv.header({"branch", "root", "residual", "is_eigenvalue"});
    for (Branch b : branches)
      for (const auto& r :
           find_resonances(sys.bc, sys.graph, b, kmin, kmax, step, opts))
        csv.row({b == Branch::positive ? "positive" : "negative",
                 format_float(r.root), format_float(r.residual),
                 r.is_eigenvalue ? "1" : "0"});
    return 0;
  }

  csv.header({"branch", "lambda", "k_or_kappa", "multiplicity", "residual"});
  csv.row({"zero", "0", "0",
           std::to_string(zero_mode_dimension(sys.bc, sys.graph)), "0"});
  for (Branch b : branches)
    for (const auto& e :
         find_eigenvalues(sys.bc, sys.graph, b, kmin, kmax, step, opts))
      csv.row({b == Branch::positive ? "positive" : "negative",
               format_float(e.lambda), format_float(e.root),
               std::to_string(e.multiplicity), format_float(e.residual)});
  return 0;
}

int run_scatter(const std::string& graph_path, const std::string& bc_path,
                double lmin, double lmax, int samples, const std::string& out,
                const std::string& command) {
  if (samples < 1) throw std::runtime_error("need at least one sample");
  if (lmin * lmax <= 0.0)
    throw std::runtime_error(
        "the sweep range must stay on one side of lambda = 0");
  const System sys = load_system(graph_path, bc_path);

  // dry run to name the columns
  const auto first = scattering_matrix(sys.bc, sys.graph, lmin);
  std::vector<std::string> cols{"lambda"};
  for (const auto& r : first.edge_ids)
    for (const auto& c : first.edge_ids) {
      cols.push_back("re_S_" + r + "_" + c);
      cols.push_back("im_S_" + r + "_" + c);
    }
  cols.push_back("unitarity_residual");

  CsvWriter csv(out);
  csv.comment(command);
  csv.comment(std::string("sgnlap ") + kVersion);
  csv.header(cols);

  for (int i = 0; i < samples; ++i) {
    const double lambda =
        samples == 1 ? lmin : lmin + (lmax - lmin) * i / (samples - 1.0);
    const auto res = scattering_matrix(sys.bc, sys.graph, lambda);
    std::vector<std::string> row{format_float(lambda)};
    for (Eigen::Index r = 0; r < res.S.rows(); ++r)
      for (Eigen::Index c = 0; c < res.S.cols(); ++c) {
        row.push_back(format_float(res.S(r, c).real()));
        row.push_back(format_float(res.S(r, c).imag()));
      }
    row.push_back(format_float(res.unitarity_residual));
    csv.row(row);
  }
  return 0;
}

int run_resolvent(const std::string& graph_path, const std::string& bc_path,
                  double k_re, double k_im, const std::string& branch,
                  double step, double extent, const std::string& out,
                  const std::string& command) {
  const System sys = load_system(graph_path, bc_path);
  const ResolventBranch rb =
      branch == "P" ? ResolventBranch::P : ResolventBranch::Q;
  const ResolventContext ctx(sys.bc, sys.graph, Complex(k_re, k_im), rb);

  std::vector<std::pair<std::string, double>> supports;
  for (const auto& e : sys.graph.external_edges())
    supports.emplace_back(e.id, extent);
  for (const auto& e : sys.graph.internal_edges())
    supports.emplace_back(e.id, e.length);

  CsvWriter csv(out);
  csv.comment(command);
  csv.comment(std::string("sgnlap ") + kVersion);
  csv.header({"edge_p", "x", "edge_q", "y", "re", "im"});
  for (const auto& [ep, lp] : supports)
    for (const auto& [eq, lq] : supports)
      for (double x = 0.0; x <= lp + 1e-12; x += step)
        for (double y = 0.0; y <= lq + 1e-12; y += step) {
          const Complex v = ctx.kernel({ep, x}, {eq, y});
          csv.row({ep, format_float(x), eq, format_float(y),
                   format_float(v.real()), format_float(v.imag())});
        }
  return 0;
}

int run_glue(const std::string& g1_path, const std::string& bc1_path,
             const std::string& g2_path, const std::string& bc2_path,
             const std::string& ident_spec, const std::string& lengths_spec,
             double kmin, double kmax, int samples, const std::string& out,
             const std::string& command) {
  const System s1 = load_system(g1_path, bc1_path);
  const System s2 = load_system(g2_path, bc2_path);
  const auto ident = parse_ident(ident_spec);
  const auto lengths = parse_lengths(lengths_spec);

  // The star product pairs the negative channels in declaration order;
  // reuse the identification list to permute the second data set.
  std::vector<std::string> e2_order;
  for (const auto& [a, b] : ident) e2_order.push_back(b);

  const auto glued = glue_systems(s1.graph, s1.bc, s2.graph, s2.bc, ident,
                                  lengths);

  CsvWriter csv(out);
  csv.comment(command);
  csv.comment(std::string("sgnlap ") + kVersion);

  const auto first = scattering_matrix(glued.bc, glued.graph, kmin * kmin);
  std::vector<std::string> cols{"lambda"};
  for (const auto& r : first.edge_ids)
    for (const auto& c : first.edge_ids) {
      cols.push_back("re_S_" + r + "_" + c);
      cols.push_back("im_S_" + r + "_" + c);
    }
  cols.push_back("deviation");
  csv.header(cols);

  double max_dev = 0.0;
  int skipped = 0;
  for (int i = 0; i < samples; ++i) {
    const double k =
        samples == 1 ? kmin : kmin + (kmax - kmin) * i / (samples - 1.0);
    try {
      auto d1 = scattering_data(s1.bc, s1.graph, k);
      auto d2 = scattering_data(s2.bc, s2.graph, k);

      // permute d2's negative block into identification order
      std::vector<int> perm;
      for (const auto& id : e2_order)
        for (int c = 0; c < d2.e_minus; ++c)
          if (d2.edges[d2.e_plus + c] == id) perm.push_back(c);
      ScatteringData d2p = d2;
      for (int r = 0; r < d2.e_minus; ++r)
        for (int c = 0; c < d2.e_minus; ++c)
          d2p.chi_EE(d2.e_plus + r, d2.e_plus + c) =
              d2.chi_EE(d2.e_plus + perm[r], d2.e_plus + perm[c]);
      for (int r = 0; r < d2.e_plus; ++r)
        for (int c = 0; c < d2.e_minus; ++c)
          d2p.chi_EE(r, d2.e_plus + c) = d2.chi_EE(r, d2.e_plus + perm[c]);
      for (int r = 0; r < d2.e_minus; ++r)
        for (int c = 0; c < d2.e_plus; ++c)
          d2p.chi_EE(d2.e_plus + r, c) = d2.chi_EE(d2.e_plus + perm[r], c);

      // graph-1 side in identification order as well
      std::vector<int> perm1;
      for (const auto& [id, unused] : ident)
        for (int c = 0; c < d1.e_minus; ++c)
          if (d1.edges[d1.e_plus + c] == id) perm1.push_back(c);
      ScatteringData d1p = d1;
      for (int r = 0; r < d1.e_minus; ++r)
        for (int c = 0; c < d1.e_minus; ++c)
          d1p.chi_EE(d1.e_plus + r, d1.e_plus + c) =
              d1.chi_EE(d1.e_plus + perm1[r], d1.e_plus + perm1[c]);
      for (int r = 0; r < d1.e_plus; ++r)
        for (int c = 0; c < d1.e_minus; ++c)
          d1p.chi_EE(r, d1.e_plus + c) = d1.chi_EE(r, d1.e_plus + perm1[c]);
      for (int r = 0; r < d1.e_minus; ++r)
        for (int c = 0; c < d1.e_plus; ++c)
          d1p.chi_EE(d1.e_plus + r, c) = d1.chi_EE(d1.e_plus + perm1[r], c);

      const Matrix star = star_product_glue(d1p, d2p, lengths);
      const auto direct = scattering_matrix(glued.bc, glued.graph, k * k);
      const double dev = (direct.S - star).cwiseAbs().maxCoeff();
      max_dev = std::max(max_dev, dev);

      std::vector<std::string> row{format_float(k * k)};
      for (Eigen::Index r = 0; r < star.rows(); ++r)
        for (Eigen::Index c = 0; c < star.cols(); ++c) {
          row.push_back(format_float(star(r, c).real()));
          row.push_back(format_float(star(r, c).imag()));
        }
      row.push_back(format_float(dev));
      csv.row(row);
    } catch (const std::domain_error&) {
      ++skipped;  // critical set or resonance
    }
  }
  std::cout << "max entrywise deviation: " << format_float(max_dev) << "\n";
  if (skipped) std::cout << "skipped samples: " << skipped << "\n";
  return 0;
}

int run_weyl(const std::string& graph_path, const std::string& bc_path,
             const std::string& branch, double lambda_max, double step,
             const std::string& out, const std::string& command) {
  const System sys = load_system(graph_path, bc_path);

  CsvWriter csv(out);
  csv.comment(command);
  csv.comment(std::string("sgnlap ") + kVersion);
  csv.header({"branch", "lambda", "count", "weyl_ratio", "edge_length_sum"});

  std::vector<Branch> branches;
  if (branch == "both") {
    branches = {Branch::positive, Branch::negative};
  } else {
    branches = {parse_branch(branch)};
  }
  for (Branch b : branches) {
    const double total = sys.graph.total_length(
        b == Branch::positive ? Sign::positive : Sign::negative);
    for (const auto& s :
         counting_function(sys.bc, sys.graph, b, lambda_max, step))
      csv.row({b == Branch::positive ? "positive" : "negative",
               format_float(s.lambda), std::to_string(s.count),
               format_float(s.weyl_ratio), format_float(total)});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral and scattering toolkit for sign-indefinite "
               "second-order operators on metric graphs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  const std::string command = joined_argv(argc, argv);

  std::string graph_path, bc_path, graph2_path, bc2_path;
  std::string branch = "both", out = "out.csv";
  std::string ident_spec, lengths_spec, rbranch = "Q";
  double kmin = 0.1, kmax = 10.0, step = 0.02, lmin = 0.01, lmax = 25.0;
  double k_re = 1.0, k_im = 0.5, extent = 3.0, lambda_max = 100.0;
  double residual_tol = 1e-9;
  int samples = 200;

  auto* validate = app.add_subcommand("validate", "check boundary conditions");
  validate->add_option("graph", graph_path)->required();
  validate->add_option("bc", bc_path)->required();

  auto add_spectral_options = [&](CLI::App* cmd) {
    cmd->add_option("graph", graph_path)->required();
    cmd->add_option("bc", bc_path)->required();
    cmd->add_option("--branch", branch, "positive|negative|both");
    cmd->add_option("--kmin", kmin);
    cmd->add_option("--kmax", kmax);
    cmd->add_option("--step", step, "scan grid step");
    cmd->add_option("--tol-residual", residual_tol);
    cmd->add_option("--out", out);
  };
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalue scan");
  add_spectral_options(spectrum);
  auto* resonances = app.add_subcommand("resonances", "resonance scan");
  add_spectral_options(resonances);

  auto* scatter = app.add_subcommand("scatter", "scattering matrix sweep");
  scatter->add_option("graph", graph_path)->required();
  scatter->add_option("bc", bc_path)->required();
  scatter->add_option("--lmin", lmin);
  scatter->add_option("--lmax", lmax);
  scatter->add_option("--samples", samples);
  scatter->add_option("--out", out);

  auto* resolvent = app.add_subcommand("resolvent", "Green kernel dump");
  resolvent->add_option("graph", graph_path)->required();
  resolvent->add_option("bc", bc_path)->required();
  resolvent->add_option("--k-re", k_re);
  resolvent->add_option("--k-im", k_im);
  resolvent->add_option("--branch", rbranch, "Q|P");
  resolvent->add_option("--step", step);
  resolvent->add_option("--extent", extent, "grid length on external edges");
  resolvent->add_option("--out", out);

  auto* glue = app.add_subcommand("glue",
                                  "star-product vs direct gluing comparison");
  glue->add_option("graph1", graph_path)->required();
  glue->add_option("bc1", bc_path)->required();
  glue->add_option("graph2", graph2_path)->required();
  glue->add_option("bc2", bc2_path)->required();
  glue->add_option("--ident", ident_spec, "edge pairs e1=f1,e2=f2")->required();
  glue->add_option("--lengths", lengths_spec, "new edge lengths a1,a2")
      ->required();
  glue->add_option("--kmin", kmin);
  glue->add_option("--kmax", kmax);
  glue->add_option("--samples", samples);
  glue->add_option("--out", out);

  auto* weyl = app.add_subcommand("weyl", "eigenvalue counting samples");
  weyl->add_option("graph", graph_path)->required();
  weyl->add_option("bc", bc_path)->required();
  weyl->add_option("--branch", branch);
  weyl->add_option("--lmax", lambda_max);
  weyl->add_option("--step", step);
  weyl->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return run_validate(graph_path, bc_path);
    if (spectrum->parsed())
      return run_spectrum(graph_path, bc_path, branch, kmin, kmax, step,
                          residual_tol, out, command, false);
    if (resonances->parsed())
      return run_spectrum(graph_path, bc_path, branch, kmin, kmax, step,
                          residual_tol, out, command, true);
    if (scatter->parsed())
      return run_scatter(graph_path, bc_path, lmin, lmax, samples, out,
                         command);
    if (resolvent->parsed())
      return run_resolvent(graph_path, bc_path, k_re, k_im, rbranch, step,
                           extent, out, command);
    if (glue->parsed())
      return run_glue(graph_path, bc_path, graph2_path, bc2_path, ident_spec,
                      lengths_spec, kmin, kmax, samples, out, command);
    if (weyl->parsed())
      return run_weyl(graph_path, bc_path, branch, lambda_max, step, out,
                      command);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
