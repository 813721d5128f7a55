#include "sgnlap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace sgnlap {

SpectralParams branch_params(Branch branch, double root) {
  return branch == Branch::positive ? SpectralParams::positive_energy(root)
                                    : SpectralParams::negative_energy(root);
}

namespace {

struct DetFunction {
  const BoundaryConditions& bc;
  const MetricGraph& g;
  const BoundaryIndex& index;
  Branch branch;

  Complex operator()(Complex root) const {
    // The scans stay on the real axis; complex arguments only appear as
    // transient secant iterates.
    const SpectralParams p =
        branch == Branch::positive
            ? SpectralParams(root, kImag * root)
            : SpectralParams(kImag * root, root);
    auto [z, det] = secular_matrix(bc, g, index, p);
    (void)z;
    return det.det_scaled;
  }
};

struct RefinedRoot {
  double root;
  double residual;
  bool at_boundary;
};

double golden_section(const DetFunction& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = std::abs(f(Complex(c)));
  double fd = std::abs(f(Complex(d)));
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(b));
       ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = std::abs(f(Complex(c)));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = std::abs(f(Complex(d)));
    }
  }
  return 0.5 * (a + b);
}

/// Secant iteration on the analytic scaled determinant, started from two
/// real points. Self-adjointness keeps the zeros on the real axis, so an
/// iterate drifting off it signals trouble and triggers the golden-section
/// fallback on |det|.
RefinedRoot refine_root(const DetFunction& f, double center, double step,
                        double k_min, double k_max, const ScanOptions& opts) {
  const double lo = std::max(k_min, center - step);
  const double hi = std::min(k_max, center + step);

  Complex k0(std::max(lo, center - 0.4 * step));
  Complex k1(center);
  Complex f0 = f(k0), f1 = f(k1);
  bool ok = false;
  for (int it = 0; it < 60; ++it) {
    if (std::abs(f1 - f0) == 0.0) break;
    const Complex k2 = k1 - f1 * (k1 - k0) / (f1 - f0);
    if (!std::isfinite(k2.real()) || !std::isfinite(k2.imag())) break;
    if (std::abs(k2.imag()) > 1e-8 * std::max(1.0, std::abs(k2.real()))) break;
    if (k2.real() < lo - step || k2.real() > hi + step) break;
    k0 = k1;
    f0 = f1;
    k1 = k2;
    f1 = f(k1);
    if (std::abs(f1) <= 1e-3 * opts.accept_residual ||
        std::abs(k1 - k0) <= 1e-15 * std::max(1.0, std::abs(k1))) {
      ok = true;
      break;
    }
  }

  double root = k1.real();
  double residual = std::abs(f(Complex(root)));
  if (!ok && residual > opts.accept_residual) {
    root = golden_section(f, lo, hi);
    residual = std::abs(f(Complex(root)));
  }

  RefinedRoot out;
  out.root = root;
  out.residual = residual;
  out.at_boundary =
      root - k_min < step || k_max - root < step;
  return out;
}

/// Grid scan with bracketing of the dips of |det_scaled| and automatic
/// local step halving so that nearby pairs of roots are not merged.
std::vector<RefinedRoot> scan_roots(const DetFunction& f, double k_min,
                                    double k_max, double step,
                                    const ScanOptions& opts) {
  std::vector<RefinedRoot> roots;
  auto push_unique = [&roots](const RefinedRoot& r) {
    for (const auto& existing : roots)
      if (std::abs(existing.root - r.root) <=
          1e-7 * std::max(1.0, std::abs(r.root)))
        return;
    roots.push_back(r);
  };

  std::function<void(double, double, double, int)> scan =
      [&](double lo, double hi, double h, int level) {
        const int count = std::max(2, static_cast<int>(std::ceil((hi - lo) / h)) + 1);
        std::vector<double> mags(count);
        std::vector<double> grid(count);
        for (int i = 0; i < count; ++i) {
          grid[i] = std::min(hi, lo + i * h);
          mags[i] = std::abs(f(Complex(grid[i])));
        }
        for (int i = 0; i < count; ++i) {
          const bool left_ok = i == 0 || mags[i] <= mags[i - 1];
          const bool right_ok = i + 1 == count || mags[i] <= mags[i + 1];
          if (!(left_ok && right_ok) || mags[i] >= opts.bracket_threshold)
            continue;
          const RefinedRoot r = refine_root(f, grid[i], h, k_min, k_max, opts);
          if (r.residual <= opts.accept_residual) push_unique(r);
          if (level < opts.max_step_halvings)
            scan(std::max(k_min, grid[i] - h), std::min(k_max, grid[i] + h),
                 h / 2.0, level + 1);
        }
      };

  scan(k_min, k_max, step, 0);
  std::sort(roots.begin(), roots.end(),
            [](const RefinedRoot& a, const RefinedRoot& b) {
              return a.root < b.root;
            });
  return roots;
}

/// Nullity and kernel basis with the relative singular value cut used for
/// multiplicities. Columns are rescaled first so that e^{kappa a} sized
/// entries do not poison the decomposition; the kernel is mapped back.
std::pair<int, Matrix> kernel_at_root(const Matrix& mat, double rel_tol) {
  Matrix b = mat;
  Eigen::VectorXd colscale = Eigen::VectorXd::Ones(b.cols());
  for (int j = 0; j < b.cols(); ++j) {
    const double cmax = b.col(j).cwiseAbs().maxCoeff();
    if (cmax > 0.0 && std::isfinite(cmax)) {
      b.col(j) /= cmax;
      colscale(j) = cmax;
    }
  }
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullV);
  const double smax = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rel_tol * smax) ++rank;
  const int nullity = static_cast<int>(b.cols()) - rank;
  Matrix kernel = svd.matrixV().rightCols(nullity);
  for (int j = 0; j < kernel.cols(); ++j) {
    kernel.col(j).array() /= colscale.cast<Complex>().array();
    kernel.col(j).normalize();
  }
  return {nullity, std::move(kernel)};
}

/// External slots whose Ansatz coefficient must vanish for square
/// integrability: the oscillating externals of the branch sign.
std::vector<int> forbidden_external_slots(const BoundaryIndex& index,
                                          Branch branch) {
  const Sign s = branch == Branch::positive ? Sign::positive : Sign::negative;
  std::vector<int> out;
  for (int slot : index.external_slots())
    if (index.slots()[slot].sign == s) out.push_back(slot);
  return out;
}

Matrix stack_side_condition(const Matrix& z, const std::vector<int>& slots) {
  Matrix stacked(z.rows() + static_cast<Eigen::Index>(slots.size()), z.cols());
  stacked.topRows(z.rows()) = z;
  stacked.bottomRows(static_cast<Eigen::Index>(slots.size())).setZero();
  for (std::size_t i = 0; i < slots.size(); ++i)
    stacked(z.rows() + static_cast<Eigen::Index>(i), slots[i]) = 1.0;
  return stacked;
}

}  // namespace

std::vector<EigenvalueEntry> find_eigenvalues(const BoundaryConditions& bc,
                                              const MetricGraph& g,
                                              Branch branch, double k_min,
                                              double k_max, double grid_step,
                                              const ScanOptions& opts) {
  if (!(k_min > 0.0) || !(k_max > k_min) || !(grid_step > 0.0))
    throw std::invalid_argument("scan range must satisfy 0 < k_min < k_max "
                                "with positive grid step");
  const BoundaryIndex index(g);
  const DetFunction f{bc, g, index, branch};
  const auto roots = scan_roots(f, k_min, k_max, grid_step, opts);
  const auto forbidden = forbidden_external_slots(index, branch);

  std::vector<EigenvalueEntry> out;
  for (const auto& r : roots) {
    const auto [z, det] = secular_matrix(bc, g, index, branch_params(branch, r.root));
    (void)det;
    const auto [nullity, kernel] =
        kernel_at_root(stack_side_condition(z, forbidden), opts.multiplicity_sigma);
    (void)kernel;
    if (nullity < 1) continue;  // resonance only
    EigenvalueEntry e;
    e.root = r.root;
    e.lambda = branch == Branch::positive ? r.root * r.root : -r.root * r.root;
    e.multiplicity = nullity;
    e.residual = r.residual;
    e.at_range_boundary = r.at_boundary;
    out.push_back(e);
  }
  return out;
}

std::vector<ResonanceEntry> find_resonances(const BoundaryConditions& bc,
                                            const MetricGraph& g, Branch branch,
                                            double k_min, double k_max,
                                            double grid_step,
                                            const ScanOptions& opts) {
  if (!(k_min > 0.0) || !(k_max > k_min) || !(grid_step > 0.0))
    throw std::invalid_argument("scan range must satisfy 0 < k_min < k_max "
                                "with positive grid step");
  const BoundaryIndex index(g);
  const DetFunction f{bc, g, index, branch};
  const auto roots = scan_roots(f, k_min, k_max, grid_step, opts);
  const auto forbidden = forbidden_external_slots(index, branch);

  std::vector<ResonanceEntry> out;
  for (const auto& r : roots) {
    const auto [z, det] = secular_matrix(bc, g, index, branch_params(branch, r.root));
    (void)det;
    ResonanceEntry e;
    e.branch = branch;
    e.root = r.root;
    e.residual = r.residual;
    const auto [nullity, kernel] = kernel_at_root(z, opts.multiplicity_sigma);
    const auto [side_nullity, side_kernel] = kernel_at_root(
        stack_side_condition(z, forbidden), opts.multiplicity_sigma);
    (void)side_kernel;
    e.is_eigenvalue = side_nullity >= 1;
    if (nullity >= 1) {
      const auto& ext = index.external_slots();
      e.external_kernel.resize(static_cast<Eigen::Index>(ext.size()));
      for (std::size_t i = 0; i < ext.size(); ++i)
        e.external_kernel(static_cast<Eigen::Index>(i)) = kernel(ext[i], 0);
    }
    out.push_back(e);
  }
  return out;
}

std::pair<Matrix, Matrix> zero_mode_matrices(const MetricGraph& g,
                                             const BoundaryIndex& index) {
  const int d = index.dim();
  Matrix x0 = Matrix::Zero(d, d);
  Matrix y0 = Matrix::Zero(d, d);
  for (int s = 0; s < d; ++s) {
    const SlotInfo& info = index.slots()[s];
    switch (info.kind) {
      case SlotInfo::Kind::external:
        break;  // affine Ansatz vanishes on external edges
      case SlotInfo::Kind::internal_origin: {
        const int beta = index.slot(info.edge_id, Endpoint::terminus);
        x0(s, s) = 1.0;   // psi(0) = alpha
        y0(s, beta) = 1.0;  // psi'(0) = beta
        break;
      }
      case SlotInfo::Kind::internal_terminus: {
        const int alpha = index.slot(info.edge_id, Endpoint::origin);
        const double a = g.internal_edges()[info.edge_index].length;
        x0(s, alpha) = 1.0;  // psi(a) = alpha + beta a
        x0(s, s) = a;
        y0(s, s) = -1.0;  // -psi'(a) = -beta
        break;
      }
    }
  }
  return {std::move(x0), std::move(y0)};
}

int zero_mode_dimension(const BoundaryConditions& bc, const MetricGraph& g) {
  const BoundaryIndex index(g);
  auto [x0, y0] = zero_mode_matrices(g, index);
  Matrix system = bc.A * x0 + bc.B * y0;
  if (!g.compact())
    system = stack_side_condition(system, index.external_slots());
  return index.dim() - numerical_rank(system);
}

std::vector<CountingSample> counting_function(const BoundaryConditions& bc,
                                              const MetricGraph& g,
                                              Branch branch, double lambda_max,
                                              double grid_step,
                                              const ScanOptions& opts) {
  if (!(lambda_max > 0.0))
    throw std::invalid_argument("lambda_max must be positive");
  const Sign s = branch == Branch::positive ? Sign::positive : Sign::negative;
  if (!g.compact() && g.count_external(s) > 0)
    throw std::invalid_argument(
        "counting function asymptotics require no external edges of the "
        "branch sign");

  const double k_max = std::sqrt(lambda_max);
  auto roots = find_eigenvalues(bc, g, branch, grid_step, k_max, grid_step, opts);

  std::vector<CountingSample> samples;
  int count = 0;
  for (const auto& e : roots) {
    count += e.multiplicity;
    const double lambda = e.root * e.root;
    samples.push_back({lambda, count, count * M_PI / e.root});
  }
  samples.push_back({lambda_max, count, count * M_PI / k_max});
  return samples;
}

SpectrumReport full_spectrum(const BoundaryConditions& bc, const MetricGraph& g,
                             double k_min, double k_max, double grid_step,
                             const ScanOptions& opts) {
  SpectrumReport report;
  report.k_min = k_min;
  report.k_max = k_max;
  report.grid_step = grid_step;
  report.positive_eigenvalues =
      find_eigenvalues(bc, g, Branch::positive, k_min, k_max, grid_step, opts);
  report.negative_eigenvalues =
      find_eigenvalues(bc, g, Branch::negative, k_min, k_max, grid_step, opts);
  report.zero_dimension = zero_mode_dimension(bc, g);
  for (Branch b : {Branch::positive, Branch::negative}) {
    auto res = find_resonances(bc, g, b, k_min, k_max, grid_step, opts);
    report.resonances.insert(report.resonances.end(), res.begin(), res.end());
  }
  return report;
}

}  // namespace sgnlap
