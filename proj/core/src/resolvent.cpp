#include "sgnlap/resolvent.hpp"

#include <cmath>
#include <limits>

namespace sgnlap {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Nodal weights of composite Simpson over cells [0, m]; odd cell counts
/// end in a 3/8 block, a single cell degrades to the trapezoid.
std::vector<double> simpson_weights(int cells, double h) {
  std::vector<double> w(static_cast<std::size_t>(cells) + 1, 0.0);
  if (cells <= 0) return w;
  if (cells == 1) {
    w[0] = w[1] = h / 2.0;
    return w;
  }
  int simpson_cells = cells;
  bool tail38 = false;
  if (cells % 2 != 0) {
    simpson_cells = cells - 3;
    tail38 = true;
  }
  for (int c = 0; c + 2 <= simpson_cells; c += 2) {
    w[c] += h / 3.0;
    w[c + 1] += 4.0 * h / 3.0;
    w[c + 2] += h / 3.0;
  }
  if (tail38) {
    const int base = simpson_cells;
    w[base] += 3.0 * h / 8.0;
    w[base + 1] += 9.0 * h / 8.0;
    w[base + 2] += 9.0 * h / 8.0;
    w[base + 3] += 3.0 * h / 8.0;
  }
  return w;
}

}  // namespace

ResolventContext::ResolventContext(const BoundaryConditions& bc,
                                   const MetricGraph& g, Complex k,
                                   ResolventBranch branch)
    : graph_(g),
      index_(g),
      params_(branch == ResolventBranch::Q ? SpectralParams::resolvent_q(k)
                                           : SpectralParams::resolvent_p(k)) {
  auto det_at = [&](Complex kk) {
    const SpectralParams p = branch == ResolventBranch::Q
                                 ? SpectralParams::resolvent_q(kk)
                                 : SpectralParams::resolvent_p(kk);
    auto [z, det] = secular_matrix(bc, g, index_, p);
    (void)z;
    return det.det_scaled;
  };

  auto [z, det] = secular_matrix(bc, g, index_, params_);
  const double rcond = reciprocal_condition(z);
  if (rcond < 1e3 * kEps) throw ResonanceError(params_, rcond);

  // Real-axis evaluation is the boundary limit of the analytic kernel and
  // is refused close to a resonance of the branch.
  if (std::abs(k.imag()) < 1e-12 && std::abs(det.det_scaled) < 1e-2) {
    Complex k0 = k - 1e-3, k1 = k;
    Complex f0 = det_at(k0), f1 = det_at(k1);
    for (int it = 0; it < 40 && std::abs(f1 - f0) > 0.0; ++it) {
      const Complex k2 = k1 - f1 * (k1 - k0) / (f1 - f0);
      if (!std::isfinite(k2.real()) || !std::isfinite(k2.imag())) break;
      k0 = k1;
      f0 = f1;
      k1 = k2;
      f1 = det_at(k1);
      if (std::abs(k1 - k0) < 1e-14) break;
    }
    if (std::abs(f1) <= 1e-9 && std::abs(k1 - k) <= 1e-6)
      throw std::invalid_argument(
          "spectral parameter within 1e-6 of a resonance");
  }

  const Matrix bi = bc.B * i_diagonal(index_, params_).asDiagonal();
  const Matrix xfrak = -solve(z, bc.A - bi);
  const TransferMatrices rt = build_rt(g, index_, params_);
  const Matrix j = j_diagonal(index_.n(), index_.m()).cast<Complex>().asDiagonal();
  g_matrix_ = xfrak * solve(rt.R_plus, j);
}

ResolventContext::EdgeRef ResolventContext::resolve(const EdgePoint& p) const {
  for (std::size_t i = 0; i < graph_.external_edges().size(); ++i) {
    const auto& e = graph_.external_edges()[i];
    if (e.id == p.edge) {
      if (p.x < 0.0)
        throw std::invalid_argument("coordinate outside external edge " + e.id);
      return {false, i, e.sign, std::numeric_limits<double>::infinity()};
    }
  }
  for (std::size_t i = 0; i < graph_.internal_edges().size(); ++i) {
    const auto& e = graph_.internal_edges()[i];
    if (e.id == p.edge) {
      if (p.x < 0.0 || p.x > e.length)
        throw std::invalid_argument("coordinate outside internal edge " + e.id);
      return {true, i, e.sign, e.length};
    }
  }
  throw std::invalid_argument("unknown edge " + p.edge);
}

Vector ResolventContext::phi_row(const EdgePoint& p) const {
  const EdgeRef ref = resolve(p);
  const Complex z = params_.z(ref.sign);
  Vector row = Vector::Zero(index_.dim());
  if (ref.is_internal) {
    row(index_.slot(p.edge, Endpoint::origin)) = std::exp(kImag * z * p.x);
    row(index_.slot(p.edge, Endpoint::terminus)) = std::exp(-kImag * z * p.x);
  } else {
    row(index_.slot(p.edge, Endpoint::origin)) = std::exp(kImag * z * p.x);
  }
  return row;
}

Complex ResolventContext::kernel(const EdgePoint& p, const EdgePoint& q) const {
  const EdgeRef rp = resolve(p);
  const EdgeRef rq = resolve(q);
  const Complex zq = params_.z(rq.sign);
  const Complex weight = kImag / (2.0 * zq);

  const Vector gq = g_matrix_ * phi_row(q);
  Complex value = phi_row(p).cwiseProduct(gq).sum() * weight;
  if (p.edge == q.edge) {
    const double sgn = rq.sign == Sign::positive ? 1.0 : -1.0;
    value += sgn * weight * std::exp(kImag * zq * std::abs(p.x - q.x));
  }
  return value;
}

GridFunction apply_resolvent(const ResolventContext& ctx,
                             const GridFunction& f) {
  const BoundaryIndex& index = ctx.index();

  // The correction kernel is separable, so its contribution factors
  // through fhat = sum_q int Phi(y)^T W f(y) dy with whole-edge weights.
  Vector fhat = Vector::Zero(index.dim());
  for (const auto& grid : f) {
    if (grid.values.empty()) continue;
    const auto w = simpson_weights(static_cast<int>(grid.values.size()) - 1,
                                   grid.step);
    for (std::size_t j = 0; j < grid.values.size(); ++j) {
      if (grid.values[j] == Complex(0.0)) continue;
      const EdgePoint y{grid.edge, grid.step * static_cast<double>(j)};
      const Sign sign = index.slots()[index.slot(grid.edge, Endpoint::origin)].sign;
      const Complex wq = kImag / (2.0 * ctx.params().z(sign));
      fhat += ctx.phi_row(y) * (w[j] * wq * grid.values[j]);
    }
  }
  const Vector v = ctx.G() * fhat;

  GridFunction u;
  for (const auto& out_grid : f) {
    EdgeGrid ug{out_grid.edge, out_grid.step, {}};
    ug.values.resize(out_grid.values.size(), Complex(0.0));
    const Sign sign =
        index.slots()[index.slot(out_grid.edge, Endpoint::origin)].sign;
    const Complex z = ctx.params().z(sign);
    const double sgn = sign == Sign::positive ? 1.0 : -1.0;
    const Complex w0 = sgn * kImag / (2.0 * z);

    // Free part: same-edge convolution with the |x-y| kink split at x.
    for (const auto& in_grid : f) {
      if (in_grid.edge != out_grid.edge) continue;
      const int count = static_cast<int>(in_grid.values.size());
      for (int i = 0; i < static_cast<int>(ug.values.size()); ++i) {
        const double x = out_grid.step * i;
        Complex acc(0.0);
        const auto wl = simpson_weights(i, in_grid.step);
        for (int j = 0; j <= i && j < count; ++j)
          acc += wl[j] * std::exp(kImag * z * (x - in_grid.step * j)) *
                 in_grid.values[j];
        const auto wr = simpson_weights(count - 1 - i, in_grid.step);
        for (int j = i; j < count; ++j)
          acc += wr[j - i] * std::exp(kImag * z * (in_grid.step * j - x)) *
                 in_grid.values[j];
        ug.values[i] += w0 * acc;
      }
    }

    // Correction part.
    for (std::size_t i = 0; i < ug.values.size(); ++i) {
      const EdgePoint x{out_grid.edge, out_grid.step * static_cast<double>(i)};
      ug.values[i] += ctx.phi_row(x).cwiseProduct(v).sum();
    }
    u.push_back(std::move(ug));
  }
  return u;
}

}  // namespace sgnlap
