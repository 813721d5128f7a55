#pragma once

#include <string>
#include <vector>

#include "sgnlap/secular.hpp"

namespace sgnlap {

/// A point on the metric graph: coordinate x in [0, a] on an internal edge
/// or [0, inf) on an external edge.
struct EdgePoint {
  std::string edge;
  double x;
};

/// Branch of the complex square root used for the kernel: Q covers
/// spectral parameters k^2 with k in the open quadrant Re k, Im k > 0 and
/// uses (k, ik); P covers Re k < 0, Im k > 0 and uses (k, -ik). Real k is
/// accepted as the boundary limit away from resonances.
enum class ResolventBranch { Q, P };

/// Evaluator for the Green's kernel r(x, y, k) of (T(A,B) - k^2)^{-1}.
///
/// r = r0 + r1 with the free diagonal part
///   r0(x,y) = +- i/(2z) e^{iz|x-y|}   (+ on positive, - on negative edges)
/// supported on the diagonal edge blocks, and the correction
///   r1(x,y) = Phi(x) G Phi(y)^T W(y),  G = Xfrak R+^{-1} J.
/// Immutable after construction; kernel evaluations at distinct points are
/// independent.
class ResolventContext {
 public:
  /// Throws ResonanceError when Z is numerically singular at the chosen
  /// parameters, and std::invalid_argument for a real k within 1e-6 of a
  /// detected resonance of the branch.
  ResolventContext(const BoundaryConditions& bc, const MetricGraph& g,
                   Complex k, ResolventBranch branch);

  Complex kernel(const EdgePoint& p, const EdgePoint& q) const;

  /// Row of the per-edge solution matrix Phi at a point: e^{izx} in the
  /// slot(s) of the edge, e^{-izx} in the terminus slot of internal edges.
  Vector phi_row(const EdgePoint& p) const;

  const SpectralParams& params() const { return params_; }
  const BoundaryIndex& index() const { return index_; }
  const MetricGraph& graph() const { return graph_; }
  const Matrix& G() const { return g_matrix_; }

 private:
  struct EdgeRef {
    bool is_internal;
    std::size_t idx;
    Sign sign;
    double length;  // +inf for external edges
  };
  EdgeRef resolve(const EdgePoint& p) const;

  MetricGraph graph_;
  BoundaryIndex index_;
  SpectralParams params_;
  Matrix g_matrix_;
};

/// Samples of a function on one edge, values at x_i = i * step.
struct EdgeGrid {
  std::string edge;
  double step;
  std::vector<Complex> values;
};

using GridFunction = std::vector<EdgeGrid>;

/// u(x) = sum_edges int r(x, y, k) f(y) dy by composite Simpson quadrature
/// on each edge grid, split at y = x where the free kernel has its kink.
/// Returns u sampled on the same grids as f.
GridFunction apply_resolvent(const ResolventContext& ctx,
                             const GridFunction& f);

}  // namespace sgnlap
