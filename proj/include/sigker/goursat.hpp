#ifndef SIGKER_GOURSAT_HPP
#define SIGKER_GOURSAT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigker/errors.hpp"
#include "sigker/path_lift.hpp"
#include "sigker/tensor_algebra.hpp"

namespace sigker {

/*
 * Discrete state of the coupled Goursat system on the product partition.
 *
 *   u(i, j)    kernel of the partial signatures up to (s_i, t_j)
 *   phi(i, j)  adjoint state driven along the first axis, scalar slot 0
 *   psi(i, j)  adjoint state driven along the second axis, scalar slot 0
 *
 * Boundaries: u = 1 on both axes, phi(i, 0) = G^x_i - 1, psi(0, j) = G^y_j - 1,
 * phi(0, j) = psi(i, 0) = 0.
 */
class GoursatState {
 public:
  GoursatState(Shape shape, std::size_t nx, std::size_t ny)
      : shape_(std::move(shape)),
        rows_(nx + 1),
        cols_(ny + 1),
        u_(rows_ * cols_, 0.0),
        phi_(rows_ * cols_ * shape_.size(), 0.0),
        psi_(rows_ * cols_ * shape_.size(), 0.0),
        populated_(rows_ * cols_, 0) {}

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double u(std::size_t i, std::size_t j) const { return u_[cell(i, j)]; }
  double& u(std::size_t i, std::size_t j) { return u_[cell(i, j)]; }

  std::span<const double> phi(std::size_t i, std::size_t j) const { return slot(phi_, i, j); }
  std::span<double> phi(std::size_t i, std::size_t j) { return slot(phi_, i, j); }
  std::span<const double> psi(std::size_t i, std::size_t j) const { return slot(psi_, i, j); }
  std::span<double> psi(std::size_t i, std::size_t j) { return slot(psi_, i, j); }

  TruncTensor phi_tensor(std::size_t i, std::size_t j) const { return as_tensor(phi(i, j)); }
  TruncTensor psi_tensor(std::size_t i, std::size_t j) const { return as_tensor(psi(i, j)); }

  bool populated(std::size_t i, std::size_t j) const { return populated_[cell(i, j)] != 0; }
  void mark_populated(std::size_t i, std::size_t j) { populated_[cell(i, j)] = 1; }

 private:
  std::size_t cell(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) {
      throw ShapeError("grid index (" + std::to_string(i) + ", " + std::to_string(j) +
                       ") out of range");
    }
    return i * cols_ + j;
  }
  std::span<const double> slot(const std::vector<double>& v, std::size_t i, std::size_t j) const {
    return std::span<const double>(v).subspan(cell(i, j) * shape_.size(), shape_.size());
  }
  std::span<double> slot(std::vector<double>& v, std::size_t i, std::size_t j) {
    return std::span<double>(v).subspan(cell(i, j) * shape_.size(), shape_.size());
  }
  TruncTensor as_tensor(std::span<const double> s) const {
    return TruncTensor(shape_, std::vector<double>(s.begin(), s.end()));
  }

  Shape shape_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> u_;
  std::vector<double> phi_;
  std::vector<double> psi_;
  std::vector<char> populated_;
};

struct KernelSolution {
  double value = 1.0;
  std::optional<GoursatState> state;
};

/// Result of the scalar (degree-1) recursion; `u` is row-major (N_x+1) x (N_y+1) when kept.
struct ScalarSolution {
  double value = 1.0;
  std::vector<double> u;
  std::size_t cols = 0;

  double at(std::size_t i, std::size_t j) const { return u.at(i * cols + j); }
};

namespace detail {

/// Coefficients shared by the four evaluations of the kernel forcing in one cell.
struct CellCoefficients {
  explicit CellCoefficients(const Shape& s) : rxy(s.size()), ryx(s.size()) {}

  void assign(const Shape& s, std::span<const double> x, std::span<const double> y) {
    c = kernels::inner(x, y);
    std::fill(rxy.begin(), rxy.end(), 0.0);
    std::fill(ryx.begin(), ryx.end(), 0.0);
    kernels::right_adjoint_accumulate(s, x, y, rxy);
    kernels::right_adjoint_accumulate(s, y, x, ryx);
  }

  double forcing(double u, std::span<const double> phi, std::span<const double> psi) const {
    return u * c + kernels::inner(phi, rxy) + kernels::inner(psi, ryx);
  }

  double c = 0.0;
  std::vector<double> rxy;  // right adjoint of x applied to y
  std::vector<double> ryx;  // right adjoint of y applied to x
};

/// Explicit adjoint update: out = a + u x + a (x) x + L*_b(x), scalar slot forced to 0.
inline void advance_adjoint(const Shape& s, std::span<const double> a, double u,
                            std::span<const double> b, std::span<const double> x,
                            std::span<double> out) {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] + u * x[k];
  kernels::mul_accumulate(s, a, x, out);
  kernels::left_adjoint_accumulate(s, b, x, out);
  // The scalar part of L*_b(x) equals <b, x> and is cancelled exactly.
  out[0] = 0.0;
}

struct Corner {
  double u;
  std::span<const double> phi;
  std::span<const double> psi;
};

/// One cell of the sweep: corners (i,j), (i,j+1), (i+1,j) -> (i+1,j+1).
inline double update_cell(const Shape& s, const CellCoefficients& cc, std::span<const double> x,
                          std::span<const double> y, const Corner& c00, const Corner& c01,
                          const Corner& c10, std::span<double> phi11, std::span<double> psi11) {
  advance_adjoint(s, c01.phi, c00.u, c01.psi, x, phi11);
  advance_adjoint(s, c10.psi, c00.u, c10.phi, y, psi11);

  const double f1 = cc.forcing(c00.u, c00.phi, c00.psi);
  const double f2 = cc.forcing(c01.u, c01.phi, c01.psi);
  const double f3 = cc.forcing(c10.u, c10.phi, c10.psi);
  const double base = c10.u + c01.u - c00.u;
  const double predictor = base + f1;
  const double f4 = cc.forcing(predictor, phi11, psi11);
  return base + 0.25 * (f1 + f2 + f3 + f4);
}

inline void require_compatible(const PiecewiseAbelianPath& px, const PiecewiseAbelianPath& py) {
  if (px.dim() != py.dim()) {
    throw ShapeError("paths differ in dimension: " + std::to_string(px.dim()) + " vs " +
                     std::to_string(py.dim()));
  }
  if (px.degree() != py.degree()) {
    throw ShapeError("paths differ in degree: " + std::to_string(px.degree()) + " vs " +
                     std::to_string(py.degree()));
  }
}

inline void require_finite(double v) {
  if (!std::isfinite(v)) throw NumericError("non-finite kernel value in Goursat sweep");
}

}  // namespace detail

/// Boundary data of the Goursat system; interior cells are left unpopulated.
inline GoursatState init_boundaries(const PiecewiseAbelianPath& px,
                                    const PiecewiseAbelianPath& py) {
  detail::require_compatible(px, py);
  GoursatState st(px.shape(), px.intervals(), py.intervals());
  const auto gx = pab_partial_signatures(px);
  const auto gy = pab_partial_signatures(py);
  for (std::size_t i = 0; i < st.rows(); ++i) {
    st.u(i, 0) = 1.0;
    auto phi = st.phi(i, 0);
    std::copy(gx[i].coeffs().begin(), gx[i].coeffs().end(), phi.begin());
    phi[0] = 0.0;
    st.mark_populated(i, 0);
  }
  for (std::size_t j = 0; j < st.cols(); ++j) {
    st.u(0, j) = 1.0;
    auto psi = st.psi(0, j);
    std::copy(gy[j].coeffs().begin(), gy[j].coeffs().end(), psi.begin());
    psi[0] = 0.0;
    st.mark_populated(0, j);
  }
  return st;
}

/// Fill cell (i+1, j+1) from its three populated neighbours.
inline void step(GoursatState& st, std::size_t i, std::size_t j, const LieIncrement& lx,
                 const LieIncrement& ly) {
  const Shape& s = st.shape();
  if (!(lx.tensor.shape() == s) || !(ly.tensor.shape() == s)) {
    throw ShapeError("log-signature shape does not match Goursat state");
  }
  if (i + 1 >= st.rows() || j + 1 >= st.cols()) throw ShapeError("cell outside the grid");
  if (!st.populated(i, j) || !st.populated(i, j + 1) || !st.populated(i + 1, j)) {
    throw DomainError("cell (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                      ") depends on unpopulated cells");
  }
  detail::CellCoefficients cc(s);
  cc.assign(s, lx.tensor.coeffs(), ly.tensor.coeffs());
  const detail::Corner c00{st.u(i, j), st.phi(i, j), st.psi(i, j)};
  const detail::Corner c01{st.u(i, j + 1), st.phi(i, j + 1), st.psi(i, j + 1)};
  const detail::Corner c10{st.u(i + 1, j), st.phi(i + 1, j), st.psi(i + 1, j)};
  const double u11 = detail::update_cell(s, cc, lx.tensor.coeffs(), ly.tensor.coeffs(), c00, c01,
                                         c10, st.phi(i + 1, j + 1), st.psi(i + 1, j + 1));
  detail::require_finite(u11);
  st.u(i + 1, j + 1) = u11;
  st.mark_populated(i + 1, j + 1);
}

/*
 * Signature kernel of two piecewise-abelian paths by a row-major sweep of the
 * discrete Goursat system.  Without keep_state only two rows of (u, phi, psi)
 * are held in memory.
 */
inline KernelSolution solve(const PiecewiseAbelianPath& px, const PiecewiseAbelianPath& py,
                            bool keep_state = false) {
  detail::require_compatible(px, py);
  const std::size_t nx = px.intervals();
  const std::size_t ny = py.intervals();

  if (keep_state) {
    GoursatState st = init_boundaries(px, py);
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) step(st, i, j, px.increments()[i], py.increments()[j]);
    }
    KernelSolution sol;
    sol.value = st.u(nx, ny);
    sol.state = std::move(st);
    return sol;
  }

  const Shape& s = px.shape();
  const std::size_t n = s.size();
  const std::size_t cols = ny + 1;
  const auto gx = pab_partial_signatures(px);
  const auto gy = pab_partial_signatures(py);

  std::vector<double> u_prev(cols, 1.0), u_cur(cols, 1.0);
  std::vector<double> phi_prev(cols * n, 0.0), phi_cur(cols * n, 0.0);
  std::vector<double> psi_prev(cols * n, 0.0), psi_cur(cols * n, 0.0);
  auto at = [n](std::vector<double>& v, std::size_t j) {
    return std::span<double>(v).subspan(j * n, n);
  };

  for (std::size_t j = 0; j < cols; ++j) {
    std::copy(gy[j].coeffs().begin(), gy[j].coeffs().end(), at(psi_prev, j).begin());
    psi_prev[j * n] = 0.0;
  }

  detail::CellCoefficients cc(s);
  for (std::size_t i = 0; i < nx; ++i) {
    const auto x = px.logsig(i).coeffs();
    u_cur[0] = 1.0;
    std::copy(gx[i + 1].coeffs().begin(), gx[i + 1].coeffs().end(), at(phi_cur, 0).begin());
    phi_cur[0] = 0.0;
    std::fill_n(psi_cur.begin(), n, 0.0);
    for (std::size_t j = 0; j < ny; ++j) {
      const auto y = py.logsig(j).coeffs();
      cc.assign(s, x, y);
      const detail::Corner c00{u_prev[j], at(phi_prev, j), at(psi_prev, j)};
      const detail::Corner c01{u_prev[j + 1], at(phi_prev, j + 1), at(psi_prev, j + 1)};
      const detail::Corner c10{u_cur[j], at(phi_cur, j), at(psi_cur, j)};
      u_cur[j + 1] =
          detail::update_cell(s, cc, x, y, c00, c01, c10, at(phi_cur, j + 1), at(psi_cur, j + 1));
    }
    detail::require_finite(u_cur[ny]);
    std::swap(u_prev, u_cur);
    std::swap(phi_prev, phi_cur);
    std::swap(psi_prev, psi_cur);
  }
  KernelSolution sol;
  sol.value = u_prev[ny];
  detail::require_finite(sol.value);
  return sol;
}

/*
 * Degree-1 specialisation: the adjoint states never feed back into u, so the
 * sweep reduces to the scalar Goursat recursion with c_ij = <dx_i, dy_j>.
 */
inline ScalarSolution solve_order1(const std::vector<std::vector<double>>& dx,
                                   const std::vector<std::vector<double>>& dy,
                                   bool keep_state = false) {
  if (dx.empty() || dy.empty()) throw ShapeError("solve_order1 needs at least one increment");
  const std::size_t d = dx.front().size();
  for (const auto& v : dx) {
    if (v.size() != d) throw ShapeError("increments differ in dimension");
  }
  for (const auto& v : dy) {
    if (v.size() != d) throw ShapeError("increments differ in dimension");
  }
  const std::size_t nx = dx.size();
  const std::size_t ny = dy.size();
  const std::size_t cols = ny + 1;

  ScalarSolution sol;
  sol.cols = cols;
  if (keep_state) sol.u.assign((nx + 1) * cols, 1.0);
  std::vector<double> prev(cols, 1.0), cur(cols, 1.0);
  for (std::size_t i = 0; i < nx; ++i) {
    cur[0] = 1.0;
    for (std::size_t j = 0; j < ny; ++j) {
      double c = 0.0;
      for (std::size_t k = 0; k < d; ++k) c += dx[i][k] * dy[j][k];
      const double f1 = prev[j] * c;
      const double f2 = prev[j + 1] * c;
      const double f3 = cur[j] * c;
      const double base = cur[j] + prev[j + 1] - prev[j];
      const double f4 = (base + f1) * c;
      cur[j + 1] = base + 0.25 * (f1 + f2 + f3 + f4);
    }
    if (keep_state) std::copy(cur.begin(), cur.end(), sol.u.begin() + (i + 1) * cols);
    std::swap(prev, cur);
  }
  sol.value = prev[ny];
  detail::require_finite(sol.value);
  return sol;
}

/// Level-1 parts of a path's log-signatures.
inline std::vector<std::vector<double>> level1_increments(const PiecewiseAbelianPath& p) {
  if (p.degree() < 1) throw DomainError("path has no level-1 component");
  std::vector<std::vector<double>> out;
  out.reserve(p.intervals());
  for (const auto& inc : p.increments()) {
    auto l1 = inc.tensor.level(1);
    out.emplace_back(l1.begin(), l1.end());
  }
  return out;
}

inline ScalarSolution solve_order1(const PiecewiseAbelianPath& px, const PiecewiseAbelianPath& py,
                                   bool keep_state = false) {
  return solve_order1(level1_increments(px), level1_increments(py), keep_state);
}

/// Kernel of two time series lifted to degree-m piecewise-abelian paths.
inline double kernel(const TimeSeries& x, const TimeSeries& y, std::size_t degree,
                     const std::vector<double>& partition_x,
                     const std::vector<double>& partition_y) {
  if (x.dim() != y.dim()) throw ShapeError("time series differ in dimension");
  return solve(build_pab(x, partition_x, degree), build_pab(y, partition_y, degree)).value;
}

}  // namespace sigker

#endif  // SIGKER_GOURSAT_HPP
