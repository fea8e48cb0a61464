#ifndef SIGKER_ORACLE_HPP
#define SIGKER_ORACLE_HPP

#include <cmath>
#include <cstddef>

#include "sigker/errors.hpp"
#include "sigker/path_lift.hpp"
#include "sigker/tensor_algebra.hpp"

// Reference computations that never touch the Goursat solver.
namespace sigker::oracle {

/// <S^n(x), S^n(y)> from explicitly computed truncated signatures.
inline double direct_truncated_kernel(const TimeSeries& x, const TimeSeries& y,
                                      std::size_t degree) {
  if (x.dim() != y.dim()) throw ShapeError("time series differ in dimension");
  return inner(chen_signature(x, degree), chen_signature(y, degree));
}

/// sum_{k<=n} c^k / (k!)^2, the truncated kernel of two linear segments with <dx, dy> = c.
inline double linear_kernel_closed_form(double c, std::size_t degree) {
  double term = 1.0;
  double sum = 1.0;
  for (std::size_t k = 1; k <= degree; ++k) {
    const double kk = static_cast<double>(k);
    term *= c / (kk * kk);
    sum += term;
  }
  return sum;
}

/// Factorial bound 2 e^c c^{n+1} / (n+1)! on the truncation error of the kernel.
inline double tail_bound(double c, std::size_t degree) {
  if (c < 0.0) throw DomainError("tail_bound needs a non-negative variation bound");
  // lgamma keeps the factorial finite for large n
  const double n1 = static_cast<double>(degree + 1);
  if (c == 0.0) return 0.0;
  return 2.0 * std::exp(c + n1 * std::log(c) - std::lgamma(n1 + 1.0));
}

/// Euclidean 1-variation of the piecewise-linear interpolation.
inline double one_variation(const TimeSeries& ts) {
  double v = 0.0;
  for (std::size_t i = 0; i < ts.segments(); ++i) {
    double sq = 0.0;
    for (double dx : ts.increment(i)) sq += dx * dx;
    v += std::sqrt(sq);
  }
  return v;
}

/// Smallest degree n >= min_degree with tail_bound(c, n) below tol.
inline std::size_t degree_for_tolerance(double c, double tol, std::size_t min_degree = 1) {
  std::size_t n = min_degree;
  while (tail_bound(c, n) >= tol) ++n;
  return n;
}

/// Signature of a piecewise-abelian path itself, truncated at `degree` >= its Lie degree.
inline TruncTensor pab_signature(const PiecewiseAbelianPath& p, std::size_t degree) {
  TruncTensor sig = TruncTensor::unit(p.dim(), degree);
  for (const auto& inc : p.increments()) {
    sig = mul_trunc(sig, exp_trunc(embed(inc.tensor, degree)));
  }
  return sig;
}

}  // namespace sigker::oracle

#endif  // SIGKER_ORACLE_HPP
