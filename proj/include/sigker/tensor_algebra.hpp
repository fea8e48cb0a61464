#ifndef SIGKER_TENSOR_ALGEBRA_HPP
#define SIGKER_TENSOR_ALGEBRA_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sigker/errors.hpp"

namespace sigker {

/*
 * Layout of the truncated tensor algebra T^m(R^d).
 *
 * Coefficients are stored densely, one per word of length <= m.  Words are
 * ordered by length and then lexicographically, so level k occupies the
 * contiguous block [offset(k), offset(k) + d^k).  Inside a block, the word
 * (l_1, ..., l_k) with letters in 1..d has local index
 *   sum_j (l_j - 1) d^(k - j),
 * which makes the concatenation uv of a level-p word u and level-q word v sit
 * at local index  local(u) * d^q + local(v)  of level p + q.  Every product and
 * adjoint below is a loop over that identity.
 */
class Shape {
 public:
  Shape() : Shape(1, 0) {}

  Shape(std::size_t dim, std::size_t degree) : dim_(dim), degree_(degree) {
    if (dim == 0) throw DomainError("tensor dimension must be positive");
    powers_.resize(degree + 1);
    offsets_.resize(degree + 2);
    std::size_t p = 1;
    offsets_[0] = 0;
    for (std::size_t k = 0; k <= degree; ++k) {
      powers_[k] = p;
      offsets_[k + 1] = offsets_[k] + p;
      p *= dim;
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return offsets_.back(); }
  std::size_t level_size(std::size_t k) const { return powers_.at(k); }
  std::size_t offset(std::size_t k) const { return offsets_.at(k); }

  friend bool operator==(const Shape& a, const Shape& b) noexcept {
    return a.dim_ == b.dim_ && a.degree_ == b.degree_;
  }

 private:
  std::size_t dim_;
  std::size_t degree_;
  std::vector<std::size_t> powers_;
  std::vector<std::size_t> offsets_;
};

/// Number of words of length <= degree over an alphabet of size dim.
inline std::size_t tensor_size(std::size_t dim, std::size_t degree) {
  return Shape(dim, degree).size();
}

/// A word over the alphabet {1, ..., d}.
using Word = std::vector<int>;

inline std::size_t word_index(const Word& w, std::size_t dim) {
  if (dim == 0) throw DomainError("tensor dimension must be positive");
  std::size_t offset = 0;
  std::size_t power = 1;
  for (std::size_t k = 0; k < w.size(); ++k) {
    offset += power;
    power *= dim;
  }
  std::size_t local = 0;
  for (int letter : w) {
    if (letter < 1 || static_cast<std::size_t>(letter) > dim) {
      throw DomainError("letter " + std::to_string(letter) + " outside alphabet 1.." +
                        std::to_string(dim));
    }
    local = local * dim + static_cast<std::size_t>(letter - 1);
  }
  return offset + local;
}

inline Word index_to_word(std::size_t index, std::size_t dim) {
  if (dim == 0) throw DomainError("tensor dimension must be positive");
  std::size_t length = 0;
  std::size_t block = 1;
  while (index >= block) {
    index -= block;
    block *= dim;
    ++length;
  }
  Word w(length);
  for (std::size_t j = length; j-- > 0;) {
    w[j] = static_cast<int>(index % dim) + 1;
    index /= dim;
  }
  return w;
}

/// Label used in CSV headers: "w_12" for the word (1,2), "w_" for the empty
/// word.  Letters are dot-separated when the alphabet has more than 9 letters.
inline std::string word_label(const Word& w, std::size_t dim) {
  std::string s = "w_";
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (j > 0 && dim > 9) s += '.';
    s += std::to_string(w[j]);
  }
  return s;
}

// Allocation-free kernels over flat coefficient arrays.  All operands share
// one Shape; results accumulate into `out` (callers zero it when needed).
namespace kernels {

inline double inner(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// out += a (x)_m b
inline void mul_accumulate(const Shape& s, std::span<const double> a, std::span<const double> b,
                           std::span<double> out) {
  const std::size_t m = s.degree();
  for (std::size_t level = 0; level <= m; ++level) {
    double* dst = out.data() + s.offset(level);
    for (std::size_t p = 0; p <= level; ++p) {
      const std::size_t q = level - p;
      const double* ap = a.data() + s.offset(p);
      const double* bq = b.data() + s.offset(q);
      const std::size_t np = s.level_size(p);
      const std::size_t nq = s.level_size(q);
      for (std::size_t i = 0; i < np; ++i) {
        const double ai = ap[i];
        if (ai == 0.0) continue;
        double* row = dst + i * nq;
        for (std::size_t j = 0; j < nq; ++j) row[j] += ai * bq[j];
      }
    }
  }
}

/// out[v] += sum_u a[u] c[uv]   (prefix removal)
inline void left_adjoint_accumulate(const Shape& s, std::span<const double> a,
                                    std::span<const double> c, std::span<double> out) {
  const std::size_t m = s.degree();
  for (std::size_t p = 0; p <= m; ++p) {
    const double* ap = a.data() + s.offset(p);
    const std::size_t np = s.level_size(p);
    for (std::size_t q = 0; p + q <= m; ++q) {
      const std::size_t nq = s.level_size(q);
      const double* cpq = c.data() + s.offset(p + q);
      double* dst = out.data() + s.offset(q);
      for (std::size_t i = 0; i < np; ++i) {
        const double ai = ap[i];
        if (ai == 0.0) continue;
        const double* row = cpq + i * nq;
        for (std::size_t j = 0; j < nq; ++j) dst[j] += ai * row[j];
      }
    }
  }
}

/// out[u] += sum_v b[v] c[uv]   (suffix removal)
inline void right_adjoint_accumulate(const Shape& s, std::span<const double> b,
                                     std::span<const double> c, std::span<double> out) {
  const std::size_t m = s.degree();
  for (std::size_t q = 0; q <= m; ++q) {
    const double* bq = b.data() + s.offset(q);
    const std::size_t nq = s.level_size(q);
    bool any = false;
    for (std::size_t j = 0; j < nq && !any; ++j) any = bq[j] != 0.0;
    if (!any) continue;
    for (std::size_t p = 0; p + q <= m; ++p) {
      const std::size_t np = s.level_size(p);
      const double* cpq = c.data() + s.offset(p + q);
      double* dst = out.data() + s.offset(p);
      for (std::size_t i = 0; i < np; ++i) {
        const double* row = cpq + i * nq;
        double acc = 0.0;
        for (std::size_t j = 0; j < nq; ++j) acc += bq[j] * row[j];
        dst[i] += acc;
      }
    }
  }
}

}  // namespace kernels

/// Dense element of T^m(R^d).
class TruncTensor {
 public:
  TruncTensor() : TruncTensor(Shape(1, 0)) {}

  explicit TruncTensor(Shape shape) : shape_(std::move(shape)), coeffs_(shape_.size(), 0.0) {}

  TruncTensor(Shape shape, std::vector<double> coeffs)
      : shape_(std::move(shape)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != shape_.size()) {
      throw ShapeError("expected " + std::to_string(shape_.size()) + " coefficients, got " +
                       std::to_string(coeffs_.size()));
    }
    for (double c : coeffs_) {
      if (!std::isfinite(c)) throw NumericError("non-finite tensor coefficient");
    }
  }

  static TruncTensor zero(std::size_t dim, std::size_t degree) {
    return TruncTensor(Shape(dim, degree));
  }

  static TruncTensor unit(std::size_t dim, std::size_t degree) {
    TruncTensor t(Shape(dim, degree));
    t.coeffs_[0] = 1.0;
    return t;
  }

  /// Level-1 tensor with the given letters' coefficients.
  static TruncTensor from_vector(std::span<const double> v, std::size_t degree) {
    TruncTensor t(Shape(v.size(), degree));
    if (degree >= 1) {
      for (std::size_t i = 0; i < v.size(); ++i) t.coeffs_[1 + i] = v[i];
    }
    return t;
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t dim() const noexcept { return shape_.dim(); }
  std::size_t degree() const noexcept { return shape_.degree(); }
  std::size_t size() const noexcept { return coeffs_.size(); }

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<double> coeffs() noexcept { return coeffs_; }

  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }

  double at(const Word& w) const {
    if (w.size() > degree()) return 0.0;
    return coeffs_[word_index(w, dim())];
  }
  void set(const Word& w, double value) {
    if (w.size() > degree()) throw DomainError("word longer than truncation degree");
    coeffs_[word_index(w, dim())] = value;
  }

  std::span<const double> level(std::size_t k) const {
    return std::span<const double>(coeffs_).subspan(shape_.offset(k), shape_.level_size(k));
  }
  std::span<double> level(std::size_t k) {
    return std::span<double>(coeffs_).subspan(shape_.offset(k), shape_.level_size(k));
  }

  TruncTensor& operator+=(const TruncTensor& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
  }
  TruncTensor& operator-=(const TruncTensor& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
  }
  TruncTensor& operator*=(double lambda) {
    for (double& c : coeffs_) c *= lambda;
    return *this;
  }

  friend TruncTensor operator+(TruncTensor a, const TruncTensor& b) { return a += b; }
  friend TruncTensor operator-(TruncTensor a, const TruncTensor& b) { return a -= b; }
  friend TruncTensor operator*(double lambda, TruncTensor a) { return a *= lambda; }

  friend bool operator==(const TruncTensor& a, const TruncTensor& b) {
    return a.shape_ == b.shape_ && a.coeffs_ == b.coeffs_;
  }

  void require_same_shape(const TruncTensor& other) const {
    if (!(shape_ == other.shape_)) {
      throw ShapeError("tensor shape mismatch: (d=" + std::to_string(dim()) +
                       ", m=" + std::to_string(degree()) + ") vs (d=" +
                       std::to_string(other.dim()) + ", m=" + std::to_string(other.degree()) +
                       ")");
    }
  }

 private:
  Shape shape_;
  std::vector<double> coeffs_;
};

inline TruncTensor linear_combine(double alpha, const TruncTensor& a, double beta,
                                  const TruncTensor& b) {
  a.require_same_shape(b);
  TruncTensor r(a.shape());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = alpha * a[i] + beta * b[i];
  return r;
}

inline TruncTensor mul_trunc(const TruncTensor& a, const TruncTensor& b) {
  a.require_same_shape(b);
  TruncTensor r(a.shape());
  kernels::mul_accumulate(a.shape(), a.coeffs(), b.coeffs(), r.coeffs());
  return r;
}

inline double inner(const TruncTensor& a, const TruncTensor& b) {
  a.require_same_shape(b);
  return kernels::inner(a.coeffs(), b.coeffs());
}

/// Levels 0..k of a.
inline TruncTensor project(const TruncTensor& a, std::size_t k) {
  if (k > a.degree()) {
    throw DomainError("cannot project degree " + std::to_string(a.degree()) + " tensor to " +
                      std::to_string(k));
  }
  Shape s(a.dim(), k);
  auto src = a.coeffs().first(s.size());
  return TruncTensor(s, std::vector<double>(src.begin(), src.end()));
}

/// Zero-padding to a higher truncation degree.
inline TruncTensor embed(const TruncTensor& a, std::size_t degree) {
  if (degree < a.degree()) {
    throw DomainError("cannot embed degree " + std::to_string(a.degree()) + " tensor into " +
                      std::to_string(degree));
  }
  TruncTensor r(Shape(a.dim(), degree));
  std::copy(a.coeffs().begin(), a.coeffs().end(), r.coeffs().begin());
  return r;
}

/// Truncated exponential of a tensor with zero scalar slot (Horner form).
inline TruncTensor exp_trunc(const TruncTensor& a) {
  if (a[0] != 0.0) throw DomainError("exp_trunc requires a zero scalar slot");
  const Shape& s = a.shape();
  TruncTensor r = TruncTensor::unit(a.dim(), a.degree());
  TruncTensor tmp(s);
  // r <- 1 + (a (x) r) / k, for k = m..1
  for (std::size_t k = a.degree(); k >= 1; --k) {
    std::fill(tmp.coeffs().begin(), tmp.coeffs().end(), 0.0);
    kernels::mul_accumulate(s, a.coeffs(), r.coeffs(), tmp.coeffs());
    const double inv = 1.0 / static_cast<double>(k);
    for (std::size_t i = 0; i < tmp.size(); ++i) r[i] = tmp[i] * inv;
    r[0] += 1.0;
  }
  return r;
}

/// Truncated logarithm of a tensor with unit scalar slot (Horner form).
inline TruncTensor log_trunc(const TruncTensor& g) {
  if (g[0] != 1.0) throw DomainError("log_trunc requires a unit scalar slot");
  const Shape& s = g.shape();
  const std::size_t m = g.degree();
  TruncTensor x = g;
  x[0] = 0.0;
  if (m == 0) return x;
  auto coef = [](std::size_t k) {
    const double c = 1.0 / static_cast<double>(k);
    return (k % 2 == 1) ? c : -c;
  };
  // log(1 + x) = x (c_1 + x (c_2 + ... + x c_m))
  TruncTensor r(s);
  r[0] = coef(m);
  TruncTensor tmp(s);
  for (std::size_t k = m - 1; k >= 1; --k) {
    std::fill(tmp.coeffs().begin(), tmp.coeffs().end(), 0.0);
    kernels::mul_accumulate(s, x.coeffs(), r.coeffs(), tmp.coeffs());
    tmp[0] += coef(k);
    std::swap(r, tmp);
  }
  TruncTensor out(s);
  kernels::mul_accumulate(s, x.coeffs(), r.coeffs(), out.coeffs());
  return out;
}

/// Adjoint of left multiplication by a, applied to c.  Output has c's degree.
inline TruncTensor left_adjoint(const TruncTensor& a, const TruncTensor& c) {
  if (a.dim() != c.dim()) throw ShapeError("left_adjoint: dimension mismatch");
  const TruncTensor a_c = a.degree() >= c.degree() ? project(a, c.degree()) : embed(a, c.degree());
  TruncTensor r(c.shape());
  kernels::left_adjoint_accumulate(c.shape(), a_c.coeffs(), c.coeffs(), r.coeffs());
  return r;
}

/// Adjoint of right multiplication by b, applied to c.  Output has c's degree.
inline TruncTensor right_adjoint(const TruncTensor& b, const TruncTensor& c) {
  if (b.dim() != c.dim()) throw ShapeError("right_adjoint: dimension mismatch");
  const TruncTensor b_c = b.degree() >= c.degree() ? project(b, c.degree()) : embed(b, c.degree());
  TruncTensor r(c.shape());
  kernels::right_adjoint_accumulate(c.shape(), b_c.coeffs(), c.coeffs(), r.coeffs());
  return r;
}

inline double max_abs_diff(const TruncTensor& a, const TruncTensor& b) {
  a.require_same_shape(b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace sigker

#endif  // SIGKER_TENSOR_ALGEBRA_HPP
