#ifndef SIGKER_PATH_LIFT_HPP
#define SIGKER_PATH_LIFT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sigker/errors.hpp"
#include "sigker/tensor_algebra.hpp"

namespace sigker {

/// Samples x(t_0), ..., x(t_n) of a path in R^d on strictly increasing times.
class TimeSeries {
 public:
  TimeSeries() = default;

  /// `values` is row-major, one row of `dim` coordinates per time stamp.
  TimeSeries(std::vector<double> times, std::vector<double> values, std::size_t dim)
      : times_(std::move(times)), values_(std::move(values)), dim_(dim) {
    if (dim_ == 0) throw ShapeError("time series dimension must be positive");
    if (times_.size() < 2) throw ShapeError("time series needs at least two samples");
    if (values_.size() != times_.size() * dim_) {
      throw ShapeError("time series has " + std::to_string(values_.size()) +
                       " values for " + std::to_string(times_.size()) + " samples of dim " +
                       std::to_string(dim_));
    }
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
      if (!(times_[i] < times_[i + 1])) {
        throw DomainError("time stamps must be strictly increasing (index " +
                          std::to_string(i + 1) + ")");
      }
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw NumericError("non-finite sample in time series");
    }
    for (double t : times_) {
      if (!std::isfinite(t)) throw NumericError("non-finite time stamp");
    }
  }

  /// Samples on the uniform grid 0, 1, ..., n (handy for tests).
  static TimeSeries from_points(const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw ShapeError("no points");
    const std::size_t d = points.front().size();
    std::vector<double> t, v;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].size() != d) throw ShapeError("ragged points");
      t.push_back(static_cast<double>(i));
      v.insert(v.end(), points[i].begin(), points[i].end());
    }
    return TimeSeries(std::move(t), std::move(v), d);
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return times_.size(); }
  std::size_t segments() const noexcept { return times_.size() - 1; }
  const std::vector<double>& times() const noexcept { return times_; }
  double time(std::size_t i) const { return times_.at(i); }

  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * dim_, dim_);
  }

  /// x(t_{i+1}) - x(t_i)
  std::vector<double> increment(std::size_t i) const {
    std::vector<double> dx(dim_);
    auto a = point(i);
    auto b = point(i + 1);
    for (std::size_t k = 0; k < dim_; ++k) dx[k] = b[k] - a[k];
    return dx;
  }

  /// Index of a sample time; throws DomainError when t is not on the grid.
  std::size_t index_of(double t) const {
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it == times_.end() || *it != t) {
      throw DomainError("time " + std::to_string(t) + " is not a sample time");
    }
    return static_cast<std::size_t>(it - times_.begin());
  }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  std::size_t dim_ = 0;
};

/// Unscaled log-signature of the path over one partition interval.
struct LieIncrement {
  TruncTensor tensor;
  double t_start = 0.0;
  double t_end = 1.0;
};

/// Signature of a linear segment with increment dx: level k is dx^{(x)k} / k!.
inline TruncTensor segment_signature(std::span<const double> dx, std::size_t degree) {
  Shape s(dx.size(), degree);
  TruncTensor r(s);
  r[0] = 1.0;
  for (std::size_t k = 1; k <= degree; ++k) {
    auto prev = r.level(k - 1);
    auto cur = r.level(k);
    const double inv = 1.0 / static_cast<double>(k);
    const std::size_t d = dx.size();
    for (std::size_t i = 0; i < prev.size(); ++i) {
      for (std::size_t j = 0; j < d; ++j) cur[i * d + j] = prev[i] * dx[j] * inv;
    }
  }
  return r;
}

/// Signature over samples [first, last] of the piecewise-linear interpolation.
inline TruncTensor chen_signature(const TimeSeries& ts, std::size_t first, std::size_t last,
                                  std::size_t degree) {
  if (!(first < last) || last >= ts.size()) {
    throw DomainError("signature window must satisfy first < last < size");
  }
  TruncTensor sig = TruncTensor::unit(ts.dim(), degree);
  TruncTensor next(sig.shape());
  for (std::size_t i = first; i < last; ++i) {
    const TruncTensor seg = segment_signature(ts.increment(i), degree);
    std::fill(next.coeffs().begin(), next.coeffs().end(), 0.0);
    kernels::mul_accumulate(sig.shape(), sig.coeffs(), seg.coeffs(), next.coeffs());
    std::swap(sig, next);
  }
  return sig;
}

/// Signature over the time window [s, t]; both ends must be sample times.
inline TruncTensor chen_signature(const TimeSeries& ts, double s, double t, std::size_t degree) {
  if (!(s < t)) throw DomainError("signature window needs s < t");
  return chen_signature(ts, ts.index_of(s), ts.index_of(t), degree);
}

/// Signature over the whole series.
inline TruncTensor chen_signature(const TimeSeries& ts, std::size_t degree) {
  return chen_signature(ts, std::size_t{0}, ts.size() - 1, degree);
}

inline LieIncrement log_signature(const TimeSeries& ts, std::size_t first, std::size_t last,
                                  std::size_t degree) {
  TruncTensor l = log_trunc(chen_signature(ts, first, last, degree));
  l[0] = 0.0;
  return LieIncrement{std::move(l), ts.time(first), ts.time(last)};
}

inline LieIncrement log_signature(const TimeSeries& ts, double s, double t, std::size_t degree) {
  if (!(s < t)) throw DomainError("signature window needs s < t");
  return log_signature(ts, ts.index_of(s), ts.index_of(t), degree);
}

/*
 * Piecewise-abelian (log-linear) path of Lie degree m: on each partition
 * interval [t_i, t_{i+1}] the path is exp of a linearly growing multiple of the
 * interval's log-signature, and the pieces are glued multiplicatively.
 */
class PiecewiseAbelianPath {
 public:
  PiecewiseAbelianPath(std::vector<double> partition, std::vector<LieIncrement> increments)
      : partition_(std::move(partition)), increments_(std::move(increments)) {
    if (partition_.size() < 2 || increments_.size() + 1 != partition_.size()) {
      throw ShapeError("partition of " + std::to_string(partition_.size()) + " points needs " +
                       "one increment per interval, got " + std::to_string(increments_.size()));
    }
    const Shape& shape = increments_.front().tensor.shape();
    for (std::size_t i = 0; i < increments_.size(); ++i) {
      const LieIncrement& inc = increments_[i];
      if (!(inc.tensor.shape() == shape)) throw ShapeError("increments differ in shape");
      if (inc.tensor[0] != 0.0) throw DomainError("Lie increment with nonzero scalar slot");
      if (!(partition_[i] < partition_[i + 1])) {
        throw DomainError("partition must be strictly increasing");
      }
      if (inc.t_start != partition_[i] || inc.t_end != partition_[i + 1]) {
        throw DomainError("increment span does not match its partition interval");
      }
    }
  }

  /// Build directly from log-signature tensors on the partition 0, 1, ..., N.
  static PiecewiseAbelianPath from_tensors(std::vector<TruncTensor> logsigs) {
    std::vector<double> part(logsigs.size() + 1);
    for (std::size_t i = 0; i < part.size(); ++i) part[i] = static_cast<double>(i);
    std::vector<LieIncrement> incs;
    incs.reserve(logsigs.size());
    for (std::size_t i = 0; i < logsigs.size(); ++i) {
      incs.push_back(LieIncrement{std::move(logsigs[i]), part[i], part[i + 1]});
    }
    return PiecewiseAbelianPath(std::move(part), std::move(incs));
  }

  std::size_t dim() const noexcept { return increments_.front().tensor.dim(); }
  std::size_t degree() const noexcept { return increments_.front().tensor.degree(); }
  const Shape& shape() const noexcept { return increments_.front().tensor.shape(); }
  std::size_t intervals() const noexcept { return increments_.size(); }
  const std::vector<double>& partition() const noexcept { return partition_; }
  const std::vector<LieIncrement>& increments() const noexcept { return increments_; }
  const TruncTensor& logsig(std::size_t i) const { return increments_.at(i).tensor; }

  /// Same path described at a higher degree, log-signatures zero-padded.
  PiecewiseAbelianPath embedded(std::size_t degree) const {
    std::vector<LieIncrement> incs;
    incs.reserve(increments_.size());
    for (const auto& inc : increments_) {
      incs.push_back(LieIncrement{embed(inc.tensor, degree), inc.t_start, inc.t_end});
    }
    return PiecewiseAbelianPath(partition_, std::move(incs));
  }

 private:
  std::vector<double> partition_;
  std::vector<LieIncrement> increments_;
};

/// Sample indices of the partition t_0, t_k, t_2k, ..., always ending at the last sample.
inline std::vector<std::size_t> every_k_indices(const TimeSeries& ts, std::size_t k) {
  if (k == 0) throw DomainError("coarsening factor must be positive");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < ts.size() - 1; i += k) idx.push_back(i);
  idx.push_back(ts.size() - 1);
  return idx;
}

inline std::vector<double> every_k_partition(const TimeSeries& ts, std::size_t k) {
  std::vector<double> part;
  for (std::size_t i : every_k_indices(ts, k)) part.push_back(ts.time(i));
  return part;
}

/// Piecewise-abelian approximation of degree m on a partition made of sample times.
inline PiecewiseAbelianPath build_pab(const TimeSeries& ts, const std::vector<double>& partition,
                                      std::size_t degree) {
  if (partition.size() < 2) throw DomainError("partition needs at least two points");
  if (partition.front() != ts.times().front() || partition.back() != ts.times().back()) {
    throw DomainError("partition must cover the whole time range of the series");
  }
  std::vector<std::size_t> idx;
  idx.reserve(partition.size());
  for (double t : partition) idx.push_back(ts.index_of(t));
  std::vector<LieIncrement> incs;
  incs.reserve(idx.size() - 1);
  for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
    if (!(idx[i] < idx[i + 1])) throw DomainError("partition must be strictly increasing");
    incs.push_back(log_signature(ts, idx[i], idx[i + 1], degree));
  }
  return PiecewiseAbelianPath(partition, std::move(incs));
}

/// Group elements G_i = exp(L_0) (x) ... (x) exp(L_{i-1}), i = 0..N.
inline std::vector<TruncTensor> pab_partial_signatures(const PiecewiseAbelianPath& p) {
  std::vector<TruncTensor> out;
  out.reserve(p.intervals() + 1);
  out.push_back(TruncTensor::unit(p.dim(), p.degree()));
  for (const auto& inc : p.increments()) {
    out.push_back(mul_trunc(out.back(), exp_trunc(inc.tensor)));
  }
  return out;
}

}  // namespace sigker

#endif  // SIGKER_PATH_LIFT_HPP
