#ifndef SIGKER_IO_HPP
#define SIGKER_IO_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <Eigen/Dense>

#include "sigker/errors.hpp"
#include "sigker/harness.hpp"
#include "sigker/path_lift.hpp"
#include "sigker/tensor_algebra.hpp"

namespace sigker::io {

/// Shortest representation that parses back to the same double.
inline std::string format_shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw NumericError("cannot format value");
  return std::string(buf, end);
}

/// Fixed notation with 12 digits after the point, for human-readable output.
inline std::string format_fixed12(double v) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%.12f", v);
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline double parse_double(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || field.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": cannot parse number '" +
                     std::string(field) + "'");
  }
  return v;
}

}  // namespace detail

/*
 * Time-series CSV: mandatory header `time,x1,...,xd`, one sample per row,
 * rows in increasing time order, comma separated.  Blank lines are skipped.
 */
inline TimeSeries read_time_series(std::istream& in, const std::string& source = "<stream>") {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  bool have_header = false;
  std::vector<double> times, values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line);
    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "time") {
        throw ParseError(source + ": header must be 'time,x1,...,xd'");
      }
      for (std::size_t k = 1; k < fields.size(); ++k) {
        if (fields[k] != "x" + std::to_string(k)) {
          throw ParseError(source + ": header column " + std::to_string(k + 1) +
                           " must be 'x" + std::to_string(k) + "'");
        }
      }
      dim = fields.size() - 1;
      have_header = true;
      continue;
    }
    if (fields.size() != dim + 1) {
      throw ShapeError(source + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(dim + 1));
    }
    times.push_back(detail::parse_double(fields[0], line_no));
    for (std::size_t k = 1; k <= dim; ++k) {
      values.push_back(detail::parse_double(fields[k], line_no));
    }
  }
  if (!have_header) throw ParseError(source + ": empty file");
  if (times.size() < 2) throw ShapeError(source + ": need at least two samples");
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (!(times[i] < times[i + 1])) {
      throw ParseError(source + ": time column must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ParseError(source + ": non-finite sample");
  }
  return TimeSeries(std::move(times), std::move(values), dim);
}

inline TimeSeries read_time_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_time_series(in, path);
}

inline void write_time_series(std::ostream& out, const TimeSeries& ts) {
  out << "time";
  for (std::size_t k = 1; k <= ts.dim(); ++k) out << ",x" << k;
  out << '\n';
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out << format_shortest(ts.time(i));
    for (double v : ts.point(i)) out << ',' << format_shortest(v);
    out << '\n';
  }
}

/// One row per interval: t_start, t_end, then one column per word of length 1..m.
inline void write_logsig_csv(std::ostream& out, const PiecewiseAbelianPath& p) {
  const std::size_t n = p.shape().size();
  out << "t_start,t_end";
  for (std::size_t i = 1; i < n; ++i) out << ',' << word_label(index_to_word(i, p.dim()), p.dim());
  out << '\n';
  for (const auto& inc : p.increments()) {
    out << format_shortest(inc.t_start) << ',' << format_shortest(inc.t_end);
    for (std::size_t i = 1; i < n; ++i) out << ',' << format_shortest(inc.tensor[i]);
    out << '\n';
  }
}

/// Parses the output of write_logsig_csv back into a path of the given dimension.
inline PiecewiseAbelianPath read_logsig_csv(std::istream& in, std::size_t dim) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  std::size_t degree = 0;
  std::vector<double> partition;
  std::vector<LieIncrement> incs;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line);
    if (columns == 0) {
      columns = fields.size();
      if (columns < 2 || fields[0] != "t_start" || fields[1] != "t_end") {
        throw ParseError("log-signature header must start with 't_start,t_end'");
      }
      while (tensor_size(dim, degree) - 1 < columns - 2) ++degree;
      if (tensor_size(dim, degree) - 1 != columns - 2) {
        throw ShapeError("column count does not match any truncation degree");
      }
      continue;
    }
    if (fields.size() != columns) throw ShapeError("ragged log-signature row");
    TruncTensor t(Shape(dim, degree));
    for (std::size_t i = 2; i < columns; ++i) t[i - 1] = detail::parse_double(fields[i], line_no);
    const double a = detail::parse_double(fields[0], line_no);
    const double b = detail::parse_double(fields[1], line_no);
    if (partition.empty()) partition.push_back(a);
    partition.push_back(b);
    incs.push_back(LieIncrement{std::move(t), a, b});
  }
  return PiecewiseAbelianPath(std::move(partition), std::move(incs));
}

/// Header `degree,factor,mean_error,stderr,pairs`, one row per record.
inline void write_records_csv(std::ostream& out, const std::vector<ErrorRecord>& records) {
  out << "degree,factor,mean_error,stderr,pairs\n";
  for (const auto& r : records) {
    out << r.degree << ',' << r.factor << ',' << format_shortest(r.mean_error) << ','
        << format_shortest(r.std_error) << ',' << r.errors.size() << '\n';
  }
}

/// Long format: one row per (degree, factor, pair).
inline void write_pair_errors_csv(std::ostream& out, const std::vector<ErrorRecord>& records) {
  out << "degree,factor,pair,error\n";
  for (const auto& r : records) {
    for (std::size_t p = 0; p < r.errors.size(); ++p) {
      out << r.degree << ',' << r.factor << ',' << p << ',' << format_shortest(r.errors[p])
          << '\n';
    }
  }
}

/// Square matrix with a header row and a leading name column.
inline void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m,
                             const std::vector<std::string>& names) {
  out << "name";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << names.at(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << format_shortest(m(i, j));
    out << '\n';
  }
}

}  // namespace sigker::io

#endif  // SIGKER_IO_HPP
