// sigker: command-line front end for signature kernels of time series.
//
//   sigker kernel x.csv y.csv --degree 2 --every 4
//   sigker logsig x.csv --degree 3 --every 16
//   sigker gram data/ --degree 2 --every 16 --check-psd
//   sigker convergence --config cfg.json --output errors.csv
//   sigker selftest

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sigker/sigker.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitShape = 3;
constexpr int kExitNumeric = 4;

enum class Format { text, csv, json };

struct Options {
  std::size_t degree = 1;
  std::size_t every = 1;
  std::string times;
  std::string times_y;
  std::size_t oracle = 0;
  std::string output;
  Format format = Format::text;
  bool check_psd = false;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> pairs;
  std::string per_pair;
  unsigned threads = 0;
  std::vector<std::string> inputs;
};

std::vector<double> parse_time_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw sigker::ParseError("cannot parse time '" + item + "' in partition list");
    }
  }
  return out;
}

std::vector<double> partition_for(const sigker::TimeSeries& ts, const Options& o,
                                  const std::string& explicit_times) {
  if (!explicit_times.empty()) return parse_time_list(explicit_times);
  return sigker::every_k_partition(ts, o.every);
}

/// Writes to --output when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw sigker::ParseError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void require_finite(double v) {
  if (!std::isfinite(v)) throw sigker::NumericError("non-finite result");
}

int run_kernel(const Options& o) {
  const auto x = sigker::io::read_time_series_file(o.inputs.at(0));
  const auto y = sigker::io::read_time_series_file(o.inputs.at(1));
  if (x.dim() != y.dim()) {
    throw sigker::ShapeError("inputs differ in dimension: " + std::to_string(x.dim()) + " vs " +
                             std::to_string(y.dim()));
  }
  double value = 0.0;
  if (o.oracle > 0) {
    value = sigker::oracle::direct_truncated_kernel(x, y, o.oracle);
  } else {
    value = sigker::kernel(x, y, o.degree, partition_for(x, o, o.times),
                           partition_for(y, o, o.times_y.empty() ? o.times : o.times_y));
  }
  require_finite(value);
  Sink sink(o.output);
  auto& out = sink.stream();
  switch (o.format) {
    case Format::text:
      out << sigker::io::format_fixed12(value) << '\n';
      break;
    case Format::csv:
      out << "kernel\n" << sigker::io::format_shortest(value) << '\n';
      break;
    case Format::json:
      out << json{{"kernel", value}}.dump() << '\n';
      break;
  }
  return kExitOk;
}

int run_logsig(const Options& o) {
  const auto ts = sigker::io::read_time_series_file(o.inputs.at(0));
  const auto p = sigker::build_pab(ts, partition_for(ts, o, o.times), o.degree);
  Sink sink(o.output);
  auto& out = sink.stream();
  if (o.format == Format::json) {
    json rows = json::array();
    for (const auto& inc : p.increments()) {
      json coeffs = json::object();
      for (std::size_t i = 1; i < inc.tensor.size(); ++i) {
        coeffs[sigker::word_label(sigker::index_to_word(i, p.dim()), p.dim())] = inc.tensor[i];
      }
      rows.push_back({{"t_start", inc.t_start}, {"t_end", inc.t_end}, {"coefficients", coeffs}});
    }
    out << json{{"dim", p.dim()}, {"degree", p.degree()}, {"intervals", rows}}.dump(2) << '\n';
  } else {
    sigker::io::write_logsig_csv(out, p);
  }
  return kExitOk;
}

int run_gram(const Options& o) {
  const fs::path dir(o.inputs.at(0));
  if (!fs::is_directory(dir)) throw sigker::ParseError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw sigker::ParseError("no .csv files in " + dir.string());

  std::vector<sigker::TimeSeries> data;
  std::vector<std::string> names;
  for (const auto& f : files) {
    data.push_back(sigker::io::read_time_series_file(f.string()));
    names.push_back(f.stem().string());
  }
  const auto g = sigker::gram_matrix(data, o.degree, o.every, o.threads);
  for (Eigen::Index i = 0; i < g.size(); ++i) require_finite(g.data()[i]);

  Sink sink(o.output);
  auto& out = sink.stream();
  if (o.format == Format::json) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      std::vector<double> row(g.cols());
      for (Eigen::Index j = 0; j < g.cols(); ++j) row[j] = g(i, j);
      rows.push_back(row);
    }
    out << json{{"names", names}, {"matrix", rows}}.dump() << '\n';
  } else {
    sigker::io::write_matrix_csv(out, g, names);
  }
  if (o.check_psd) {
    const double lambda = sigker::min_eigenvalue(g);
    std::cerr << "min_eigenvalue=" << sigker::io::format_shortest(lambda) << '\n';
    if (lambda < -1e-8) {
      std::cerr << "error: Gram matrix is not positive semi-definite\n";
      return kExitNumeric;
    }
  }
  return kExitOk;
}

sigker::ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sigker::ParseError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw sigker::ParseError(path + ": " + e.what());
  }
  if (!j.is_object()) throw sigker::ParseError(path + ": config must be a JSON object");
  static const std::vector<std::string> known{"dim",   "n_fine",  "factors", "degrees",
                                              "pairs", "horizon", "seed",    "threads"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw sigker::ParseError(path + ": unknown key '" + key + "'");
    }
  }
  sigker::ExperimentConfig cfg;
  try {
    cfg.dim = j.value("dim", cfg.dim);
    cfg.n_fine = j.value("n_fine", cfg.n_fine);
    cfg.factors = j.value("factors", cfg.factors);
    cfg.degrees = j.value("degrees", cfg.degrees);
    cfg.pairs = j.value("pairs", cfg.pairs);
    cfg.horizon = j.value("horizon", cfg.horizon);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const json::exception& e) {
    throw sigker::ParseError(path + ": " + e.what());
  }
  try {
    cfg.validate();
  } catch (const sigker::DomainError& e) {
    throw sigker::ParseError(path + ": " + e.what());
  }
  return cfg;
}

int run_convergence(const Options& o) {
  sigker::ExperimentConfig cfg = o.config.empty() ? sigker::ExperimentConfig{} : parse_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.pairs) cfg.pairs = *o.pairs;
  if (o.threads) cfg.threads = o.threads;
  try {
    cfg.validate();
  } catch (const sigker::DomainError& e) {
    throw sigker::ParseError(e.what());
  }
  const auto records = sigker::convergence_experiment(cfg);
  for (const auto& r : records) require_finite(r.mean_error);
  Sink sink(o.output);
  auto& out = sink.stream();
  if (o.format == Format::json) {
    json rows = json::array();
    for (const auto& r : records) {
      rows.push_back({{"degree", r.degree},
                      {"factor", r.factor},
                      {"mean_error", r.mean_error},
                      {"stderr", r.std_error},
                      {"pairs", r.errors.size()}});
    }
    out << rows.dump(2) << '\n';
  } else {
    sigker::io::write_records_csv(out, records);
  }
  if (!o.per_pair.empty()) {
    std::ofstream pp(o.per_pair, std::ios::binary);
    if (!pp) throw sigker::ParseError("cannot open " + o.per_pair);
    sigker::io::write_pair_errors_csv(pp, records);
  }
  return kExitOk;
}

int run_selftest() {
  using namespace sigker;
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
    if (!ok) ++failures;
  };

  {
    auto v = TruncTensor::from_vector(std::vector<double>{1.0}, 1);
    auto p = PiecewiseAbelianPath::from_tensors({v});
    check("single cell with <v,w> = 1 gives 2.25", solve(p, p).value == 2.25);
  }
  {
    std::vector<TruncTensor> pieces(64, TruncTensor::from_vector(std::vector<double>{1.0 / 64}, 1));
    auto p = PiecewiseAbelianPath::from_tensors(pieces);
    check("64x64 linear segments within 1e-5 of sum 1/(k!)^2",
          std::abs(solve(p, p).value - oracle::linear_kernel_closed_form(1.0, 20)) < 1e-5);
  }
  {
    const auto x = simulate_bm(2, 64, 1.0, 1, 0);
    const auto y = simulate_bm(2, 64, 1.0, 1, 1);
    const auto px = build_pab(x, every_k_partition(x, 4), 3);
    const auto py = build_pab(y, every_k_partition(y, 4), 3);
    check("kernel is symmetric", std::abs(solve(px, py).value - solve(py, px).value) < 1e-12);
    const auto a = build_pab(x, x.times(), 1);
    const auto b = build_pab(y, y.times(), 1);
    check("degree-1 sweep equals scalar recursion",
          std::abs(solve(a, b).value - solve_order1(a, b).value) < 1e-12);
    check("zero-padded degree gives the same kernel",
          std::abs(solve(px, py).value - solve(px.embedded(5), py.embedded(5)).value) < 1e-12);
  }
  {
    const auto x = simulate_bm(3, 8, 1.0, 2, 0);
    const auto s = chen_signature(x, 4);
    check("exp(log(S)) == S", max_abs_diff(exp_trunc(log_trunc(s)), s) < 1e-12);
    const auto a = log_trunc(s);
    const auto c = chen_signature(simulate_bm(3, 8, 1.0, 2, 1), 4);
    const double lhs = inner(c, mul_trunc(s, a));
    check("adjoint duality",
          std::abs(lhs - inner(left_adjoint(s, c), a)) <= 1e-12 * (1 + std::abs(lhs)) &&
              std::abs(lhs - inner(right_adjoint(a, c), s)) <= 1e-12 * (1 + std::abs(lhs)));
  }
  std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << '\n';
  return failures == 0 ? kExitOk : kExitNumeric;
}

void add_format(CLI::App* cmd, Options& o, bool with_text) {
  std::map<std::string, Format> names{{"csv", Format::csv}, {"json", Format::json}};
  if (with_text) names["text"] = Format::text;
  cmd->add_option("--format", o.format, with_text ? "text (default), csv or json" : "csv (default) or json")
      ->transform(CLI::CheckedTransformer(names, CLI::ignore_case).description(""));
  cmd->add_option("-o,--output", o.output, "Output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signature kernels of time series via the Goursat PDE of piecewise-abelian paths"};
  app.require_subcommand(1);
  Options o;

  auto* kernel = app.add_subcommand("kernel", "Kernel of two time series");
  kernel->add_option("series", o.inputs, "Two CSV files: time,x1,...,xd")->required()->expected(2);
  kernel->add_option("-m,--degree", o.degree, "Lie degree of the approximation")
      ->check(CLI::PositiveNumber);
  kernel->add_option("-k,--every", o.every, "Partition at every k-th sample")
      ->check(CLI::PositiveNumber);
  kernel->add_option("--times", o.times, "Explicit partition times (comma separated)");
  kernel->add_option("--times-y", o.times_y, "Explicit partition times for the second series");
  kernel->add_option("--oracle", o.oracle,
                     "Instead of solving the PDE, use explicit signatures truncated at this level");
  add_format(kernel, o, true);

  auto* logsig = app.add_subcommand("logsig", "Log-signatures over partition intervals");
  logsig->add_option("series", o.inputs, "CSV file: time,x1,...,xd")->required()->expected(1);
  logsig->add_option("-m,--degree", o.degree, "Truncation degree")->check(CLI::PositiveNumber);
  logsig->add_option("-k,--every", o.every, "Partition at every k-th sample")
      ->check(CLI::PositiveNumber);
  logsig->add_option("--times", o.times, "Explicit partition times (comma separated)");
  add_format(logsig, o, false);

  auto* gram = app.add_subcommand("gram", "Gram matrix of every .csv series in a directory");
  gram->add_option("dir", o.inputs, "Directory of CSV series")->required()->expected(1);
  gram->add_option("-m,--degree", o.degree, "Lie degree")->check(CLI::PositiveNumber);
  gram->add_option("-k,--every", o.every, "Partition at every k-th sample")
      ->check(CLI::PositiveNumber);
  gram->add_flag("--check-psd", o.check_psd, "Fail (exit 4) if min eigenvalue < -1e-8");
  gram->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  add_format(gram, o, false);

  auto* conv = app.add_subcommand("convergence", "Brownian-motion convergence experiment");
  conv->add_option("-c,--config", o.config, "JSON experiment configuration");
  conv->add_option("--seed", o.seed, "Override the configured seed");
  conv->add_option("--pairs", o.pairs, "Override the number of path pairs")
      ->check(CLI::PositiveNumber);
  conv->add_option("--per-pair", o.per_pair, "Also write per-pair errors (long CSV)");
  conv->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  add_format(conv, o, false);

  auto* selftest = app.add_subcommand("selftest", "Run built-in consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*kernel) return run_kernel(o);
    if (*logsig) return run_logsig(o);
    if (*gram) return run_gram(o);
    if (*conv) return run_convergence(o);
    if (*selftest) return run_selftest();
  } catch (const sigker::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const sigker::ShapeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitShape;
  } catch (const sigker::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitShape;
  } catch (const sigker::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
