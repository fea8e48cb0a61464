// Kernel of two simulated Brownian paths at increasing Lie degree.

#include <cstdio>

#include "sigker/sigker.hpp"

int main() {
  const auto x = sigker::simulate_bm(2, 1024, 1.0, 7, 0);
  const auto y = sigker::simulate_bm(2, 1024, 1.0, 7, 1);

  const double reference = sigker::reference_value(x, y);
  std::printf("reference (degree 1, every sample): %.10f\n", reference);

  for (std::size_t m = 1; m <= 4; ++m) {
    const double k = sigker::kernel(x, y, m, sigker::every_k_partition(x, 32),
                                    sigker::every_k_partition(y, 32));
    std::printf("degree %zu, every 32nd sample: %.10f  (error %.2e)\n", m, k, k - reference);
  }

  // Log-signature of the first interval at degree 2 carries the Levy area.
  const auto p = sigker::build_pab(x, sigker::every_k_partition(x, 256), 2);
  const auto& l = p.logsig(0);
  std::printf("first interval: dx = (%.4f, %.4f), area = %.4f\n", l.at({1}), l.at({2}),
              l.at({1, 2}));
  return 0;
}
