// Runs the closed-form instances for a few horizons and prints gap against bound.

#include <cstdio>

#include "splitlab/splitlab.hpp"

int main() {
  using namespace splitlab;
  const double alpha = 1.0;
  std::printf("%-7s %3s %12s %12s %12s\n", "algo", "K", "gap", "1/(a(K+1))", "1/(aK)");
  for (Algorithm algo : kAllAlgorithms) {
    for (std::size_t K : {1, 2, 5, 10}) {
      const WorstCaseBundle b = make_bundle(algo, K, alpha);
      const SolverTrace t = run(algo, b.instance, K);
      const double g = gap(b.instance, t, b.reference);
      std::printf("%-7s %3zu %12.9f %12.9f %12.9f\n", std::string(to_string(algo)).c_str(), K, g,
                  1.0 / (alpha * (K + 1.0)), 1.0 / (alpha * K));
    }
  }
  return 0;
}
