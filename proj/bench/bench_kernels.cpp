// Serial reference kernels against their OpenMP versions.
//
//   bench_kernels [vertices] [repeats]

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <vector>

#include <omp.h>

#include "proper_lift/distance.hpp"
#include "proper_lift/kernels.hpp"
#include "proper_lift/manifold_io.hpp"
#include "proper_lift/smoothing.hpp"

namespace pl = proper_lift;

template <typename F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, double diff) {
  std::cout << name << ": serial " << serial * 1e3 << " ms, openmp " << parallel * 1e3 << " ms, speedup "
            << serial / parallel << ", max |diff| " << diff << '\n';
}

int main(int argc, char** argv) {
  const std::size_t side = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 48;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  std::cout << "threads: " << omp_get_max_threads() << ", grid " << side << "x" << side << '\n';

  const auto m = pl::make_grid(side, side, 1.0, 1.0);
  const auto& g = m->graph();
  const auto f = pl::truncate_distance(pl::distance_field(m), pl::SmoothingParams{});
  std::vector<double> widths(f.size());
  for (std::size_t v = 0; v < f.size(); ++v) widths[v] = 0.25 * f[v];

  std::vector<double> a(f.size()), b(f.size());
  const double ts = best_of(repeats, [&] { pl::kernels::serial::mollify_pass(g, f.values(), widths, a); });
  const double tp = best_of(repeats, [&] { pl::kernels::mollify_pass(g, f.values(), widths, b); });
  double diff = 0.0;
  for (std::size_t v = 0; v < a.size(); ++v) diff = std::max(diff, std::abs(a[v] - b[v]));
  report("mollify_pass", ts, tp, diff);

  const int dim = 3;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::vector<double> x(m->vertex_count() * dim), target(g.edge_count());
  for (auto& c : x) c = normal(rng);
  for (std::size_t e = 0; e < target.size(); ++e) target[e] = g.lengths[e] * g.lengths[e];
  std::vector<double> ga(x.size()), gb(x.size());
  const int inner = 200;
  const double ss = best_of(repeats, [&] {
    for (int i = 0; i < inner; ++i) pl::kernels::serial::stress_gradient(g, target, x, dim, ga);
  });
  const double sp = best_of(repeats, [&] {
    for (int i = 0; i < inner; ++i) pl::kernels::stress_gradient(g, target, x, dim, gb);
  });
  diff = 0.0;
  for (std::size_t i = 0; i < ga.size(); ++i) diff = std::max(diff, std::abs(ga[i] - gb[i]));
  report("stress_gradient x200", ss, sp, diff);
  return 0;
}
