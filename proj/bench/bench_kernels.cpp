// Serial reference against OpenMP for the grid kernels and the baseline search.
//
//   bench_kernels [--repeat N] [--n N]

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "fairdiv/kernels.hpp"
#include "fairdiv/preferences.hpp"
#include "fairdiv/random.hpp"
#include "fairdiv/verifier.hpp"

namespace {

using namespace fairdiv;

double time_ms(std::size_t repeat, const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t r = 0; r < repeat; ++r) body();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count() /
         static_cast<double>(repeat);
}

void report(const char* name, double serial, double parallel, bool agree) {
  std::printf("%-24s serial %10.3f ms  omp %10.3f ms  speedup %5.2fx  %s\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0, agree ? "agree" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid kernel benchmark"};
  std::size_t repeat = 5;
  std::size_t n = 256;
  app.add_option("--repeat", repeat, "runs per measurement")->check(CLI::PositiveNumber);
  app.add_option("--n", n, "resolution for the baseline search (epsilon = 1/n)")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  std::printf("threads: %d\n", omp_get_max_threads());
  int failures = 0;

  {
    const std::vector<double> x{0.31, 0.22, 0.17, 0.30};
    const std::size_t m = 96;
    kernels::GridArgmin a, b;
    const double ts = time_ms(repeat, [&] { a = kernels::serial::halfspace_grid_min(x, m, 1, 40, m); });
    const double tp = time_ms(repeat, [&] { b = kernels::omp::halfspace_grid_min(x, m, 1, 40, m); });
    const bool agree = a.parts == b.parts && a.squared == b.squared;
    failures += !agree;
    report("halfspace_grid_min d=4", ts, tp, agree);
  }

  {
    const std::vector<std::array<double, 3>> poly{
        {0.6, 0.2, 0.2}, {0.2, 0.6, 0.2}, {0.2, 0.2, 0.6}, {0.5, 0.1, 0.4}};
    const std::vector<std::size_t> steps{200000, 200000, 200000, 200000};
    const std::array<double, 3> x{0.05, 0.05, 0.9};
    kernels::SampleArgmin a, b;
    const double ts = time_ms(repeat, [&] { a = kernels::serial::polygon_boundary_min(poly, steps, x); });
    const double tp = time_ms(repeat, [&] { b = kernels::omp::polygon_boundary_min(poly, steps, x); });
    const bool agree = a.edge == b.edge && a.step == b.step && a.squared == b.squared;
    failures += !agree;
    report("polygon_boundary_min", ts, tp, agree);
  }

  for (const ProfileKind kind : {ProfileKind::LpsUpper, ProfileKind::Convex3}) {
    const PreferenceProfile profile = generate_profile(kind, 3, 7);
    const Rational eps(1, static_cast<long>(n));
    GridSearchResult a, b;
    const double ts = time_ms(repeat, [&] { a = grid_search_fair(profile, eps, Backend::Serial); });
    const double tp = time_ms(repeat, [&] { b = grid_search_fair(profile, eps, Backend::OpenMP); });
    const bool agree = a.evaluations == b.evaluations && a.grid_point == b.grid_point && a.sigma == b.sigma;
    failures += !agree;
    char name[64];
    std::snprintf(name, sizeof name, "grid_search %s", std::string(to_string(kind)).c_str());
    report(name, ts, tp, agree);
  }
  return failures == 0 ? 0 : 1;
}
