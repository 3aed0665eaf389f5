#include "fairdiv/kernels.hpp"

#include <atomic>
#include <exception>
#include <mutex>

#include "fairdiv/geometry.hpp"

namespace fairdiv::kernels {

namespace {

// Lexicographic order on (value, position) keeps serial and parallel answers equal.
bool better(double value, std::size_t position, double best_value, std::size_t best_position) {
  return value < best_value || (value == best_value && position < best_position);
}

GridArgmin scan_halfspace_slice(std::span<const double> x, std::size_t m, std::size_t room, std::size_t lo,
                                std::size_t hi, std::size_t first) {
  GridArgmin best;
  const std::size_t d = x.size();
  if (room == 0 && (first < lo || first > hi)) return best;
  const double inv = 1.0 / static_cast<double>(m);
  const double head = x[0] - static_cast<double>(first) * inv;

  CompositionCursor tail(d - 1, m - first);
  do {
    const auto& parts = tail.parts();
    if (room > 0) {
      const std::size_t c = parts[room - 1];
      if (c < lo || c > hi) continue;
    }
    double sum = head * head;
    for (std::size_t k = 1; k < d; ++k) {
      const double delta = x[k] - static_cast<double>(parts[k - 1]) * inv;
      sum += delta * delta;
    }
    sum *= 0.5;
    if (sum < best.squared) {
      best.found = true;
      best.squared = sum;
      best.parts.assign(1, first);
      best.parts.insert(best.parts.end(), parts.begin(), parts.end());
    }
  } while (tail.next());
  return best;
}

std::vector<std::size_t> prefix_sums(std::span<const std::size_t> steps) {
  std::vector<std::size_t> offsets(steps.size() + 1, 0);
  for (std::size_t e = 0; e < steps.size(); ++e) offsets[e + 1] = offsets[e] + steps[e];
  return offsets;
}

double sample_squared(std::span<const std::array<double, 3>> vertices, std::span<const std::size_t> steps,
                      std::size_t edge, std::size_t step, const std::array<double, 3>& x) {
  const auto& p = vertices[edge];
  const auto& q = vertices[(edge + 1) % vertices.size()];
  const double t = static_cast<double>(step) / static_cast<double>(steps[edge]);
  double sum = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double delta = x[k] - (p[k] + t * (q[k] - p[k]));
    sum += delta * delta;
  }
  return 0.5 * sum;
}

std::size_t edge_of(const std::vector<std::size_t>& offsets, std::size_t flat) {
  std::size_t e = 0;
  while (offsets[e + 1] <= flat) ++e;
  return e;
}

}  // namespace

namespace serial {

GridArgmin halfspace_grid_min(std::span<const double> x, std::size_t m, std::size_t room, std::size_t lo,
                              std::size_t hi) {
  GridArgmin best;
  for (std::size_t first = 0; first <= m; ++first) {
    GridArgmin slice = scan_halfspace_slice(x, m, room, lo, hi, first);
    if (slice.found && slice.squared < best.squared) best = std::move(slice);
  }
  return best;
}

SampleArgmin polygon_boundary_min(std::span<const std::array<double, 3>> vertices,
                                  std::span<const std::size_t> steps, const std::array<double, 3>& x) {
  SampleArgmin best;
  for (std::size_t e = 0; e < vertices.size(); ++e) {
    for (std::size_t s = 0; s < steps[e]; ++s) {
      const double value = sample_squared(vertices, steps, e, s, x);
      if (value < best.squared) best = SampleArgmin{e, s, value};
    }
  }
  return best;
}

FirstHit first_hit(std::size_t slices, const SliceSearch& search) {
  FirstHit out;
  const std::function<bool()> never = [] { return false; };
  for (std::size_t s = 0; s < slices; ++s) {
    SliceResult r = search(s, never);
    out.evaluations += r.evaluations;
    if (r.found) {
      out.slice = s;
      out.result = std::move(r);
      break;
    }
  }
  return out;
}

}  // namespace serial

namespace omp {

GridArgmin halfspace_grid_min(std::span<const double> x, std::size_t m, std::size_t room, std::size_t lo,
                              std::size_t hi) {
  std::vector<GridArgmin> slices(m + 1);
  const auto count = static_cast<long long>(m + 1);
#pragma omp parallel for schedule(dynamic)
  for (long long first = 0; first < count; ++first) {
    slices[static_cast<std::size_t>(first)] =
        scan_halfspace_slice(x, m, room, lo, hi, static_cast<std::size_t>(first));
  }
  GridArgmin best;
  for (auto& slice : slices) {
    if (slice.found && slice.squared < best.squared) best = std::move(slice);
  }
  return best;
}

SampleArgmin polygon_boundary_min(std::span<const std::array<double, 3>> vertices,
                                  std::span<const std::size_t> steps, const std::array<double, 3>& x) {
  const std::vector<std::size_t> offsets = prefix_sums(steps);
  const auto total = static_cast<long long>(offsets.back());
  double best_value = std::numeric_limits<double>::infinity();
  std::size_t best_flat = offsets.back();
#pragma omp parallel
  {
    double local_value = std::numeric_limits<double>::infinity();
    std::size_t local_flat = offsets.back();
#pragma omp for schedule(static) nowait
    for (long long flat = 0; flat < total; ++flat) {
      const auto f = static_cast<std::size_t>(flat);
      const std::size_t e = edge_of(offsets, f);
      const double value = sample_squared(vertices, steps, e, f - offsets[e], x);
      if (better(value, f, local_value, local_flat)) {
        local_value = value;
        local_flat = f;
      }
    }
#pragma omp critical(fairdiv_boundary_min)
    if (better(local_value, local_flat, best_value, best_flat)) {
      best_value = local_value;
      best_flat = local_flat;
    }
  }
  if (best_flat == offsets.back()) return SampleArgmin{};
  const std::size_t e = edge_of(offsets, best_flat);
  return SampleArgmin{e, best_flat - offsets[e], best_value};
}

FirstHit first_hit(std::size_t slices, const SliceSearch& search) {
  std::vector<SliceResult> results(slices);
  std::atomic<std::size_t> winner{slices};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<long long>(slices);

#pragma omp parallel for schedule(dynamic)
  for (long long index = 0; index < count; ++index) {
    const auto s = static_cast<std::size_t>(index);
    if (winner.load() < s) continue;
    try {
      const std::function<bool()> cancelled = [&winner, s] { return winner.load() < s; };
      results[s] = search(s, cancelled);
      if (results[s].found) {
        std::size_t current = winner.load();
        while (s < current && !winner.compare_exchange_weak(current, s)) {
        }
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  FirstHit out;
  const std::size_t stop = winner.load();
  for (std::size_t s = 0; s < slices && s <= stop; ++s) out.evaluations += results[s].evaluations;
  if (stop < slices) {
    out.slice = stop;
    out.result = std::move(results[stop]);
  }
  return out;
}

}  // namespace omp

}  // namespace fairdiv::kernels
