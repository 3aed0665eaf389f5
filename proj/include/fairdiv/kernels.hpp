#pragma once

// Grid kernels behind the verifier and the baseline search. Each comes in a
// serial reference form and an OpenMP form; both return identical results,
// ties going to the earliest candidate in enumeration order.

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace fairdiv::kernels {

/// Nearest point of {c / m : c a composition of m, lo <= c_room <= hi} to x.
struct GridArgmin {
  bool found = false;
  std::vector<std::size_t> parts;
  double squared = std::numeric_limits<double>::infinity();
};

/// Nearest sample on a polygon boundary: `step` of `steps[edge]` along the
/// edge from vertex `edge` to the next one.
struct SampleArgmin {
  std::size_t edge = 0;
  std::size_t step = 0;
  double squared = std::numeric_limits<double>::infinity();
};

/// Outcome of scanning one first-coordinate slice of a grid in lexicographic order.
struct SliceResult {
  bool found = false;
  std::size_t evaluations = 0;
  std::vector<std::size_t> parts;
  std::vector<std::size_t> sigma;
};

/// Scans slice `slice`; may stop early once `cancelled()` returns true.
using SliceSearch = std::function<SliceResult(std::size_t slice, const std::function<bool()>& cancelled)>;

/// Earliest hit over slices 0 .. slices-1. `evaluations` counts every slice
/// before the hit in full plus the hit slice up to the hit, as a serial scan would.
struct FirstHit {
  std::optional<std::size_t> slice;
  std::size_t evaluations = 0;
  SliceResult result;
};

namespace serial {

GridArgmin halfspace_grid_min(std::span<const double> x, std::size_t m, std::size_t room, std::size_t lo,
                              std::size_t hi);
SampleArgmin polygon_boundary_min(std::span<const std::array<double, 3>> vertices,
                                  std::span<const std::size_t> steps, const std::array<double, 3>& x);
FirstHit first_hit(std::size_t slices, const SliceSearch& search);

}  // namespace serial

namespace omp {

GridArgmin halfspace_grid_min(std::span<const double> x, std::size_t m, std::size_t room, std::size_t lo,
                              std::size_t hi);
SampleArgmin polygon_boundary_min(std::span<const std::array<double, 3>> vertices,
                                  std::span<const std::size_t> steps, const std::array<double, 3>& x);
FirstHit first_hit(std::size_t slices, const SliceSearch& search);

}  // namespace omp

}  // namespace fairdiv::kernels
