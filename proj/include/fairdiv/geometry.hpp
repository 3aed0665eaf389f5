#pragma once

// Exact barycentric geometry on the regular unit-edge (d-1)-simplex.
//
// Points are stored as barycentric coordinates [a_1, ..., a_d] with a_j >= 0
// and sum 1. The simplex is never embedded explicitly: for a displacement
// delta with sum(delta) = 0 the squared Euclidean length in any unit-edge
// embedding is sum(delta_j^2) / 2, so squared distances stay rational.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairdiv/rational.hpp"

namespace fairdiv {

class BarycentricPoint {
 public:
  /// Throws InvalidArgument unless d >= 2, every coordinate is >= 0 and they sum to 1.
  explicit BarycentricPoint(std::vector<Rational> coords);

  static BarycentricPoint vertex(std::size_t d, std::size_t j);
  static BarycentricPoint barycenter(std::size_t d);

  std::size_t dim() const noexcept { return coords_.size(); }
  const Rational& operator[](std::size_t j) const { return coords_[j]; }
  const std::vector<Rational>& coords() const noexcept { return coords_; }

  std::vector<double> to_doubles() const;
  std::string str() const;

  friend bool operator==(const BarycentricPoint&, const BarycentricPoint&) = default;

 private:
  std::vector<Rational> coords_;
};

/// sum_j (x_j - y_j)^2 / 2. Throws DimensionMismatch.
Rational squared_distance(const BarycentricPoint& x, const BarycentricPoint& y);
double bary_distance(const BarycentricPoint& x, const BarycentricPoint& y);

/// d / (2(d-1)): squared distance between the planes a_j = t and a_j = t + 1.
Rational plane_gap_squared(std::size_t d);

/// Distance from x to the plane {a_j = level} inside the affine hull of the simplex.
Rational squared_hyperplane_distance(const BarycentricPoint& x, std::size_t j, const Rational& level);
double hyperplane_distance(const BarycentricPoint& x, std::size_t j, const Rational& level);

/// Integer composition [parts] of n; denotes the point parts / n.
class GridPoint {
 public:
  GridPoint(std::size_t n, std::vector<std::size_t> parts);

  std::size_t resolution() const noexcept { return n_; }
  std::size_t dim() const noexcept { return parts_.size(); }
  const std::vector<std::size_t>& parts() const noexcept { return parts_; }
  std::size_t operator[](std::size_t j) const { return parts_[j]; }

  friend bool operator==(const GridPoint&, const GridPoint&) = default;

 private:
  std::size_t n_;
  std::vector<std::size_t> parts_;
};

BarycentricPoint normalize_grid(const GridPoint& g);

/// Inverse of normalize_grid when every coordinate of x is a multiple of 1/n.
std::optional<GridPoint> snap_to_grid(const BarycentricPoint& x, std::size_t n);

/// Walks every composition of n into d parts in lexicographic order,
/// starting at [0, ..., 0, n] and ending at [n, 0, ..., 0].
class CompositionCursor {
 public:
  CompositionCursor(std::size_t d, std::size_t n);

  const std::vector<std::size_t>& parts() const noexcept { return parts_; }
  /// Advances; returns false once the last composition has been passed.
  bool next();

 private:
  std::vector<std::size_t> parts_;
};

/// Number of compositions of n into d parts, C(n + d - 1, d - 1).
std::uint64_t composition_count(std::size_t d, std::size_t n);

/// The regular sub-simplex {x : x_j >= lower_j for all j}, with edge length `scale`.
class SubSimplexState {
 public:
  SubSimplexState(std::vector<Rational> lower, Rational scale);

  static SubSimplexState whole(std::size_t d);

  std::size_t dim() const noexcept { return lower_.size(); }
  const std::vector<Rational>& lower() const noexcept { return lower_; }
  const Rational& scale() const noexcept { return scale_; }

  BarycentricPoint center() const;

  /// Keeps the part with x_{j0} >= center_{j0}; the edge shrinks by (d-1)/d.
  SubSimplexState cut(std::size_t j0) const;

  /// lower + scale * e_k.
  BarycentricPoint vertex(std::size_t k) const;
  bool contains(const BarycentricPoint& x) const;

 private:
  std::vector<Rational> lower_;
  Rational scale_;
};

}  // namespace fairdiv
