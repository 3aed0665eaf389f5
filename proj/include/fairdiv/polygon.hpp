#pragma once

// Exact planar polygon routines for the d = 3 triangle.
//
// Points are barycentric triples; orientation is the determinant of the
// three coordinate rows, which is positive for v_1 -> v_2 -> v_3. A polygon
// is a vertex list in counter-clockwise order. Degenerate polygons (a segment
// or a single point) are allowed as clipping inputs and outputs.

#include <span>
#include <vector>

#include "fairdiv/geometry.hpp"

namespace fairdiv::planar {

Rational orientation(const BarycentricPoint& p, const BarycentricPoint& q, const BarycentricPoint& r);

/// Strictly convex hull, counter-clockwise, collinear points dropped.
std::vector<BarycentricPoint> convex_hull(std::vector<BarycentricPoint> points);

bool is_strictly_convex_ccw(std::span<const BarycentricPoint> polygon);

/// Closed membership: boundary points are inside.
bool in_convex_polygon(std::span<const BarycentricPoint> polygon, const BarycentricPoint& x);

/// Linear functional sum_k w_k x_k over barycentric coordinates.
struct LinearForm {
  std::vector<Rational> weights;

  Rational operator()(const BarycentricPoint& x) const;
};

/// Sutherland-Hodgman step: the part of a convex polygon where form >= 0.
std::vector<BarycentricPoint> clip(std::span<const BarycentricPoint> polygon, const LinearForm& form);

/// Half-plane description of conv(F_j U {apex}) inside the triangle:
/// x_k * apex_j - x_j * apex_k >= 0 for each k != j.
std::vector<LinearForm> facet_cone_constraints(const BarycentricPoint& apex, std::size_t j);

BarycentricPoint vertex_centroid(std::span<const BarycentricPoint> polygon);

Rational squared_distance_to_segment(const BarycentricPoint& x, const BarycentricPoint& p,
                                     const BarycentricPoint& q);

}  // namespace fairdiv::planar
