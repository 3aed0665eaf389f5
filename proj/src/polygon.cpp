#include "fairdiv/polygon.hpp"

#include <algorithm>

#include "fairdiv/error.hpp"

namespace fairdiv::planar {

namespace {

void require_planar(const BarycentricPoint& p) {
  if (p.dim() != 3) throw Error(ErrorCode::UnsupportedDimension, "planar routines need d = 3");
}

// p + t (q - p), exact.
BarycentricPoint lerp(const BarycentricPoint& p, const BarycentricPoint& q, const Rational& t) {
  std::vector<Rational> coords;
  coords.reserve(p.dim());
  for (std::size_t k = 0; k < p.dim(); ++k) coords.push_back(p[k] + t * (q[k] - p[k]));
  return BarycentricPoint(std::move(coords));
}

void drop_repeats(std::vector<BarycentricPoint>& poly) {
  std::vector<BarycentricPoint> out;
  out.reserve(poly.size());
  for (auto& p : poly) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
  }
  poly = std::move(out);
}

}  // namespace

Rational orientation(const BarycentricPoint& p, const BarycentricPoint& q, const BarycentricPoint& r) {
  require_planar(p);
  require_planar(q);
  require_planar(r);
  return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
}

std::vector<BarycentricPoint> convex_hull(std::vector<BarycentricPoint> points) {
  for (const auto& p : points) require_planar(p);
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    return a[1] < b[1];
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  std::vector<BarycentricPoint> hull;
  hull.reserve(2 * points.size());
  // Andrew's monotone chain; lower hull then upper hull.
  for (const auto& p : points) {
    while (hull.size() >= 2 && orientation(hull[hull.size() - 2], hull.back(), p).sign() <= 0) hull.pop_back();
    hull.push_back(p);
  }
  const std::size_t lower_size = hull.size() + 1;
  for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {
    while (hull.size() >= lower_size && orientation(hull[hull.size() - 2], hull.back(), *it).sign() <= 0) {
      hull.pop_back();
    }
    hull.push_back(*it);
  }
  hull.pop_back();
  return hull;
}

bool is_strictly_convex_ccw(std::span<const BarycentricPoint> polygon) {
  const std::size_t m = polygon.size();
  if (m < 3) return false;
  for (std::size_t k = 0; k < m; ++k) {
    const auto& a = polygon[k];
    const auto& b = polygon[(k + 1) % m];
    for (std::size_t r = 0; r < m; ++r) {
      if (r == k || r == (k + 1) % m) continue;
      if (orientation(a, b, polygon[r]).sign() <= 0) return false;
    }
  }
  return true;
}

bool in_convex_polygon(std::span<const BarycentricPoint> polygon, const BarycentricPoint& x) {
  const std::size_t m = polygon.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (orientation(polygon[k], polygon[(k + 1) % m], x).sign() < 0) return false;
  }
  return true;
}

Rational LinearForm::operator()(const BarycentricPoint& x) const {
  if (weights.size() != x.dim()) throw Error(ErrorCode::DimensionMismatch, "linear form dimension mismatch");
  Rational sum;
  for (std::size_t k = 0; k < x.dim(); ++k) {
    if (weights[k].sign() != 0) sum += weights[k] * x[k];
  }
  return sum;
}

std::vector<BarycentricPoint> clip(std::span<const BarycentricPoint> polygon, const LinearForm& form) {
  const std::size_t m = polygon.size();
  std::vector<BarycentricPoint> out;
  if (m == 0) return out;
  std::vector<Rational> values;
  values.reserve(m);
  for (const auto& p : polygon) values.push_back(form(p));

  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t next = (k + 1) % m;
    const int sp = values[k].sign();
    const int sq = values[next].sign();
    if (sp >= 0) out.push_back(polygon[k]);
    if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
      const Rational t = values[k] / (values[k] - values[next]);
      out.push_back(lerp(polygon[k], polygon[next], t));
    }
  }
  drop_repeats(out);
  return out;
}

std::vector<LinearForm> facet_cone_constraints(const BarycentricPoint& apex, std::size_t j) {
  if (j >= apex.dim()) throw Error(ErrorCode::InvalidArgument, "facet index out of range");
  std::vector<LinearForm> forms;
  for (std::size_t k = 0; k < apex.dim(); ++k) {
    if (k == j) continue;
    LinearForm form{std::vector<Rational>(apex.dim())};
    form.weights[k] = apex[j];
    form.weights[j] = -apex[k];
    forms.push_back(std::move(form));
  }
  return forms;
}

BarycentricPoint vertex_centroid(std::span<const BarycentricPoint> polygon) {
  if (polygon.empty()) throw Error(ErrorCode::InvalidArgument, "centroid of empty polygon");
  std::vector<Rational> coords(polygon.front().dim());
  for (const auto& p : polygon) {
    for (std::size_t k = 0; k < coords.size(); ++k) coords[k] += p[k];
  }
  const Rational count(static_cast<long>(polygon.size()));
  for (auto& c : coords) c /= count;
  return BarycentricPoint(std::move(coords));
}

Rational squared_distance_to_segment(const BarycentricPoint& x, const BarycentricPoint& p,
                                     const BarycentricPoint& q) {
  // Inner product <u, v> = sum u_k v_k / 2 on zero-sum displacements.
  Rational uv;
  Rational vv;
  for (std::size_t k = 0; k < x.dim(); ++k) {
    const Rational u = x[k] - p[k];
    const Rational v = q[k] - p[k];
    uv += u * v;
    vv += v * v;
  }
  if (vv.sign() == 0 || uv.sign() <= 0) return squared_distance(x, p);
  if (uv >= vv) return squared_distance(x, q);
  return squared_distance(x, lerp(p, q, uv / vv));
}

}  // namespace fairdiv::planar
