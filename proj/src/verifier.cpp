#include "fairdiv/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "fairdiv/error.hpp"
#include "fairdiv/kernels.hpp"
#include "fairdiv/solvers.hpp"

namespace fairdiv {

namespace {

// The distance formulas are written once over a scalar type: Rational for
// certified answers, double for the fast filter in the grid search.

template <class T>
T half_sum_of_squares(const std::vector<T>& x, const std::vector<T>& y) {
  T sum(0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const T delta = x[k] - y[k];
    sum += delta * delta;
  }
  return sum / T(2);
}

// Euclidean projection of v onto {p >= 0, sum p = total}.
template <class T>
std::vector<T> project_to_simplex(const std::vector<T>& v, const T& total) {
  if (total <= T(0)) return std::vector<T>(v.size(), T(0));
  std::vector<T> sorted = v;
  std::sort(sorted.begin(), sorted.end(), [](const T& a, const T& b) { return a > b; });
  T prefix(0);
  T tau(0);
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    prefix += sorted[k];
    const T candidate = (prefix - total) / T(static_cast<long>(k + 1));
    if (sorted[k] - candidate > T(0)) tau = candidate;
  }
  std::vector<T> p(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) p[k] = v[k] > tau ? v[k] - tau : T(0);
  return p;
}

template <class T>
T linear_squared(const std::vector<T>& x, Bound sense, std::size_t j, const T& a) {
  const std::size_t d = x.size();
  const T gap = T(static_cast<long>(d)) / T(static_cast<long>(2 * (d - 1)));
  if (sense == Bound::Upper) {
    if (x[j] <= a) return T(0);
    const T t = x[j] - a;
    return t * t * gap;
  }
  if (x[j] >= a) return T(0);
  const T t = a - x[j];
  const T shift = t / T(static_cast<long>(d - 1));
  bool foot_inside = true;
  for (std::size_t k = 0; k < d; ++k) {
    if (k != j && x[k] < shift) foot_inside = false;
  }
  if (foot_inside) return t * t * gap;

  // Nearest point lies on the slice x_j = a: a * e_j plus a scaled simplex.
  std::vector<T> rest;
  rest.reserve(d - 1);
  for (std::size_t k = 0; k < d; ++k) {
    if (k != j) rest.push_back(x[k]);
  }
  const std::vector<T> p = project_to_simplex(rest, T(1) - a);
  T sum = t * t;
  for (std::size_t k = 0; k < rest.size(); ++k) {
    const T delta = rest[k] - p[k];
    sum += delta * delta;
  }
  return sum / T(2);
}

template <class T>
T cross(const std::vector<T>& p, const std::vector<T>& q, const std::vector<T>& r) {
  return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
}

template <class T>
T segment_squared(const std::vector<T>& x, const std::vector<T>& p, const std::vector<T>& q) {
  T uv(0);
  T vv(0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const T u = x[k] - p[k];
    const T v = q[k] - p[k];
    uv += u * v;
    vv += v * v;
  }
  if (vv == T(0) || uv <= T(0)) return half_sum_of_squares(x, p);
  if (uv >= vv) return half_sum_of_squares(x, q);
  const T t = uv / vv;
  std::vector<T> foot(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) foot[k] = p[k] + t * (q[k] - p[k]);
  return half_sum_of_squares(x, foot);
}

template <class T>
T polygon_squared(const std::vector<T>& x, const std::vector<std::vector<T>>& polygon) {
  const std::size_t m = polygon.size();
  bool inside = true;
  for (std::size_t e = 0; e < m && inside; ++e) {
    if (cross(polygon[e], polygon[(e + 1) % m], x) < T(0)) inside = false;
  }
  if (inside) return T(0);
  T best = segment_squared(x, polygon[0], polygon[1 % m]);
  for (std::size_t e = 1; e < m; ++e) best = std::min(best, segment_squared(x, polygon[e], polygon[(e + 1) % m]));
  return best;
}

std::vector<std::vector<Rational>> exact_vertices(const ConvexPreferenceSet& set) {
  std::vector<std::vector<Rational>> out;
  for (const auto& v : set.vertices()) out.push_back(v.coords());
  return out;
}

std::vector<std::vector<double>> double_vertices(const ConvexPreferenceSet& set) {
  std::vector<std::vector<double>> out;
  for (const auto& v : set.vertices()) out.push_back(v.to_doubles());
  return out;
}

Rational exact_squared(const PreferenceSet& set, const BarycentricPoint& x) {
  if (const auto* lin = std::get_if<LinearPreferenceSet>(&set)) {
    return linear_squared(x.coords(), lin->sense, lin->room, lin->threshold);
  }
  const auto& poly = std::get<ConvexPreferenceSet>(set);
  return polygon_squared(x.coords(), exact_vertices(poly));
}

Rational grid_polygon_squared(const ConvexPreferenceSet& set, const BarycentricPoint& x, const Rational& mesh,
                              Backend backend) {
  if (set.contains(x)) return Rational(0);
  const auto& vertices = set.vertices();
  const std::size_t m = vertices.size();
  const double h = mesh.to_double();
  std::vector<std::array<double, 3>> approx(m);
  std::vector<std::size_t> steps(m);
  for (std::size_t e = 0; e < m; ++e) {
    const auto v = vertices[e].to_doubles();
    approx[e] = {v[0], v[1], v[2]};
    const double length = std::sqrt(squared_distance(vertices[e], vertices[(e + 1) % m]).to_double());
    steps[e] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / h * (1.0 + 1e-9))));
  }
  const auto xd = x.to_doubles();
  const std::array<double, 3> target{xd[0], xd[1], xd[2]};
  const kernels::SampleArgmin best = backend == Backend::OpenMP
                                         ? kernels::omp::polygon_boundary_min(approx, steps, target)
                                         : kernels::serial::polygon_boundary_min(approx, steps, target);
  const BarycentricPoint& p = vertices[best.edge];
  const BarycentricPoint& q = vertices[(best.edge + 1) % m];
  const Rational t(static_cast<long>(best.step), static_cast<long>(steps[best.edge]));
  std::vector<Rational> sample(3);
  for (std::size_t k = 0; k < 3; ++k) sample[k] = p[k] + t * (q[k] - p[k]);
  return squared_distance(x, BarycentricPoint(std::move(sample)));
}

Rational grid_linear_squared(const LinearPreferenceSet& set, const BarycentricPoint& x, const Rational& mesh,
                             Backend backend) {
  const std::size_t d = x.dim();
  if (d > 4) throw Error(ErrorCode::UnsupportedDimension, "grid distance to linear sets supports d <= 4");
  if (set.contains(x)) return Rational(0);
  // Cells of the composition grid have diameter at most sqrt(2)/m for d <= 4.
  const std::size_t m = static_cast<std::size_t>(ceil_to_u64(Rational(3) / (Rational(2) * mesh)));
  const Rational scaled = set.threshold * Rational(static_cast<long>(m));
  std::size_t lo = 0;
  std::size_t hi = m;
  if (set.sense == Bound::Lower) {
    lo = static_cast<std::size_t>(ceil_to_u64(scaled));
  } else {
    hi = static_cast<std::size_t>(scaled.floor().get_ui());
  }
  const auto xd = x.to_doubles();
  const kernels::GridArgmin best = backend == Backend::OpenMP
                                       ? kernels::omp::halfspace_grid_min(xd, m, set.room, lo, hi)
                                       : kernels::serial::halfspace_grid_min(xd, m, set.room, lo, hi);
  if (!best.found) throw Error(ErrorCode::InvalidProfile, "linear set has no grid points");
  return squared_distance(x, normalize_grid(GridPoint(m, best.parts)));
}

std::size_t factorial(std::size_t d) {
  std::size_t out = 1;
  for (std::size_t k = 2; k <= d; ++k) out *= k;
  return out;
}

}  // namespace

std::string_view to_string(DistanceMethod method) noexcept {
  return method == DistanceMethod::Exact ? "exact" : "grid";
}

DistanceMethod parse_distance_method(std::string_view text) {
  if (text == "exact") return DistanceMethod::Exact;
  if (text == "grid") return DistanceMethod::Grid;
  throw Error(ErrorCode::ParseError, "unknown distance method '" + std::string(text) + "'");
}

double DistanceEstimate::value() const { return std::sqrt(squared.to_double()); }

DistanceEstimate set_distance(const PreferenceSet& set, const BarycentricPoint& x, DistanceMethod method,
                              const Rational& mesh, Backend backend) {
  if (method == DistanceMethod::Exact) return DistanceEstimate{exact_squared(set, x), Rational(0)};
  if (mesh.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "grid distance needs a positive mesh");
  if (const auto* lin = std::get_if<LinearPreferenceSet>(&set)) {
    return DistanceEstimate{grid_linear_squared(*lin, x, mesh, backend), mesh};
  }
  if (x.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "polygon sets live in d = 3");
  return DistanceEstimate{grid_polygon_squared(std::get<ConvexPreferenceSet>(set), x, mesh, backend), mesh};
}

std::string_view to_string(Fairness fairness) noexcept {
  switch (fairness) {
    case Fairness::Fair:
      return "fair";
    case Fairness::Unfair:
      return "unfair";
    case Fairness::Indeterminate:
      return "indeterminate";
  }
  return "unknown";
}

Rational default_mesh(const Rational& epsilon) {
  const Rational cap(1, 256);
  return epsilon.sign() > 0 ? min(epsilon / Rational(10), cap) : cap;
}

Verdict check_eps_fair(const PreferenceProfile& profile, const BarycentricPoint& x, const Rational& epsilon,
                       const std::optional<std::vector<std::size_t>>& sigma, const VerifyOptions& options) {
  const std::size_t d = profile.dim();
  if (x.dim() != d) throw Error(ErrorCode::DimensionMismatch, "point and profile dimensions differ");
  if (epsilon.sign() < 0) throw Error(ErrorCode::InvalidArgument, "epsilon must be nonnegative");

  Verdict verdict;
  verdict.method = options.method.value_or(profile.kind() == ProfileKind::Convex3 ? DistanceMethod::Grid
                                                                                   : DistanceMethod::Exact);
  verdict.mesh = verdict.method == DistanceMethod::Exact ? Rational(0) : options.mesh.value_or(default_mesh(epsilon));

  const Rational fair_cap = epsilon * epsilon;
  // The grid argmin is located in floating point; the margin absorbs that rounding.
  const Rational reach = epsilon + verdict.mesh;
  const Rational unfair_floor = verdict.method == DistanceMethod::Exact
                                    ? fair_cap
                                    : reach * reach * Rational(1'000'000'001, 1'000'000'000);

  std::vector<std::optional<DistanceEstimate>> cache(d * d);
  const auto estimate = [&](std::size_t i, std::size_t j) -> const DistanceEstimate& {
    auto& slot = cache[i * d + j];
    if (!slot) slot = set_distance(profile.set(i, j), x, verdict.method, verdict.mesh, options.backend);
    return *slot;
  };
  const auto classify = [&](const DistanceEstimate& e) {
    if (e.squared <= fair_cap) return Fairness::Fair;
    if (e.squared > unfair_floor) return Fairness::Unfair;
    return Fairness::Indeterminate;
  };
  const auto evaluate = [&](const std::vector<std::size_t>& s) {
    Verdict v = verdict;
    v.sigma_checked = s;
    v.status = Fairness::Fair;
    for (std::size_t i = 0; i < d; ++i) {
      const DistanceEstimate& e = estimate(i, s[i]);
      v.per_agent_distance.push_back(e.value());
      const Fairness f = classify(e);
      if (f == Fairness::Unfair) {
        v.status = Fairness::Unfair;
      } else if (f == Fairness::Indeterminate && v.status == Fairness::Fair) {
        v.status = Fairness::Indeterminate;
      }
    }
    return v;
  };

  if (sigma) {
    std::vector<bool> seen(d, false);
    if (sigma->size() != d) throw Error(ErrorCode::InvalidArgument, "sigma must have d entries");
    for (const std::size_t j : *sigma) {
      if (j >= d || seen[j]) throw Error(ErrorCode::InvalidArgument, "sigma is not a permutation");
      seen[j] = true;
    }
    return evaluate(*sigma);
  }

  if (d > 6) throw Error(ErrorCode::UnsupportedDimension, "permutation search supports d <= 6");
  std::vector<std::size_t> s(d);
  std::iota(s.begin(), s.end(), 0);
  std::optional<Verdict> fallback;
  for (std::size_t k = 0; k < factorial(d); ++k, std::next_permutation(s.begin(), s.end())) {
    Verdict v = evaluate(s);
    if (v.fair()) return v;
    if (v.status == Fairness::Indeterminate && (!fallback || fallback->status != Fairness::Indeterminate)) {
      fallback = std::move(v);
    } else if (!fallback) {
      fallback = std::move(v);
    }
  }
  return *fallback;
}

GridSearchResult grid_search_fair(const PreferenceProfile& profile, const Rational& epsilon, Backend backend) {
  const std::size_t d = profile.dim();
  const std::size_t n = n_for_epsilon(epsilon);
  const Rational cap = epsilon * epsilon;
  const double cap_d = cap.to_double();
  const double cap_low = cap_d * (1.0 - 1e-9);
  const double cap_high = cap_d * (1.0 + 1e-9);

  struct SetData {
    const LinearPreferenceSet* linear = nullptr;
    double threshold = 0.0;
    std::vector<std::vector<double>> polygon_d;
    std::vector<std::vector<Rational>> polygon_q;
  };
  std::vector<SetData> sets(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      SetData& data = sets[i * d + j];
      const PreferenceSet& set = profile.set(i, j);
      if (const auto* lin = std::get_if<LinearPreferenceSet>(&set)) {
        data.linear = lin;
        data.threshold = lin->threshold.to_double();
      } else {
        const auto& poly = std::get<ConvexPreferenceSet>(set);
        data.polygon_d = double_vertices(poly);
        data.polygon_q = exact_vertices(poly);
      }
    }
  }

  const auto within = [&](const SetData& data, const std::vector<double>& xd, const std::vector<std::size_t>& parts) {
    const double approx = data.linear ? linear_squared(xd, data.linear->sense, data.linear->room, data.threshold)
                                      : polygon_squared(xd, data.polygon_d);
    if (approx < cap_low) return true;
    if (approx > cap_high) return false;
    const BarycentricPoint xq = normalize_grid(GridPoint(n, parts));
    const Rational exact = data.linear ? linear_squared(xq.coords(), data.linear->sense, data.linear->room,
                                                        data.linear->threshold)
                                       : polygon_squared(xq.coords(), data.polygon_q);
    return exact <= cap;
  };

  const kernels::SliceSearch search = [&](std::size_t first, const std::function<bool()>& cancelled) {
    kernels::SliceResult result;
    std::vector<signed char> memo(d * d);
    std::vector<std::size_t> parts(d);
    std::vector<double> xd(d);
    std::vector<std::size_t> sigma(d);
    std::vector<bool> used(d);
    parts[0] = first;

    const auto ok = [&](std::size_t i, std::size_t j) {
      signed char& slot = memo[i * d + j];
      if (slot == 0) {
        ++result.evaluations;
        slot = within(sets[i * d + j], xd, parts) ? 1 : -1;
      }
      return slot > 0;
    };
    const std::function<bool(std::size_t)> assign = [&](std::size_t i) {
      if (i == d) return true;
      for (std::size_t j = 0; j < d; ++j) {
        if (used[j] || !ok(i, j)) continue;
        used[j] = true;
        sigma[i] = j;
        if (assign(i + 1)) return true;
        used[j] = false;
      }
      return false;
    };

    CompositionCursor tail(d - 1, n - first);
    do {
      if (cancelled()) break;
      std::copy(tail.parts().begin(), tail.parts().end(), parts.begin() + 1);
      for (std::size_t k = 0; k < d; ++k) xd[k] = static_cast<double>(parts[k]) / static_cast<double>(n);
      std::fill(memo.begin(), memo.end(), 0);
      std::fill(used.begin(), used.end(), false);
      if (assign(0)) {
        result.found = true;
        result.parts = parts;
        result.sigma = sigma;
        break;
      }
    } while (tail.next());
    return result;
  };

  const kernels::FirstHit hit =
      backend == Backend::OpenMP ? kernels::omp::first_hit(n + 1, search) : kernels::serial::first_hit(n + 1, search);

  GridSearchResult out;
  out.resolution = n;
  out.evaluations = hit.evaluations;
  if (hit.slice) {
    GridPoint g(n, hit.result.parts);
    out.point = normalize_grid(g);
    out.grid_point = std::move(g);
    out.sigma = hit.result.sigma;
  } else {
    spdlog::warn("grid_search_fair: no fair grid point at resolution {}", n);
  }
  return out;
}

}  // namespace fairdiv
