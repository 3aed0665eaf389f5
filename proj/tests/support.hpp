#pragma once

// Seeded generators and independent reference computations for the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fairdiv/geometry.hpp"
#include "fairdiv/ordersel.hpp"
#include "fairdiv/random.hpp"

namespace fairdiv::testing {

/// Random point of A with coordinates on the grid 1/den.
inline BarycentricPoint random_point(Rng& rng, std::size_t d, std::uint64_t den = 997) {
  std::vector<std::uint64_t> cuts{0, den};
  for (std::size_t k = 0; k + 1 < d; ++k) cuts.push_back(uniform_below(rng, den + 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rational> coords;
  for (std::size_t k = 0; k < d; ++k) {
    coords.emplace_back(static_cast<long>(cuts[k + 1] - cuts[k]), static_cast<long>(den));
  }
  return BarycentricPoint(std::move(coords));
}

inline Rational random_fraction(Rng& rng, std::uint64_t den, std::uint64_t lo, std::uint64_t hi) {
  return Rational(static_cast<long>(lo + uniform_below(rng, hi - lo + 1)), static_cast<long>(den));
}

/// Vertices of a unit-edge regular simplex in R^(d-1), built one vertex at a
/// time above the centroid of the previous ones.
inline std::vector<std::vector<double>> unit_simplex_embedding(std::size_t d) {
  std::vector<std::vector<double>> v(d, std::vector<double>(d - 1, 0.0));
  for (std::size_t k = 1; k < d; ++k) {
    std::vector<double> c(d - 1, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t t = 0; t < d - 1; ++t) c[t] += v[i][t] / static_cast<double>(k);
    double r2 = 0.0;
    for (std::size_t t = 0; t < d - 1; ++t) r2 += (v[0][t] - c[t]) * (v[0][t] - c[t]);
    v[k] = c;
    v[k][k - 1] = std::sqrt(1.0 - r2);
  }
  return v;
}

inline double embedded_distance(const std::vector<std::vector<double>>& vertices, const BarycentricPoint& x,
                                 const BarycentricPoint& y) {
  const std::size_t dim = vertices.front().size();
  double sum = 0.0;
  for (std::size_t t = 0; t < dim; ++t) {
    double delta = 0.0;
    for (std::size_t j = 0; j < x.dim(); ++j) delta += (x[j].to_double() - y[j].to_double()) * vertices[j][t];
    sum += delta * delta;
  }
  return std::sqrt(sum);
}

/// Does some bijection pi from elements onto rooms other than `excluded`
/// satisfy pivot <=_{pi(i)} i for all i? Tries every bijection.
inline bool pivot_property_holds(const OrderingFamily& family, std::size_t pivot, std::size_t excluded) {
  std::vector<std::size_t> rooms;
  for (std::size_t j = 0; j < family.dim(); ++j)
    if (j != excluded) rooms.push_back(j);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < rooms.size() && ok; ++i) ok = family.precedes_or_equal(rooms[i], pivot, i);
    if (ok) return true;
  } while (std::next_permutation(rooms.begin(), rooms.end()));
  return false;
}

/// Every family of d orderings of 0 .. d-2.
inline std::vector<OrderingFamily> all_ordering_families(std::size_t d) {
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(d - 1);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  std::vector<OrderingFamily> out;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    std::vector<std::vector<std::size_t>> orderings;
    for (const std::size_t k : idx) orderings.push_back(perms[k]);
    out.emplace_back(std::move(orderings));
    std::size_t pos = 0;
    while (pos < d && ++idx[pos] == perms.size()) idx[pos++] = 0;
    if (pos == d) break;
  }
  return out;
}

inline bool is_permutation_of_range(const std::vector<std::size_t>& sigma, std::size_t d) {
  if (sigma.size() != d) return false;
  std::vector<bool> seen(d, false);
  for (const std::size_t s : sigma) {
    if (s >= d || seen[s]) return false;
    seen[s] = true;
  }
  return true;
}

}  // namespace fairdiv::testing
