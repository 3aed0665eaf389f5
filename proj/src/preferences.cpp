#include "fairdiv/preferences.hpp"

#include <algorithm>

#include "fairdiv/error.hpp"
#include "fairdiv/polygon.hpp"
#include "fairdiv/random.hpp"

namespace fairdiv {

bool LinearPreferenceSet::contains(const BarycentricPoint& x) const {
  if (room >= x.dim()) throw Error(ErrorCode::InvalidArgument, "room index out of range");
  return sense == Bound::Lower ? x[room] >= threshold : x[room] <= threshold;
}

ConvexPreferenceSet::ConvexPreferenceSet(std::size_t room, std::vector<BarycentricPoint> vertices)
    : room_(room), vertices_(std::move(vertices)) {
  if (room_ >= 3) throw Error(ErrorCode::InvalidProfile, "convex set room index out of range");
  for (const auto& v : vertices_) {
    if (v.dim() != 3) throw Error(ErrorCode::InvalidProfile, "convex sets live in the d = 3 triangle");
  }
  if (!planar::is_strictly_convex_ccw(vertices_)) {
    throw Error(ErrorCode::InvalidProfile, "polygon vertices are not strictly convex counter-clockwise");
  }
}

ConvexPreferenceSet ConvexPreferenceSet::hull(std::size_t room, std::vector<BarycentricPoint> points) {
  return ConvexPreferenceSet(room, planar::convex_hull(std::move(points)));
}

bool ConvexPreferenceSet::contains(const BarycentricPoint& x) const {
  return planar::in_convex_polygon(vertices_, x);
}

bool ConvexPreferenceSet::contains_facet() const {
  for (std::size_t k = 0; k < 3; ++k) {
    if (k != room_ && !contains(BarycentricPoint::vertex(3, k))) return false;
  }
  return true;
}

bool membership(const PreferenceSet& set, const BarycentricPoint& x) {
  return std::visit([&](const auto& s) { return s.contains(x); }, set);
}

std::string_view to_string(ProfileKind kind) noexcept {
  switch (kind) {
    case ProfileKind::LpsLower: return "lps_lower";
    case ProfileKind::LpsUpper: return "lps_upper";
    case ProfileKind::Convex3: return "convex3";
  }
  return "unknown";
}

ProfileKind parse_profile_kind(std::string_view text) {
  if (text == "lps_lower") return ProfileKind::LpsLower;
  if (text == "lps_upper") return ProfileKind::LpsUpper;
  if (text == "convex3") return ProfileKind::Convex3;
  throw Error(ErrorCode::ParseError, "unknown profile kind '" + std::string(text) + "'");
}

PreferenceProfile::PreferenceProfile(std::size_t d, ProfileKind kind, std::vector<PreferenceSet> sets)
    : d_(d), kind_(kind), sets_(std::move(sets)) {}

PreferenceProfile PreferenceProfile::unchecked_linear(ProfileKind kind,
                                                      std::vector<std::vector<Rational>> thresholds) {
  if (kind == ProfileKind::Convex3) {
    throw Error(ErrorCode::InvalidProfileKind, "linear profile cannot have kind convex3");
  }
  const std::size_t d = thresholds.size();
  if (d < 2) throw Error(ErrorCode::InvalidProfile, "profile needs d >= 2");
  const Bound sense = kind == ProfileKind::LpsLower ? Bound::Lower : Bound::Upper;
  std::vector<PreferenceSet> sets;
  sets.reserve(d * d);
  for (auto& row : thresholds) {
    if (row.size() != d) throw Error(ErrorCode::InvalidProfile, "threshold matrix must be d x d");
    for (std::size_t j = 0; j < d; ++j) sets.emplace_back(LinearPreferenceSet{sense, j, std::move(row[j])});
  }
  return PreferenceProfile(d, kind, std::move(sets));
}

PreferenceProfile PreferenceProfile::unchecked_convex3(std::vector<std::vector<ConvexPreferenceSet>> rows) {
  if (rows.size() != 3) throw Error(ErrorCode::InvalidProfile, "convex3 profile needs exactly 3 agents");
  std::vector<PreferenceSet> sets;
  sets.reserve(9);
  for (auto& row : rows) {
    if (row.size() != 3) throw Error(ErrorCode::InvalidProfile, "convex3 profile needs 3 sets per agent");
    for (std::size_t j = 0; j < 3; ++j) {
      if (row[j].room() != j) throw Error(ErrorCode::InvalidProfile, "convex sets must be listed by room");
      sets.emplace_back(std::move(row[j]));
    }
  }
  return PreferenceProfile(3, ProfileKind::Convex3, std::move(sets));
}

namespace {

PreferenceProfile checked(PreferenceProfile profile) {
  const CoveringReport report = validate_covering(profile);
  if (!report.valid(profile.kind())) {
    std::string what = "invalid " + std::string(to_string(profile.kind())) + " profile";
    if (report.first_violation) {
      what += ": agent " + std::to_string(report.first_violation->agent + 1) + " violates " +
              report.first_violation->condition;
      if (report.first_violation->witness) what += " at " + report.first_violation->witness->str();
    }
    throw Error(ErrorCode::InvalidProfile, what);
  }
  return profile;
}

}  // namespace

PreferenceProfile PreferenceProfile::linear(ProfileKind kind, std::vector<std::vector<Rational>> thresholds) {
  return checked(unchecked_linear(kind, std::move(thresholds)));
}

PreferenceProfile PreferenceProfile::convex3(std::vector<std::vector<ConvexPreferenceSet>> sets) {
  return checked(unchecked_convex3(std::move(sets)));
}

const PreferenceSet& PreferenceProfile::set(std::size_t agent, std::size_t room) const {
  if (agent >= d_ || room >= d_) throw Error(ErrorCode::InvalidArgument, "agent or room index out of range");
  return sets_[agent * d_ + room];
}

bool PreferenceProfile::contains(std::size_t agent, std::size_t room, const BarycentricPoint& x) const {
  if (x.dim() != d_) throw Error(ErrorCode::DimensionMismatch, "point dimension differs from profile");
  return membership(set(agent, room), x);
}

const Rational& PreferenceProfile::threshold(std::size_t agent, std::size_t room) const {
  const auto* lps = std::get_if<LinearPreferenceSet>(&set(agent, room));
  if (lps == nullptr) throw Error(ErrorCode::InvalidProfileKind, "thresholds exist only for linear profiles");
  return lps->threshold;
}

bool CoveringReport::valid(ProfileKind kind) const {
  switch (kind) {
    case ProfileKind::LpsLower:
    case ProfileKind::LpsUpper:
      return thresholds_in_range && covering;
    case ProfileKind::Convex3:
      return covering && facet_containment;
  }
  return false;
}

namespace {

void note(CoveringReport& report, std::size_t agent, std::string condition,
          std::optional<BarycentricPoint> witness = std::nullopt) {
  if (!report.first_violation) {
    report.first_violation = CoveringViolation{agent, std::move(condition), std::move(witness)};
  }
}

void validate_linear_row(const PreferenceProfile& profile, std::size_t agent, CoveringReport& report) {
  const std::size_t d = profile.dim();
  const bool lower = profile.kind() == ProfileKind::LpsLower;
  std::vector<Rational> a;
  a.reserve(d);
  for (std::size_t j = 0; j < d; ++j) a.push_back(profile.threshold(agent, j));

  bool in_range = true;
  Rational total;
  Rational positive_total;
  for (const auto& t : a) {
    in_range = in_range && (lower ? (t.sign() > 0 && t < 1) : (t.sign() >= 0 && t <= 1));
    total += t;
    if (t.sign() > 0) positive_total += t;
  }
  if (!in_range) {
    report.thresholds_in_range = false;
    note(report, agent, "threshold range");
  }

  if (lower) {
    // Uncovered points need x_j < a_j for every j, possible iff sum a_j > 1.
    if (total > 1) {
      report.covering = false;
      std::vector<Rational> w;
      for (const auto& t : a) w.push_back(max(t, Rational(0)) / positive_total);
      note(report, agent, "covering", BarycentricPoint(std::move(w)));
    }
    report.kkm = report.kkm && positive_total <= 1;
    for (const auto& t : a) {
      report.sperner = report.sperner && t.sign() > 0;
      report.facet_containment = report.facet_containment && t.sign() <= 0;
    }
  } else {
    // Uncovered points need x_j > a_j for every j, possible iff sum a_j < 1.
    if (total < 1) {
      report.covering = false;
      const Rational slack = (Rational(1) - total) / Rational(static_cast<long>(d));
      std::vector<Rational> w;
      bool witness_ok = true;
      for (const auto& t : a) {
        w.push_back(t + slack);
        witness_ok = witness_ok && w.back().sign() >= 0;
      }
      if (witness_ok) {
        note(report, agent, "covering", BarycentricPoint(std::move(w)));
      } else {
        note(report, agent, "covering");
      }
    }
    for (const auto& t : a) {
      report.kkm = report.kkm && t >= 1;
      report.sperner = report.sperner && t.sign() < 0;
      report.facet_containment = report.facet_containment && t.sign() >= 0;
    }
  }
}

void validate_convex_row(const PreferenceProfile& profile, std::size_t agent, std::size_t resolution,
                         CoveringReport& report) {
  const std::size_t d = profile.dim();
  for (std::size_t j = 0; j < d; ++j) {
    const auto& set = std::get<ConvexPreferenceSet>(profile.set(agent, j));
    if (!set.contains_facet()) {
      report.facet_containment = false;
      note(report, agent, "facet containment");
    }
  }
  CompositionCursor cursor(d, resolution);
  do {
    const BarycentricPoint x = normalize_grid(GridPoint(resolution, cursor.parts()));
    bool any = false;
    bool kkm_hit = false;
    bool sperner_clash = false;
    for (std::size_t j = 0; j < d; ++j) {
      if (!profile.contains(agent, j, x)) continue;
      any = true;
      const bool in_support = cursor.parts()[j] > 0;
      kkm_hit = kkm_hit || in_support;
      sperner_clash = sperner_clash || !in_support;
    }
    if (!any) {
      report.covering = false;
      note(report, agent, "covering", x);
    }
    report.kkm = report.kkm && kkm_hit;
    report.sperner = report.sperner && !sperner_clash;
  } while (cursor.next());
}

}  // namespace

CoveringReport validate_covering(const PreferenceProfile& profile, std::size_t resolution) {
  CoveringReport report;
  if (profile.kind() == ProfileKind::Convex3) {
    report.exact = false;
    report.resolution = resolution;
    for (std::size_t i = 0; i < profile.dim(); ++i) validate_convex_row(profile, i, resolution, report);
  } else {
    for (std::size_t i = 0; i < profile.dim(); ++i) validate_linear_row(profile, i, report);
  }
  return report;
}

namespace {

constexpr long kThresholdGrid = 1024;
constexpr std::size_t kConvexGrid = 64;

PreferenceProfile generate_linear(ProfileKind kind, std::size_t d, Rng& rng) {
  std::vector<std::vector<Rational>> rows(d);
  for (auto& row : rows) {
    Rational total;
    for (std::size_t j = 0; j < d; ++j) {
      // lower: a in [1/G, (G-1)/G]; upper: a in [1/G, 1].
      const std::uint64_t span = kind == ProfileKind::LpsLower ? kThresholdGrid - 1 : kThresholdGrid;
      row.emplace_back(static_cast<long>(uniform_below(rng, span)) + 1, kThresholdGrid);
      total += row.back();
    }
    const bool rescale = kind == ProfileKind::LpsLower ? total > 1 : total < 1;
    if (rescale) {
      for (auto& t : row) t /= total;
    }
  }
  return PreferenceProfile::linear(kind, std::move(rows));
}

BarycentricPoint grid_point3(std::size_t a, std::size_t b, std::size_t c) {
  return normalize_grid(GridPoint(a + b + c, {a, b, c}));
}

PreferenceProfile generate_convex3(Rng& rng) {
  const std::size_t g = kConvexGrid;
  std::vector<std::vector<ConvexPreferenceSet>> rows;
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<std::size_t> apex(3);
    apex[0] = 1 + uniform_below(rng, g - 2);
    apex[1] = 1 + uniform_below(rng, g - 1 - apex[0]);
    apex[2] = g - apex[0] - apex[1];
    const BarycentricPoint p = grid_point3(apex[0], apex[1], apex[2]);

    std::vector<ConvexPreferenceSet> row;
    for (std::size_t j = 0; j < 3; ++j) {
      std::vector<BarycentricPoint> points{p};
      for (std::size_t k = 0; k < 3; ++k) {
        if (k != j) points.push_back(BarycentricPoint::vertex(3, k));
      }
      // Fatten with up to two points on the F_j side of the line through p parallel to F_j.
      const auto extra = uniform_below(rng, 3);
      for (std::uint64_t e = 0; e < extra; ++e) {
        std::vector<std::size_t> parts(3);
        parts[j] = uniform_below(rng, apex[j] + 1);
        const std::size_t rest = g - parts[j];
        const std::size_t k1 = (j + 1) % 3;
        const std::size_t k2 = (j + 2) % 3;
        parts[k1] = uniform_below(rng, rest + 1);
        parts[k2] = rest - parts[k1];
        points.push_back(normalize_grid(GridPoint(g, parts)));
      }
      row.push_back(ConvexPreferenceSet::hull(j, std::move(points)));
    }
    rows.push_back(std::move(row));
  }
  return PreferenceProfile::convex3(std::move(rows));
}

}  // namespace

PreferenceProfile generate_profile(ProfileKind kind, std::size_t d, std::uint64_t seed) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "profiles need d >= 2");
  Rng rng(mix_seed(seed));
  if (kind == ProfileKind::Convex3) {
    if (d != 3) throw Error(ErrorCode::InvalidArgument, "convex3 profiles require d = 3");
    return generate_convex3(rng);
  }
  return generate_linear(kind, d, rng);
}

}  // namespace fairdiv
