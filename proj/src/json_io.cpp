#include "fairdiv/json_io.hpp"

#include <string>

#include "fairdiv/error.hpp"

namespace fairdiv {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& object, const char* key) {
  if (!object.is_object()) malformed("expected a JSON object");
  const auto it = object.find(key);
  if (it == object.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

std::size_t index_from_json(const Json& value, std::size_t d, const char* what) {
  if (!value.is_number_integer()) malformed(std::string(what) + " must be an integer");
  const auto k = value.get<long long>();
  if (k < 1 || static_cast<std::size_t>(k) > d) malformed(std::string(what) + " out of range");
  return static_cast<std::size_t>(k - 1);
}

std::size_t count_from_json(const Json& value, const char* what) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    malformed(std::string(what) + " must be a nonnegative integer");
  }
  return value.get<std::size_t>();
}

}  // namespace

Json rational_to_json(const Rational& value) { return value.str(); }

Rational rational_from_json(const Json& value) {
  if (value.is_string()) return Rational::parse(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long>());
  malformed("rational must be a string such as \"1/3\"");
}

Json point_to_json(const BarycentricPoint& point) {
  Json out = Json::array();
  for (const auto& c : point.coords()) out.push_back(rational_to_json(c));
  return out;
}

BarycentricPoint point_from_json(const Json& value) {
  if (!value.is_array()) malformed("point must be an array of rationals");
  std::vector<Rational> coords;
  for (const auto& c : value) coords.push_back(rational_from_json(c));
  return BarycentricPoint(std::move(coords));
}

Json grid_point_to_json(const GridPoint& point) {
  Json out;
  out["n"] = point.resolution();
  out["parts"] = point.parts();
  return out;
}

GridPoint grid_point_from_json(const Json& value) {
  const std::size_t n = count_from_json(field(value, "n"), "n");
  const Json& parts = field(value, "parts");
  if (!parts.is_array()) malformed("parts must be an array");
  std::vector<std::size_t> out;
  for (const auto& p : parts) out.push_back(count_from_json(p, "part"));
  return GridPoint(n, std::move(out));
}

Json profile_to_json(const PreferenceProfile& profile) {
  const std::size_t d = profile.dim();
  Json out;
  out["d"] = d;
  out["kind"] = std::string(to_string(profile.kind()));
  if (profile.kind() == ProfileKind::Convex3) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < d; ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < d; ++j) {
        const auto& set = std::get<ConvexPreferenceSet>(profile.set(i, j));
        Json vertices = Json::array();
        for (const auto& v : set.vertices()) vertices.push_back(point_to_json(v));
        Json entry;
        entry["j"] = j + 1;
        entry["vertices"] = std::move(vertices);
        row.push_back(std::move(entry));
      }
      rows.push_back(std::move(row));
    }
    out["sets"] = std::move(rows);
  } else {
    Json rows = Json::array();
    for (std::size_t i = 0; i < d; ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < d; ++j) row.push_back(rational_to_json(profile.threshold(i, j)));
      rows.push_back(std::move(row));
    }
    out["thresholds"] = std::move(rows);
  }
  return out;
}

PreferenceProfile profile_from_json(const Json& value, bool validate) {
  const Json& kind_field = field(value, "kind");
  if (!kind_field.is_string()) malformed("kind must be a string");
  const ProfileKind kind = parse_profile_kind(kind_field.get<std::string>());

  std::optional<std::size_t> declared;
  if (value.contains("d")) declared = count_from_json(value["d"], "d");

  if (kind == ProfileKind::Convex3) {
    const Json& rows = field(value, "sets");
    if (!rows.is_array()) malformed("sets must be an array");
    std::vector<std::vector<ConvexPreferenceSet>> sets;
    for (const auto& row : rows) {
      if (!row.is_array()) malformed("each agent's sets must be an array");
      std::vector<ConvexPreferenceSet> out_row;
      for (const auto& entry : row) {
        const std::size_t room = index_from_json(field(entry, "j"), 3, "room j");
        const Json& vertices = field(entry, "vertices");
        if (!vertices.is_array()) malformed("vertices must be an array");
        std::vector<BarycentricPoint> points;
        for (const auto& v : vertices) points.push_back(point_from_json(v));
        out_row.emplace_back(room, std::move(points));
      }
      sets.push_back(std::move(out_row));
    }
    if (declared && *declared != sets.size()) malformed("d does not match the number of agents");
    return validate ? PreferenceProfile::convex3(std::move(sets)) : PreferenceProfile::unchecked_convex3(std::move(sets));
  }

  const Json& rows = field(value, "thresholds");
  if (!rows.is_array()) malformed("thresholds must be an array");
  std::vector<std::vector<Rational>> thresholds;
  for (const auto& row : rows) {
    if (!row.is_array()) malformed("each threshold row must be an array");
    std::vector<Rational> out_row;
    for (const auto& t : row) out_row.push_back(rational_from_json(t));
    thresholds.push_back(std::move(out_row));
  }
  if (declared && *declared != thresholds.size()) malformed("d does not match the number of agents");
  return validate ? PreferenceProfile::linear(kind, std::move(thresholds))
                  : PreferenceProfile::unchecked_linear(kind, std::move(thresholds));
}

Json transcript_to_json(const QueryTranscript& transcript) {
  Json entries = Json::array();
  for (const auto& e : transcript.entries()) {
    Json entry;
    entry["agent"] = e.agent + 1;
    entry["mode"] = to_string(e.mode);
    entry["point"] = point_to_json(e.point);
    if (e.mode == QueryMode::Binary) {
      entry["room"] = *e.room + 1;
      entry["response"] = e.response != 0;
    } else {
      entry["response"] = e.response + 1;
    }
    entries.push_back(std::move(entry));
  }
  Json out;
  out["entries"] = std::move(entries);
  out["binary_count"] = transcript.binary_count();
  out["minimal_count"] = transcript.minimal_count();
  return out;
}

Json sigma_to_json(const std::vector<std::size_t>& sigma) {
  Json out = Json::array();
  for (const std::size_t j : sigma) out.push_back(j + 1);
  return out;
}

std::vector<std::size_t> sigma_from_json(const Json& value) {
  if (!value.is_array()) malformed("sigma must be an array");
  const std::size_t d = value.size();
  std::vector<std::size_t> sigma;
  std::vector<bool> seen(d, false);
  for (const auto& entry : value) {
    const std::size_t j = index_from_json(entry, d, "sigma entry");
    if (seen[j]) malformed("sigma is not a permutation");
    seen[j] = true;
    sigma.push_back(j);
  }
  return sigma;
}

Json certificate_to_json(const FairDivisionCertificate& certificate) {
  Json out;
  out["point"] = point_to_json(certificate.point);
  out["sigma"] = sigma_to_json(certificate.sigma);
  out["epsilon"] = rational_to_json(certificate.epsilon);
  out["binary_queries"] = certificate.binary_queries;
  out["minimal_queries"] = certificate.minimal_queries;
  out["bound"] = certificate.bound;
  out["selection_queries"] = certificate.selection_queries;
  out["verified"] = certificate.verified ? Json(*certificate.verified) : Json(nullptr);
  return out;
}

FairDivisionCertificate certificate_from_json(const Json& value) {
  FairDivisionCertificate cert{point_from_json(field(value, "point")),
                               sigma_from_json(field(value, "sigma")),
                               rational_from_json(field(value, "epsilon")),
                               0,
                               0,
                               0,
                               0,
                               std::nullopt};
  if (cert.sigma.size() != cert.point.dim()) malformed("sigma and point lengths differ");
  if (value.contains("binary_queries")) cert.binary_queries = count_from_json(value["binary_queries"], "binary_queries");
  if (value.contains("minimal_queries")) {
    cert.minimal_queries = count_from_json(value["minimal_queries"], "minimal_queries");
  }
  if (value.contains("bound")) cert.bound = count_from_json(value["bound"], "bound");
  if (value.contains("selection_queries")) {
    cert.selection_queries = count_from_json(value["selection_queries"], "selection_queries");
  }
  if (value.contains("verified") && !value["verified"].is_null()) {
    if (!value["verified"].is_boolean()) malformed("verified must be a boolean");
    cert.verified = value["verified"].get<bool>();
  }
  return cert;
}

Json verdict_to_json(const Verdict& verdict) {
  Json out;
  out["fair"] = verdict.fair();
  out["status"] = std::string(to_string(verdict.status));
  out["sigma_checked"] = sigma_to_json(verdict.sigma_checked);
  out["per_agent_distance"] = verdict.per_agent_distance;
  out["method"] = std::string(to_string(verdict.method));
  out["mesh"] = rational_to_json(verdict.mesh);
  return out;
}

Json covering_report_to_json(const CoveringReport& report) {
  Json out;
  out["exact"] = report.exact;
  out["resolution"] = report.resolution;
  out["thresholds_in_range"] = report.thresholds_in_range;
  out["covering"] = report.covering;
  out["kkm"] = report.kkm;
  out["sperner"] = report.sperner;
  out["facet_containment"] = report.facet_containment;
  if (report.first_violation) {
    Json v;
    v["agent"] = report.first_violation->agent + 1;
    v["condition"] = report.first_violation->condition;
    v["witness"] = report.first_violation->witness ? point_to_json(*report.first_violation->witness) : Json(nullptr);
    out["first_violation"] = std::move(v);
  } else {
    out["first_violation"] = nullptr;
  }
  return out;
}

}  // namespace fairdiv
