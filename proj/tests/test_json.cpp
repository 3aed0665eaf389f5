#include <doctest.h>

#include "fairdiv/error.hpp"
#include "fairdiv/json_io.hpp"
#include "fairdiv/oracle.hpp"

using namespace fairdiv;

TEST_CASE("points and grid points") {
  const BarycentricPoint x({Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  CHECK(point_to_json(x).dump() == R"(["1/3","1/3","1/3"])");
  CHECK(point_from_json(point_to_json(x)) == x);
  CHECK(grid_point_to_json(GridPoint(4, {0, 2, 2})).dump() == R"({"n":4,"parts":[0,2,2]})");
  CHECK(grid_point_from_json(Json::parse(R"({"n":4,"parts":[0,2,2]})")) == GridPoint(4, {0, 2, 2}));
  CHECK_THROWS_AS(point_from_json(Json::parse(R"(["1/2","1/3"])")), Error);
  CHECK_THROWS_AS(point_from_json(Json::parse(R"({"a":1})")), Error);
  CHECK(rational_from_json(Json(3)) == Rational(3));
}

TEST_CASE("profile documents round-trip") {
  const Json doc = Json::parse(R"({"d":3,"kind":"lps_upper","thresholds":[["7/10","6/10","5/10"],["1","1","1"],["1/2","1/2","1/2"]]})");
  const PreferenceProfile p = profile_from_json(doc);
  CHECK(p.kind() == ProfileKind::LpsUpper);
  CHECK(p.threshold(0, 1) == Rational(3, 5));
  CHECK(profile_from_json(profile_to_json(p)).threshold(2, 2) == Rational(1, 2));

  const PreferenceProfile c = generate_profile(ProfileKind::Convex3, 3, 4);
  const Json cj = profile_to_json(c);
  CHECK(cj["kind"] == "convex3");
  CHECK(cj["sets"][0][0]["j"] == 1);
  CHECK(profile_to_json(profile_from_json(cj)).dump() == cj.dump());

  const Json bad = Json::parse(R"({"d":2,"kind":"lps_upper","thresholds":[["1/4","1/4"],["1","1"]]})");
  CHECK_THROWS_AS(profile_from_json(bad), Error);
  CHECK_NOTHROW(profile_from_json(bad, false));
  CHECK_THROWS_AS(profile_from_json(Json::parse(R"({"d":2,"kind":"pie"})")), Error);
}

TEST_CASE("certificate example document") {
  const Json doc = Json::parse(
      R"({"point":["5/8","3/8"],"sigma":[1,2],"epsilon":"1/4","binary_queries":0,"minimal_queries":3,"bound":2,"selection_queries":1,"verified":true})");
  const FairDivisionCertificate cert = certificate_from_json(doc);
  CHECK(cert.point == BarycentricPoint({Rational(5, 8), Rational(3, 8)}));
  CHECK(cert.sigma == std::vector<std::size_t>{0, 1});
  CHECK(cert.epsilon == Rational(1, 4));
  CHECK(cert.minimal_queries == 3);
  CHECK(cert.bound == 2);
  CHECK(cert.selection_queries == 1);
  CHECK(cert.verified == true);
  CHECK(certificate_to_json(cert).dump() == doc.dump());

  Json unverified = doc;
  unverified["verified"] = nullptr;
  CHECK_FALSE(certificate_from_json(unverified).verified.has_value());

  Json bad_sigma = doc;
  bad_sigma["sigma"] = Json::array({1, 1});
  CHECK_THROWS_AS(certificate_from_json(bad_sigma), Error);
}

TEST_CASE("transcripts use 1-based agents and rooms") {
  const auto profile = PreferenceProfile::linear(ProfileKind::LpsUpper, {{Rational(7, 10), Rational(3, 5)}, {1, 1}});
  SimulatedOracle oracle(profile);
  oracle.binary_query(0, 1, BarycentricPoint::vertex(2, 0));
  oracle.minimal_query(1, BarycentricPoint::vertex(2, 1));
  const Json t = transcript_to_json(oracle.transcript());
  CHECK(t["binary_count"] == 1);
  CHECK(t["minimal_count"] == 1);
  CHECK(t["entries"][0]["agent"] == 1);
  CHECK(t["entries"][0]["room"] == 2);
  CHECK(t["entries"][0]["response"] == true);
  CHECK(t["entries"][1]["agent"] == 2);
  CHECK(t["entries"][1]["response"] == 1);
}
