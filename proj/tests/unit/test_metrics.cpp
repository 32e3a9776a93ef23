#include <gtest/gtest.h>

#include <cmath>

#include "nfsar/metrics.hpp"

using namespace nfsar;

namespace {

GridSpec unit_grid(std::size_t n) { return {n, n, 1.0, 1.0, 0.0, 10.0}; }

}  // namespace

TEST(Extract, StrictLocalMaximaAboveLevel) {
  ComplexImage c(unit_grid(8));
  c(2, 2) = 1.0;
  c(2, 3) = 0.5;   // neighbour of a larger peak
  c(6, 6) = 0.1;   // -20 dB
  c(0, 7) = 0.01;  // -40 dB
  c(4, 0) = 0.2;
  c(5, 0) = 0.2;   // plateau: neither is strict
  const auto e = extract_scatterers(c, -30.0);
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].cell, c.grid().index(2, 2));
  EXPECT_EQ(e[1].cell, c.grid().index(6, 6));
  EXPECT_DOUBLE_EQ(e[1].azimuth_m, 6.0);
  EXPECT_DOUBLE_EQ(e[1].range_m, 16.0);
  EXPECT_TRUE(extract_scatterers(ComplexImage(unit_grid(4)), -30.0).empty());
}

TEST(Match, AmplitudeAndPositionErrors) {
  SceneSpec truth{"", {{0.0, 10.0, 0.0, 0.0}, {5.0, 15.0, -20.0, 0.0}}};
  std::vector<ExtractedScatterer> est = {{5.0, 15.5, cplx(0.1 * std::pow(10.0, 0.1), 0.0)},
                                         {0.0, 10.0, cplx(0.0, 0.5)},
                                         {3.0, 3.0, 1.0}};
  const MatchReport r = match_scatterers(est, truth, 1.0);
  ASSERT_EQ(r.detections(), 2u);
  EXPECT_EQ(r.pairs[0].truth, 0u);
  EXPECT_EQ(r.pairs[0].estimate, 1u);
  EXPECT_NEAR(r.pairs[0].amplitude_error_db, 20.0 * std::log10(2.0), 1e-12);
  EXPECT_NEAR(r.pairs[1].amplitude_error_db, 2.0, 1e-12);
  EXPECT_NEAR(*r.max_position_error_m, 0.5, 1e-12);
  EXPECT_NEAR(*r.mean_position_error_m, 0.25, 1e-12);
  EXPECT_EQ(r.false_alarms, std::vector<std::size_t>{2});
  EXPECT_TRUE(r.misses.empty());
}

TEST(Match, GreedyNearestAndGate) {
  SceneSpec truth{"", {{0.0, 10.0, 0.0, 0.0}, {1.0, 10.0, 0.0, 0.0}}};
  // Estimate 0 is closest to truth 1; truth 0 then has only the far estimate.
  std::vector<ExtractedScatterer> est = {{0.9, 10.0, 1.0}, {-0.8, 10.0, 1.0}};
  const MatchReport r = match_scatterers(est, truth, 1.0);
  ASSERT_EQ(r.detections(), 2u);
  EXPECT_EQ(r.pairs[0].estimate, 1u);
  EXPECT_EQ(r.pairs[1].estimate, 0u);
  const MatchReport tight = match_scatterers(est, truth, 0.5);
  EXPECT_EQ(tight.detections(), 1u);
  EXPECT_EQ(tight.misses, std::vector<std::size_t>{0});
  EXPECT_FALSE(match_scatterers({}, truth, 1.0).mean_amplitude_error_db.has_value());
  EXPECT_THROW(match_scatterers(est, truth, 0.0), std::invalid_argument);
}

TEST(Match, EstimateOrderDoesNotMatter) {
  SceneSpec truth{"", {{0.0, 10.0, 0.0, 0.0}}};
  std::vector<ExtractedScatterer> a = {{0.5, 10.0, 1.0}, {-0.5, 10.0, 2.0}};
  std::vector<ExtractedScatterer> b = {a[1], a[0]};
  const auto ra = match_scatterers(a, truth, 1.0), rb = match_scatterers(b, truth, 1.0);
  EXPECT_EQ(ra.pairs[0].amplitude_error_db, rb.pairs[0].amplitude_error_db);
}

TEST(Table, RowsAndFormats) {
  MatchReport rep;
  rep.pairs.push_back({0, 0, 0.5, 0.01});
  rep.mean_amplitude_error_db = 0.5;
  rep.max_position_error_m = rep.mean_position_error_m = 0.01;
  const ComparisonTable t = comparison_report({{"proposed", rep}}, 0.03);
  ASSERT_EQ(t.rows.size(), 5u);
  EXPECT_FALSE(t.rows[0].reference);
  EXPECT_EQ(t.rows[3].method, "IAA");
  EXPECT_EQ(t.rows[3].note, "reference only (not implemented)");
  const std::string csv = format_table_csv(t);
  EXPECT_NE(csv.find("proposed,computed,0.500000,0.0100000,0.0100000,1,0,0,yes,yes,yes,"), std::string::npos);
  EXPECT_NE(csv.find("CLEAN,reference,4.19000,"), std::string::npos);
  const std::string txt = format_table_text(t);
  EXPECT_NE(txt.find("stated bound = 0.0375000 m"), std::string::npos);
  EXPECT_THROW(comparison_report({}, 0.03), std::invalid_argument);
}
