#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fshadow/errors.hpp"
#include "fshadow/io.hpp"

using namespace fshadow;

namespace {

std::size_t parse_error_line(const std::string& text) {
  std::istringstream is(text);
  try {
    read_shadows_jsonl(is);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no ParseError for: " << text;
  return 0;
}

}  // namespace

TEST(ShadowFiles, RoundTrip) {
  const auto st = CovarianceState::vacuum(3);
  const auto shadows = collect_shadows(st, 40, Ensemble::full, 1);
  std::stringstream ss;
  write_shadows_jsonl(ss, shadows);
  std::string first;
  std::getline(std::istringstream(ss.str()) >> std::ws, first);
  EXPECT_EQ(nlohmann::json::parse(first)["schema"], "fshadow.shadows.v1");
  EXPECT_EQ(read_shadows_jsonl(ss), shadows);
}

TEST(ShadowFiles, RecordFormat) {
  const ShadowSample s(MajoranaPermutation({2, 1, 3, 4}), parse_bits("01"));
  const auto j = shadow_to_json(s);
  EXPECT_EQ(j["m"], 2);
  EXPECT_EQ(j["perm"], nlohmann::json({2, 1, 3, 4}));
  EXPECT_EQ(j["bits"], "01");
  EXPECT_EQ(shadow_from_json(j), s);
}

TEST(ShadowFiles, HeaderOptionalAndBlankLinesSkipped) {
  std::istringstream is(
      "\n{\"m\":1,\"perm\":[2,1],\"bits\":\"1\"}\n\n{\"m\":1,\"perm\":[1,2],\"bits\":\"0\"}\n");
  const auto v = read_shadows_jsonl(is);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].perm, MajoranaPermutation({2, 1}));
  std::istringstream empty("");
  EXPECT_TRUE(read_shadows_jsonl(empty).empty());
}

TEST(ShadowFiles, MalformedInputReportsLine) {
  const std::string good = "{\"m\":1,\"perm\":[1,2],\"bits\":\"0\"}\n";
  EXPECT_EQ(parse_error_line(good + "{not json\n"), 2u);
  EXPECT_EQ(parse_error_line(good + good + "{\"m\":1,\"perm\":[1,1],\"bits\":\"0\"}\n"), 3u);
  EXPECT_EQ(parse_error_line("{\"m\":1,\"perm\":[1,2,3,4],\"bits\":\"0\"}\n"), 1u);
  EXPECT_EQ(parse_error_line("{\"m\":1,\"perm\":[1,2],\"bits\":\"2\"}\n"), 1u);
  EXPECT_EQ(parse_error_line("[1,2]\n"), 1u);
  EXPECT_EQ(parse_error_line(good + "{\"schema\":\"fshadow.shadows.v1\"}\n"), 2u);
  EXPECT_EQ(parse_error_line(good + "{\"m\":2,\"perm\":[1,2,3,4],\"bits\":\"00\"}\n"), 2u);
}

TEST(ShadowFiles, ErrorMessageNamesLine) {
  std::istringstream is("{\"m\":1,\"perm\":[1,2],\"bits\":\"0\"}\n{oops\n");
  try {
    read_shadows_jsonl(is);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(EstimateReports, NaNBecomesNull) {
  const Estimate e{0.25, std::numeric_limits<double>::quiet_NaN(), 1, Aggregation::mean, 1};
  const auto j = to_json(e);
  EXPECT_EQ(j["schema"], "fshadow.estimate.v1");
  EXPECT_EQ(j["value"], 0.25);
  EXPECT_TRUE(j["std_error"].is_null());
  EXPECT_EQ(j["aggregation"], "mean");
  EXPECT_EQ(j["n_samples"], 1);
}

TEST(EstimateReports, ComplexPair) {
  const Estimate re{0.5, 0.01, 100, Aggregation::median_of_means, 5};
  const Estimate im{-0.1, 0.02, 100, Aggregation::median_of_means, 5};
  const auto j = to_json(re, im);
  EXPECT_EQ(j["value"], 0.5);
  EXPECT_EQ(j["value_imag"], -0.1);
  EXPECT_EQ(j["std_error_imag"], 0.02);
  EXPECT_EQ(j["aggregation"], "medians");
  EXPECT_EQ(j["batches"], 5);
}
