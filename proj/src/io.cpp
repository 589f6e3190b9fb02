#include "fshadow/io.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "fshadow/errors.hpp"

namespace fshadow {

namespace {
constexpr const char* kShadowSchema = "fshadow.shadows.v1";

nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }
}  // namespace

nlohmann::json shadow_to_json(const ShadowSample& s) {
  return {{"m", s.m()}, {"perm", std::vector<int>(s.perm.images().begin(), s.perm.images().end())}, {"bits", to_string(s.bits)}};
}

ShadowSample shadow_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("shadow record must be an object");
  try {
    const int m = j.at("m").get<int>();
    const auto images = j.at("perm").get<std::vector<int>>();
    const Bits bits = parse_bits(j.at("bits").get<std::string>());
    if (m < 1 || static_cast<int>(images.size()) != 2 * m)
      throw ParseError("perm must list 2m images");
    return ShadowSample(MajoranaPermutation(images), bits);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad shadow record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad shadow record: ") + e.what());
  }
}

void write_shadows_jsonl(std::ostream& os, std::span<const ShadowSample> samples) {
  os << nlohmann::json{{"schema", kShadowSchema}}.dump() << '\n';
  for (const auto& s : samples) os << shadow_to_json(s).dump() << '\n';
}

std::vector<ShadowSample> read_shadows_jsonl(std::istream& is) {
  std::vector<ShadowSample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (j.is_object() && j.contains("schema")) {
      if (!out.empty() || j.at("schema") != kShadowSchema)
        throw ParseError("unexpected schema line", lineno);
      continue;
    }
    try {
      out.push_back(shadow_from_json(j));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    if (out.back().m() != out.front().m()) throw ParseError("mode count differs from first record", lineno);
  }
  return out;
}

nlohmann::json to_json(const Estimate& e) {
  return {{"schema", "fshadow.estimate.v1"},
          {"value", number_or_null(e.value)},
          {"std_error", number_or_null(e.std_error)},
          {"n_samples", e.n_samples},
          {"aggregation", to_string(e.aggregation)},
          {"batches", e.batches}};
}

nlohmann::json to_json(const Estimate& re, const Estimate& im) {
  nlohmann::json j = to_json(re);
  j["value_imag"] = number_or_null(im.value);
  j["std_error_imag"] = number_or_null(im.std_error);
  return j;
}

}  // namespace fshadow
