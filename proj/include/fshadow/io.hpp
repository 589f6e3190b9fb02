#pragma once

// Shadow files (JSON lines) and estimate reports.

#include <complex>
#include <istream>
#include <ostream>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fshadow/shadow.hpp"

namespace fshadow {

/// A header line {"schema": "fshadow.shadows.v1"} followed by one record per line:
/// {"m": 3, "perm": [1, 2, ...], "bits": "010"}. The header is optional on input.
void write_shadows_jsonl(std::ostream& os, std::span<const ShadowSample> samples);
/// Throws ParseError (with the line number) on malformed records or mixed mode counts.
std::vector<ShadowSample> read_shadows_jsonl(std::istream& is);

nlohmann::json shadow_to_json(const ShadowSample& s);
ShadowSample shadow_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Estimate& e);
/// Real and imaginary parts reported side by side.
nlohmann::json to_json(const Estimate& re, const Estimate& im);

}  // namespace fshadow
