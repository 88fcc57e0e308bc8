#pragma once

#include <string>

#include <json.hpp>

#include "prlab/frame.hpp"

namespace prlab {

using json = nlohmann::ordered_json;

json rational_to_json(const Rational& r);
Rational rational_from_json(const json& j);

json ratvec_to_json(const RatVec& v);
RatVec ratvec_from_json(const json& j);

/// Frame file layout:
///   {"field":"rational","d":int,"m":int,"columns":[["p/q", ...], ...]}
json frame_to_json(const Frame& f);
Frame frame_from_json(const json& j);

/// Magnitude file layout: {"b":["p/q", ...]}.
json magnitude_to_json(const RatVec& b);
RatVec magnitude_from_json(const json& j);

/// 1-based index list for external JSON (the CLI convention).
json index_set_to_json(const std::vector<std::size_t>& s);
std::vector<std::size_t> index_set_from_json(const json& j, std::size_t limit);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

} // namespace prlab
