#include "prlab/json_io.hpp"

#include <fstream>

namespace prlab {

json rational_to_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const json& j) {
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    throw IoError("expected rational string or integer, got: " + j.dump());
}

json ratvec_to_json(const RatVec& v) {
    json a = json::array();
    for (const auto& e : v) a.push_back(rational_to_json(e));
    return a;
}

RatVec ratvec_from_json(const json& j) {
    if (!j.is_array()) throw IoError("expected array of rationals");
    RatVec v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(rational_from_json(e));
    return v;
}

json frame_to_json(const Frame& f) {
    json j;
    j["field"] = "rational";
    j["d"] = f.d;
    j["m"] = f.m;
    json cols = json::array();
    for (const auto& c : f.columns) cols.push_back(ratvec_to_json(c));
    j["columns"] = cols;
    return j;
}

Frame frame_from_json(const json& j) {
    if (!j.is_object()) throw IoError("frame file: expected object");
    if (j.value("field", "") != "rational")
        throw IoError("frame file: field must be \"rational\"");
    Frame f;
    f.d = j.at("d").get<std::size_t>();
    f.m = j.at("m").get<std::size_t>();
    if (f.d < 1 || f.m < 1) throw IoError("frame file: d and m must be >= 1");
    const json& cols = j.at("columns");
    if (!cols.is_array() || cols.size() != f.m)
        throw IoError("frame file: expected " + std::to_string(f.m) + " columns");
    for (const auto& c : cols) {
        RatVec col = ratvec_from_json(c);
        if (col.size() != f.d) throw IoError("frame file: column with wrong length");
        f.columns.push_back(std::move(col));
    }
    return f;
}

json magnitude_to_json(const RatVec& b) {
    json j;
    j["b"] = ratvec_to_json(b);
    return j;
}

RatVec magnitude_from_json(const json& j) {
    RatVec b = ratvec_from_json(j.at("b"));
    for (const auto& e : b)
        if (e.sign() < 0) throw IoError("magnitude file: negative entry");
    return b;
}

json index_set_to_json(const std::vector<std::size_t>& s) {
    json a = json::array();
    for (std::size_t i : s) a.push_back(i + 1);
    return a;
}

std::vector<std::size_t> index_set_from_json(const json& j, std::size_t limit) {
    std::vector<std::size_t> s;
    for (const auto& e : j) {
        const std::size_t v = e.get<std::size_t>();
        if (v < 1 || v > limit) throw IoError("index out of range: " + std::to_string(v));
        s.push_back(v - 1);
    }
    return s;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("cannot parse JSON in " + path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

} // namespace prlab
