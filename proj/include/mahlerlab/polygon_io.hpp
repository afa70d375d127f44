#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mahlerlab/convex2d.hpp"
#include "mahlerlab/errors.hpp"
#include "mahlerlab/format.hpp"

// Polygon JSON: {"vertices": [[x, y], ...]} with at least 3 entries. The
// reader runs the hull/dedup constructor; the writer emits CCW vertices with
// 17 significant digits.

namespace mahlerlab {

inline Polygon polygon_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DegenerateInput(std::string("invalid polygon JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw DegenerateInput("polygon JSON must be an object with a \"vertices\" array");
    std::vector<Vec2> pts;
    for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw DegenerateInput("polygon vertices must be [x, y] number pairs");
        pts.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return make_polygon(std::move(pts));
}

inline std::string polygon_to_json(const Polygon& p) {
    std::ostringstream out;
    out << "{\"vertices\": [";
    for (int i = 0; i < p.size(); ++i) {
        if (i) out << ", ";
        out << "[" << g17(p.vertex(i).x) << ", " << g17(p.vertex(i).y) << "]";
    }
    out << "]}";
    return out.str();
}

inline Polygon load_polygon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open polygon file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return polygon_from_json(buf.str());
}

inline void save_polygon(const Polygon& p, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write polygon file: " + path.string());
    out << polygon_to_json(p) << "\n";
}

} // namespace mahlerlab
