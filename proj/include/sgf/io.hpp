#ifndef SGF_IO_HPP
#define SGF_IO_HPP

// Machine-readable exports: level graphs, cell frames, Kusuoka tables and
// the Z-field, plus the seminorm/energy diagnostic report.

#include <sstream>
#include <string>

#include <json.hpp>

#include "sgf/chart.hpp"
#include "sgf/gasket.hpp"
#include "sgf/zfield.hpp"

namespace sgf {

inline nlohmann::json graph_to_json(const LevelGraph& g) {
    nlohmann::json j;
    j["level"] = g.level();
    auto& verts = j["vertices"] = nlohmann::json::array();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const Eigen::Vector2d p = g.point(v);
        verts.push_back({{"id", v}, {"x", p.x()}, {"y", p.y()}});
    }
    auto& edges = j["edges"] = nlohmann::json::array();
    for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
    auto& cells = j["cells"] = nlohmann::json::object();
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(g.cell_count()); ++c) {
        const auto& corners = g.cell(static_cast<int>(c));
        cells[index_to_address(static_cast<int>(c), g.level())] = {corners[0], corners[1],
                                                                  corners[2]};
    }
    return j;
}

inline nlohmann::json chart_to_json(const HarmonicChart& chart) {
    nlohmann::json j;
    j["level"] = chart.level();
    auto& verts = j["vertices"] = nlohmann::json::array();
    for (VertexId v = 0; v < chart.graph.vertex_count(); ++v) {
        const Eigen::Vector2d p = chart.point(v);
        verts.push_back({{"id", v}, {"x", p.x()}, {"y", p.y()}});
    }
    return j;
}

// "w, x0, y0, x1, y1, x2, y2" rows of cell frames at one level.
inline std::string frames_to_csv(int level) {
    std::ostringstream os;
    os.precision(17);
    os << "w,x0,y0,x1,y1,x2,y2\n";
    const std::int64_t n = pow3(level);
    for (std::int64_t c = 0; c < n; ++c) {
        const Address w = index_to_address(static_cast<int>(c), level);
        const CellFrame f = cell_frame(w);
        os << w;
        for (int i = 0; i < 3; ++i)
            os << ',' << f[static_cast<size_t>(i)].x() << ',' << f[static_cast<size_t>(i)].y();
        os << '\n';
    }
    return os.str();
}

inline std::string zfield_to_csv(const ZField& zf) {
    std::ostringstream os;
    os.precision(17);
    os << "w,nu,z11,z12,z22\n";
    for (std::int64_t c = 0; c < zf.cell_count(); ++c) {
        const int i = static_cast<int>(c);
        os << index_to_address(i, zf.level()) << ',' << zf.nu(i) << ',' << zf.z(i)(0, 0) << ','
           << zf.z(i)(0, 1) << ',' << zf.z(i)(1, 1) << '\n';
    }
    return os.str();
}

inline nlohmann::json zfield_to_json(const ZField& zf) {
    nlohmann::json j;
    j["level"] = zf.level();
    j["total_nu"] = zf.nu_table().total();
    auto& cells = j["cells"] = nlohmann::json::array();
    for (std::int64_t c = 0; c < zf.cell_count(); ++c) {
        const int i = static_cast<int>(c);
        cells.push_back({{"w", index_to_address(i, zf.level())},
                         {"nu", zf.nu(i)},
                         {"z", {zf.z(i)(0, 0), zf.z(i)(0, 1), zf.z(i)(1, 1)}}});
    }
    return j;
}

inline nlohmann::json kusuoka_to_json(const CellMeasureTable& t) {
    nlohmann::json j;
    j["level"] = t.level;
    j["total"] = t.total();
    auto& cells = j["cells"] = nlohmann::json::object();
    for (size_t c = 0; c < t.entries.size(); ++c)
        cells[index_to_address(static_cast<int>(c), t.level)] = t.entries[c];
    return j;
}

inline std::string kusuoka_to_csv(const CellMeasureTable& t) {
    std::ostringstream os;
    os.precision(17);
    os << "w,nu\n";
    for (size_t c = 0; c < t.entries.size(); ++c)
        os << index_to_address(static_cast<int>(c), t.level) << ',' << t.entries[c] << '\n';
    return os.str();
}

inline nlohmann::json energy_report_json(int level, double seminorm_sq, double energy) {
    const double gap = energy != 0.0 ? std::abs(seminorm_sq - energy) / std::abs(energy)
                                     : std::abs(seminorm_sq);
    return {{"level", level},
            {"seminorm_sq", seminorm_sq},
            {"graph_energy", energy},
            {"relative_gap", gap}};
}

}  // namespace sgf

#endif
