#ifndef GTEDGE_PRESETS_HPP
#define GTEDGE_PRESETS_HPP

#include <gtedge/frontier.hpp>
#include <gtedge/measure.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gtedge {

enum class PointKind {
    Tangency,    // p0, from tangency_point
    Edge,        // edge_point(t) with an expected case
    ProbeLimit,  // limit of boundary_probe at t (no edge parameter)
    Approximate, // value quoted to three digits only
};

struct SpecialPoint {
    std::string label;
    EdgePoint point;
    PointKind kind;
    std::optional<double> t; // edge parameter or probe abscissa
    int expected_case = 0;   // 0 when no case is attached
};

struct Preset {
    std::string name;
    std::string description;
    MeasureSpec spec;
    std::function<cplx(cplx)> closed_c;                     // C(w) on the upper half plane
    std::function<std::optional<EdgePoint>(double)> closed_edge; // empty for points outside R
    std::vector<SpecialPoint> special_points;
    bool expected_complete = true;
};

/// Constants of the three-interval example: c, c_1, c_2.
struct ThreeIntervalConstants {
    double c, c1, c2;
};
ThreeIntervalConstants three_interval_constants();

const std::vector<std::string>& preset_names();
Preset preset(const std::string& name); // throws UnknownPreset

} // namespace gtedge

#endif
