#include <gtedge/presets.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

namespace gtedge {

namespace {

using std::abs;
using std::log;
using std::sqrt;

std::optional<EdgePoint> off_support(double t, double lo, double hi, EdgePoint p) {
    if (t >= lo && t <= hi) return std::nullopt;
    return p;
}

Preset preset_a() {
    Preset p;
    p.name = "a";
    p.description = "density 1/2 on [-1,1]";
    p.spec = validate({{{-1.0, 1.0}, {0.5}}});
    p.closed_c = [](cplx w) { return 0.5 * (std::log(w + 1.0) - std::log(w - 1.0)); };
    p.closed_edge = [](double t) -> std::optional<EdgePoint> {
        const double sp = sqrt(abs(t + 1.0)), sm = sqrt(abs(t - 1.0));
        const double chi = t - sp * abs(t - 1.0) * (sp - sm);
        const double eta = 1.0 - sqrt(abs(t + 1.0) * abs(t - 1.0)) * (sp - sm) * (sp - sm);
        return off_support(t, -1.0, 1.0, {chi, eta});
    };
    p.special_points = {{"p_0", {0.5, 0.0}, PointKind::Tangency, std::nullopt, 0}};
    return p;
}

Preset preset_b() {
    Preset p;
    p.name = "b";
    p.description = "density 1/2 on [0,1] u [2,3]";
    p.spec = validate({{{0.0, 1.0}, {0.5}}, {{2.0, 3.0}, {0.5}}});
    p.closed_c = [](cplx w) {
        return 0.5 * (std::log(w) - std::log(w - 1.0) + std::log(w - 2.0) - std::log(w - 3.0));
    };
    p.closed_edge = [](double t) -> std::optional<EdgePoint> {
        if ((t >= 0.0 && t <= 1.0) || (t >= 2.0 && t <= 3.0)) return std::nullopt;
        const double a0 = abs(t), a1 = abs(t - 1.0), a2 = abs(t - 2.0), a3 = abs(t - 3.0);
        const double d = sqrt(a0 * a2) - sqrt(a1 * a3);
        const double den = a2 * a3 + a0 * a1;
        const double chi = t - 2.0 * sqrt(a0) * a1 * sqrt(a2) * a3 * d / den;
        const double eta = 1.0 - 2.0 * sqrt(a0 * a1 * a2 * a3) * d * d / den;
        return EdgePoint{chi, eta};
    };
    p.special_points = {
        {"p_0", {2.0, 0.0}, PointKind::Tangency, std::nullopt, 0},
        {"p_1", {1.5, 1.0}, PointKind::Edge, 1.5, 5},
    };
    return p;
}

Preset preset_c() {
    Preset p;
    p.name = "c";
    p.description = "density 1 on [0,1/2] u [1,3/2]";
    p.spec = validate({{{0.0, 0.5}, {1.0}}, {{1.0, 1.5}, {1.0}}});
    p.closed_c = [](cplx w) {
        return std::log(w) - std::log(w - 0.5) + std::log(w - 1.0) - std::log(w - 1.5);
    };
    p.closed_edge = [](double t) -> std::optional<EdgePoint> {
        const double num = t * (t - 1.0) - (t - 0.5) * (t - 1.5);
        const double den = (t - 1.0) * (t - 1.5) + t * (t - 0.5);
        return EdgePoint{t - 2.0 * (t - 0.5) * (t - 1.5) * num / den, 1.0 - 2.0 * num * num / den};
    };
    p.special_points = {
        {"p_0", {1.25, 0.0}, PointKind::Tangency, std::nullopt, 0},
        {"p_1", {0.75, 0.25}, PointKind::Edge, 0.0, 8},
        {"p_2", {0.5, 0.75}, PointKind::Edge, 0.5, 6},
        {"p_3", {0.75, 1.0}, PointKind::Edge, 0.75, 5},
        {"p_4", {1.25, 0.75}, PointKind::Edge, 1.0, 8},
        {"p_5", {1.5, 0.25}, PointKind::Edge, 1.5, 6},
    };
    return p;
}

Preset preset_d() {
    const auto k = three_interval_constants();
    const double c = k.c;
    Preset p;
    p.name = "d";
    p.description = "density 1 on [0,1/3] u [1,4/3] u [c,c+1/3], c = (23+sqrt(217))/12";
    p.spec = validate({{{0.0, 1.0 / 3.0}, {1.0}}, {{1.0, 4.0 / 3.0}, {1.0}}, {{c, c + 1.0 / 3.0}, {1.0}}});
    p.closed_c = [c](cplx w) {
        return std::log(w) - std::log(w - 1.0 / 3.0) + std::log(w - 1.0) - std::log(w - 4.0 / 3.0) +
               std::log(w - c) - std::log(w - c - 1.0 / 3.0);
    };
    p.closed_edge = [c](double t) -> std::optional<EdgePoint> {
        const double A = t * (t - 1.0) * (t - c) - (t - 1.0 / 3.0) * (t - 4.0 / 3.0) * (t - c - 1.0 / 3.0);
        const double B = (t - 1.0) * (t - 4.0 / 3.0) * (t - c) * (t - c - 1.0 / 3.0) +
                         t * (t - 1.0 / 3.0) * (t - c) * (t - c - 1.0 / 3.0) +
                         t * (t - 1.0 / 3.0) * (t - 1.0) * (t - 4.0 / 3.0);
        const double chi = t - 3.0 * (t - 1.0 / 3.0) * (t - 4.0 / 3.0) * (t - c - 1.0 / 3.0) * A / B;
        return EdgePoint{chi, 1.0 - 3.0 * A * A / B};
    };
    const double g = (c - 1.0 / 3.0) * (c - 4.0 / 3.0) / (3.0 * c * (c - 1.0));
    const double h = (c + 1.0 / 3.0) * (c - 2.0 / 3.0) / (3.0 * c * (c - 1.0));
    p.special_points = {
        {"p_0", {1.0 + c / 3.0, 0.0}, PointKind::Tangency, std::nullopt, 0},
        {"p_1", {4.0 / 9.0 + 4.0 / (27.0 * c), 5.0 / 9.0 - 4.0 / (27.0 * c)}, PointKind::Edge, 0.0, 8},
        {"p_2", {1.0 / 3.0, 7.0 / 9.0 + 2.0 / (27.0 * c)}, PointKind::Edge, 1.0 / 3.0, 6},
        {"p_3", {k.c2, 1.0}, PointKind::Edge, k.c2, 5},
        {"p_4", {11.0 / 9.0 + 2.0 / (27.0 * (c - 1.0)), 7.0 / 9.0 - 2.0 / (27.0 * (c - 1.0))}, PointKind::Edge, 1.0, 8},
        {"p_5", {4.0 / 3.0, 5.0 / 9.0 + 4.0 / (27.0 * (c - 1.0))}, PointKind::Edge, 4.0 / 3.0, 7},
        {"p_6", {k.c1, 1.0}, PointKind::Edge, k.c1, 5},
        {"p_7", {c + g, 1.0 - g}, PointKind::Edge, c, 8},
        {"p_8", {c + 1.0 / 3.0, 1.0 - h}, PointKind::Edge, c + 1.0 / 3.0, 6},
    };
    return p;
}

Preset preset_e() {
    Preset p;
    p.name = "e";
    p.description = "density 1+x on [-1,0], 1-x on [0,1]";
    p.spec = validate({{{-1.0, 0.0}, {1.0, 1.0}}, {{0.0, 1.0}, {1.0, -1.0}}});
    p.closed_c = [](cplx w) {
        return (w + 1.0) * std::log(w + 1.0) - 2.0 * w * std::log(w) + (w - 1.0) * std::log(w - 1.0);
    };
    p.closed_edge = [](double t) -> std::optional<EdgePoint> {
        if (t >= -1.0 && t <= 1.0) return std::nullopt;
        const double E = std::pow(abs(t + 1.0), t + 1.0) * std::pow(abs(t), -2.0 * t) * std::pow(abs(t - 1.0), t - 1.0);
        const double L = log(abs(t + 1.0)) - 2.0 * log(abs(t)) + log(abs(t - 1.0));
        return EdgePoint{t + (E - 1.0) / (E * L), 1.0 + (E - 1.0) * (E - 1.0) / (E * L)};
    };
    p.special_points = {
        {"p_0", {0.5, 0.0}, PointKind::Tangency, std::nullopt, 0},
        {"probe_-1", {-1.0, 1.0}, PointKind::ProbeLimit, -1.0, 0},
        {"probe_0", {0.0, 1.0}, PointKind::ProbeLimit, 0.0, 0},
        {"probe_1", {1.0, 1.0}, PointKind::ProbeLimit, 1.0, 0},
    };
    return p;
}

Preset preset_f() {
    Preset p;
    p.name = "f";
    p.description = "density (15/16)(x-1)^2(x+1)^2 on [-1,1]";
    const double k = 15.0 / 16.0;
    p.spec = validate({{{-1.0, 1.0}, {k, 0.0, -2.0 * k, 0.0, k}}});
    p.closed_c = [k](cplx w) {
        const cplx q = w * w - 1.0;
        return k * (10.0 / 3.0 * w - 2.0 * w * w * w + q * q * (std::log(w + 1.0) - std::log(w - 1.0)));
    };
    p.closed_edge = [k](double t) -> std::optional<EdgePoint> {
        if (t >= -1.0 && t <= 1.0) return std::nullopt;
        const double q = t * t - 1.0;
        const double L = log(abs(t + 1.0)) - log(abs(t - 1.0));
        const double C = k * (10.0 / 3.0 * t - 2.0 * t * t * t + q * q * L);
        const double C1 = k * (16.0 / 3.0 - 8.0 * t * t + 4.0 * t * q * L);
        const double E = std::exp(C);
        return EdgePoint{t + (E - 1.0) / (E * C1), 1.0 + (E - 1.0) * (E - 1.0) / (E * C1)};
    };
    p.special_points = {
        {"p_0", {0.5, 0.0}, PointKind::Tangency, std::nullopt, 0},
        {"p_1", {-0.004, 0.290}, PointKind::Approximate, -1.0, 0},
        {"p_2", {0.714, 0.290}, PointKind::Approximate, 1.0, 0},
    };
    p.expected_complete = false;
    return p;
}

} // namespace

ThreeIntervalConstants three_interval_constants() {
    using big = boost::multiprecision::cpp_bin_float_50;
    const big c = (big(23) + sqrt(big(217))) / 12;
    const big m = big(1) / 2 + c / 3;
    const big r = sqrt(m * m - big(4) / 9 * (c + big(1) / 3));
    return {c.convert_to<double>(), (m + r).convert_to<double>(), (m - r).convert_to<double>()};
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"a", "b", "c", "d", "e", "f"};
    return names;
}

Preset preset(const std::string& name) {
    if (name == "a") return preset_a();
    if (name == "b") return preset_b();
    if (name == "c") return preset_c();
    if (name == "d") return preset_d();
    if (name == "e") return preset_e();
    if (name == "f") return preset_f();
    throw Error(Errc::UnknownPreset, "unknown preset '" + name + "' (expected a..f)");
}

} // namespace gtedge
