#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gtedge/combinatorics.hpp>
#include <gtedge/frontier.hpp>
#include <gtedge/kernel.hpp>
#include <gtedge/measure.hpp>
#include <gtedge/presets.hpp>
#include <gtedge/saddle.hpp>
#include <gtedge/verify.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>

using namespace gtedge;
using boost::multiprecision::cpp_int;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
Errc error_code(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a gtedge::Error");
    return Errc::MalformedSpec;
}

std::vector<DensityPiece> constant_pieces(std::vector<std::pair<double, double>> spans, double value) {
    std::vector<DensityPiece> out;
    for (auto [lo, hi] : spans) out.push_back({{lo, hi}, {value}});
    return out;
}

// C(v - u + s - r - 1, s - r - 1) for v >= u, else 0.
Rational phi_oracle(int r, int s, long u, long v) {
    if (v < u) return 0;
    const long top = v - u + s - r - 1;
    const int k = s - r - 1;
    cpp_int num = 1, den = 1;
    for (int j = 0; j < k; ++j) {
        num *= top - j;
        den *= j + 1;
    }
    return Rational(num) / Rational(den);
}

// rho(sites) by counting patterns that hold every site.
Rational enumerated_density(const TopRow& top, const std::vector<SiteCoord>& sites) {
    long hit = 0, total = 0;
    for_each_pattern(top, [&](const GTPattern& p) {
        ++total;
        if (std::all_of(sites.begin(), sites.end(), [&](const SiteCoord& s) { return p.has_particle(s.u, s.r); }))
            ++hit;
    });
    return make_rational(hit, total);
}

std::vector<SiteCoord> sites_of(const TopRow& top) {
    std::vector<SiteCoord> out;
    for (int r = 1; r < top.n(); ++r)
        for (long u = top.x.back() + top.n() - r; u <= top.x.front() + 1; ++u) out.push_back({u, r});
    return out;
}

struct Frame {
    double a1, a2, b1, b2;
};

// Coefficients of a(s), b(s) recovered by projecting edge_point onto the
// sample's frame, Richardson-extrapolated from steps h and h/2.
Frame projected_frame(const MeasureSpec& spec, const EdgeSample& s, double h) {
    const double xx = s.x_vec[0] * s.x_vec[0] + s.x_vec[1] * s.x_vec[1];
    const double yy = s.y_vec[0] * s.y_vec[0] + s.y_vec[1] * s.y_vec[1];
    auto coeffs = [&](double step) {
        auto ab = [&](double d) {
            const EdgePoint p = edge_point(spec, s.t + d);
            const double dx = p.chi - s.point.chi, dy = p.eta - s.point.eta;
            return std::pair{(dx * s.x_vec[0] + dy * s.x_vec[1]) / xx, (dx * s.y_vec[0] + dy * s.y_vec[1]) / yy};
        };
        auto [ap, bp] = ab(step);
        auto [am, bm] = ab(-step);
        return Frame{(ap - am) / (2 * step), (ap + am) / (2 * step * step), (bp + bm) / (2 * step * step),
                     (bp - bm) / (2 * step * step * step)};
    };
    const Frame c = coeffs(h), f = coeffs(h / 2);
    auto rich = [](double coarse, double fine) { return (4 * fine - coarse) / 3; };
    return {rich(c.a1, f.a1), rich(c.a2, f.a2), rich(c.b1, f.b1), rich(c.b2, f.b2)};
}

// C_I(s) = \int_{[a,b] \ I} mu[dx] / (s - x) and its derivatives.
struct CiOracle {
    PiecewiseCauchy outer;
    CiOracle(const MeasureSpec& spec, double t2, double t1) : outer(remove_interval(spec.pieces(), t2, t1)) {}
    double d(double s, int order) const { return outer.deriv(cplx(s, 0.0), order).real(); }
};

} // namespace

// ---------------------------------------------------------------------------

TEST_SUITE("measure") {

TEST_CASE("validation accepts and rejects the documented specs") {
    const MeasureSpec a = validate(constant_pieces({{-1.0, 1.0}}, 0.5));
    CHECK(a.a() == -1.0);
    CHECK(a.b() == 1.0);

    const auto narrow = check(constant_pieces({{0.0, 1.0}}, 1.0));
    REQUIRE(narrow.size() == 1);
    CHECK(narrow[0].code == Errc::SupportTooNarrow);

    const MeasureSpec c = validate(constant_pieces({{0.0, 0.5}, {1.0, 1.5}}, 1.0));
    CHECK(c.moment(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.a() == 0.0);
    CHECK(c.b() == 1.5);
}

TEST_CASE("validation reports every violated invariant") {
    auto has = [](const std::vector<ValidationIssue>& v, Errc c) {
        return std::any_of(v.begin(), v.end(), [&](const ValidationIssue& i) { return i.code == c; });
    };
    CHECK(has(check(constant_pieces({{0.0, 3.0}}, 0.5)), Errc::MassNotOne));
    CHECK(has(check(constant_pieces({{0.0, 0.5}}, 2.0)), Errc::DensityOutOfRange));
    CHECK(has(check(constant_pieces({{0.0, 1.0}, {0.5, 1.5}}, 0.5)), Errc::OverlappingPieces));
    try {
        validate(constant_pieces({{0.0, 0.5}}, 2.0));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(!e.issues().empty());
    }
}

TEST_CASE("Cauchy transform of the uniform half density") {
    const MeasureSpec a = preset("a").spec;
    CHECK(std::abs(cauchy(a, cplx(3.0, 0.0)) - 0.5 * std::log(2.0)) < 1e-12);
    CHECK(std::abs(cauchy(a, cplx(0.0, 1.0)) - cplx(0.0, -kPi / 4)) < 1e-12);
    CHECK(std::abs(cauchy_deriv(a, cplx(3.0, 0.0), 1) - (-0.125)) < 1e-12);
    const cplx w(1.3, 0.7);
    CHECK(std::abs(cauchy_deriv(a, std::conj(w), 1) - std::conj(cauchy_deriv(a, w, 1))) < 1e-13);
    for (const auto& name : preset_names()) {
        const MeasureSpec m = preset(name).spec;
        const double big = 1e9;
        const double xmax = std::max(std::abs(m.a()), std::abs(m.b()));
        CHECK(std::abs(cauchy(m, cplx(big, 0.0)) - 1.0 / big) <= 2 * xmax / (big * big));
    }
    CHECK(error_code([&] { cauchy(a, cplx(0.5, 0.0)); }) == Errc::PointOnSupport);
}

TEST_CASE("Cauchy transform matches each preset's closed form") {
    std::mt19937_64 g(5);
    for (const auto& name : preset_names()) {
        const Preset p = preset(name);
        for (int i = 0; i < 50; ++i) {
            const cplx w(std::uniform_real_distribution<double>(p.spec.a() - 1, p.spec.b() + 1)(g),
                         std::uniform_real_distribution<double>(1e-3, 3.0)(g));
            CHECK(std::abs(cauchy(p.spec, w) - p.closed_c(w)) < 1e-9);
        }
    }
}

TEST_CASE("derivative orders agree with finite differences") {
    const MeasureSpec d = preset("d").spec;
    const cplx w(0.9, 0.4);
    const double h = 1e-5;
    for (int k = 1; k <= 4; ++k) {
        const cplx fd = (cauchy_deriv(d, w + h, k - 1) - cauchy_deriv(d, w - h, k - 1)) / (2 * h);
        CHECK(std::abs(fd - cauchy_deriv(d, w, k)) < 1e-6 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("analytic extension at the documented real points") {
    const MeasureSpec c = preset("c").spec;
    CHECK(extended_exp_c(c, 0.0).value == 0.0);
    CHECK(extended_exp_c(c, 0.5).inverse == 0.0);
    CHECK(extended_exp_c(preset("a").spec, 3.0).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    const RDecomposition rd = r_decomposition(c);
    CHECK(real_extension(c, rd, 0.25).c1 > 0.0);
    CHECK(real_extension(preset("a").spec, r_decomposition(preset("a").spec), 3.0).c1 < 0.0);
}

TEST_CASE("R decomposition of the hexagon measure") {
    const RDecomposition rd = r_decomposition(preset("c").spec);
    struct Want {
        double lo, hi;
        RTag tag;
    };
    const std::vector<Want> want = {
        {-kInf, 0.0, RTag::Mu},  {0.0, 0.0, RTag::Two},   {0.0, 0.5, RTag::LambdaMinusMu},
        {0.5, 0.5, RTag::One},   {0.5, 0.75, RTag::Mu},   {0.75, 0.75, RTag::Zero},
        {0.75, 1.0, RTag::Mu},   {1.0, 1.0, RTag::Two},   {1.0, 1.5, RTag::LambdaMinusMu},
        {1.5, 1.5, RTag::One},   {1.5, kInf, RTag::Mu},
    };
    REQUIRE(rd.components.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        auto same = [](double x, double y) { return x == y || std::abs(x - y) <= 1e-12; };
        CHECK(same(rd.components[i].span.lo, want[i].lo));
        CHECK(same(rd.components[i].span.hi, want[i].hi));
        CHECK(rd.components[i].tag == want[i].tag);
    }
}

TEST_CASE("R decomposition of the uniform and two-block measures") {
    const RDecomposition a = r_decomposition(preset("a").spec);
    REQUIRE(a.components.size() == 2);
    for (const auto& c : a.components) CHECK(c.tag == RTag::Mu);
    CHECK(a.components[0].span.hi == -1.0);
    CHECK(a.components[1].span.lo == 1.0);
    CHECK(!a.locate(0.0));

    const RDecomposition b = r_decomposition(preset("b").spec);
    int zeros = 0;
    for (const auto& c : b.components)
        if (c.tag == RTag::Zero) {
            ++zeros;
            CHECK(c.span.lo == doctest::Approx(1.5).epsilon(1e-12));
            CHECK(c.span.is_point());
        }
    CHECK(zeros == 1);
}

TEST_CASE("measure JSON round trip and malformed input") {
    for (const auto& name : preset_names()) {
        const MeasureSpec m = preset(name).spec;
        const MeasureSpec back = measure_from_json(measure_to_json(m));
        REQUIRE(back.pieces().size() == m.pieces().size());
        for (std::size_t i = 0; i < m.pieces().size(); ++i) {
            CHECK(back.pieces()[i].interval.lo == m.pieces()[i].interval.lo);
            CHECK(back.pieces()[i].interval.hi == m.pieces()[i].interval.hi);
            CHECK(back.pieces()[i].coeffs == m.pieces()[i].coeffs);
        }
    }
    CHECK(error_code([] { measure_from_json("{"); }) == Errc::MalformedSpec);
    CHECK(error_code([] { measure_from_json(R"({"pieces":[{"interval":[0],"poly":[1]}]})"); }) == Errc::MalformedSpec);
}

} // TEST_SUITE

// ---------------------------------------------------------------------------

TEST_SUITE("saddle") {

TEST_CASE("hand value at w = i for the uniform measure") {
    const MeasureSpec a = preset("a").spec;
    const ChiEta ce = chi_eta_from_w(a, cplx(0.0, 1.0));
    CHECK(std::abs(ce.chi - (std::sqrt(2.0) - 1.0)) < 1e-12);
    CHECK(std::abs(ce.eta - (3.0 - 2.0 * std::sqrt(2.0))) < 1e-12);

    const SaddleContext ctx(a, std::sqrt(2.0) - 1.0, 3.0 - 2.0 * std::sqrt(2.0));
    CHECK(std::abs(f_prime(ctx, cplx(0.0, 1.0))) < 1e-12);
    const auto w = upper_root(ctx);
    REQUIRE(w);
    CHECK(std::abs(*w - cplx(0.0, 1.0)) < 1e-10);
}

TEST_CASE("argument of the log difference lies in (0, pi)") {
    const MeasureSpec a = preset("a").spec;
    const SaddleContext ctx(a, 0.2, 0.5);
    std::mt19937_64 g(3);
    for (int i = 0; i < 100; ++i) {
        const cplx w(std::uniform_real_distribution<double>(-3, 3)(g), std::uniform_real_distribution<double>(1e-3, 3)(g));
        const double logs = (std::log(w - ctx.chi()) - std::log(w - ctx.beta())).imag();
        CHECK(logs > 0.0);
        CHECK(logs < kPi);
        const double ic = cauchy(a, w).imag();
        CHECK(ic < 0.0);
        CHECK(ic > -kPi);
    }
}

TEST_CASE("no upper root on the flat top of the uniform measure") {
    const MeasureSpec a = preset("a").spec;
    CHECK(!upper_root(SaddleContext(a, 0.3, 1.0)));
}

TEST_CASE("liquid point of the hexagon measure") {
    const MeasureSpec c = preset("c").spec;
    const SaddleContext ctx(c, 0.75, 0.9);
    const auto w = upper_root(ctx);
    REQUIRE(w);
    CHECK(w->imag() > 0.0);
    CHECK(std::abs(f_prime(ctx, *w)) < 1e-10);
    const Rect box{w->real() - 0.05, w->real() + 0.05, w->imag() * 0.5, w->imag() * 1.5};
    CHECK(winding_number(ctx, box) == 1);
    CHECK(count_roots(ctx, RootRegion{box}) == 1);
}

TEST_CASE("membership examples") {
    const MeasureSpec a = preset("a").spec;
    const Membership in = liquid_membership(SaddleContext(a, 0.0, 0.5));
    CHECK(in.inside);
    REQUIRE(in.witness);
    CHECK(in.witness->imag() > 0.0);
    CHECK(!liquid_membership(SaddleContext(a, 0.5, 0.0)).inside);
    CHECK(!liquid_membership(SaddleContext(a, a.b(), 0.5)).inside);
    CHECK(error_code([&] { SaddleContext(a, 5.0, 0.5); }) == Errc::OutOfTrapezoid);
}

TEST_CASE("J intervals hold no roots when a non-real root exists") {
    const MeasureSpec c = preset("c").spec;
    const SaddleContext ctx(c, 0.75, 0.9);
    const RootReport rep = find_roots(ctx);
    CHECK(rep.upper == 1);
    CHECK(rep.j[0] + rep.j[1] + rep.j[2] + rep.j[3] == 0);
    CHECK(root_bound_violations(ctx, rep).empty());

    const SaddleContext bottom(c, 1.0, 0.0);
    const RootReport low = find_roots(bottom);
    CHECK(low.j[2] + low.j[3] == 0);
    CHECK(low.upper == 0);
}

TEST_CASE("large w tends to the tangency point") {
    for (const auto& name : preset_names()) {
        const MeasureSpec m = preset(name).spec;
        const ChiEta ce = chi_eta_from_w(m, cplx(0.3, 1e4));
        const EdgePoint p0 = tangency_point(m);
        CHECK(std::hypot(ce.chi - p0.chi, ce.eta - p0.eta) < 1e-3);
    }
}

TEST_CASE("real root multiplicity at edge points") {
    auto mult = [](const std::string& name, double t) {
        const MeasureSpec m = preset(name).spec;
        const EdgePoint e = edge_point(m, t);
        return real_root_multiplicity(SaddleContext(m, e.chi, e.eta), t);
    };
    CHECK(mult("c", 2.0) == 2);
    CHECK(mult("b", 1.5) == 1);
    CHECK(mult("d", 4.0 / 3.0) == 2);
}

TEST_CASE("chi_eta_from_w rejects the real axis") {
    CHECK(error_code([] { chi_eta_from_w(preset("a").spec, cplx(2.0, 0.0)); }) == Errc::OutOfTrapezoid);
}

} // TEST_SUITE

// ---------------------------------------------------------------------------

TEST_SUITE("frontier") {

TEST_CASE("edge and tangency points") {
    auto near = [](EdgePoint p, double chi, double eta) { return std::hypot(p.chi - chi, p.eta - eta) < 1e-12; };
    CHECK(near(edge_point(preset("c").spec, 0.0), 0.75, 0.25));
    CHECK(near(edge_point(preset("a").spec, 2.0), std::sqrt(3.0) - 1.0, 7.0 - 4.0 * std::sqrt(3.0)));
    CHECK(near(edge_point(preset("b").spec, 1.5), 1.5, 1.0));
    CHECK(near(tangency_point(preset("a").spec), 0.5, 0.0));
    CHECK(near(tangency_point(preset("c").spec), 1.25, 0.0));
    CHECK(near(tangency_point(preset("b").spec), 2.0, 0.0));
    CHECK(error_code([] { edge_point(preset("a").spec, 0.0); }) == Errc::NotInR);
}

TEST_CASE("hexagon edge is the inscribed circle") {
    const MeasureSpec c = preset("c").spec;
    for (double t : {-3.0, -0.4, 0.2, 0.6, 0.9, 1.2, 2.5, 10.0}) {
        const EdgePoint p = edge_point(c, t);
        // Circle through the six tangency points of the trapezoid sides.
        const double u = (p.chi - 1.0) + 0.5 * (p.eta - 0.5);
        const double v = (std::sqrt(3.0) / 2.0) * (p.eta - 0.5);
        CHECK(std::hypot(u, v) == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-10));
    }
}

TEST_CASE("case table") {
    CHECK(case_number(RTag::Mu, 2) == 1);
    CHECK(case_number(RTag::Mu, 3) == 2);
    CHECK(case_number(RTag::LambdaMinusMu, 2) == 3);
    CHECK(case_number(RTag::LambdaMinusMu, 3) == 4);
    CHECK(case_number(RTag::Zero, 1) == 5);
    CHECK(case_number(RTag::One, 1) == 6);
    CHECK(case_number(RTag::One, 2) == 7);
    CHECK(case_number(RTag::Two, 1) == 8);
    CHECK(case_number(RTag::Two, 2) == 9);
    CHECK(case_number(RTag::Mu, 1) == 0);
    CHECK(case_number(RTag::Zero, 2) == 0);

    CHECK(classify_case(preset("d").spec, 4.0 / 3.0).edge_case == 7);
    CHECK(classify_case(preset("c").spec, 1.5).edge_case == 6);
    CHECK(classify_case(preset("b").spec, 1.5).edge_case == 5);
    CHECK(classify_case(preset("c").spec, 2.0).edge_case == 1);
    CHECK(classify_case(preset("c").spec, 0.0).edge_case == 8);
}

TEST_CASE("frame vectors") {
    const EdgeSample r1 = local_geometry(preset("c").spec, 1.5);
    CHECK(r1.x_vec[0] == 0.0);
    CHECK(r1.x_vec[1] == 1.0);
    CHECK(r1.y_vec[0] == 1.0);
    CHECK(r1.y_vec[1] == 0.0);
    const EdgeSample r2 = local_geometry(preset("c").spec, 0.0);
    CHECK(r2.x_vec[0] == 1.0);
    CHECK(r2.x_vec[1] == -1.0);
    CHECK(r2.y_vec[0] == 1.0);
    CHECK(r2.y_vec[1] == 1.0);
    const EdgeSample mu = local_geometry(preset("a").spec, 2.0);
    CHECK(mu.x_vec[0] * mu.y_vec[0] + mu.x_vec[1] * mu.y_vec[1] == doctest::Approx(0.0));
}

TEST_CASE("local coefficients match projected finite differences") {
    struct Site {
        const char* preset;
        double t;
    };
    const std::vector<Site> sites = {{"a", 2.0},  {"a", -3.0},       {"c", 2.0},        {"c", 0.25},
                                     {"c", 0.0},  {"c", 0.5},        {"c", 1.5},        {"c", 0.75},
                                     {"b", 1.5},  {"d", 4.0 / 3.0},  {"d", 1.0 / 3.0},  {"d", 0.0}};
    for (const auto& s : sites) {
        CAPTURE(s.preset);
        CAPTURE(s.t);
        const MeasureSpec m = preset(s.preset).spec;
        const EdgeSample g = local_geometry(m, s.t);
        const Frame f = projected_frame(m, g, 1e-3);
        const double scale = 1.0 + std::max({std::abs(g.a1), std::abs(g.a2), std::abs(g.b1), std::abs(g.b2)});
        CHECK(std::abs(f.a1 - g.a1) < 1e-6 * scale);
        CHECK(std::abs(f.a2 - g.a2) < 1e-5 * scale);
        CHECK(std::abs(f.b1 - g.b1) < 1e-5 * scale);
        CHECK(std::abs(f.b2 - g.b2) < 1e-4 * scale);
    }
}

TEST_CASE("first-order coefficients at R1 and R2 points match the closed formulas") {
    // R1 at t: a1 = -2 (t - t2) e^{C_I} C_I' - 2 e^{C_I} + 2 and
    // b1 = -((t - t2) e^{C_I} C_I' + e^{C_I} - 1) / ((t - t2) e^{C_I}).
    // R2 at t: 2 a1 = 4 + 4 (t - t1) e^{-C_I} C_I' - 4 e^{-C_I} and
    // 2 b1 = ((t - t1) C_I' + e^{C_I} - 1) / (t - t1) evaluated via e^{-C_I}.
    struct Site {
        const char* preset;
        double t;
    };
    for (const Site s : {Site{"c", 0.5}, Site{"c", 1.5}, Site{"d", 1.0 / 3.0}, Site{"c", 0.0}, Site{"c", 1.0},
                         Site{"d", 0.0}, Site{"d", 1.0}}) {
        CAPTURE(s.preset);
        CAPTURE(s.t);
        const MeasureSpec m = preset(s.preset).spec;
        const RDecomposition rd = r_decomposition(m);
        const RealExtension e = real_extension(m, rd, s.t);
        const EdgeSample g = local_geometry(m, rd, s.t);
        const CiOracle ci(m, e.t2, e.t1);
        const double t = s.t, c0 = ci.d(t, 0), c1 = ci.d(t, 1);
        if (e.tag == RTag::One) {
            REQUIRE(g.edge_case == 6);
            const double E = std::exp(c0), L = t - e.t2;
            CHECK(g.a1 == doctest::Approx(-2.0 * L * E * c1 - 2.0 * E + 2.0).epsilon(1e-9));
            CHECK(g.b1 == doctest::Approx(-(L * E * c1 + E - 1.0) / (L * E)).epsilon(1e-9));
        } else {
            REQUIRE(e.tag == RTag::Two);
            REQUIRE(g.edge_case == 8);
            const double Em = std::exp(-c0), L = t - e.t1;
            CHECK(g.a1 == doctest::Approx(0.5 * (4.0 + 4.0 * L * Em * c1 - 4.0 * Em)).epsilon(1e-9));
            // Independent route for b1: chi + eta = t + 1 + (s - t)^2 h4, so b1 is the
            // s^2 coefficient of (chi + eta) / 2, taken from edge_point differences.
            const double h = 1e-3;
            auto sum = [&](double d) {
                const EdgePoint p = edge_point(m, rd, t + d);
                return p.chi + p.eta;
            };
            const double b1_fd = (sum(h) + sum(-h) - 2.0 * (t + 1.0)) / (4.0 * h * h);
            CHECK(g.b1 == doctest::Approx(b1_fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("second-order coefficients at the case 7 cusp match the closed formulas") {
    const MeasureSpec m = preset("d").spec;
    const double t = 4.0 / 3.0;
    const RDecomposition rd = r_decomposition(m);
    const RealExtension e = real_extension(m, rd, t);
    REQUIRE(e.tag == RTag::One);
    const CiOracle ci(m, e.t2, e.t1);
    const double t2 = e.t2;
    auto h1 = [&](double s) {
        const double E = std::exp(ci.d(s, 0)), c1 = ci.d(s, 1);
        const double num = (t - t2) * (s - t2) * E * E * c1 + (s + t - 2 * t2) * E * E - 2 * (s - t2) * E + (s - t);
        return num / (-(t - t2) * E + (s - t) * (s - t2) * E * c1);
    };
    auto h2 = [&](double s) {
        const double E = std::exp(ci.d(s, 0)), c1 = ci.d(s, 1);
        return ((s - t2) * E * c1 + E - 1.0) / (-(t - t2) * E + (s - t) * (s - t2) * E * c1);
    };
    const double h = 1e-4;
    const double dh1 = (h1(t + h) - h1(t - h)) / (2 * h);
    const double dh2 = (h2(t + h) - h2(t - h)) / (2 * h);
    const double E = std::exp(ci.d(t, 0)), c1 = ci.d(t, 1), c2 = ci.d(t, 2);
    const double a1 = -(t - t2) * E * c1 + h1(t);
    const double b1 = h2(t);
    const double a2 = 0.5 * (-(t - t2) * E * c1 * c1 - (t - t2) * E * c2 + 2 * dh1);
    const double b2 = dh2;

    const EdgeSample g = local_geometry(m, rd, t);
    CHECK(g.edge_case == 7);
    CHECK(std::abs(a1) < 1e-9);
    CHECK(std::abs(b1) < 1e-9);
    CHECK(std::abs(g.a1) < 1e-6);
    CHECK(std::abs(g.b1) < 1e-6);
    CHECK(g.a2 == doctest::Approx(a2).epsilon(1e-6));
    CHECK(g.b2 == doctest::Approx(b2).epsilon(1e-6));
    CHECK(std::abs(g.a2) > 1e-6);
    CHECK(std::abs(g.b2) > 1e-6);
}

TEST_CASE("flat boundary classification") {
    const auto a = flat_boundary_points(preset("a").spec);
    REQUIRE(!a.empty());
    CHECK(a.front().span.lo == -1.0);
    CHECK(a.back().span.hi == 1.0);
    for (const auto& f : a) CHECK(f.kind != FlatCase::Unclassified);
    bool interior_case1 = false;
    for (const auto& f : a)
        if (f.span.contains_open(0.0)) interior_case1 = f.kind == FlatCase::Case1;
    CHECK(interior_case1);

    std::set<double> unclassified;
    for (const auto& f : flat_boundary_points(preset("e").spec))
        if (f.kind == FlatCase::Unclassified) {
            CHECK(f.span.is_point());
            unclassified.insert(f.span.lo);
        }
    CHECK(unclassified == std::set<double>{-1.0, 0.0, 1.0});

    CHECK(flat_boundary_points(preset("c").spec).empty());
}

TEST_CASE("probes converge to edge and tangency points") {
    const MeasureSpec a = preset("a").spec;
    const Probe p = boundary_probe(a, 2.0, kProbeDepth);
    CHECK(p.values.size() == static_cast<std::size_t>(kProbeDepth));
    CHECK(distance(p.limit, edge_point(a, 2.0)) < 1e-4);
    const Probe r = radial_probe(a, kProbeDepth);
    CHECK(distance(r.limit, tangency_point(a)) < 1e-4);
}

TEST_CASE("uniform measure curve runs from the tangency point to the top corners") {
    const auto samples = sample_edge(preset("a").spec, 512);
    REQUIRE(samples.size() >= 64);
    double max_eta = 0.0, min_p0 = kInf;
    for (std::size_t i = 1; i < samples.size(); ++i) CHECK(samples[i - 1].t < samples[i].t);
    for (const auto& s : samples) {
        max_eta = std::max(max_eta, s.point.eta);
        min_p0 = std::min(min_p0, distance(s.point, EdgePoint{0.5, 0.0}));
    }
    CHECK(max_eta > 0.99);
    CHECK(min_p0 < 1e-2);
}

TEST_CASE("boundary assembly completeness") {
    const BoundaryAssembly c = assemble_boundary(preset("c").spec, 256);
    CHECK(c.complete);
    CHECK(c.flat_segments.empty());

    const BoundaryAssembly b = assemble_boundary(preset("b").spec, 256);
    CHECK(b.complete);
    REQUIRE(b.flat_segments.size() == 2);
    CHECK(b.flat_segments[0].lo == 0.0);
    CHECK(b.flat_segments[0].hi == 1.0);
    CHECK(b.flat_segments[1].lo == 2.0);
    CHECK(b.flat_segments[1].hi == 3.0);

    CHECK(!assemble_boundary(preset("f").spec, 128).complete);
}

TEST_CASE("edge CSV and boundary JSON layout") {
    const auto s = sample_edge(preset("c").spec, 64);
    const std::string csv = edge_csv(s);
    CHECK(csv.rfind("t,chi,eta,component,case,multiplicity,x1,x2,y1,y2,a1,a2,b1,b2\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(s.size()) + 1);
    CHECK(csv == edge_csv(sample_edge(preset("c").spec, 64)));

    const auto j = nlohmann::json::parse(boundary_json(assemble_boundary(preset("b").spec, 64)));
    CHECK(j["complete"] == true);
    CHECK(j["flat_segments"].size() == 2);
    CHECK(j["tangency"][0] == 2.0);
}

} // TEST_SUITE

// ---------------------------------------------------------------------------

TEST_SUITE("kernel") {

TEST_CASE("phi matches the binomial oracle") {
    for (int r = 1; r <= 6; ++r)
        for (int s = r + 1; s <= 7; ++s)
            for (long u = -6; u <= 6; ++u)
                for (long v = -6; v <= 6; ++v) CHECK(phi(r, s, u, v) == phi_oracle(r, s, u, v));
    CHECK(phi(1, 2, 3, 3) == 1);
    CHECK(phi(1, 2, 3, 2) == 0);
}

TEST_CASE("phi semigroup") {
    for (int r = 1; r <= 4; ++r)
        for (int s = r + 2; s <= 6; ++s)
            for (int m = r + 1; m < s; ++m)
                for (long u = -4; u <= 4; ++u)
                    for (long v = -4; v <= 4; ++v) {
                        Rational sum = 0;
                        for (long z = u; z <= v; ++z) sum += phi(r, m, u, z) * phi(m, s, z, v);
                        CHECK(sum == phi(r, s, u, v));
                    }
}

TEST_CASE("kernel examples") {
    const TopRow two = make_top_row({2, 0});
    CHECK(kernel(two, {1, 1}, {1, 1}) == Rational(1, 2));
    CHECK(kernel(two, {2, 1}, {2, 1}) == Rational(1, 2));
    const TopRow dense = make_top_row({2, 1, 0});
    CHECK(kernel(dense, {1, 2}, {1, 2}) == 1);
    CHECK(kernel(dense, {2, 1}, {2, 1}) == 1);
    CHECK(kernel(dense, {3, 1}, {3, 1}) == 0);
    const TopRow t = make_top_row({4, 2, 0});
    CHECK(kernel(t, {2, 1}, {2, 1}) == enumerated_density(t, {{2, 1}}));
}

TEST_CASE("diagonal entries are probabilities") {
    for (const auto& x : std::vector<std::vector<long>>{{4, 2, 0}, {5, 3, 2, 0}, {3, 0}, {6, 4, 1, 0}}) {
        const TopRow top = make_top_row(x);
        for (const auto& s : sites_of(top)) {
            const Rational k = kernel(top, s, s);
            CHECK(k >= 0);
            CHECK(k <= 1);
            CHECK(k == enumerated_density(top, {s}));
        }
    }
}

TEST_CASE("correlation examples") {
    const TopRow two = make_top_row({2, 0});
    CHECK(correlation(two, {{1, 1}, {2, 1}}) == 0);
    CHECK(correlation(two, {}) == 1);
    const TopRow t = make_top_row({4, 2, 0});
    const auto sites = sites_of(t);
    for (const auto& a : sites) {
        CHECK(correlation(t, {a}) == kernel(t, a, a));
        for (const auto& b : sites)
            if (a < b) CHECK(correlation(t, {a, b}) == enumerated_density(t, {a, b}));
    }
    CHECK(error_code([&] { correlation(t, {{2, 1}, {2, 1}}); }) == Errc::DuplicateSite);
}

TEST_CASE("correlation equals enumeration on site pairs, n <= 5, width <= 7") {
    long mismatches = 0;
    for (int n = 2; n <= 5; ++n) {
        std::vector<long> x(n, 0);
        std::function<void(int, long)> rec = [&](int i, long below) {
            if (i < 0) {
                const TopRow top{x};
                const auto sites = sites_of(top);
                for (std::size_t a = 0; a < sites.size(); ++a)
                    for (std::size_t b = a; b < sites.size(); ++b) {
                        std::vector<SiteCoord> s = {sites[a]};
                        if (b != a) s.push_back(sites[b]);
                        if (correlation(top, s) != empirical_correlation(top, s)) ++mismatches;
                    }
                return;
            }
            for (long v = below + 1; v <= 7 - i; ++v) {
                x[i] = v;
                rec(i - 1, v);
            }
        };
        rec(n - 2, 0);
    }
    CHECK(mismatches == 0);
}

TEST_CASE("contour evaluator agrees with the exact kernel") {
    const TopRow t = make_top_row({4, 2, 0});
    const SiteCoord a{2, 1}, b{3, 2};
    const double exact = to_double(kernel(t, a, b));
    CHECK(std::abs(kernel_contour(t, a, b, default_contours(t, a, b, 1024)) - exact) < 1e-6);
    ContourParams bad = default_contours(t, a, b, 256);
    bad.Gamma_radius = 1e-3;
    CHECK(error_code([&] { check_contours(t, a, b, bad); }) == Errc::ContourViolation);
}

TEST_CASE("kernel JSON") {
    const TopRow t = make_top_row({4, 2, 0});
    const Rational v = kernel(t, {2, 1}, {2, 1});
    CHECK(v == enumerated_density(t, {{2, 1}}));
    const auto j = nlohmann::json::parse(kernel_json(t, {2, 1}, {2, 1}, v));
    CHECK(j["n"] == 3);
    CHECK(j["toprow"] == nlohmann::json::array({4, 2, 0}));
    CHECK(j["query"]["u"] == 2);
    CHECK(j["query"]["r"] == 1);
    CHECK(j["query"]["v"] == 2);
    CHECK(j["query"]["s"] == 1);
    const Rational back(cpp_int(j["value"]["num"].get<std::string>()));
    CHECK(back / Rational(cpp_int(j["value"]["den"].get<std::string>())) == v);
}

TEST_CASE("determinants and rationals") {
    CHECK(bareiss_determinant({{2, 1}, {1, 3}}) == 5);
    CHECK(bareiss_determinant({{0, 1, 2}, {1, 0, 3}, {4, -3, 8}}) == -2);
    CHECK(bareiss_determinant({{1, 2}, {2, 4}}) == 0);
    CHECK(rational_determinant({{Rational(1, 2), 1}, {1, Rational(1, 3)}}) == Rational(-5, 6));
    CHECK(make_rational(3, -6) == Rational(-1, 2));
}

TEST_CASE("top row and site validation") {
    CHECK(error_code([] { make_top_row({0, 2}); }) == Errc::InvalidTopRow);
    CHECK(error_code([] { make_top_row({2, 2}); }) == Errc::InvalidTopRow);
    const TopRow t = make_top_row({4, 2, 0});
    CHECK(error_code([&] { check_site(t, {1, 3}); }) == Errc::RowOutOfRange);
    CHECK(error_code([&] { check_site(t, {0, 1}); }) == Errc::RowOutOfRange);
    CHECK(admissible(t, {2, 1}));
    CHECK(!admissible(t, {1, 1}));
}

} // TEST_SUITE

// ---------------------------------------------------------------------------

TEST_SUITE("combinatorics") {

TEST_CASE("interlacing examples") {
    CHECK(interlaces({2, 0}, {1}));
    CHECK(!interlaces({2, 0}, {0}));
    CHECK(interlaces({2, 0}, {2}));
    CHECK(interlaces_by_determinant({2, 0}, {2}));
    CHECK(!interlaces_by_determinant({2, 0}, {0}));
    CHECK(error_code([] { interlaces({2, 0}, {1, 0}); }) == Errc::LengthMismatch);
}

TEST_CASE("enumeration examples") {
    const auto two = enumerate_patterns(make_top_row({2, 0}));
    REQUIRE(two.size() == 2);
    std::set<long> bottoms;
    for (const auto& p : two) bottoms.insert(p.rows[0][0]);
    CHECK(bottoms == std::set<long>{1, 2});
    CHECK(enumerate_patterns(make_top_row({3, 2, 1, 0})).size() == 1);
    CHECK(enumerate_patterns(make_top_row({3, 1, 0})).size() == 3);
    for (const auto& p : enumerate_patterns(make_top_row({5, 3, 1, 0}))) CHECK(valid_pattern(p));
    CHECK(error_code([] { enumeration_guard(make_top_row({20, 0})); }) == Errc::TooLarge);
}

TEST_CASE("count examples") {
    CHECK(count_patterns(make_top_row({2, 0})) == 2);
    CHECK(count_patterns(make_top_row({2, 1, 0})) == 1);
    CHECK(count_patterns(make_top_row({3, 1, 0})) == 3);
    // Product formula beyond the enumeration guard.
    CHECK(count_patterns(make_top_row({40, 0})) == 40);
}

TEST_CASE("sampler examples") {
    const TopRow two = make_top_row({2, 0});
    PatternSampler sampler(two);
    int ones = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) ones += sampler.sample(stream_seed(9, i)).rows[0][0] == 1;
    CHECK(std::abs(ones / double(n) - 0.5) < 0.01);

    const TopRow dense = make_top_row({3, 2, 1, 0});
    const GTPattern unique = enumerate_patterns(dense).front();
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(sample_pattern(dense, s) == unique);

    const TopRow t = make_top_row({9, 6, 4, 1, 0});
    CHECK(sample_pattern(t, 17) == sample_pattern(t, 17));
    CHECK(valid_pattern(sample_pattern(t, 17)));
}

TEST_CASE("table and coordinate sampling paths agree in law") {
    const TopRow t = make_top_row({5, 3, 1, 0});
    const auto all = enumerate_patterns(t);
    PatternSampler table(t), seq(t, 0);
    std::map<GTPattern, int> ht, hs;
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
        ++ht[table.sample(stream_seed(1, i))];
        ++hs[seq.sample(stream_seed(2, i))];
    }
    double tv_t = 0, tv_s = 0;
    for (const auto& p : all) {
        tv_t += std::abs(ht[p] / double(n) - 1.0 / all.size());
        tv_s += std::abs(hs[p] / double(n) - 1.0 / all.size());
    }
    CHECK(0.5 * tv_t < 0.03);
    CHECK(0.5 * tv_s < 0.03);
}

TEST_CASE("empirical correlation examples") {
    const TopRow two = make_top_row({2, 0});
    CHECK(empirical_correlation(two, {{1, 1}}) == Rational(1, 2));
    CHECK(empirical_correlation(two, {{1, 1}, {2, 1}}) == 0);
    CHECK(empirical_correlation(two, {}) == 1);
}

TEST_CASE("tilings") {
    GTPattern p;
    p.rows = {{1}, {2, 0}};
    const Tiling til = to_tiling(p);
    std::set<std::pair<long, int>> a;
    for (const auto& l : til.lozenges)
        if (l.type == Lozenge::A) a.insert({l.u, l.row});
    CHECK(a == std::set<std::pair<long, int>>{{1, 1}, {2, 2}, {0, 2}});
    CHECK(from_tiling(til) == p);

    const TopRow dense = make_top_row({3, 2, 1, 0});
    const Tiling frozen = to_tiling(enumerate_patterns(dense).front());
    std::set<std::pair<long, int>> packed, want;
    for (const auto& l : frozen.lozenges)
        if (l.type == Lozenge::A) packed.insert({l.u, l.row});
    for (int r = 1; r <= 4; ++r)
        for (long u = 4 - r; u <= 3; ++u) want.insert({u, r});
    CHECK(packed == want);

    for (const auto& q : enumerate_patterns(make_top_row({5, 2, 1, 0}))) CHECK(from_tiling(to_tiling(q)) == q);

    const std::string svg = tiling_svg(til);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg == tiling_svg(to_tiling(p)));
}

TEST_CASE("pattern JSON") {
    GTPattern p;
    p.rows = {{1}, {2, 0}};
    const auto j = nlohmann::json::parse(pattern_to_json(p));
    CHECK(j.dump().find("[[1],[2,0]]") != std::string::npos);
}

} // TEST_SUITE

// ---------------------------------------------------------------------------

TEST_SUITE("presets") {

TEST_CASE("catalogue") {
    CHECK(preset_names() == std::vector<std::string>{"a", "b", "c", "d", "e", "f"});
    CHECK(error_code([] { preset("z"); }) == Errc::UnknownPreset);
    for (const auto& n : preset_names()) CHECK(!preset(n).description.empty());
}

TEST_CASE("three-interval constants") {
    const auto k = three_interval_constants();
    CHECK(k.c == doctest::Approx((23.0 + std::sqrt(217.0)) / 12.0).epsilon(1e-14));
    CHECK(std::abs(6 * k.c * k.c - 23 * k.c + 13) < 1e-12);
    const Preset d = preset("d");
    for (const auto& sp : d.special_points)
        if (sp.label == "p_5") {
            CHECK(sp.point.chi == doctest::Approx(4.0 / 3.0));
            CHECK(sp.point.eta == doctest::Approx(5.0 / 9.0 + 4.0 / (27.0 * (k.c - 1.0))));
        }
}

TEST_CASE("special points reproduced") {
    for (const auto& n : {"a", "b", "c", "d"}) {
        const Preset p = preset(n);
        for (const auto& sp : p.special_points) {
            CAPTURE(n);
            CAPTURE(sp.label);
            if (sp.kind == PointKind::Tangency) CHECK(distance(tangency_point(p.spec), sp.point) < 1e-9);
            if (sp.kind == PointKind::Edge) {
                CHECK(distance(edge_point(p.spec, *sp.t), sp.point) < 1e-9);
                CHECK(classify_case(p.spec, *sp.t).edge_case == sp.expected_case);
            }
        }
    }
}

TEST_CASE("approximate points of the partial example") {
    const Preset f = preset("f");
    for (const auto& sp : f.special_points)
        if (sp.kind == PointKind::Approximate) {
            // One-sided limit of the edge at the end of R, quoted to three digits.
            const double t = *sp.t + (*sp.t < 0 ? -1e-9 : 1e-9);
            CHECK(distance(edge_point(f.spec, t), sp.point) < 1e-3);
        }
}

} // TEST_SUITE

TEST_SUITE("verify") {

TEST_CASE("suite registry") {
    CHECK(suite_names().size() == 6);
    CHECK_THROWS_AS(run_suite("nope"), std::invalid_argument);
    const SuiteReport r = run_suite("presets");
    CHECK(r.suite == "presets");
    CHECK(!r.checks.empty());
    CHECK(r.pass());
}

} // TEST_SUITE
