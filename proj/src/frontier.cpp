#include <gtedge/frontier.hpp>
#include <gtedge/saddle.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <nlohmann/json.hpp>
#include <sstream>

namespace gtedge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMultTol = 1e-7;

EdgeDerivs derivs_of(const RealExtension& e, double t) {
    EdgeDerivs d;
    switch (e.tag) {
    case RTag::Mu:
    case RTag::LambdaMinusMu: {
        const double E = e.exp_c, c1 = e.c1, c2 = e.c2, c3 = e.c3;
        d.f2 = 0.0;
        d.f3 = c2 - c1 * c1 * (E + 1.0) / (E - 1.0);
        d.f4 = c3 - 2.0 * c1 * c1 * c1 * (E * E + E + 1.0) / ((E - 1.0) * (E - 1.0));
        break;
    }
    case RTag::Zero:
        d.f2 = e.c1;
        d.f3 = e.c2;
        d.f4 = e.c3;
        break;
    case RTag::One: {
        const double p = t - e.t2, ei = std::exp(e.ci0);
        d.f2 = e.ci1 + 1.0 / p - 1.0 / (p * ei);
        d.f3 = e.ci2 - 1.0 / (p * p) + 1.0 / (p * p * ei * ei);
        break;
    }
    case RTag::Two: {
        const double q = t - e.t1, ei = std::exp(e.ci0);
        d.f2 = e.ci1 - 1.0 / q + ei / q;
        d.f3 = e.ci2 + 1.0 / (q * q) - ei * ei / (q * q);
        break;
    }
    }
    return d;
}

// ell is the distance from t to the nearest finite end of its component,
// capped at the support length; it puts f'''' in the units of f'''.
int multiplicity_of(RTag tag, const EdgeDerivs& d, double ell) {
    // Relative test: a derivative vanishes when it is below kMultTol times the
    // largest of the derivatives examined for the tag.
    auto vanishes = [](double v, double scale) { return std::abs(v) <= kMultTol * scale; };
    switch (tag) {
    case RTag::Mu:
    case RTag::LambdaMinusMu: {
        const double scale = std::max(std::abs(d.f3), std::abs(d.f4) * ell);
        if (scale == 0.0 || !std::isfinite(scale))
            throw Error(Errc::AmbiguousMultiplicity, "f''' and f'''' both vanish or overflow");
        return vanishes(d.f3, scale) ? 3 : 2;
    }
    case RTag::Zero:
        if (d.f2 == 0.0) throw Error(Errc::AmbiguousMultiplicity, "C'(t) vanishes at a zero of C");
        return 1;
    case RTag::One:
    case RTag::Two: {
        const double scale = std::max(std::abs(d.f2), std::abs(d.f3));
        if (scale == 0.0 || !std::isfinite(scale))
            throw Error(Errc::AmbiguousMultiplicity, "f'' and f''' both vanish or overflow");
        return vanishes(d.f2, scale) ? 2 : 1;
    }
    }
    return 0;
}

EdgePoint point_of(const RealExtension& e, double t) {
    switch (e.tag) {
    case RTag::Mu:
    case RTag::LambdaMinusMu: {
        const double E = e.exp_c;
        const double den = E * e.c1;
        return {t + (E - 1.0) / den, 1.0 + (E - 1.0) * (E - 1.0) / den};
    }
    case RTag::Zero:
        return {t, 1.0};
    case RTag::One:
        return {t, 1.0 - std::exp(e.ci0) * (t - e.t2)};
    case RTag::Two: {
        const double m = std::exp(-e.ci0) * (t - e.t1);
        return {t - m, 1.0 + m};
    }
    }
    return {};
}

// Truncated Taylor coefficients in (s - t), orders 0..4.
using Series = std::array<double, 5>;

Series constant(double c) { return {c, 0.0, 0.0, 0.0, 0.0}; }
Series identity(double t) { return {t, 1.0, 0.0, 0.0, 0.0}; }

Series add(const Series& a, const Series& b) {
    Series r{};
    for (int k = 0; k < 5; ++k) r[k] = a[k] + b[k];
    return r;
}

Series sub(const Series& a, const Series& b) {
    Series r{};
    for (int k = 0; k < 5; ++k) r[k] = a[k] - b[k];
    return r;
}

Series mul(const Series& a, const Series& b) {
    Series r{};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; i + j < 5; ++j) r[i + j] += a[i] * b[j];
    return r;
}

Series div(const Series& a, const Series& b) {
    Series r{};
    for (int k = 0; k < 5; ++k) {
        double v = a[k];
        for (int j = 1; j <= k; ++j) v -= b[j] * r[k - j];
        r[k] = v / b[0];
    }
    return r;
}

Series exp_series(const Series& a) {
    Series r{};
    r[0] = std::exp(a[0]);
    for (int k = 1; k < 5; ++k) {
        double v = 0.0;
        for (int j = 1; j <= k; ++j) v += j * a[j] * r[k - j];
        r[k] = v / k;
    }
    return r;
}

// Multiplication by (s - t); the top coefficient drops out.
Series shift(const Series& a) { return {0.0, a[0], a[1], a[2], a[3]}; }

Series derivative(const Series& a) { return {a[1], 2.0 * a[2], 3.0 * a[3], 4.0 * a[4], 0.0}; }

// 1 / (p + (s - t)).
Series reciprocal_linear(double p) {
    Series r{};
    double term = 1.0 / p;
    for (int k = 0; k < 5; ++k) {
        r[k] = term;
        term *= -1.0 / p;
    }
    return r;
}

// sign * C_I around t, through order 3.
Series taylor_ci(const RealExtension& e, double sign) {
    return {sign * e.ci0, sign * e.ci1, sign * e.ci2 / 2.0, sign * e.ci3 / 6.0, 0.0};
}

void fill_geometry(EdgeSample& s, const RealExtension& e) {
    switch (e.tag) {
    case RTag::Mu:
    case RTag::LambdaMinusMu:
    case RTag::Zero: {
        const double E = e.tag == RTag::Zero ? 1.0 : e.exp_c;
        const double em = 1.0 / E;
        const double c1 = e.c1, c2 = e.c2, c3 = e.c3;
        s.x_vec[0] = 1.0;
        s.x_vec[1] = E - 1.0;
        s.y_vec[0] = E - 1.0;
        s.y_vec[1] = -1.0;
        const double chi1 = 1.0 + em - (1.0 - em) * c2 / (c1 * c1);
        const double chi2 = -em * c1 - em * c2 / c1 - (1.0 - em) * (c3 / (c1 * c1) - 2.0 * c2 * c2 / (c1 * c1 * c1));
        const double D = 1.0 + (E - 1.0) * (E - 1.0);
        s.a1 = chi1;
        s.a2 = 0.5 * (chi2 + E * (E - 1.0) * c1 * chi1 / D);
        s.b1 = -0.5 * E * c1 * chi1 / D;
        s.b2 = -E * (2.0 * c1 * chi2 + (c1 * c1 + c2) * chi1) / (6.0 * D);
        break;
    }
    case RTag::One: {
        // On I, 1/e^{C(s)} = e^{-C_I(s)} (s-t)/(s-t2) =: H(s) is analytic with H(t) = 0,
        // chi_E = s - H(1-H)/H' and eta_E = 1 - (1-H)^2/H'.
        const Series H = shift(mul(exp_series(taylor_ci(e, -1.0)), reciprocal_linear(s.t - e.t2)));
        const Series dH = derivative(H);
        const Series one_minus = sub(constant(1.0), H);
        const Series chi = sub(identity(s.t), div(mul(H, one_minus), dH));
        const Series eta = sub(constant(1.0), div(mul(one_minus, one_minus), dH));
        s.x_vec[0] = 0.0;
        s.x_vec[1] = 1.0;
        s.y_vec[0] = 1.0;
        s.y_vec[1] = 0.0;
        s.a1 = eta[1];
        s.a2 = eta[2];
        s.b1 = chi[2];
        s.b2 = chi[3];
        break;
    }
    case RTag::Two: {
        // On I, e^{C(s)} = e^{C_I(s)} (s-t)/(s-t1) =: G(s) is analytic with G(t) = 0.
        const Series G = shift(mul(exp_series(taylor_ci(e, 1.0)), reciprocal_linear(s.t - e.t1)));
        const Series dG = derivative(G);
        const Series gm = sub(G, constant(1.0));
        const Series chi = add(identity(s.t), div(gm, dG));
        const Series eta = add(constant(1.0), div(mul(gm, gm), dG));
        s.x_vec[0] = 1.0;
        s.x_vec[1] = -1.0;
        s.y_vec[0] = 1.0;
        s.y_vec[1] = 1.0;
        s.a1 = 0.5 * (chi[1] - eta[1]);
        s.a2 = 0.5 * (chi[2] - eta[2]);
        s.b1 = 0.5 * (chi[2] + eta[2]);
        s.b2 = 0.5 * (chi[3] + eta[3]);
        break;
    }
    }
}

} // namespace

double distance(const EdgePoint& p, const EdgePoint& q) { return std::hypot(p.chi - q.chi, p.eta - q.eta); }

EdgePoint edge_point(const MeasureSpec& spec, const RDecomposition& rd, double t) {
    const RealExtension e = real_extension(spec, rd, t);
    const auto& comp = rd.components[*rd.locate(t)];
    return point_of(e, comp.span.is_point() ? comp.span.lo : t);
}

EdgePoint edge_point(const MeasureSpec& spec, double t) { return edge_point(spec, r_decomposition(spec), t); }

EdgePoint tangency_point(const MeasureSpec& spec) { return {0.5 + spec.moment(1), 0.0}; }

int case_number(RTag tag, int m) {
    switch (tag) {
    case RTag::Mu: return m == 2 ? 1 : m == 3 ? 2 : 0;
    case RTag::LambdaMinusMu: return m == 2 ? 3 : m == 3 ? 4 : 0;
    case RTag::Zero: return m == 1 ? 5 : 0;
    case RTag::One: return m == 1 ? 6 : m == 2 ? 7 : 0;
    case RTag::Two: return m == 1 ? 8 : m == 2 ? 9 : 0;
    }
    return 0;
}

EdgeSample local_geometry(const MeasureSpec& spec, const RDecomposition& rd, double t) {
    const auto idx = rd.locate(t);
    if (!idx) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "t = %.15g is not in R", t);
        throw Error(Errc::NotInR, buf);
    }
    const auto& comp = rd.components[*idx];
    if (comp.span.is_point()) t = comp.span.lo;
    const RealExtension e = real_extension(spec, rd, t);
    EdgeSample s;
    s.t = t;
    s.tag = e.tag;
    s.point = point_of(e, t);
    s.derivs = derivs_of(e, t);
    double ell = spec.b() - spec.a();
    if (std::isfinite(comp.span.lo)) ell = std::min(ell, t - comp.span.lo);
    if (std::isfinite(comp.span.hi)) ell = std::min(ell, comp.span.hi - t);
    s.multiplicity = multiplicity_of(e.tag, s.derivs, ell);
    s.edge_case = case_number(e.tag, s.multiplicity);
    fill_geometry(s, e);
    return s;
}

EdgeSample local_geometry(const MeasureSpec& spec, double t) {
    return local_geometry(spec, r_decomposition(spec), t);
}

CaseInfo classify_case(const MeasureSpec& spec, double t) {
    const EdgeSample s = local_geometry(spec, t);
    return {s.edge_case, s.multiplicity};
}

double discrete_curvature(const EdgePoint& p0, const EdgePoint& p1, const EdgePoint& p2) {
    const double ax = p1.chi - p0.chi, ay = p1.eta - p0.eta;
    const double bx = p2.chi - p1.chi, by = p2.eta - p1.eta;
    const double cx = p2.chi - p0.chi, cy = p2.eta - p0.eta;
    const double la = std::hypot(ax, ay), lb = std::hypot(bx, by), lc = std::hypot(cx, cy);
    if (la == 0.0 || lb == 0.0 || lc == 0.0) return 0.0;
    return 2.0 * (ax * by - ay * bx) / (la * lb * lc);
}

// ---------------------------------------------------------------------------
// Flat boundary

const char* flat_case_name(FlatCase c) {
    switch (c) {
    case FlatCase::Case1: return "1";
    case FlatCase::Case2: return "2";
    case FlatCase::Case3: return "3";
    case FlatCase::Case4: return "4";
    case FlatCase::Case5: return "5";
    case FlatCase::Unclassified: return "unclassified";
    }
    return "?";
}

namespace {

enum class Germ { Zero, One, Interior, Touch };

Germ partial_germ(const std::vector<double>& coeffs, double t) {
    const double v = poly_eval(coeffs, t);
    if (v <= kDensityTol || v >= 1.0 - kDensityTol) return Germ::Touch;
    return Germ::Interior;
}

Germ germ(const MeasureSpec& spec, double t, bool left) {
    for (const auto& reg : spec.regions()) {
        const bool covers = left ? (reg.span.lo < t && t <= reg.span.hi) : (reg.span.lo <= t && t < reg.span.hi);
        if (!covers) continue;
        switch (reg.kind) {
        case Density::Zero: return Germ::Zero;
        case Density::One: return Germ::One;
        case Density::Partial: return partial_germ(reg.coeffs, t);
        }
    }
    return Germ::Zero;
}

FlatCase case_of(Germ l, Germ r) {
    using G = Germ;
    if (l == G::Interior && r == G::Interior) return FlatCase::Case1;
    if (l == G::Interior && r == G::Zero) return FlatCase::Case2;
    if (l == G::Interior && r == G::One) return FlatCase::Case3;
    if (l == G::Zero && r == G::Interior) return FlatCase::Case4;
    if (l == G::One && r == G::Interior) return FlatCase::Case5;
    return FlatCase::Unclassified;
}

// Maximal runs of touching Partial regions.
std::vector<std::vector<const DensityRegion*>> partial_runs(const MeasureSpec& spec) {
    std::vector<std::vector<const DensityRegion*>> runs;
    for (const auto& reg : spec.regions()) {
        if (reg.kind != Density::Partial) continue;
        if (!runs.empty() && runs.back().back()->span.hi == reg.span.lo)
            runs.back().push_back(&reg);
        else
            runs.push_back({&reg});
    }
    return runs;
}

} // namespace

std::vector<FlatPoint> flat_boundary_points(const MeasureSpec& spec) {
    std::vector<FlatPoint> out;
    for (const auto& run : partial_runs(spec)) {
        std::vector<double> special;
        for (const auto* reg : run) {
            special.push_back(reg->span.lo);
            special.push_back(reg->span.hi);
            const std::vector<double> one = [&] {
                auto v = reg->coeffs;
                v[0] -= 1.0;
                return v;
            }();
            // Polished double roots are only good to about sqrt(eps).
            const double eps = 1e-6 * std::max(1.0, reg->span.length());
            for (const auto* c : {&reg->coeffs, &one})
                for (double x : poly_real_roots(*c, reg->span.lo, reg->span.hi))
                    if (x > reg->span.lo + eps && x < reg->span.hi - eps) special.push_back(x);
        }
        std::sort(special.begin(), special.end());
        special.erase(std::unique(special.begin(), special.end(),
                                  [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x)); }),
                      special.end());
        auto push = [&](FlatPoint f) {
            // Interior case-1 pieces around a case-1 point merge into one open interval.
            if (f.kind == FlatCase::Case1 && !out.empty() && out.back().kind == FlatCase::Case1 &&
                out.back().span.hi == f.span.lo) {
                out.back().span.hi = f.span.hi;
                return;
            }
            out.push_back(f);
        };
        for (std::size_t i = 0; i < special.size(); ++i) {
            const double t = special[i];
            push({{t, t}, case_of(germ(spec, t, true), germ(spec, t, false))});
            if (i + 1 < special.size()) push({{t, special[i + 1]}, FlatCase::Case1});
        }
    }
    return out;
}

Probe boundary_probe(const MeasureSpec& spec, double t, int depths, double angle) {
    Probe p;
    const cplx dir = std::polar(1.0, angle);
    for (int k = 1; k <= depths; ++k) {
        const cplx w = t + std::ldexp(1.0, -k) * dir;
        const ChiEta ce = chi_eta_from_w(spec, w);
        p.w.push_back(w);
        p.values.push_back({ce.chi, ce.eta});
    }
    if (!p.values.empty()) p.limit = p.values.back();
    if (p.values.size() >= 2) p.bound = distance(p.values.back(), p.values[p.values.size() - 2]);
    return p;
}

Probe radial_probe(const MeasureSpec& spec, int depths) {
    Probe p;
    const double mid = 0.5 * (spec.a() + spec.b());
    const cplx dir = std::polar(1.0, 0.25 * kPi);
    for (int k = 1; k <= depths; ++k) {
        const cplx w = mid + std::ldexp(1.0, k) * dir;
        const ChiEta ce = chi_eta_from_w(spec, w);
        p.w.push_back(w);
        p.values.push_back({ce.chi, ce.eta});
    }
    if (!p.values.empty()) p.limit = p.values.back();
    if (p.values.size() >= 2) p.bound = distance(p.values.back(), p.values[p.values.size() - 2]);
    return p;
}

// ---------------------------------------------------------------------------
// Adaptive sampling

namespace {

constexpr double kMaxGap = 0.05;
constexpr double kMaxTurn = 0.2;
constexpr double kMinStep = 1e-10;

// Monotone map s in (0,1) -> t over one open component.
struct ParamMap {
    Interval span;
    double len;

    double t(double s) const {
        const bool flo = std::isfinite(span.lo), fhi = std::isfinite(span.hi);
        if (flo && fhi) return span.lo + span.length() * 0.5 * (1.0 - std::cos(kPi * s));
        if (fhi) return span.hi - len * std::tan(0.5 * kPi * (1.0 - s));
        if (flo) return span.lo + len * std::tan(0.5 * kPi * s);
        return len * std::tan(kPi * (s - 0.5));
    }
};

struct Node {
    std::size_t comp;
    double s; // parameter in (0,1); unused for point components
    EdgeSample sample;
};

double turn_angle(const EdgePoint& p0, const EdgePoint& p1, const EdgePoint& p2) {
    const double ax = p1.chi - p0.chi, ay = p1.eta - p0.eta;
    const double bx = p2.chi - p1.chi, by = p2.eta - p1.eta;
    if ((ax == 0.0 && ay == 0.0) || (bx == 0.0 && by == 0.0)) return 0.0;
    return std::abs(std::atan2(ax * by - ay * bx, ax * bx + ay * by));
}

bool is_cusp(const EdgeSample& s) { return s.edge_case == 2 || s.edge_case == 4 || s.edge_case == 7 || s.edge_case == 9; }

class Sampler {
public:
    Sampler(const MeasureSpec& spec, int budget)
        : spec_(spec), rd_(r_decomposition(spec)), budget_(std::max(budget, 16)) {}

    std::vector<EdgeSample> run() {
        const auto& comps = rd_.components;
        std::size_t n_open = 0;
        for (const auto& c : comps)
            if (!c.span.is_point()) ++n_open;
        const int per = std::max<int>(8, budget_ / static_cast<int>(std::max<std::size_t>(n_open, 1)));
        const double len = std::max(1.0, spec_.b() - spec_.a());

        for (std::size_t i = 0; i < comps.size(); ++i) {
            maps_.push_back({comps[i].span, len});
            if (comps[i].span.is_point()) {
                add(i, 0.0);
                continue;
            }
            for (int k = 0; k < per; ++k) add(i, (k + 0.5) / per);
            // Ends facing a gap of R are approached at square-root speed; walk in geometrically.
            const bool gap_left = std::isfinite(comps[i].span.lo) && (i == 0 || comps[i - 1].span.hi != comps[i].span.lo);
            const bool gap_right =
                std::isfinite(comps[i].span.hi) && (i + 1 == comps.size() || comps[i + 1].span.lo != comps[i].span.hi);
            for (int k = 2; k <= 7; ++k) {
                const double d = std::pow(10.0, -k);
                if (gap_left) add(i, d);
                if (gap_right) add(i, 1.0 - d);
            }
        }
        locate_cusps();
        refine();
        std::vector<EdgeSample> out;
        for (const auto& [key, node] : nodes_) out.push_back(node.sample);
        return out;
    }

    const RDecomposition& decomposition() const { return rd_; }

private:
    using Key = std::pair<std::size_t, double>;

    double t_of(std::size_t comp, double s) const {
        const auto& c = rd_.components[comp];
        return c.span.is_point() ? c.span.lo : maps_[comp].t(s);
    }

    bool add(std::size_t comp, double s) {
        Key key{comp, s};
        if (nodes_.count(key)) return false;
        const double t = t_of(comp, s);
        if (!std::isfinite(t)) return false;
        try {
            nodes_[key] = Node{comp, s, local_geometry(spec_, rd_, t)};
        } catch (const Error&) {
            // Roundoff at a component end can make the classification ambiguous; keep the point.
            EdgeSample e;
            e.t = t;
            e.tag = rd_.components[comp].tag;
            try {
                e.point = edge_point(spec_, rd_, t);
            } catch (const Error&) {
                return false;
            }
            nodes_[key] = Node{comp, s, e};
        }
        return true;
    }

    // Bisection on the sign of f''' inside each Mu / LambdaMinusMu component.
    void locate_cusps() {
        std::vector<std::pair<std::size_t, double>> found;
        const Node* prev = nullptr;
        for (const auto& [key, node] : nodes_) {
            const auto tag = rd_.components[node.comp].tag;
            const bool open = tag == RTag::Mu || tag == RTag::LambdaMinusMu;
            if (prev && open && prev->comp == node.comp) {
                const double fa = prev->sample.derivs.f3, fb = node.sample.derivs.f3;
                if (fa != 0.0 && fb != 0.0 && (fa > 0) != (fb > 0)) {
                    double lo = prev->s, hi = node.s, flo = fa;
                    for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const double fm = f3(node.comp, mid);
                        if (fm == 0.0) {
                            lo = hi = mid;
                            break;
                        }
                        if ((fm > 0) == (flo > 0)) {
                            lo = mid;
                            flo = fm;
                        } else {
                            hi = mid;
                        }
                    }
                    const double sc = 0.5 * (lo + hi);
                    // A pole of f''' also flips the sign; reject when |f'''| grows.
                    if (std::abs(f3(node.comp, sc)) <= std::min(std::abs(fa), std::abs(fb))) found.emplace_back(node.comp, sc);
                }
            }
            prev = &node;
        }
        for (const auto& [comp, sc] : found) {
            add(comp, sc);
            cusps_.emplace_back(comp, sc);
            for (double d : {1e-2, 1e-3, 1e-4}) {
                if (sc - d > 0.0) add(comp, sc - d);
                if (sc + d < 1.0) add(comp, sc + d);
            }
        }
    }

    double f3(std::size_t comp, double s) const {
        const double t = t_of(comp, s);
        return derivs_of(real_extension(spec_, rd_, t), t).f3;
    }

    bool near_cusp(std::size_t comp, double s) const {
        for (const auto& [c, sc] : cusps_)
            if (c == comp && std::abs(s - sc) < 1e-6) return true;
        return false;
    }

    // New parameter between a and b (in t order) on the component of a or b.
    void split(const Node& a, const Node& b, std::vector<Key>& todo) const {
        const bool pa = rd_.components[a.comp].span.is_point();
        const bool pb = rd_.components[b.comp].span.is_point();
        if (a.comp == b.comp && !pa) {
            if (b.s - a.s > kMinStep) todo.emplace_back(a.comp, 0.5 * (a.s + b.s));
            return;
        }
        if (!pa && 1.0 - a.s > kMinStep) todo.emplace_back(a.comp, 0.5 * (a.s + 1.0));
        if (!pb && b.s > kMinStep) todo.emplace_back(b.comp, 0.5 * b.s);
    }

    void refine() {
        const std::size_t cap = static_cast<std::size_t>(budget_) * 32 + 1024;
        for (int pass = 0; pass < 64 && nodes_.size() < cap; ++pass) {
            std::vector<const Node*> seq;
            for (const auto& [key, node] : nodes_) seq.push_back(&node);
            std::vector<Key> todo;
            for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
                if (!contiguous(seq[i]->comp, seq[i + 1]->comp)) continue;
                if (distance(seq[i]->sample.point, seq[i + 1]->sample.point) >= kMaxGap) split(*seq[i], *seq[i + 1], todo);
            }
            for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
                if (!contiguous(seq[i - 1]->comp, seq[i]->comp) || !contiguous(seq[i]->comp, seq[i + 1]->comp)) continue;
                if (near_cusp(seq[i]->comp, seq[i]->s) || is_cusp(seq[i]->sample)) continue;
                if (turn_angle(seq[i - 1]->sample.point, seq[i]->sample.point, seq[i + 1]->sample.point) > kMaxTurn) {
                    split(*seq[i - 1], *seq[i], todo);
                    split(*seq[i], *seq[i + 1], todo);
                }
            }
            std::size_t added = 0;
            for (const auto& [c, s] : todo)
                if (add(c, s)) ++added;
            if (added == 0) break;
        }
    }

    // Components i <= j in t order with no gap of R between them.
    bool contiguous(std::size_t i, std::size_t j) const {
        for (std::size_t k = i; k < j; ++k)
            if (rd_.components[k].span.hi != rd_.components[k + 1].span.lo) return false;
        return true;
    }

    struct KeyLess {
        bool operator()(const Key& a, const Key& b) const {
            if (a.first != b.first) return a.first < b.first;
            return a.second < b.second;
        }
    };

    const MeasureSpec& spec_;
    RDecomposition rd_;
    int budget_;
    std::vector<ParamMap> maps_;
    std::map<Key, Node, KeyLess> nodes_;
    std::vector<std::pair<std::size_t, double>> cusps_;
};

} // namespace

std::vector<EdgeSample> sample_edge(const MeasureSpec& spec, int budget) {
    if (budget < 16) throw Error(Errc::MalformedSpec, "budget must be at least 16");
    return Sampler(spec, budget).run();
}

bool linear_contact(const MeasureSpec& spec, double t) {
    for (bool left : {true, false}) {
        if (germ(spec, t, left) != Germ::Touch) continue;
        for (const auto& reg : spec.regions()) {
            if (reg.kind != Density::Partial) continue;
            const bool covers = left ? (reg.span.lo < t && t <= reg.span.hi) : (reg.span.lo <= t && t < reg.span.hi);
            if (covers && std::abs(poly_eval(poly_derivative(reg.coeffs), t)) <= 1e-9) return false;
        }
    }
    return true;
}

BoundaryAssembly assemble_boundary(const MeasureSpec& spec, int budget) {
    BoundaryAssembly out;
    out.tangency = tangency_point(spec);
    const RDecomposition rd = r_decomposition(spec);
    const auto samples = sample_edge(spec, budget);

    // Run index per component: a new run starts after every gap in R.
    std::vector<int> run(rd.components.size(), 0);
    for (std::size_t k = 1; k < rd.components.size(); ++k)
        run[k] = run[k - 1] + (rd.components[k - 1].span.hi != rd.components[k].span.lo ? 1 : 0);
    int current = -1;
    for (const auto& s : samples) {
        const int r = run[*rd.locate(s.t)];
        if (r != current) {
            out.edge_segments.emplace_back();
            current = r;
        }
        out.edge_segments.back().push_back(s);
    }

    out.flat_points = flat_boundary_points(spec);
    for (const auto& f : out.flat_points) {
        if (!out.flat_segments.empty() && out.flat_segments.back().hi == f.span.lo)
            out.flat_segments.back().hi = f.span.hi;
        else
            out.flat_segments.push_back(f.span);
    }

    bool complete = true;
    for (const auto& f : out.flat_points) {
        if (f.kind != FlatCase::Unclassified) continue;
        FlatProbe fp;
        fp.t = f.span.lo;
        fp.linear_contact = linear_contact(spec, fp.t);
        try {
            const Probe p = boundary_probe(spec, fp.t, kProbeDepth);
            fp.limit = p.limit;
            fp.distance = distance(p.limit, {fp.t, 1.0});
            fp.approaching = fp.distance < distance(p.values[kProbeDepth / 2 - 1], {fp.t, 1.0});
        } catch (const Error&) {
            fp.approaching = false;
        }
        fp.resolved = fp.linear_contact && fp.approaching;
        complete = complete && fp.resolved;
        out.probes.push_back(fp);
    }
    out.complete = complete;
    return out;
}

std::string edge_csv(const std::vector<EdgeSample>& samples) {
    std::ostringstream os;
    os << "t,chi,eta,component,case,multiplicity,x1,x2,y1,y2,a1,a2,b1,b2\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& s : samples) {
        os << num(s.t) << ',' << num(s.point.chi) << ',' << num(s.point.eta) << ',' << rtag_name(s.tag) << ','
           << s.edge_case << ',' << s.multiplicity << ',' << num(s.x_vec[0]) << ',' << num(s.x_vec[1]) << ','
           << num(s.y_vec[0]) << ',' << num(s.y_vec[1]) << ',' << num(s.a1) << ',' << num(s.a2) << ','
           << num(s.b1) << ',' << num(s.b2) << '\n';
    }
    return os.str();
}

std::string boundary_json(const BoundaryAssembly& b) {
    using nlohmann::ordered_json;
    auto point = [](const EdgePoint& p) { return ordered_json::array({p.chi, p.eta}); };
    ordered_json j;
    j["tangency"] = point(b.tangency);
    j["edge_segments"] = ordered_json::array();
    for (const auto& seg : b.edge_segments) {
        ordered_json rows = ordered_json::array();
        for (const auto& s : seg) {
            ordered_json r;
            r["t"] = s.t;
            r["point"] = point(s.point);
            r["component"] = rtag_name(s.tag);
            r["case"] = s.edge_case;
            r["multiplicity"] = s.multiplicity;
            r["x"] = {s.x_vec[0], s.x_vec[1]};
            r["y"] = {s.y_vec[0], s.y_vec[1]};
            r["a"] = {s.a1, s.a2};
            r["b"] = {s.b1, s.b2};
            rows.push_back(std::move(r));
        }
        j["edge_segments"].push_back(std::move(rows));
    }
    j["flat_segments"] = ordered_json::array();
    for (const auto& f : b.flat_segments)
        j["flat_segments"].push_back({f.lo, f.hi});
    j["flat_points"] = ordered_json::array();
    for (const auto& f : b.flat_points)
        j["flat_points"].push_back({{"span", {f.span.lo, f.span.hi}}, {"kind", flat_case_name(f.kind)}});
    j["probes"] = ordered_json::array();
    for (const auto& p : b.probes) {
        ordered_json r;
        r["t"] = p.t;
        r["linear_contact"] = p.linear_contact;
        r["limit"] = point(p.limit);
        r["distance"] = p.distance;
        r["approaching"] = p.approaching;
        r["resolved"] = p.resolved;
        j["probes"].push_back(std::move(r));
    }
    j["complete"] = b.complete;
    return j.dump() + "\n";
}

} // namespace gtedge
