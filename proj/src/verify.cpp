#include <gtedge/verify.hpp>

#include <gtedge/combinatorics.hpp>
#include <gtedge/frontier.hpp>
#include <gtedge/kernel.hpp>
#include <gtedge/measure.hpp>
#include <gtedge/presets.hpp>
#include <gtedge/saddle.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace gtedge {

bool SuiteReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"measure", "saddle", "frontier", "kernel", "combinatorics",
                                                   "presets"};
    return names;
}

namespace {

using boost::multiprecision::cpp_int;

// Worst value seen by a check, reported in the detail line.
struct Worst {
    double value = 0.0;
    std::string where;
    int failures = 0;

    void see(double v, double tol, const std::string& at) {
        if (!(v <= tol)) ++failures;
        if (!(v <= value)) {
            value = v;
            where = at;
        }
    }
    CheckResult result(const std::string& name, double tol) const {
        return {name, failures == 0, fmt::format("worst {:.3g} (tol {:.0e}) at {}; {} failures", value, tol, where.empty() ? "-" : where, failures)};
    }
};

double uniform(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

double log_uniform(std::mt19937_64& g, double lo, double hi) {
    return std::exp(uniform(g, std::log(lo), std::log(hi)));
}

std::string at_w(const std::string& preset_name, cplx w) {
    return fmt::format("{} w=({:.6g},{:.6g})", preset_name, w.real(), w.imag());
}

// Interior sample points of an R component; unbounded ends are cut at distance 4.
std::vector<double> interior_points(const RComponent& c, int count) {
    std::vector<double> out;
    if (c.span.is_point()) return {c.span.lo};
    double lo = c.span.lo, hi = c.span.hi;
    if (!std::isfinite(lo)) lo = hi - 4.0;
    if (!std::isfinite(hi)) hi = lo + 4.0;
    const double margin = 1e-3 * (hi - lo);
    for (int k = 0; k < count; ++k) out.push_back(lo + margin + (hi - lo - 2.0 * margin) * (k + 0.5) / count);
    return out;
}

// ---------------------------------------------------------------------------

SuiteReport measure_suite() {
    SuiteReport rep{"measure", {}};
    std::mt19937_64 g(11);
    Worst closed, fd, conj, signs;
    int sign_fail = 0;
    bool disjoint_ok = true, open_ok = true;
    for (const auto& name : preset_names()) {
        const Preset p = preset(name);
        const MeasureSpec& m = p.spec;
        for (int i = 0; i < 100; ++i) {
            const double im = log_uniform(g, 1e-3, 10.0) * (i % 2 ? -1.0 : 1.0);
            const cplx w(uniform(g, m.a() - 1.0, m.b() + 1.0), im);
            const cplx c = cauchy(m, w), e = p.closed_c(w);
            closed.see(std::abs(c - e) / std::abs(e), 1e-9, at_w(name, w));
            conj.see(std::abs(cauchy(m, std::conj(w)) - std::conj(c)) / std::abs(c), 1e-14, at_w(name, w));
        }
        for (int i = 0; i < 30; ++i) {
            const cplx w(uniform(g, m.a() - 1.0, m.b() + 1.0), log_uniform(g, 0.1, 10.0));
            const double h = 1e-5;
            for (int k = 1; k <= 3; ++k) {
                // Central difference of the order k-1 derivative.
                auto lower = [&](cplx z) { return k == 1 ? cauchy(m, z) : cauchy_deriv(m, z, k - 1); };
                const cplx num = (lower(w + h) - lower(w - h)) / (2.0 * h);
                const cplx d = cauchy_deriv(m, w, k);
                fd.see(std::abs(num - d) / std::max(std::abs(d), 1e-3), 1e-6, at_w(name, w) + fmt::format(" order {}", k));
            }
        }
        const RDecomposition rd = r_decomposition(m);
        for (std::size_t i = 0; i < rd.components.size(); ++i) {
            const auto& c = rd.components[i];
            if (i > 0 && !(rd.components[i - 1].span.hi <= c.span.lo)) disjoint_ok = false;
            if (c.span.is_point()) {
                // A point of R must be flanked by open components for R to be open.
                const bool left = i > 0 && rd.components[i - 1].span.hi == c.span.lo;
                const bool right = i + 1 < rd.components.size() && rd.components[i + 1].span.lo == c.span.hi;
                if (!left || !right) open_ok = false;
            }
            if (c.tag != RTag::Mu && c.tag != RTag::LambdaMinusMu) continue;
            for (double t : interior_points(c, 20)) {
                const RealExtension e = real_extension(m, rd, t);
                const bool ok = c.tag == RTag::Mu ? (e.exp_c > 0.0 && e.c1 < 0.0) : (e.exp_c < 0.0 && e.c1 > 0.0);
                if (!ok) ++sign_fail;
            }
        }
    }
    rep.checks.push_back(closed.result("cauchy matches closed forms", 1e-9));
    rep.checks.push_back(fd.result("cauchy_deriv matches central differences", 1e-6));
    rep.checks.push_back(conj.result("C(conj w) = conj C(w)", 1e-14));
    rep.checks.push_back({"analytic-extension signs on R_mu and R_lambda-mu", sign_fail == 0,
                          fmt::format("{} sign violations", sign_fail)});
    rep.checks.push_back({"R components disjoint and R open", disjoint_ok && open_ok,
                          fmt::format("disjoint {} open {}", disjoint_ok, open_ok)});
    return rep;
}

// ---------------------------------------------------------------------------

SuiteReport saddle_suite() {
    SuiteReport rep{"saddle", {}};
    std::mt19937_64 g(23);
    Worst round, image;
    int root_violations = 0, eta_violations = 0, errors = 0;
    std::string first_violation;
    for (const auto& name : preset_names()) {
        const MeasureSpec m = preset(name).spec;
        for (int i = 0; i < 200; ++i) {
            const cplx w(uniform(g, m.a() - 0.5, m.b() + 0.5), log_uniform(g, 1e-2, 2.0));
            try {
                const ChiEta ce = chi_eta_from_w(m, w);
                image.see(in_trapezoid(m, ce.chi, ce.eta, 1e-9) ? 0.0 : 1.0, 0.0, at_w(name, w));
                const SaddleContext ctx(m, ce.chi, ce.eta);
                const auto r = upper_root(ctx);
                round.see(r ? std::abs(*r - w) : kInf, 1e-8, at_w(name, w));
            } catch (const Error& e) {
                round.see(kInf, 1e-8, at_w(name, w) + " " + e.what());
            }
        }
        for (int i = 0; i < 500; ++i) {
            const double eta = i % 10 == 0 ? 0.0 : uniform(g, 0.0, 1.0);
            const double chi = uniform(g, m.a() + 1.0 - eta, m.b());
            try {
                const SaddleContext ctx(m, chi, eta);
                const RootReport rr = find_roots(ctx);
                const auto v = root_bound_violations(ctx, rr);
                if (!v.empty()) {
                    ++root_violations;
                    if (first_violation.empty())
                        first_violation = fmt::format("{} ({:.6g},{:.6g}): {}", name, chi, eta, v.front());
                }
                if (rr.upper > 0 && !(eta > 0.0)) ++eta_violations;
            } catch (const Error& e) {
                ++errors;
                if (first_violation.empty())
                    first_violation = fmt::format("{} ({:.6g},{:.6g}): {}", name, chi, eta, e.what());
            }
        }
    }
    const MeasureSpec a = preset("a").spec;
    const ChiEta hand = chi_eta_from_w(a, cplx(0.0, 1.0));
    const double hand_err = std::hypot(hand.chi - (std::sqrt(2.0) - 1.0), hand.eta - (3.0 - 2.0 * std::sqrt(2.0)));
    rep.checks.push_back(round.result("upper_root inverts chi_eta_from_w", 1e-8));
    rep.checks.push_back(image.result("chi_eta_from_w lands in the closed trapezoid", 0.0));
    rep.checks.push_back({"root-count bounds on random trapezoid points", root_violations == 0 && errors == 0,
                          fmt::format("{} violations, {} errors{}", root_violations, errors,
                                      first_violation.empty() ? "" : "; first " + first_violation)});
    rep.checks.push_back({"eta > 0 wherever a non-real root exists", eta_violations == 0,
                          fmt::format("{} violations", eta_violations)});
    rep.checks.push_back({"chi_eta_from_w(a, i) = (sqrt2-1, 3-2sqrt2)", hand_err < 1e-12,
                          fmt::format("error {:.3g}", hand_err)});
    return rep;
}

// ---------------------------------------------------------------------------

bool is_cusp(int c) { return c == 2 || c == 4 || c == 7 || c == 9; }

double point_segment_distance(const EdgePoint& p, const EdgePoint& a, const EdgePoint& b) {
    const double dx = b.chi - a.chi, dy = b.eta - a.eta;
    const double len2 = dx * dx + dy * dy;
    double s = len2 > 0.0 ? ((p.chi - a.chi) * dx + (p.eta - a.eta) * dy) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return std::hypot(p.chi - a.chi - s * dx, p.eta - a.eta - s * dy);
}

// Edge segments as polylines with cumulative arc length.
struct Polyline {
    const std::vector<std::vector<EdgeSample>>& segs;
    std::vector<std::vector<double>> arc;

    explicit Polyline(const std::vector<std::vector<EdgeSample>>& s) : segs(s) {
        for (const auto& seg : segs) {
            std::vector<double> a{0.0};
            for (std::size_t i = 1; i < seg.size(); ++i) a.push_back(a.back() + distance(seg[i - 1].point, seg[i].point));
            arc.push_back(std::move(a));
        }
    }

    // Distance from sample (si, i) to the parts of the curve more than
    // `exclude` away along the arc.
    double clearance(std::size_t si, std::size_t i, double exclude) const {
        const EdgePoint& p = segs[si][i].point;
        double best = kInf;
        for (std::size_t k = 0; k < segs.size(); ++k)
            for (std::size_t j = 0; j + 1 < segs[k].size(); ++j) {
                if (k == si && std::min(std::abs(arc[k][j] - arc[si][i]), std::abs(arc[k][j + 1] - arc[si][i])) <= exclude)
                    continue;
                best = std::min(best, point_segment_distance(p, segs[k][j].point, segs[k][j + 1].point));
            }
        return best;
    }
};

SuiteReport frontier_suite() {
    SuiteReport rep{"frontier", {}};
    Worst e12, cusp_a1, cusp_a2, cont, taylor;
    int trapezoid_fail = 0, table_fail = 0, curvature_fail = 0, transition_fail = 0, transitions = 0;
    std::string first_curv, first_trans;

    // Case table is a bijection onto 1..9.
    const RTag tags[] = {RTag::Mu, RTag::LambdaMinusMu, RTag::Zero, RTag::One, RTag::Two};
    std::map<int, int> seen;
    for (RTag tag : tags)
        for (int mlt = 1; mlt <= 3; ++mlt)
            if (int c = case_number(tag, mlt)) ++seen[c];
    for (int c = 1; c <= 9; ++c)
        if (seen[c] != 1) ++table_fail;

    for (const auto& name : preset_names()) {
        const MeasureSpec m = preset(name).spec;
        const RDecomposition rd = r_decomposition(m);
        const BoundaryAssembly asm_ = assemble_boundary(m, 256);
        const Polyline poly(asm_.edge_segments);
        std::vector<EdgePoint> cusps;
        for (const auto& seg : asm_.edge_segments)
            for (const auto& s : seg)
                if (is_cusp(s.edge_case)) cusps.push_back(s.point);
        for (std::size_t si = 0; si < asm_.edge_segments.size(); ++si) {
            const auto& seg = asm_.edge_segments[si];
            for (std::size_t i = 0; i < seg.size(); ++i) {
                const EdgeSample& s = seg[i];
                const std::string at = fmt::format("{} t={:.6g}", name, s.t);
                if (s.tag == RTag::One) e12.see(std::abs(s.point.chi - s.t), 1e-12, at);
                if (s.tag == RTag::Two) e12.see(std::abs(s.point.chi + s.point.eta - 1.0 - s.t), 1e-12, at);
                if (!in_trapezoid(m, s.point.chi, s.point.eta, 1e-9)) ++trapezoid_fail;
                if (case_number(s.tag, s.multiplicity) != s.edge_case || s.edge_case == 0) ++table_fail;
                if (is_cusp(s.edge_case)) {
                    cusp_a1.see(std::max(std::abs(s.a1), std::abs(s.b1)) / std::max(std::abs(s.a2), 1.0), 1e-6, at);
                    cusp_a2.see(1.0 / std::min(std::abs(s.a2), std::abs(s.b2)), 1e6, at);
                } else if (i > 0 && i + 1 < seg.size() && !is_cusp(seg[i - 1].edge_case) &&
                           !is_cusp(seg[i + 1].edge_case)) {
                    if (!(discrete_curvature(seg[i - 1].point, s.point, seg[i + 1].point) < 0.0)) {
                        ++curvature_fail;
                        if (first_curv.empty()) first_curv = at;
                    }
                }

                // Membership flips across the curve along y, except near cusps and
                // where another part of the boundary (edge or flat top) comes closer
                // than the offset.
                const double near_cusp = std::accumulate(
                    cusps.begin(), cusps.end(), kInf,
                    [&](double d, const EdgePoint& c) { return std::min(d, distance(c, s.point)); });
                double flat_gap = kInf;
                for (const auto& f : asm_.flat_segments)
                    flat_gap = std::min(flat_gap, std::hypot(s.point.chi - std::clamp(s.point.chi, f.lo, f.hi),
                                                             s.point.eta - 1.0));
                if (near_cusp < 1e-2 || poly.clearance(si, i, 4e-3) < 2e-3 || flat_gap < 2e-3) continue;
                const double len = std::hypot(s.y_vec[0], s.y_vec[1]);
                bool inside[2] = {false, false};
                bool skip = false;
                for (int side = 0; side < 2 && !skip; ++side) {
                    const double h = (side == 0 ? 1e-3 : -1e-3) / len;
                    const double chi = s.point.chi + h * s.y_vec[0], eta = s.point.eta + h * s.y_vec[1];
                    if (!in_trapezoid(m, chi, eta, 0.0)) {
                        skip = true;
                        break;
                    }
                    try {
                        inside[side] = liquid_membership(SaddleContext(m, chi, eta)).inside;
                    } catch (const Error& e) {
                        skip = true;
                        ++transition_fail;
                        if (first_trans.empty()) first_trans = at + " " + e.what();
                    }
                }
                if (skip) continue;
                ++transitions;
                if (inside[0] == inside[1]) {
                    ++transition_fail;
                    if (first_trans.empty()) first_trans = at;
                }
            }
        }

        for (const auto& c : rd.components) {
            if (c.span.is_point()) continue;
            for (double t : interior_points(c, 5)) {
                const EdgePoint e = edge_point(m, rd, t);
                const ChiEta l = chi_eta_from_w(m, cplx(t, 1e-8));
                cont.see(std::hypot(e.chi - l.chi, e.eta - l.eta), 1e-6, fmt::format("{} t={:.6g}", name, t));
            }
        }

        // Taylor check of a(s) x + b(s) y against edge_point at t +- 1e-3.
        for (const auto& c : rd.components)
            for (double t : interior_points(c, 3)) {
                const EdgeSample s = local_geometry(m, rd, t);
                const double det = s.x_vec[0] * s.y_vec[1] - s.x_vec[1] * s.y_vec[0];
                for (double h : {1e-3, -1e-3}) {
                    if (!rd.locate(s.t + h)) continue;
                    const EdgePoint q = edge_point(m, rd, s.t + h);
                    const double dx = q.chi - s.point.chi, dy = q.eta - s.point.eta;
                    const double al = (dx * s.y_vec[1] - dy * s.y_vec[0]) / det;
                    const double be = (s.x_vec[0] * dy - s.x_vec[1] * dx) / det;
                    const double ea = std::abs(al - (s.a1 * h + s.a2 * h * h));
                    const double eb = std::abs(be - (s.b1 * h * h + s.b2 * h * h * h));
                    const double scale = std::max({1.0, std::abs(s.a2), std::abs(s.b2)});
                    taylor.see(std::max(ea / (h * h * h), eb / (h * h * h * h)) / (100.0 * scale), 1.0,
                               fmt::format("{} t={:.6g}", name, s.t));
                }
            }
    }
    rep.checks.push_back(e12.result("E1/E2 identities chi=t and chi+eta-1=t", 1e-12));
    rep.checks.push_back({"edge samples lie in the closed trapezoid", trapezoid_fail == 0,
                          fmt::format("{} outside", trapezoid_fail)});
    rep.checks.push_back({"case table bijection", table_fail == 0, fmt::format("{} mismatches", table_fail)});
    rep.checks.push_back({"negative curvature at parabolic samples", curvature_fail == 0,
                          fmt::format("{} failures{}", curvature_fail, first_curv.empty() ? "" : " first " + first_curv)});
    rep.checks.push_back(cusp_a1.result("cusp samples: |a1|,|b1| small", 1e-6));
    rep.checks.push_back(cusp_a2.result("cusp samples: |a2|,|b2| > 1e-6 (reported as 1/min)", 1e6));
    rep.checks.push_back({"membership flips across the edge along y", transition_fail == 0,
                          fmt::format("{} of {} failed{}", transition_fail, transitions,
                                      first_trans.empty() ? "" : " first " + first_trans)});
    rep.checks.push_back(cont.result("edge_point = chi_eta_from_w(t + 1e-8 i)", 1e-6));
    rep.checks.push_back(taylor.result("local geometry matches third-order Taylor residual", 1.0));
    return rep;
}

// ---------------------------------------------------------------------------

// Strictly decreasing rows with last entry 0 and first entry <= width.
void for_each_top(int n, long width, const std::function<void(const TopRow&)>& visit) {
    std::vector<long> x(n);
    std::function<void(int, long)> rec = [&](int i, long below) {
        if (i < 0) {
            visit(TopRow{x});
            return;
        }
        for (long v = below + 1; v <= width - i; ++v) {
            x[i] = v;
            rec(i - 1, v);
        }
    };
    x[n - 1] = 0;
    if (n == 1) {
        visit(TopRow{x});
        return;
    }
    rec(n - 2, 0);
}

std::vector<SiteCoord> all_sites(const TopRow& top) {
    std::vector<SiteCoord> out;
    for (int r = 1; r < top.n(); ++r)
        for (long u = top.x.back() + top.n() - r; u <= top.x.front() + 1; ++u) out.push_back({u, r});
    return out;
}

Rational binomial_poly(const Rational& x, int k) {
    if (k < 0) return 0;
    Rational r = 1;
    for (int j = 0; j < k; ++j) r *= (x - j) / Rational(j + 1);
    return r;
}

SuiteReport kernel_suite() {
    SuiteReport rep{"kernel", {}};
    long det_sets = 0, det_fail = 0;
    std::string det_first;
    for (int n = 2; n <= 4; ++n)
        for_each_top(n, 6, [&](const TopRow& top) {
            const auto sites = all_sites(top);
            const std::size_t S = sites.size();
            auto test = [&](const std::vector<SiteCoord>& set) {
                ++det_sets;
                if (correlation(top, set) != empirical_correlation(top, set)) {
                    ++det_fail;
                    if (det_first.empty()) det_first = fmt::format("top[0]={} n={}", top.x.front(), top.n());
                }
            };
            for (std::size_t i = 0; i < S; ++i) {
                test({sites[i]});
                for (std::size_t j = i + 1; j < S; ++j) {
                    test({sites[i], sites[j]});
                    for (std::size_t k = j + 1; k < S; ++k) test({sites[i], sites[j], sites[k]});
                }
            }
        });
    rep.checks.push_back({"correlation equals enumeration (n<=4, width<=6, |sites|<=3)", det_fail == 0,
                          fmt::format("{} of {} site sets differ{}", det_fail, det_sets, det_first.empty() ? "" : " at " + det_first)});

    int semi_fail = 0;
    for (int r = 1; r <= 6; ++r)
        for (int s = r + 2; s <= 6; ++s)
            for (int mid = r + 1; mid < s; ++mid)
                for (long u = -8; u <= 8; ++u)
                    for (long v = -8; v <= 8; ++v) {
                        Rational sum = 0;
                        for (long z = u; z <= v; ++z) sum += phi(r, mid, u, z) * phi(mid, s, z, v);
                        if (sum != phi(r, s, u, v)) ++semi_fail;
                    }
    rep.checks.push_back({"phi semigroup identity", semi_fail == 0, fmt::format("{} failures", semi_fail)});

    int fdo_fail = 0;
    for (int n = 2; n <= 6; ++n)
        for (int r = 1; r < n; ++r)
            for (int s = r + 1; s <= n; ++s)
                for (long u = -8; u <= 8; ++u)
                    for (long v = -8; v <= 8; ++v) {
                        // Delta_v^{n-s} binom(v - u + s - r - 1, n - r - 1), s held fixed.
                        Rational d = 0;
                        const int k = n - s;
                        cpp_int c = 1;
                        for (int i = 0; i <= k; ++i) {
                            const Rational term = binomial_poly(Rational(v + i - u + s - r - 1), n - r - 1);
                            d += ((k - i) % 2 ? -1 : 1) * Rational(c) * term;
                            c = c * (k - i) / (i + 1);
                        }
                        if (v - u + s - r - 1 < 0) d = 0;
                        if (d != phi(r, s, u, v)) ++fdo_fail;
                    }
    rep.checks.push_back({"phi equals the finite-difference form", fdo_fail == 0, fmt::format("{} failures", fdo_fail)});

    std::mt19937_64 g(37);
    Worst gap;
    int monotone_fail = 0, diag_fail = 0;
    for (int q = 0; q < 20; ++q) {
        const int n = 2 + static_cast<int>(g() % 5);
        std::vector<long> x;
        long pos = 0;
        for (int i = 0; i < n; ++i) {
            x.push_back(pos);
            pos += 1 + static_cast<long>(g() % 3);
        }
        std::reverse(x.begin(), x.end());
        const TopRow top{x};
        const auto sites = all_sites(top);
        const SiteCoord a = sites[g() % sites.size()], b = sites[g() % sites.size()];
        const double exact = to_double(kernel(top, a, b));
        double prev = kInf;
        for (int nodes : {256, 512, 1024}) {
            const double err = std::abs(kernel_contour(top, a, b, default_contours(top, a, b, nodes)) - exact);
            if (err > prev * 1.0001 + 1e-13) ++monotone_fail;
            prev = err;
        }
        gap.see(prev, 1e-6, fmt::format("n={} ({},{})-({},{})", n, a.u, a.r, b.u, b.r));
        const Rational k = kernel(top, a, a);
        if (k < 0 || k > 1) ++diag_fail;
    }
    rep.checks.push_back(gap.result("kernel_contour agrees with kernel at 1024 nodes", 1e-6));
    rep.checks.push_back({"contour error shrinks as nodes double", monotone_fail == 0,
                          fmt::format("{} increases", monotone_fail)});
    rep.checks.push_back({"diagonal kernel entries lie in [0,1]", diag_fail == 0, fmt::format("{} outside", diag_fail)});
    return rep;
}

// ---------------------------------------------------------------------------

// Every strictly decreasing row of the given length with entries in [lo, hi].
std::vector<std::vector<long>> decreasing_rows(int len, long lo, long hi) {
    std::vector<std::vector<long>> out;
    std::vector<long> row(len);
    std::function<void(int, long)> rec = [&](int i, long cap) {
        if (i == len) {
            out.push_back(row);
            return;
        }
        for (long v = lo + (len - 1 - i); v <= cap; ++v) {
            row[i] = v;
            rec(i + 1, v - 1);
        }
    };
    rec(0, hi);
    return out;
}

double tv_distance(const TopRow& top, int samples, std::uint64_t enumerate_below, std::uint64_t seed, int& invalid) {
    const auto all = enumerate_patterns(top);
    std::map<GTPattern, long> hist;
    PatternSampler sampler(top, enumerate_below);
    for (int i = 0; i < samples; ++i) {
        const GTPattern p = sampler.sample(stream_seed(seed, static_cast<std::uint64_t>(i)));
        if (!valid_pattern(p) || p.rows.back() != top.x) ++invalid;
        ++hist[p];
    }
    double tv = 0.0;
    const double u = 1.0 / static_cast<double>(all.size());
    for (const auto& p : all) {
        auto it = hist.find(p);
        tv += std::abs((it == hist.end() ? 0.0 : static_cast<double>(it->second) / samples) - u);
    }
    return 0.5 * tv;
}

SuiteReport combinatorics_suite() {
    SuiteReport rep{"combinatorics", {}};
    int count_fail = 0, tops = 0, tiling_fail = 0;
    for (int n = 1; n <= 5; ++n)
        for_each_top(n, 7, [&](const TopRow& top) {
            ++tops;
            const auto all = enumerate_patterns(top);
            if (count_patterns(top) != BigInt(all.size())) ++count_fail;
            if (n <= 4)
                for (const auto& p : all)
                    if (!(from_tiling(to_tiling(p)) == p)) ++tiling_fail;
        });
    rep.checks.push_back({"count_patterns equals enumeration (n<=5, width<=7)", count_fail == 0,
                          fmt::format("{} of {} tops differ", count_fail, tops)});
    rep.checks.push_back({"tiling round trip", tiling_fail == 0, fmt::format("{} failures", tiling_fail)});

    int det_fail = 0;
    for (int k = 1; k <= 3; ++k)
        for (const auto& upper : decreasing_rows(k + 1, -2, 4))
            for (const auto& lower : decreasing_rows(k, -2, 4))
                if (interlaces(upper, lower) != interlaces_by_determinant(upper, lower)) ++det_fail;
    rep.checks.push_back({"interlacing agrees with the determinant test", det_fail == 0,
                          fmt::format("{} disagreements", det_fail)});

    int invalid = 0;
    const TopRow top{{6, 4, 2, 0}};
    const double tv_table = tv_distance(top, 100000, 1u << 14, 0, invalid);
    const double tv_seq = tv_distance(top, 100000, 0, 1, invalid);
    rep.checks.push_back({"sampler TV distance < 0.02 on (6,4,2,0), table path", tv_table < 0.02,
                          fmt::format("TV {:.4f}", tv_table)});
    rep.checks.push_back({"sampler TV distance < 0.02 on (6,4,2,0), coordinate path", tv_seq < 0.02,
                          fmt::format("TV {:.4f}", tv_seq)});
    rep.checks.push_back({"sampled patterns interlace", invalid == 0, fmt::format("{} invalid", invalid)});
    const bool same = sample_pattern(top, 42) == sample_pattern(top, 42);
    rep.checks.push_back({"sampling is deterministic per seed", same, same ? "identical" : "differs"});
    return rep;
}

// ---------------------------------------------------------------------------

SuiteReport presets_suite() {
    SuiteReport rep{"presets", {}};
    Worst closed, special;
    int case_fail = 0, complete_fail = 0;
    std::string complete_detail;
    for (const auto& name : preset_names()) {
        const Preset p = preset(name);
        const RDecomposition rd = r_decomposition(p.spec);
        if (name != "e" && name != "f")
            for (const auto& c : rd.components)
                if (!c.span.is_point())
                    for (double t : interior_points(c, 100)) {
                        const auto ref = p.closed_edge(t);
                        if (!ref) continue;
                        const EdgePoint e = edge_point(p.spec, rd, t);
                        closed.see(distance(e, *ref), 1e-9, fmt::format("{} t={:.6g}", name, t));
                    }
        for (const auto& sp : p.special_points) {
            if (sp.kind == PointKind::Tangency)
                special.see(distance(tangency_point(p.spec), sp.point), 1e-9, name + " " + sp.label);
            if (sp.kind == PointKind::Edge) {
                special.see(distance(edge_point(p.spec, rd, *sp.t), sp.point), 1e-9, name + " " + sp.label);
                if (local_geometry(p.spec, rd, *sp.t).edge_case != sp.expected_case) ++case_fail;
            }
        }
        const bool complete = assemble_boundary(p.spec, 128).complete;
        if (complete != p.expected_complete) ++complete_fail;
        complete_detail += fmt::format("{}={} ", name, complete ? "complete" : "partial");
    }
    rep.checks.push_back(closed.result("edge_point matches closed forms on (a)-(d)", 1e-9));
    rep.checks.push_back(special.result("special points reproduced", 1e-9));
    rep.checks.push_back({"special-point cases", case_fail == 0, fmt::format("{} mismatches", case_fail)});
    rep.checks.push_back({"completeness flags (a)-(e) complete, (f) partial", complete_fail == 0, complete_detail});
    return rep;
}

} // namespace

SuiteReport run_suite(const std::string& name) {
    if (name == "measure") return measure_suite();
    if (name == "saddle") return saddle_suite();
    if (name == "frontier") return frontier_suite();
    if (name == "kernel") return kernel_suite();
    if (name == "combinatorics") return combinatorics_suite();
    if (name == "presets") return presets_suite();
    throw std::invalid_argument("unknown suite '" + name + "'");
}

} // namespace gtedge
