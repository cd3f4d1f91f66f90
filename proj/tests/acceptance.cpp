// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Optional arguments select criteria by number.

#include <gtedge/combinatorics.hpp>
#include <gtedge/frontier.hpp>
#include <gtedge/kernel.hpp>
#include <gtedge/measure.hpp>
#include <gtedge/presets.hpp>
#include <gtedge/saddle.hpp>

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace gtedge;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double uniform(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

// Top rows with x_n = 0 and x_1 <= width; correlations are translation invariant.
void for_each_top(int n, long width, const std::function<void(const TopRow&)>& visit) {
    std::vector<long> x(n, 0);
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
    if (n == 1)
        visit(TopRow{x});
    else
        rec(n - 2, 0);
}

// Admissible sites up to one column past x_1, where every correlation vanishes.
std::vector<SiteCoord> all_sites(const TopRow& top) {
    std::vector<SiteCoord> out;
    for (int r = 1; r < top.n(); ++r)
        for (long u = top.x.back() + top.n() - r; u <= top.x.front() + 1; ++u) out.push_back({u, r});
    return out;
}

Outcome determinantal_exactness() {
    long sets = 0, fails = 0;
    for (int n = 2; n <= 4; ++n)
        for_each_top(n, 6, [&](const TopRow& top) {
            const auto sites = all_sites(top);
            auto test = [&](const std::vector<SiteCoord>& s) {
                ++sets;
                if (correlation(top, s) != empirical_correlation(top, s)) ++fails;
            };
            for (std::size_t i = 0; i < sites.size(); ++i) {
                test({sites[i]});
                for (std::size_t j = i + 1; j < sites.size(); ++j) {
                    test({sites[i], sites[j]});
                    for (std::size_t k = j + 1; k < sites.size(); ++k) test({sites[i], sites[j], sites[k]});
                }
            }
        });
    return {fails == 0, fmt::format("{} of {} site sets differ", fails, sets)};
}

Outcome contour_agreement() {
    std::mt19937_64 g(2024);
    double worst = 0.0;
    for (int q = 0; q < 20; ++q) {
        const int n = 2 + static_cast<int>(g() % 5);
        std::vector<long> x(n);
        long pos = -static_cast<long>(g() % 4);
        for (int i = n - 1; i >= 0; --i) {
            x[i] = pos;
            pos += 1 + static_cast<long>(g() % 3);
        }
        const TopRow top = make_top_row(x);
        std::vector<SiteCoord> sites;
        for (int r = 1; r < n; ++r)
            for (long u = x.back() + n - r; u <= x.front() + 2; ++u) sites.push_back({u, r});
        const SiteCoord a = sites[g() % sites.size()], b = sites[g() % sites.size()];
        const double exact = to_double(kernel(top, a, b));
        const double err = std::abs(kernel_contour(top, a, b, default_contours(top, a, b, 1024)) - exact);
        worst = std::max(worst, err);
    }
    return {worst < 1e-6, fmt::format("worst |contour - exact| = {:.3g} over 20 queries", worst)};
}

Outcome preset_regressions() {
    double worst = 0.0;
    int points = 0;
    std::string where;
    for (const std::string name : {"a", "b", "c", "d"}) {
        const Preset p = preset(name);
        for (const auto& sp : p.special_points) {
            double d;
            if (sp.kind == PointKind::Tangency)
                d = distance(tangency_point(p.spec), sp.point);
            else if (sp.kind == PointKind::Edge)
                d = distance(edge_point(p.spec, *sp.t), sp.point);
            else
                continue;
            ++points;
            if (d > worst) {
                worst = d;
                where = name + " " + sp.label;
            }
        }
    }
    return {worst <= 1e-9, fmt::format("{} points, worst distance {:.3g}{}", points, worst,
                                       where.empty() ? "" : " at " + where)};
}

Outcome case_classification() {
    std::set<int> cases;
    for (const auto& s : sample_edge(preset("c").spec, 512)) cases.insert(s.edge_case);
    const bool c_ok = cases == std::set<int>{1, 3, 5, 6, 8};
    std::string seen;
    for (int c : cases) seen += std::to_string(c) + " ";

    const EdgeSample d = local_geometry(preset("d").spec, 4.0 / 3.0);
    const bool d_ok = d.edge_case == 7 && std::abs(d.a1) < 1e-6 && std::abs(d.b1) < 1e-6 && std::abs(d.a2) > 1e-6 &&
                      std::abs(d.b2) > 1e-6;
    return {c_ok && d_ok, fmt::format("(c) cases {{ {}}}; (d) t=4/3 case {} a1={:.2g} b1={:.2g} a2={:.4g} b2={:.4g}",
                                      seen, d.edge_case, d.a1, d.b1, d.a2, d.b2)};
}

Outcome round_trip() {
    std::mt19937_64 g(7);
    double worst = 0.0;
    int failures = 0;
    for (const std::string name : {"a", "b", "c", "d"}) {
        const MeasureSpec m = preset(name).spec;
        for (int i = 0; i < 200; ++i) {
            const cplx w(uniform(g, m.a() - 0.5, m.b() + 0.5), std::exp(uniform(g, std::log(1e-2), std::log(2.0))));
            try {
                const ChiEta ce = chi_eta_from_w(m, w);
                const auto r = upper_root(SaddleContext(m, ce.chi, ce.eta));
                const double err = r ? std::abs(*r - w) : kInf;
                if (!(err <= 1e-8)) ++failures;
                worst = std::max(worst, err);
            } catch (const Error&) {
                ++failures;
            }
        }
    }
    const ChiEta hand = chi_eta_from_w(preset("a").spec, cplx(0.0, 1.0));
    const double hand_err = std::hypot(hand.chi - (std::sqrt(2.0) - 1.0), hand.eta - (3.0 - 2.0 * std::sqrt(2.0)));
    return {failures == 0 && hand_err <= 1e-12,
            fmt::format("800 round trips, {} failures, worst {:.3g}; hand value error {:.3g}", failures, worst, hand_err)};
}

Outcome root_counts() {
    std::mt19937_64 g(13);
    int violations = 0, errors = 0, total = 0;
    std::string first;
    for (const auto& name : preset_names()) {
        const MeasureSpec m = preset(name).spec;
        for (int i = 0; i < 500; ++i) {
            const double eta = i % 10 == 0 ? 0.0 : uniform(g, 0.0, 1.0);
            const double chi = uniform(g, m.a() + 1.0 - eta, m.b());
            ++total;
            try {
                const SaddleContext ctx(m, chi, eta);
                const auto v = root_bound_violations(ctx, find_roots(ctx));
                if (!v.empty()) {
                    ++violations;
                    if (first.empty()) first = fmt::format("{} ({:.6g},{:.6g}): {}", name, chi, eta, v.front());
                }
            } catch (const Error& e) {
                ++errors;
                if (first.empty()) first = fmt::format("{} ({:.6g},{:.6g}): {}", name, chi, eta, e.what());
            }
        }
    }
    return {violations == 0 && errors == 0, fmt::format("{} points, {} violations, {} errors{}", total, violations,
                                                        errors, first.empty() ? "" : "; first " + first)};
}

Outcome sampler_uniformity() {
    const TopRow top = make_top_row({6, 4, 2, 0});
    const auto all = enumerate_patterns(top);
    std::map<GTPattern, long> hist;
    PatternSampler sampler(top);
    const int samples = 100000;
    for (int i = 0; i < samples; ++i) ++hist[sampler.sample(stream_seed(0, static_cast<std::uint64_t>(i)))];
    double tv = 0.0;
    long outside = 0;
    for (const auto& p : all) {
        auto it = hist.find(p);
        tv += std::abs((it == hist.end() ? 0.0 : it->second / double(samples)) - 1.0 / double(all.size()));
    }
    const std::set<GTPattern> support(all.begin(), all.end());
    for (const auto& [p, c] : hist)
        if (!support.count(p)) outside += c;
    tv = 0.5 * (tv + outside / double(samples));

    int tops = 0, count_fail = 0;
    for (int n = 1; n <= 5; ++n)
        for_each_top(n, 7, [&](const TopRow& t) {
            ++tops;
            if (count_patterns(t) != BigInt(enumerate_patterns(t).size())) ++count_fail;
        });
    return {tv < 0.02 && count_fail == 0,
            fmt::format("TV {:.4f} over {} patterns; count sweep {} of {} tops differ", tv, all.size(), count_fail, tops)};
}

Outcome flat_boundary_limits() {
    const MeasureSpec e = preset("e").spec;
    double worst = 0.0;
    std::string detail;
    for (double t : {-1.0, 0.0, 1.0}) {
        const Probe p = boundary_probe(e, t, kProbeDepth);
        const double d = distance(p.limit, EdgePoint{t, 1.0});
        worst = std::max(worst, d);
        detail += fmt::format("t={:g}: {:.3g}; ", t, d);
    }
    return {worst <= 1e-3, detail + fmt::format("depth {}", kProbeDepth)};
}

struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "determinantal exactness", determinantal_exactness},
        {2, "contour/residue agreement", contour_agreement},
        {3, "preset regressions", preset_regressions},
        {4, "case classification", case_classification},
        {5, "homeomorphism round trip", round_trip},
        {6, "root-count invariants", root_counts},
        {7, "sampler uniformity", sampler_uniformity},
        {8, "flat-boundary limits", flat_boundary_limits},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    bool all = true;
    for (const auto& c : criteria) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        fmt::print("{} criterion {}: {}: {} [{:.1f} s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail, secs);
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
