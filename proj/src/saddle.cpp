#include <gtedge/saddle.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace gtedge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBottom = 1e-6;
constexpr int kRealNodes = 65;

std::vector<DensityPiece> split_density(const MeasureSpec& spec, double chi, double beta) {
    std::vector<DensityPiece> g = restrict_to(spec.pieces(), -kInf, beta);
    auto right = restrict_to(spec.pieces(), chi, kInf);
    g.insert(g.end(), right.begin(), right.end());
    // On [beta, chi] the density is phi - 1; gaps of mu contribute -1.
    for (const auto& reg : spec.regions()) {
        double lo = std::max(beta, reg.span.lo), hi = std::min(chi, reg.span.hi);
        // Slivers left by roundoff in beta = chi + eta - 1 carry no mass.
        if (!(hi - lo > 1e-13 * std::max(1.0, std::abs(lo)))) continue;
        if (reg.kind == Density::Zero) g.push_back({{lo, hi}, {-1.0}});
        else if (reg.kind == Density::Partial) {
            auto c = reg.coeffs;
            c[0] -= 1.0;
            g.push_back({{lo, hi}, c});
        }
    }
    return g;
}

} // namespace

SaddleContext::SaddleContext(const MeasureSpec& spec, double chi, double eta)
    : spec_(&spec), chi_(chi), eta_(eta) {
    if (!in_trapezoid(spec, chi, eta))
        throw Error(Errc::OutOfTrapezoid, "(chi, eta) outside the closed trapezoid");
    // Clamp roundoff so the sets are computed on the closed trapezoid.
    eta_ = std::clamp(eta_, 0.0, 1.0);
    chi_ = std::clamp(chi_, spec.a() + 1.0 - eta_, spec.b());
    sets_ = support_sets(spec, chi_, eta_);
    g_ = PiecewiseCauchy(split_density(spec, chi_, beta()));
    breaks_ = g_.breakpoints();
}

cplx SaddleContext::f_prime(cplx w) const {
    if (w.imag() == 0.0 && singular(w.real()))
        throw Error(Errc::PointOnSingularSet, "w lies in S1 u S2 u S3");
    return g_.value(w);
}

void SaddleContext::derivs(cplx w, int max_order, cplx* out) const {
    if (w.imag() == 0.0 && singular(w.real()))
        throw Error(Errc::PointOnSingularSet, "w lies in S1 u S2 u S3");
    g_.eval(w, max_order, out);
}

cplx f_prime(const SaddleContext& ctx, cplx w) { return ctx.f_prime(w); }

// ---------------------------------------------------------------------------
// Argument principle

namespace {

struct Sample {
    cplx z;
    cplx f;
    double rate; // |f''/f'|, bounds the local turning speed
};

struct ArgTrace {
    const SaddleContext& ctx;
    bool bad = false;

    // Sampled |f''/f'| cannot see a log singularity between two samples, so
    // the segment length is also measured against the nearest breakpoint.
    double breakpoint_speed(cplx z0, cplx z1) const {
        double dist = kInf;
        for (double p : ctx.breakpoints()) {
            cplx d = z1 - z0;
            double s = std::clamp(std::real((cplx(p, 0.0) - z0) * std::conj(d)) / std::norm(d), 0.0, 1.0);
            dist = std::min(dist, std::abs(z0 + s * d - p));
        }
        return std::abs(z1 - z0) / dist;
    }

    Sample at(cplx z) {
        cplx d[2];
        ctx.derivs(z, 1, d);
        if (d[0] == 0.0) bad = true;
        return {z, d[0], d[0] == 0.0 ? kInf : std::abs(d[1] / d[0])};
    }

    double segment(const Sample& s0, const Sample& s1, int depth) {
        double d = std::arg(s1.f / s0.f);
        double len = std::abs(s1.z - s0.z);
        double speed = std::max(std::max(s0.rate, s1.rate) * len, breakpoint_speed(s0.z, s1.z));
        if (std::abs(d) <= kPi / 4 && speed <= kPi / 4) return d;
        if (depth > 52) {
            if (std::abs(d) > kPi / 2) bad = true;
            return d;
        }
        Sample sm = at(0.5 * (s0.z + s1.z));
        if (bad) return d;
        return segment(s0, sm, depth + 1) + segment(sm, s1, depth + 1);
    }
};

double boundary_turns(const SaddleContext& ctx, const Rect& r, int n, bool& bad) {
    const cplx corners[5] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}, {r.x0, r.y0}};
    ArgTrace tr{ctx};
    double total = 0.0;
    for (int side = 0; side < 4; ++side) {
        cplx za = corners[side], zb = corners[side + 1];
        Sample prev = tr.at(za);
        for (int k = 1; k <= n && !tr.bad; ++k) {
            Sample cur = tr.at(za + (zb - za) * (static_cast<double>(k) / n));
            if (tr.bad) break;
            total += tr.segment(prev, cur, 0);
            prev = cur;
        }
        if (tr.bad) break;
    }
    bad = bad || tr.bad;
    return total / (2.0 * kPi);
}

} // namespace

int winding_number(const SaddleContext& ctx, const Rect& r) {
    int prev = 0;
    bool have_prev = false;
    for (int n = 64; n <= 4096; n *= 2) {
        bool bad = false;
        double turns = boundary_turns(ctx, r, n, bad);
        long k = std::lround(turns);
        bool clean = !bad && std::abs(turns - static_cast<double>(k)) < 0.1;
        if (clean && have_prev && k == prev) return static_cast<int>(k);
        if (clean) {
            prev = static_cast<int>(k);
            have_prev = true;
        } else {
            have_prev = false;
        }
    }
    throw Error(Errc::BoundaryTooClose, "winding number did not stabilize on the rectangle boundary");
}

Rect search_rectangle(const SaddleContext& ctx) {
    const double a = ctx.measure().a(), b = ctx.measure().b();
    // For small eta the root escapes towards infinity like 1/eta.
    double grow = std::max(1.0, 2.0 / std::max(ctx.eta(), 1e-9));
    double h = std::min(2.0 * (b - a) * grow, 1e9);
    double pad = std::max(2.0, h);
    return {a - pad, b + pad, kBottom, h};
}

namespace {

std::optional<cplx> newton(const SaddleContext& ctx, cplx w) {
    cplx f = ctx.f_prime(w);
    for (int it = 0; it < 100; ++it) {
        cplx d[2];
        ctx.derivs(w, 1, d);
        if (d[1] == 0.0) return std::nullopt;
        cplx step = -d[0] / d[1];
        double lam = 1.0;
        cplx wn, fn;
        for (;;) {
            wn = w + lam * step;
            if (wn.imag() > 0.0) {
                fn = ctx.f_prime(wn);
                if (std::abs(fn) <= std::abs(f) || lam < 1e-12) break;
            }
            lam *= 0.5;
            if (lam < 1e-12) return std::nullopt;
        }
        double moved = std::abs(wn - w);
        w = wn;
        f = fn;
        if (moved < 1e-13 * (1.0 + std::abs(w))) return w;
    }
    return std::nullopt;
}

bool inside(const Rect& r, cplx w, double slack) {
    return w.real() >= r.x0 - slack && w.real() <= r.x1 + slack && w.imag() >= r.y0 - slack &&
           w.imag() <= r.y1 + slack;
}

// Newton limit accepted only as a genuine zero inside r.
std::optional<cplx> polish(const SaddleContext& ctx, cplx seed, const Rect& r) {
    auto w = newton(ctx, seed);
    if (!w || !inside(r, *w, 1e-9 * (1.0 + std::abs(*w)))) return std::nullopt;
    if (std::abs(ctx.f_prime(*w)) > 1e-9) return std::nullopt;
    return w;
}

} // namespace

std::optional<cplx> upper_root(const SaddleContext& ctx) {
    // Liquid points have eta > 0.
    if (!(ctx.eta() > 0.0)) return std::nullopt;
    Rect cur = search_rectangle(ctx);
    int k = winding_number(ctx, cur);
    if (k <= 0) return std::nullopt;
    const double scale = ctx.measure().b() - ctx.measure().a();
    if (k == 1) {
        // A single root in the rectangle: any verified Newton limit inside it is that root.
        const double mid = 0.5 * (ctx.measure().a() + ctx.measure().b());
        for (double y : {0.05, 0.3, 1.0})
            for (double x : {ctx.chi(), mid, ctx.beta()})
                if (auto w = polish(ctx, cplx(x, y * std::max(scale, 1.0)), cur)) return w;
    }
    for (int level = 0; level < 400; ++level) {
        double wx = cur.x1 - cur.x0, wy = cur.y1 - cur.y0;
        if (std::max(wx, wy) < scale / 4) {
            cplx seed(0.5 * (cur.x0 + cur.x1), 0.5 * (cur.y0 + cur.y1));
            if (auto w = polish(ctx, seed, cur)) return w;
        }
        if (std::max(wx, wy) < 1e-12 * (1.0 + std::abs(cplx(cur.x0, cur.y0)))) break;
        // Off-centre cuts keep the new edge away from symmetric roots.
        Rect A = cur, B = cur;
        int ka = -1;
        for (double frac : {0.4871, 0.5382, 0.4113}) {
            A = cur;
            B = cur;
            if (wx >= wy) A.x1 = B.x0 = cur.x0 + frac * wx;
            else A.y1 = B.y0 = cur.y0 + frac * wy;
            try {
                ka = winding_number(ctx, A);
                break;
            } catch (const Error& e) {
                if (e.code() != Errc::BoundaryTooClose) throw;
            }
        }
        if (ka < 0) break;
        if (ka >= 1) {
            cur = A;
            k = ka;
        } else if (k - ka >= 1) {
            cur = B;
            k -= ka;
        } else {
            break;
        }
    }
    throw Error(Errc::ConvergenceFailure,
                "root localized to [" + std::to_string(cur.x0) + "," + std::to_string(cur.x1) + "]x[" +
                    std::to_string(cur.y0) + "," + std::to_string(cur.y1) + "] but Newton stalled");
}

Membership liquid_membership(const SaddleContext& ctx) {
    auto w = upper_root(ctx);
    return {w.has_value(), w};
}

ChiEta chi_eta_from_w(const MeasureSpec& spec, cplx w) {
    if (!(w.imag() > 0.0)) throw Error(Errc::OutOfTrapezoid, "chi_eta_from_w needs Im w > 0");
    cplx ec = std::exp(spec.transform().value(w));
    cplx ecb = std::conj(ec);
    cplx den = ec - ecb;
    if (std::abs(den) < 1e-14) throw Error(Errc::DegenerateDenominator, "|e^C(w) - e^C(conj w)| < 1e-14");
    cplx dw = w - std::conj(w);
    cplx chi = w + dw * (ecb - 1.0) / den;
    cplx eta = 1.0 + dw * (ec - 1.0) * (ecb - 1.0) / den;
    return {chi.real(), eta.real(), chi.imag(), eta.imag()};
}

int real_root_multiplicity(const SaddleContext& ctx, double t) {
    cplx d[4];
    ctx.derivs(t, 3, d);
    double f2 = std::abs(d[1]), f3 = std::abs(d[2]), f4 = std::abs(d[3]);
    double scale = std::max({f2, f3, f4});
    const double tol = 1e-7 * scale;
    if (scale == 0.0) throw Error(Errc::AmbiguousMultiplicity, "all tested derivatives vanish");
    if (f2 > tol) return 1;
    if (f3 > tol) return 2;
    return 3;
}

// ---------------------------------------------------------------------------
// Real roots

namespace {

struct RealMap {
    double lo, hi, len;
    // Parameter range (p0, p1) and map to x.
    double p0, p1;
    double x(double p) const {
        if (std::isfinite(lo) && std::isfinite(hi)) return lo + (hi - lo) * 0.5 * (1.0 - std::cos(p));
        if (std::isfinite(lo)) return lo + len * std::tan(p);
        return hi - len * std::tan(p);
    }
};

RealMap make_map(const Interval& iv, double len) {
    RealMap m{iv.lo, iv.hi, len, 0.0, 0.0};
    if (std::isfinite(iv.lo) && std::isfinite(iv.hi)) m.p1 = kPi;
    else m.p1 = kPi / 2;
    return m;
}

std::vector<std::pair<double, int>> real_roots(const SaddleContext& ctx, const Interval& iv) {
    std::vector<std::pair<double, int>> out;
    if (!(iv.hi > iv.lo)) return out;
    const double len = std::max(1.0, ctx.measure().b() - ctx.measure().a());
    RealMap m = make_map(iv, len);
    auto f = [&](double p) { return ctx.f_prime(m.x(p)).real(); };

    std::vector<double> ps(kRealNodes), fs(kRealNodes);
    for (int k = 0; k < kRealNodes; ++k) {
        ps[k] = m.p0 + (m.p1 - m.p0) * (k + 0.5) / kRealNodes;
        fs[k] = f(ps[k]);
    }
    auto bisect = [&](double a, double b, double fa) {
        for (int it = 0; it < 200; ++it) {
            double c = 0.5 * (a + b);
            if (c <= a || c >= b) break;
            double fc = f(c);
            if ((fc > 0) == (fa > 0)) {
                a = c;
                fa = fc;
            } else {
                b = c;
            }
        }
        return 0.5 * (a + b);
    };
    auto mult_at = [&](double x) {
        try {
            return real_root_multiplicity(ctx, x);
        } catch (const Error&) {
            return 1;
        }
    };
    auto add = [&](double p) {
        double x = m.x(p);
        int mm = mult_at(x);
        out.push_back({x, mm == 2 ? 1 : mm});
    };
    for (int k = 0; k + 1 < kRealNodes; ++k) {
        if (fs[k] == 0.0) {
            add(ps[k]);
            continue;
        }
        if ((fs[k] > 0) != (fs[k + 1] > 0) && fs[k + 1] != 0.0) add(bisect(ps[k], ps[k + 1], fs[k]));
    }
    if (fs.back() == 0.0) add(ps.back());
    // Tangential zeros: interior local minima of |f'| without a sign change.
    for (int k = 1; k + 1 < kRealNodes; ++k) {
        if (fs[k] == 0.0) continue;
        double s = fs[k] > 0 ? 1.0 : -1.0;
        if (!(s * fs[k - 1] > s * fs[k] && s * fs[k + 1] > s * fs[k])) continue;
        double a = ps[k - 1], b = ps[k + 1];
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = s * f(c), fd = s * f(d);
        for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = s * f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = s * f(d);
            }
        }
        double pm = 0.5 * (a + b);
        double fm = s * f(pm);
        if (fm < 0.0) {
            add(bisect(ps[k - 1], pm, fs[k - 1]));
            add(bisect(pm, ps[k + 1], s * fm));
        } else if (fm < 1e-10) {
            out.push_back({m.x(pm), 2});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int sum_mult(const std::vector<std::pair<double, int>>& v) {
    int s = 0;
    for (const auto& r : v) s += r.second;
    return s;
}

} // namespace

int count_roots(const SaddleContext& ctx, const RootRegion& region) {
    if (const Rect* r = std::get_if<Rect>(&region)) return winding_number(ctx, *r);
    const Interval& iv = std::get<Interval>(region);
    const double probe[2] = {iv.lo, iv.hi};
    for (double t : probe)
        if (std::isfinite(t) && ctx.singular(t) && ctx.singular(t + 1e-6) && ctx.singular(t - 1e-6))
            throw Error(Errc::BoundaryTooClose, "interval endpoint inside S");
    return sum_mult(real_roots(ctx, iv));
}

RootReport find_roots(const SaddleContext& ctx) {
    RootReport rep;
    Rect big = search_rectangle(ctx);
    rep.upper = winding_number(ctx, big);
    if (rep.upper > 0) {
        auto w = upper_root(ctx);
        if (w) rep.roots.push_back({*w, 1, RootZone::UpperHalf});
    }
    const auto& S = ctx.supports();
    const std::optional<Interval>* js[4] = {&S.j1, &S.j2, &S.j3, &S.j4};
    const RootZone zones[4] = {RootZone::J1, RootZone::J2, RootZone::J3, RootZone::J4};
    for (int i = 0; i < 4; ++i) {
        if (!js[i]->has_value()) continue;
        for (auto [x, m] : real_roots(ctx, **js[i])) {
            rep.roots.push_back({x, m, zones[i]});
            rep.j[i] += m;
        }
    }
    for (std::size_t k = 0; k < S.k.size(); ++k) {
        int total = 0;
        for (auto [x, m] : real_roots(ctx, S.k[k])) {
            rep.roots.push_back({x, m, RootZone::K, static_cast<int>(k)});
            total += m;
        }
        rep.k.push_back(total);
    }
    return rep;
}

std::vector<std::string> root_bound_violations(const SaddleContext& ctx, const RootReport& rep) {
    std::vector<std::string> v;
    const auto& S = ctx.supports();
    const bool n1 = !S.s1.empty(), n2 = !S.s2.empty(), n3 = !S.s3.empty();
    const bool eta_pos = ctx.eta() > 0.0;
    const int nonreal = 2 * rep.upper;
    const int jtot = rep.j[0] + rep.j[1] + rep.j[2] + rep.j[3];
    int kmax = 0, k_ge2 = 0;
    for (int c : rep.k) {
        kmax = std::max(kmax, c);
        if (c >= 2) ++k_ge2;
    }
    auto need = [&](bool ok, const char* what) {
        if (!ok) v.emplace_back(what);
    };
    auto weak_tail = [&] {
        need(nonreal + jtot == 0, "(11) roots in (C\\R) u J");
        need(kmax <= 1, "(12) more than 1 root in a K component");
    };
    if (n1 && n2 && n3) {
        if (eta_pos) {
            need(nonreal + jtot <= 2, "(1) more than 2 roots in (C\\R) u J");
            int zones = (nonreal > 0) + (rep.j[0] > 0) + (rep.j[1] > 0) + (rep.j[2] > 0) + (rep.j[3] > 0);
            need(zones <= 1, "(2) roots in more than one of C\\R, J1..J4");
            need(kmax <= 3, "(3) more than 3 roots in a K component");
            need(k_ge2 <= 1, "(4) two K components with at least 2 roots");
            need(k_ge2 == 0 || nonreal + jtot == 0, "(5) roots in (C\\R) u J beside a multiple K root");
        } else {
            need(nonreal + rep.j[0] + rep.j[1] <= 1, "(6) more than 1 root in (C\\R) u J1 u J2");
            need(rep.j[2] + rep.j[3] == 0, "(7) roots in J3 u J4");
            need(kmax <= 1, "(8) more than 1 root in a K component");
        }
    } else if (n2) {
        if (eta_pos) {
            need(nonreal + jtot <= 1, "(9) more than 1 root in (C\\R) u J");
            need(kmax <= 1, "(10) more than 1 root in a K component");
        } else {
            weak_tail();
        }
    } else if (eta_pos) {
        weak_tail();
    }
    return v;
}

} // namespace gtedge
