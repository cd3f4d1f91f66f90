#include <gtedge/measure.hpp>

#include <nlohmann/json.hpp>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gtedge {

namespace {

constexpr int kMaxDegree = 8;
constexpr double kSeriesRadius = 2.0;

std::vector<double> trim(std::vector<double> c) {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    return c;
}

bool is_const(const std::vector<double>& c, double value) {
    if (c.empty()) return std::abs(value) <= kDensityTol;
    if (std::abs(c[0] - value) > kDensityTol) return false;
    for (std::size_t i = 1; i < c.size(); ++i)
        if (std::abs(c[i]) > kDensityTol) return false;
    return true;
}

Density classify_poly(const std::vector<double>& c) {
    if (is_const(c, 0.0)) return Density::Zero;
    if (is_const(c, 1.0)) return Density::One;
    return Density::Partial;
}

// Coefficients of p(mid + half*s) in s.
std::vector<double> shift_scale(const std::vector<double>& c, double mid, double half) {
    const std::size_t n = c.size();
    std::vector<double> out(n, 0.0);
    // Horner in the composed variable: p = c0 + x(c1 + x(...)), x = mid + half*s.
    for (std::size_t k = n; k-- > 0;) {
        std::vector<double> next(n, 0.0);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            next[j] += out[j] * mid;
            next[j + 1] += out[j] * half;
        }
        next[0] += c[k];
        out.swap(next);
    }
    return out;
}

double interval_moment(double lo, double hi, int k) {
    return (std::pow(hi, k + 1) - std::pow(lo, k + 1)) / (k + 1);
}

bool touches(double x, double y) { return std::abs(x - y) <= 1e-12 * (1.0 + std::abs(x)); }

} // namespace

double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
    if (c.size() <= 1) return {};
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
    return d;
}

std::vector<double> poly_real_roots(const std::vector<double>& coeffs, double lo, double hi) {
    std::vector<double> c = trim(coeffs);
    std::vector<double> roots;
    if (c.size() <= 1) return roots;
    if (c.size() == 2) {
        double r = -c[0] / c[1];
        if (r >= lo && r <= hi) roots.push_back(r);
        return roots;
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i) v[static_cast<Eigen::Index>(i)] = c[i];
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(v);
    const auto d = poly_derivative(c);
    for (Eigen::Index i = 0; i < solver.roots().size(); ++i) {
        std::complex<double> z = solver.roots()[i];
        if (std::abs(z.imag()) > 1e-6 * (1.0 + std::abs(z))) continue;
        double r = z.real();
        for (int it = 0; it < 4; ++it) {
            double dv = poly_eval(d, r);
            if (dv == 0.0) break;
            double step = poly_eval(c, r) / dv;
            if (!std::isfinite(step) || std::abs(step) > 1e-6 * (1.0 + std::abs(r))) break;
            r -= step;
        }
        if (r >= lo && r <= hi) roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// ---------------------------------------------------------------------------

PiecewiseCauchy::PiecewiseCauchy(const std::vector<DensityPiece>& pieces) {
    for (const auto& p : pieces) {
        std::vector<double> c = trim(p.coeffs);
        if (c.empty() || !(p.interval.hi > p.interval.lo)) continue;
        Local L;
        L.lo = p.interval.lo;
        L.hi = p.interval.hi;
        L.mid = 0.5 * (L.lo + L.hi);
        L.half = 0.5 * (L.hi - L.lo);
        L.q = shift_scale(c, L.mid, L.half);
        // Enough moments for the tail series: |s/w'| <= 1/2 per term.
        const std::size_t nmom = L.q.size() + 64;
        L.moments.assign(nmom, 0.0);
        for (std::size_t j = 0; j < nmom; ++j) {
            double m = 0.0;
            for (std::size_t k = 0; k < L.q.size(); ++k)
                if ((k + j) % 2 == 0) m += L.q[k] * 2.0 / static_cast<double>(k + j + 1);
            L.moments[j] = m;
        }
        local_.push_back(std::move(L));
    }
}

bool PiecewiseCauchy::on_support(double t) const {
    for (const auto& L : local_)
        if (t >= L.lo && t <= L.hi) return true;
    return false;
}

std::vector<double> PiecewiseCauchy::breakpoints() const {
    std::vector<double> out;
    for (const auto& L : local_) {
        out.push_back(L.lo);
        out.push_back(L.hi);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void PiecewiseCauchy::eval(cplx w, int max_order, cplx* out) const {
    for (int d = 0; d <= max_order; ++d) out[d] = 0.0;
    for (const auto& L : local_) {
        const cplx wp = (w - L.mid) / L.half;
        cplx acc[5] = {0.0, 0.0, 0.0, 0.0, 0.0};
        if (std::abs(wp) > kSeriesRadius) {
            // \int q(s)/(w'-s) ds = sum_j Q_j / w'^{j+1}
            const cplx inv = 1.0 / wp;
            for (int d = 0; d <= max_order; ++d) {
                cplx sum = 0.0;
                cplx pw = std::pow(inv, d + 1);
                double prev = kInf;
                for (std::size_t j = 0; j < L.moments.size(); ++j) {
                    double falling = 1.0;
                    for (int e = 1; e <= d; ++e) falling *= static_cast<double>(j + e);
                    cplx term = L.moments[j] * falling * pw;
                    sum += term;
                    pw *= inv;
                    double cur = std::abs(term);
                    if (j > L.q.size() + 2 && cur + prev < 1e-18 * std::abs(sum)) break;
                    prev = cur;
                }
                acc[d] = (d % 2 == 0 ? 1.0 : -1.0) * sum;
            }
        } else {
            // I_k^{(d)} = d I_{k-1}^{(d-1)} + w' I_{k-1}^{(d)} - [d==0] M_{k-1}
            cplx I[5];
            I[0] = std::log((wp + 1.0) / (wp - 1.0));
            double fact = 1.0;
            for (int d = 1; d <= max_order; ++d) {
                double sign = (d % 2 == 1) ? 1.0 : -1.0;
                I[d] = sign * fact * (std::pow(wp + 1.0, -d) - std::pow(wp - 1.0, -d));
                fact *= d;
            }
            for (int d = 0; d <= max_order; ++d) acc[d] = L.q[0] * I[d];
            for (std::size_t k = 1; k < L.q.size(); ++k) {
                const double mk = ((k - 1) % 2 == 0) ? 2.0 / static_cast<double>(k) : 0.0;
                for (int d = max_order; d >= 1; --d) I[d] = static_cast<double>(d) * I[d - 1] + wp * I[d];
                I[0] = wp * I[0] - mk;
                for (int d = 0; d <= max_order; ++d) acc[d] += L.q[k] * I[d];
            }
        }
        double scale = 1.0;
        for (int d = 0; d <= max_order; ++d) {
            out[d] += acc[d] * scale;
            scale /= L.half;
        }
    }
}

cplx PiecewiseCauchy::value(cplx w) const {
    cplx out[1];
    eval(w, 0, out);
    return out[0];
}

cplx PiecewiseCauchy::deriv(cplx w, int order) const {
    cplx out[5];
    eval(w, order, out);
    return out[order];
}

// ---------------------------------------------------------------------------

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error(issues.empty() ? Errc::MalformedSpec : issues.front().code,
            [&] {
                std::string s;
                for (const auto& i : issues) {
                    if (!s.empty()) s += "; ";
                    s += std::string(errc_name(i.code)) + " (" + i.detail + ")";
                }
                return s;
            }()),
      issues_(std::move(issues)) {}

std::vector<ValidationIssue> check(const std::vector<DensityPiece>& raw) {
    std::vector<ValidationIssue> issues;
    std::vector<DensityPiece> ps;
    for (const auto& p : raw) {
        if (!std::isfinite(p.interval.lo) || !std::isfinite(p.interval.hi) ||
            !(p.interval.lo < p.interval.hi)) {
            issues.push_back({Errc::MalformedSpec, "interval must satisfy lo < hi, finite"});
            continue;
        }
        bool finite = std::all_of(p.coeffs.begin(), p.coeffs.end(),
                                  [](double c) { return std::isfinite(c); });
        if (!finite) {
            issues.push_back({Errc::MalformedSpec, "non-finite coefficient"});
            continue;
        }
        if (trim(p.coeffs).size() > kMaxDegree + 1) {
            issues.push_back({Errc::MalformedSpec, "polynomial degree exceeds 8"});
            continue;
        }
        if (classify_poly(p.coeffs) == Density::Zero) continue;
        ps.push_back(p);
    }
    if (ps.empty()) {
        issues.push_back({Errc::MassNotOne, "no piece carries mass"});
        return issues;
    }
    std::sort(ps.begin(), ps.end(),
              [](const DensityPiece& x, const DensityPiece& y) { return x.interval.lo < y.interval.lo; });
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
        if (ps[i].interval.hi > ps[i + 1].interval.lo && !touches(ps[i].interval.hi, ps[i + 1].interval.lo)) {
            std::ostringstream os;
            os.precision(17);
            os << "[" << ps[i].interval.lo << "," << ps[i].interval.hi << "] overlaps ["
               << ps[i + 1].interval.lo << "," << ps[i + 1].interval.hi << "]";
            issues.push_back({Errc::OverlappingPieces, os.str()});
        }
    }
    double mass = 0.0;
    for (const auto& p : ps) {
        const auto& c = p.coeffs;
        for (std::size_t k = 0; k < c.size(); ++k)
            mass += c[k] * interval_moment(p.interval.lo, p.interval.hi, static_cast<int>(k));
        std::vector<double> pts = {p.interval.lo, p.interval.hi};
        for (double r : poly_real_roots(poly_derivative(c), p.interval.lo, p.interval.hi)) pts.push_back(r);
        for (double x : pts) {
            double v = poly_eval(c, x);
            if (v < -kDensityTol || v > 1.0 + kDensityTol) {
                std::ostringstream os;
                os.precision(17);
                os << "density " << v << " at x = " << x;
                issues.push_back({Errc::DensityOutOfRange, os.str()});
                break;
            }
        }
    }
    if (std::abs(mass - 1.0) > 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "total mass " << mass;
        issues.push_back({Errc::MassNotOne, os.str()});
    }
    const double a = ps.front().interval.lo;
    double b = ps.front().interval.hi;
    for (const auto& p : ps) b = std::max(b, p.interval.hi);
    if (b - a <= 1.0) {
        std::ostringstream os;
        os.precision(17);
        os << "b - a = " << (b - a);
        issues.push_back({Errc::SupportTooNarrow, os.str()});
    }
    return issues;
}

MeasureSpec validate(std::vector<DensityPiece> raw) {
    auto issues = check(raw);
    if (!issues.empty()) throw ValidationError(std::move(issues));

    MeasureSpec spec;
    for (auto& p : raw) {
        if (classify_poly(p.coeffs) == Density::Zero) continue;
        p.coeffs = trim(p.coeffs);
        spec.pieces_.push_back(std::move(p));
    }
    std::sort(spec.pieces_.begin(), spec.pieces_.end(),
              [](const DensityPiece& x, const DensityPiece& y) { return x.interval.lo < y.interval.lo; });
    // Snap touching endpoints so regions share exact breakpoints.
    for (std::size_t i = 0; i + 1 < spec.pieces_.size(); ++i)
        if (touches(spec.pieces_[i].interval.hi, spec.pieces_[i + 1].interval.lo))
            spec.pieces_[i + 1].interval.lo = spec.pieces_[i].interval.hi;

    spec.a_ = spec.pieces_.front().interval.lo;
    spec.b_ = spec.pieces_.back().interval.hi;

    auto push = [&](Interval span, Density kind, const std::vector<double>& c) {
        auto& R = spec.regions_;
        if (!R.empty() && kind != Density::Partial && R.back().kind == kind && R.back().span.hi == span.lo) {
            R.back().span.hi = span.hi;
            return;
        }
        R.push_back({span, kind, kind == Density::Partial ? c : std::vector<double>{}});
    };
    double cursor = spec.a_;
    for (const auto& p : spec.pieces_) {
        if (p.interval.lo > cursor) push({cursor, p.interval.lo}, Density::Zero, {});
        push(p.interval, classify_poly(p.coeffs), p.coeffs);
        cursor = p.interval.hi;
    }
    spec.cauchy_ = PiecewiseCauchy(spec.pieces_);
    return spec;
}

double MeasureSpec::density(double x) const {
    double v = 0.0;
    for (const auto& p : pieces_)
        if (x >= p.interval.lo && x < p.interval.hi) v = poly_eval(p.coeffs, x);
    if (x == b_) v = 0.0;
    return v;
}

double MeasureSpec::moment(int k) const {
    double m = 0.0;
    for (const auto& p : pieces_)
        for (std::size_t j = 0; j < p.coeffs.size(); ++j)
            m += p.coeffs[j] * interval_moment(p.interval.lo, p.interval.hi, static_cast<int>(j) + k);
    return m;
}

cplx cauchy(const MeasureSpec& spec, cplx w) { return cauchy_deriv(spec, w, 0); }

cplx cauchy_deriv(const MeasureSpec& spec, cplx w, int order) {
    if (order < 0 || order > 4) throw Error(Errc::MalformedSpec, "derivative order must be in 0..4");
    if (w.imag() == 0.0 && spec.transform().on_support(w.real()))
        throw Error(Errc::PointOnSupport, "w lies on Supp(mu)");
    return spec.transform().deriv(w, order);
}

std::vector<DensityPiece> restrict_to(const std::vector<DensityPiece>& pieces, double lo, double hi) {
    std::vector<DensityPiece> out;
    for (const auto& p : pieces) {
        double l = std::max(lo, p.interval.lo), h = std::min(hi, p.interval.hi);
        if (h > l) out.push_back({{l, h}, p.coeffs});
    }
    return out;
}

std::vector<DensityPiece> remove_interval(const std::vector<DensityPiece>& pieces, double lo, double hi) {
    auto left = restrict_to(pieces, -kInf, lo);
    auto right = restrict_to(pieces, hi, kInf);
    left.insert(left.end(), right.begin(), right.end());
    return left;
}

// ---------------------------------------------------------------------------

const char* rtag_name(RTag t) {
    switch (t) {
    case RTag::Mu: return "Rmu";
    case RTag::LambdaMinusMu: return "Rlambda-mu";
    case RTag::Zero: return "R0";
    case RTag::One: return "R1";
    case RTag::Two: return "R2";
    }
    return "?";
}

std::optional<std::size_t> RDecomposition::locate(double t) const {
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto& c = components[i];
        if (c.span.is_point()) {
            if (std::abs(t - c.span.lo) <= 1e-12 * (1.0 + std::abs(t))) return i;
        }
    }
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto& c = components[i];
        if (!c.span.is_point() && c.span.contains_open(t)) return i;
    }
    return std::nullopt;
}

namespace {

// Zero of the strictly decreasing C on a bounded gap (g1, g2) of Supp(mu).
std::optional<double> gap_zero(const PiecewiseCauchy& C, double g1, double g2) {
    const double d = 1e-10 * (g2 - g1);
    double lo = g1 + d, hi = g2 - d;
    double flo = C.value(lo).real(), fhi = C.value(hi).real();
    if (!(flo > 0.0 && fhi < 0.0)) return std::nullopt;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (C.value(mid).real() > 0.0) lo = mid;
        else hi = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        cplx v[2];
        C.eval(t, 1, v);
        double step = v[0].real() / v[1].real();
        if (!std::isfinite(step) || std::abs(step) > 1e-9) break;
        t -= step;
    }
    return t;
}

} // namespace

RDecomposition r_decomposition(const MeasureSpec& spec) {
    RDecomposition rd;
    auto& out = rd.components;
    const auto& R = spec.regions();
    const auto& C = spec.transform();

    auto left_kind = [&](std::size_t i) { return i == 0 ? Density::Zero : R[i - 1].kind; };

    out.push_back({{-kInf, spec.a()}, RTag::Mu});
    for (std::size_t i = 0; i < R.size(); ++i) {
        const auto& reg = R[i];
        Density lk = left_kind(i);
        if (lk == Density::Zero && reg.kind == Density::One) out.push_back({{reg.span.lo, reg.span.lo}, RTag::Two});
        if (lk == Density::One && reg.kind == Density::Zero) out.push_back({{reg.span.lo, reg.span.lo}, RTag::One});
        if (reg.kind == Density::Zero) {
            auto z = gap_zero(C, reg.span.lo, reg.span.hi);
            if (z) {
                out.push_back({{reg.span.lo, *z}, RTag::Mu});
                out.push_back({{*z, *z}, RTag::Zero});
                out.push_back({{*z, reg.span.hi}, RTag::Mu});
            } else {
                out.push_back({reg.span, RTag::Mu});
            }
        } else if (reg.kind == Density::One) {
            out.push_back({reg.span, RTag::LambdaMinusMu});
        }
    }
    if (!R.empty() && R.back().kind == Density::One) out.push_back({{spec.b(), spec.b()}, RTag::One});
    out.push_back({{spec.b(), kInf}, RTag::Mu});
    return rd;
}

RealExtension real_extension(const MeasureSpec& spec, const RDecomposition& rd, double t) {
    auto idx = rd.locate(t);
    if (!idx) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "t = %.15g is not in R", t);
        throw Error(Errc::NotInR, buf);
    }
    const RComponent& comp = rd.components[*idx];
    RealExtension e;
    e.tag = comp.tag;
    const auto& R = spec.regions();

    auto eval_ci = [&](double lo, double hi, double at) {
        PiecewiseCauchy ci(remove_interval(spec.pieces(), lo, hi));
        cplx v[4];
        ci.eval(at, 3, v);
        e.ci0 = v[0].real();
        e.ci1 = v[1].real();
        e.ci2 = v[2].real();
        e.ci3 = v[3].real();
    };

    switch (comp.tag) {
    case RTag::Mu:
    case RTag::Zero: {
        if (comp.tag == RTag::Zero) t = comp.span.lo;
        cplx v[4];
        spec.transform().eval(t, 3, v);
        e.exp_c = std::exp(v[0].real());
        e.exp_neg_c = std::exp(-v[0].real());
        e.c1 = v[1].real();
        e.c2 = v[2].real();
        e.c3 = v[3].real();
        e.t2 = comp.span.lo;
        e.t1 = comp.span.hi;
        if (comp.tag == RTag::Zero) {
            for (const auto& reg : R)
                if (reg.kind == Density::Zero && reg.span.contains_open(t)) {
                    e.t2 = reg.span.lo;
                    e.t1 = reg.span.hi;
                }
        }
        break;
    }
    case RTag::LambdaMinusMu: {
        e.t2 = comp.span.lo;
        e.t1 = comp.span.hi;
        eval_ci(e.t2, e.t1, t);
        const double p = t - e.t2, q = t - e.t1;
        e.exp_c = std::exp(e.ci0) * p / q;
        e.exp_neg_c = 1.0 / e.exp_c;
        e.c1 = e.ci1 + 1.0 / p - 1.0 / q;
        e.c2 = e.ci2 - 1.0 / (p * p) + 1.0 / (q * q);
        e.c3 = e.ci3 + 2.0 / (p * p * p) - 2.0 / (q * q * q);
        break;
    }
    case RTag::One: {
        t = comp.span.lo;
        e.t2 = -kInf;
        e.t1 = kInf;
        for (std::size_t i = 0; i < R.size(); ++i) {
            if (R[i].kind == Density::One && R[i].span.hi == t) e.t2 = R[i].span.lo;
            if (R[i].kind == Density::Zero && R[i].span.lo == t) e.t1 = R[i].span.hi;
        }
        eval_ci(e.t2, e.t1, t);
        e.exp_c = kInf;
        e.exp_neg_c = 0.0;
        break;
    }
    case RTag::Two: {
        t = comp.span.lo;
        e.t2 = -kInf;
        e.t1 = kInf;
        for (std::size_t i = 0; i < R.size(); ++i) {
            if (R[i].kind == Density::One && R[i].span.lo == t) e.t1 = R[i].span.hi;
            if (R[i].kind == Density::Zero && R[i].span.hi == t) e.t2 = R[i].span.lo;
        }
        eval_ci(e.t2, e.t1, t);
        e.exp_c = 0.0;
        e.exp_neg_c = kInf;
        break;
    }
    }
    return e;
}

ExpC extended_exp_c(const MeasureSpec& spec, double t) {
    auto e = real_extension(spec, r_decomposition(spec), t);
    return {e.exp_c, e.exp_neg_c};
}

// ---------------------------------------------------------------------------

bool in_trapezoid(const MeasureSpec& spec, double chi, double eta, double tol) {
    const double beta = chi + eta - 1.0;
    return eta >= -tol && eta <= 1.0 + tol && chi <= spec.b() + tol && chi >= beta - tol &&
           beta >= spec.a() - tol;
}

namespace {

std::vector<Interval> merge(std::vector<Interval> v) {
    std::sort(v.begin(), v.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    std::vector<Interval> out;
    for (const auto& i : v) {
        if (!out.empty() && i.lo <= out.back().hi) out.back().hi = std::max(out.back().hi, i.hi);
        else out.push_back(i);
    }
    return out;
}

std::vector<Interval> clip(const std::vector<DensityRegion>& R, bool want_mu, double lo, double hi) {
    std::vector<Interval> v;
    for (const auto& reg : R) {
        bool carries = want_mu ? reg.kind != Density::Zero : reg.kind != Density::One;
        if (!carries) continue;
        double l = std::max(lo, reg.span.lo), h = std::min(hi, reg.span.hi);
        if (h > l) v.push_back({l, h});
    }
    return merge(v);
}

} // namespace

SupportDecomposition support_sets(const MeasureSpec& spec, double chi, double eta) {
    if (!in_trapezoid(spec, chi, eta))
        throw Error(Errc::OutOfTrapezoid, "(chi, eta) outside the closed trapezoid");
    const double beta = chi + eta - 1.0;
    SupportDecomposition d;
    d.s1 = clip(spec.regions(), true, chi, spec.b());
    d.s2 = clip(spec.regions(), false, beta, chi);
    d.s3 = clip(spec.regions(), true, spec.a(), beta);
    std::vector<Interval> all = d.s1;
    all.insert(all.end(), d.s2.begin(), d.s2.end());
    all.insert(all.end(), d.s3.begin(), d.s3.end());
    d.s = merge(all);
    if (d.s.empty()) return d;
    d.j1 = Interval{d.s.back().hi, kInf};
    d.j2 = Interval{-kInf, d.s.front().lo};
    if (!d.s1.empty() && !d.s2.empty() && d.s1.front().lo > d.s2.back().hi)
        d.j3 = Interval{d.s2.back().hi, d.s1.front().lo};
    if (!d.s2.empty() && !d.s3.empty() && d.s2.front().lo > d.s3.back().hi)
        d.j4 = Interval{d.s3.back().hi, d.s2.front().lo};
    for (std::size_t i = 0; i + 1 < d.s.size(); ++i) {
        Interval g{d.s[i].hi, d.s[i + 1].lo};
        bool is_j = (d.j3 && d.j3->lo == g.lo && d.j3->hi == g.hi) || (d.j4 && d.j4->lo == g.lo && d.j4->hi == g.hi);
        if (!is_j) d.k.push_back(g);
    }
    return d;
}

// ---------------------------------------------------------------------------

MeasureSpec measure_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::MalformedSpec, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("pieces") || !j["pieces"].is_array())
        throw Error(Errc::MalformedSpec, "expected {\"pieces\": [...]}");
    auto num = [](const nlohmann::json& v) {
        if (!v.is_number()) throw Error(Errc::MalformedSpec, "expected a number");
        double x = v.get<double>();
        if (!std::isfinite(x)) throw Error(Errc::MalformedSpec, "non-finite number");
        return x;
    };
    std::vector<DensityPiece> raw;
    for (const auto& p : j["pieces"]) {
        if (!p.is_object() || !p.contains("interval") || !p.contains("poly") || !p["interval"].is_array() ||
            p["interval"].size() != 2 || !p["poly"].is_array())
            throw Error(Errc::MalformedSpec, "piece needs \"interval\":[lo,hi] and \"poly\":[...]");
        DensityPiece d;
        d.interval = {num(p["interval"][0]), num(p["interval"][1])};
        for (const auto& c : p["poly"]) d.coeffs.push_back(num(c));
        raw.push_back(std::move(d));
    }
    return validate(std::move(raw));
}

std::string measure_to_json(const MeasureSpec& spec) {
    // Fixed 17-digit formatting keeps the writer independent of the JSON
    // library's shortest-representation choice.
    auto fmt = [](double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    std::string s = "{\"pieces\":[";
    for (std::size_t i = 0; i < spec.pieces().size(); ++i) {
        const auto& p = spec.pieces()[i];
        if (i) s += ",";
        s += "{\"interval\":[" + fmt(p.interval.lo) + "," + fmt(p.interval.hi) + "],\"poly\":[";
        for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
            if (k) s += ",";
            s += fmt(p.coeffs[k]);
        }
        s += "]}";
    }
    s += "]}\n";
    return s;
}

} // namespace gtedge
