#include <gtedge/kernel.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace gtedge {

namespace {

using boost::multiprecision::cpp_int;

cpp_int factorial(long k) {
    cpp_int f = 1;
    for (long i = 2; i <= k; ++i) f *= i;
    return f;
}

bool is_power_of_two(int k) { return k > 0 && (k & (k - 1)) == 0; }

} // namespace

Rational make_rational(cpp_int num, cpp_int den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(num, den);
}

TopRow make_top_row(std::vector<long> x) {
    if (x.empty()) throw Error(Errc::InvalidTopRow, "top row is empty");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i] >= x[i - 1]) throw Error(Errc::InvalidTopRow, "top row must be strictly decreasing");
    return TopRow{std::move(x)};
}

bool admissible(const TopRow& top, const SiteCoord& s) {
    const int n = top.n();
    return s.r >= 1 && s.r <= n - 1 && s.u >= top.x.back() + n - s.r;
}

void check_site(const TopRow& top, const SiteCoord& s) {
    const int n = top.n();
    if (s.r < 1 || s.r > n - 1)
        throw Error(Errc::RowOutOfRange, "row " + std::to_string(s.r) + " outside 1.." + std::to_string(n - 1));
    if (s.u < top.x.back() + n - s.r)
        throw Error(Errc::RowOutOfRange, "site (" + std::to_string(s.u) + "," + std::to_string(s.r) +
                                             ") has u < x_n + n - r");
}

Rational phi(int r, int s, long u, long v) {
    if (s <= r) return 0;
    if (v < u) return 0;
    if (s == r + 1) return 1;
    const long m = s - r - 1;
    cpp_int num = 1;
    for (long j = 1; j <= m; ++j) num *= (v - u + s - r - j);
    return Rational(num, factorial(m));
}

Rational ktilde(const TopRow& top, const SiteCoord& ur, const SiteCoord& vs) {
    check_site(top, ur);
    check_site(top, vs);
    const int n = top.n();
    const long u = ur.u, v = vs.u;
    const int r = ur.r, s = vs.r;
    const auto& x = top.x;

    // Lagrange weights over the window l = v+s-n .. v.
    const long lo = v + s - n;
    std::vector<cpp_int> window_den;
    for (long l = lo; l <= v; ++l) {
        cpp_int d = 1;
        for (long j = lo; j <= v; ++j)
            if (j != l) d *= (l - j);
        window_den.push_back(d);
    }

    Rational sum = 0;
    for (int k = 0; k < n; ++k) {
        if (x[k] < u) continue;
        cpp_int head = 1;
        for (long j = u + r - n + 1; j <= u - 1; ++j) head *= (x[k] - j);
        if (head == 0) continue;
        cpp_int node_den = 1;
        for (int i = 0; i < n; ++i)
            if (i != k) node_den *= (x[k] - x[i]);
        Rational inner = 0;
        for (long l = lo; l <= v; ++l) {
            cpp_int p = 1;
            for (int i = 0; i < n; ++i)
                if (i != k) p *= (l - x[i]);
            if (p == 0) continue;
            inner += make_rational(p, window_den[l - lo]);
        }
        sum += make_rational(head, node_den) * inner;
    }
    return sum * Rational(factorial(n - s), factorial(n - r - 1));
}

Rational kernel(const TopRow& top, const SiteCoord& ur, const SiteCoord& vs) {
    return ktilde(top, ur, vs) - phi(ur.r, vs.r, ur.u, vs.u);
}

cpp_int bareiss_determinant(std::vector<std::vector<cpp_int>> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    cpp_int sign = 1;
    cpp_int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

Rational rational_determinant(const std::vector<std::vector<Rational>>& m) {
    // Scale each row to integers, run Bareiss, then undo the scaling.
    std::vector<std::vector<cpp_int>> im(m.size());
    cpp_int scale = 1;
    for (std::size_t i = 0; i < m.size(); ++i) {
        cpp_int l = 1;
        for (const auto& q : m[i]) {
            const cpp_int d = boost::multiprecision::denominator(q);
            l = l / boost::multiprecision::gcd(l, d) * d;
        }
        scale *= l;
        for (const auto& q : m[i])
            im[i].push_back(boost::multiprecision::numerator(q) * (l / boost::multiprecision::denominator(q)));
    }
    return make_rational(bareiss_determinant(std::move(im)), scale);
}

Rational correlation(const TopRow& top, const std::vector<SiteCoord>& sites) {
    std::set<SiteCoord> seen;
    for (const auto& s : sites) {
        check_site(top, s);
        if (!seen.insert(s).second)
            throw Error(Errc::DuplicateSite,
                        "site (" + std::to_string(s.u) + "," + std::to_string(s.r) + ") repeated");
    }
    std::vector<std::vector<Rational>> m(sites.size(), std::vector<Rational>(sites.size()));
    for (std::size_t i = 0; i < sites.size(); ++i)
        for (std::size_t j = 0; j < sites.size(); ++j) m[i][j] = kernel(top, sites[i], sites[j]);
    return rational_determinant(m);
}

ContourParams default_contours(const TopRow& top, const SiteCoord& ur, const SiteCoord& vs, int nodes) {
    check_site(top, ur);
    check_site(top, vs);
    const double n = top.n();
    const long excluded = ur.u + ur.r - top.n();
    std::vector<double> req;
    for (long xk : top.x)
        if (xk >= ur.u) req.push_back(xk / n);

    ContourParams p;
    p.nodes = nodes;
    if (req.empty()) {
        // No enclosed poles: a small circle strictly between the excluded and cancelled ones.
        p.Gamma_center = (excluded + 0.5) / n;
        p.Gamma_radius = 0.25 / n;
    } else {
        const double hi = *std::max_element(req.begin(), req.end());
        const double lo = *std::min_element(req.begin(), req.end());
        const double half = 0.5 * (hi - lo);
        const double gap = lo - excluded / n;
        // 10% margin, capped so the circle stays clear of the first excluded pole.
        const double margin = std::min(0.1 * std::max(half, 1.0 / n), 0.5 * gap);
        p.Gamma_center = 0.5 * (hi + lo);
        p.Gamma_radius = half + margin;
    }
    double need = p.Gamma_radius;
    for (long j = vs.u + vs.r - top.n(); j <= vs.u; ++j) need = std::max(need, std::abs(j / n - p.Gamma_center));
    p.gamma_center = p.Gamma_center;
    p.gamma_radius = 1.5 * need;
    return p;
}

void check_contours(const TopRow& top, const SiteCoord& ur, const SiteCoord& vs, const ContourParams& p) {
    const double n = top.n();
    auto fail = [](const std::string& m) { throw Error(Errc::ContourViolation, m); };
    if (!is_power_of_two(p.nodes) || p.nodes < 256) fail("node count must be a power of two >= 256");
    if (!(p.Gamma_radius > 0.0) || !(p.gamma_radius > 0.0)) fail("radii must be positive");
    const double sep = std::abs(p.gamma_center - p.Gamma_center);
    if (sep + p.Gamma_radius >= p.gamma_radius) fail("Gamma is not strictly inside gamma");
    for (long xk : top.x) {
        const double d = std::abs(xk / n - p.Gamma_center);
        if (xk >= ur.u && d >= p.Gamma_radius) fail("Gamma misses x=" + std::to_string(xk));
        if (xk <= ur.u + ur.r - top.n() && d <= p.Gamma_radius) fail("Gamma encloses x=" + std::to_string(xk));
    }
    for (long j = vs.u + vs.r - top.n(); j <= vs.u; ++j)
        if (std::abs(j / n - p.gamma_center) >= p.gamma_radius) fail("gamma misses j=" + std::to_string(j));
}

std::complex<double> kernel_contour(const TopRow& top, const SiteCoord& ur, const SiteCoord& vs,
                                    const ContourParams& p) {
    check_site(top, ur);
    check_site(top, vs);
    check_contours(top, ur, vs, p);
    using C = std::complex<double>;
    const int n = top.n();
    const double dn = n;
    const int N = p.nodes;

    std::vector<C> z(N), zw(N), w(N), ww(N);
    for (int a = 0; a < N; ++a) {
        const C e = std::polar(1.0, 2.0 * std::numbers::pi * a / N);
        z[a] = p.Gamma_center + p.Gamma_radius * e;
        w[a] = p.gamma_center + p.gamma_radius * e;
        // z-part: prod (z - j/n) / prod (z - x_i/n), times (z - c) from dz.
        C A = z[a] - p.Gamma_center;
        for (long j = ur.u + ur.r - n + 1; j <= ur.u - 1; ++j) A *= (z[a] - j / dn);
        for (long xi : top.x) A /= (z[a] - xi / dn);
        zw[a] = A;
        C B = w[a] - p.gamma_center;
        for (long xi : top.x) B *= (w[a] - xi / dn);
        for (long j = vs.u + vs.r - n; j <= vs.u; ++j) B /= (w[a] - j / dn);
        ww[a] = B;
    }
    C J = 0.0;
    for (int b = 0; b < N; ++b) {
        C row = 0.0;
        for (int a = 0; a < N; ++a) row += zw[a] / (w[b] - z[a]);
        J += ww[b] * row;
    }
    J /= static_cast<double>(N) * N;

    const double pref = to_double(Rational(factorial(n - vs.r), factorial(n - ur.r - 1))) *
                        std::pow(dn, vs.r - ur.r - 1);
    return pref * J - to_double(phi(ur.r, vs.r, ur.u, vs.u));
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string kernel_json(const TopRow& top, const SiteCoord& ur, const SiteCoord& vs, const Rational& value) {
    nlohmann::ordered_json j;
    j["n"] = top.n();
    j["toprow"] = top.x;
    j["query"] = {{"u", ur.u}, {"r", ur.r}, {"v", vs.u}, {"s", vs.r}};
    j["value"] = {{"num", boost::multiprecision::numerator(value).str()},
                  {"den", boost::multiprecision::denominator(value).str()}};
    return j.dump() + "\n";
}

} // namespace gtedge
