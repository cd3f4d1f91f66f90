#include <gtedge/combinatorics.hpp>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gtedge {

namespace {

using boost::multiprecision::cpp_int;

// Candidate range for lower[i]: upper[i+1]+1 .. upper[i].
struct Slot {
    long lo, hi;
};

std::vector<Slot> slots(const std::vector<long>& upper) {
    std::vector<Slot> s;
    for (std::size_t i = 0; i + 1 < upper.size(); ++i) s.push_back({upper[i + 1] + 1, upper[i]});
    return s;
}

cpp_int vandermonde(const std::vector<long>& y) {
    cpp_int v = 1;
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = i + 1; j < y.size(); ++j) v *= (y[i] - y[j]);
    return v;
}

// Uniform in [0, total) by rejection on msb(total)+1 random bits.
cpp_int draw_below(boost::random::mt19937_64& eng, const cpp_int& total) {
    if (total <= 1) return 0;
    const cpp_int bound = total - 1;
    const unsigned bits = boost::multiprecision::msb(bound) + 1;
    if (bits <= 64) {
        boost::random::uniform_int_distribution<std::uint64_t> d(0, bound.convert_to<std::uint64_t>());
        return d(eng);
    }
    for (;;) {
        cpp_int v = 0;
        for (unsigned got = 0; got < bits; got += 64) v = (v << 64) | cpp_int(eng());
        v &= (cpp_int(1) << bits) - 1;
        if (v < total) return v;
    }
}

// Odometer over the product of slots in lexicographic order.
bool next_row(std::vector<long>& row, const std::vector<Slot>& s) {
    for (std::size_t i = s.size(); i-- > 0;) {
        if (row[i] < s[i].hi) {
            ++row[i];
            for (std::size_t j = i + 1; j < s.size(); ++j) row[j] = s[j].lo;
            return true;
        }
    }
    return false;
}

void descend(GTPattern& p, int r, const std::function<void(const GTPattern&)>& visit) {
    // Fills rows[r-1] from rows[r].
    if (r == 0) {
        visit(p);
        return;
    }
    const auto s = slots(p.rows[r]);
    std::vector<long> row(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) row[i] = s[i].lo;
    do {
        p.rows[r - 1] = row;
        descend(p, r - 1, visit);
    } while (next_row(row, s));
}

cpp_int candidate_count(const std::vector<Slot>& s) {
    cpp_int c = 1;
    for (const auto& x : s) c *= (x.hi - x.lo + 1);
    return c;
}

// Sum_{y in [lo,hi]} (y - shift)^j for j = 0..m-1.
std::vector<cpp_int> power_sums(long lo, long hi, long shift, int m) {
    std::vector<cpp_int> out(m, 0);
    for (long y = lo; y <= hi; ++y) {
        cpp_int p = 1;
        for (int j = 0; j < m; ++j) {
            out[j] += p;
            p *= (y - shift);
        }
    }
    return out;
}

std::vector<cpp_int> powers(long y, long shift, int m) {
    std::vector<cpp_int> out(m);
    cpp_int p = 1;
    for (int j = 0; j < m; ++j) {
        out[j] = p;
        p *= (y - shift);
    }
    return out;
}

// Solves M x = e_k over the rationals.
std::vector<Rational> solve_unit(std::vector<std::vector<Rational>> M, int k) {
    const int m = static_cast<int>(M.size());
    std::vector<Rational> b(m, 0);
    b[k] = 1;
    for (int c = 0; c < m; ++c) {
        int p = c;
        while (M[p][c] == 0) ++p;
        std::swap(M[p], M[c]);
        std::swap(b[p], b[c]);
        for (int i = c + 1; i < m; ++i) {
            if (M[i][c] == 0) continue;
            const Rational f = M[i][c] / M[c][c];
            for (int j = c; j < m; ++j) M[i][j] -= f * M[c][j];
            b[i] -= f * b[c];
        }
    }
    std::vector<Rational> x(m);
    for (int i = m - 1; i >= 0; --i) {
        Rational acc = b[i];
        for (int j = i + 1; j < m; ++j) acc -= M[i][j] * x[j];
        x[i] = acc / M[i][i];
    }
    return x;
}

} // namespace

bool GTPattern::has_particle(long u, int r) const {
    if (r < 1 || r > static_cast<int>(rows.size())) return false;
    const auto& row = rows[r - 1];
    return std::find(row.begin(), row.end(), u) != row.end();
}

bool interlaces(const std::vector<long>& upper, const std::vector<long>& lower) {
    if (upper.size() != lower.size() + 1)
        throw Error(Errc::LengthMismatch, "upper row must have one more entry than lower");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(upper[i] >= lower[i] && lower[i] > upper[i + 1])) return false;
    return true;
}

bool interlaces_by_determinant(const std::vector<long>& upper, const std::vector<long>& lower) {
    if (upper.size() != lower.size() + 1)
        throw Error(Errc::LengthMismatch, "upper row must have one more entry than lower");
    // Rows i <= m are 1(x_j >= y_i), the last row pads y with -infinity; the
    // determinant is 1 exactly when #{j : x_j >= y_i} = i for every i.
    const std::size_t m = upper.size();
    std::vector<std::vector<cpp_int>> a(m, std::vector<cpp_int>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a[i][j] = (i == m - 1 || upper[j] >= lower[i]) ? 1 : 0;
    return bareiss_determinant(a) != 0;
}

bool valid_pattern(const GTPattern& p) {
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
        if (p.rows[r].size() != r + 1) return false;
        if (r + 1 < p.rows.size() && !interlaces(p.rows[r + 1], p.rows[r])) return false;
    }
    return true;
}

void enumeration_guard(const TopRow& top) {
    if (top.n() > 8 || top.x.front() - top.x.back() > 12)
        throw Error(Errc::TooLarge, "enumeration limited to n <= 8 and x_1 - x_n <= 12");
}

void for_each_pattern(const TopRow& top, const std::function<void(const GTPattern&)>& visit) {
    enumeration_guard(top);
    GTPattern p;
    p.rows.resize(top.n());
    p.rows.back() = top.x;
    descend(p, top.n() - 1, visit);
}

std::vector<GTPattern> enumerate_patterns(const TopRow& top) {
    std::vector<GTPattern> out;
    for_each_pattern(top, [&](const GTPattern& p) { out.push_back(p); });
    return out;
}

BigInt count_patterns(const std::vector<long>& x) {
    cpp_int num = 1, den = 1;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            num *= (x[i] - x[j]);
            den *= static_cast<long>(j - i);
        }
    return num / den;
}

BigInt count_patterns(const TopRow& top) { return count_patterns(top.x); }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed + stream * 0x9e3779b97f4a7c15ULL);
}

PatternSampler::PatternSampler(TopRow top, std::uint64_t enumerate_below)
    : top_(std::move(top)), enumerate_below_(enumerate_below) {}

const PatternSampler::RowTable& PatternSampler::table(const std::vector<long>& upper) {
    auto it = cache_.find(upper);
    if (it != cache_.end()) return it->second;
    RowTable t;
    const auto s = slots(upper);
    std::vector<long> row(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) row[i] = s[i].lo;
    cpp_int acc = 0;
    do {
        acc += vandermonde(row);
        t.rows.push_back(row);
        t.cumulative.push_back(acc);
    } while (next_row(row, s));
    return cache_.emplace(upper, std::move(t)).first->second;
}

std::vector<long> PatternSampler::draw_row(const std::vector<long>& upper, boost::random::mt19937_64& eng) {
    const auto s = slots(upper);
    if (candidate_count(s) <= enumerate_below_) {
        const RowTable& t = table(upper);
        const cpp_int pick = draw_below(eng, t.cumulative.back());
        const auto pos = std::upper_bound(t.cumulative.begin(), t.cumulative.end(), pick) - t.cumulative.begin();
        return t.rows[pos];
    }
    // Coordinate-wise: the row weight is the Vandermonde det[(y_i - c)^j], and
    // summing a row of the determinant over its slot marginalizes it.
    const int m = static_cast<int>(s.size());
    const long shift = upper.back();
    std::vector<std::vector<Rational>> M(m, std::vector<Rational>(m));
    auto set_row = [&](int i, const std::vector<cpp_int>& v) {
        for (int j = 0; j < m; ++j) M[i][j] = Rational(v[j]);
    };
    for (int i = 0; i < m; ++i) set_row(i, power_sums(s[i].lo, s[i].hi, shift, m));
    std::vector<long> row(m);
    for (int k = 0; k < m; ++k) {
        // Cofactors of row k are det(M) times column k of M^{-1}.
        const Rational det = rational_determinant(M);
        const auto x = solve_unit(M, k);
        std::vector<cpp_int> cof(m);
        for (int j = 0; j < m; ++j) cof[j] = boost::multiprecision::numerator(Rational(det * x[j]));
        std::vector<cpp_int> cum;
        cpp_int acc = 0;
        for (long c = s[k].lo; c <= s[k].hi; ++c) {
            const auto p = powers(c, shift, m);
            cpp_int w = 0;
            for (int j = 0; j < m; ++j) w += p[j] * cof[j];
            acc += w;
            cum.push_back(acc);
        }
        // det[(y_i - c)^j] carries the sign (-1)^{m(m-1)/2} on decreasing rows.
        if (acc < 0) {
            for (auto& c : cum) c = -c;
            acc = -acc;
        }
        const cpp_int pick = draw_below(eng, acc);
        const auto pos = std::upper_bound(cum.begin(), cum.end(), pick) - cum.begin();
        row[k] = s[k].lo + static_cast<long>(pos);
        set_row(k, powers(row[k], shift, m));
    }
    return row;
}

GTPattern PatternSampler::sample(std::uint64_t seed) {
    boost::random::mt19937_64 eng(splitmix64(seed));
    GTPattern p;
    p.rows.resize(top_.n());
    p.rows.back() = top_.x;
    for (int r = top_.n() - 1; r >= 1; --r) p.rows[r - 1] = draw_row(p.rows[r], eng);
    return p;
}

GTPattern sample_pattern(const TopRow& top, std::uint64_t seed) { return PatternSampler(top).sample(seed); }

Rational empirical_correlation(const TopRow& top, const std::vector<SiteCoord>& sites) {
    enumeration_guard(top);
    cpp_int hits = 0, total = 0;
    for_each_pattern(top, [&](const GTPattern& p) {
        ++total;
        for (const auto& s : sites)
            if (!p.has_particle(s.u, s.r)) return;
        ++hits;
    });
    return make_rational(hits, total);
}

Tiling to_tiling(const GTPattern& p) {
    Tiling t;
    t.n = static_cast<int>(p.rows.size());
    for (int r = 1; r <= t.n; ++r)
        for (long u : p.rows[r - 1]) t.lozenges.push_back({Lozenge::A, u, r});
    for (int r = 1; r < t.n; ++r) {
        const auto& lower = p.rows[r - 1];
        const auto& upper = p.rows[r];
        for (std::size_t i = 0; i < lower.size(); ++i) {
            const long q = upper[i], q_next = upper[i + 1], y = lower[i];
            for (long u = q_next + 1; u < y; ++u) t.lozenges.push_back({Lozenge::C, u, r});
            for (long u = y + 1; u <= q; ++u) t.lozenges.push_back({Lozenge::B, u, r});
        }
    }
    return t;
}

GTPattern from_tiling(const Tiling& t) {
    GTPattern p;
    p.rows.resize(t.n);
    for (const auto& l : t.lozenges)
        if (l.type == Lozenge::A) p.rows[l.row - 1].push_back(l.u);
    for (auto& row : p.rows) std::sort(row.begin(), row.end(), std::greater<long>());
    return p;
}

std::string tiling_svg(const Tiling& t) {
    const double h = std::sqrt(3.0) / 2.0;
    struct P {
        double x, y;
    };
    std::vector<std::pair<Lozenge, std::vector<P>>> polys;
    double xmin = 1e300, xmax = -1e300, ymax = 0.0;
    for (const auto& l : t.lozenges) {
        const double X = l.u - 0.5 * (t.n - l.row);
        const double Y = l.row * h;
        std::vector<P> v;
        switch (l.type) {
        case Lozenge::A: v = {{X, Y}, {X + 0.5, Y + h}, {X + 1, Y}, {X + 0.5, Y - h}}; break;
        case Lozenge::B: v = {{X, Y}, {X + 1, Y}, {X + 0.5, Y + h}, {X - 0.5, Y + h}}; break;
        case Lozenge::C: v = {{X, Y}, {X + 1, Y}, {X + 1.5, Y + h}, {X + 0.5, Y + h}}; break;
        }
        for (const auto& q : v) {
            xmin = std::min(xmin, q.x);
            xmax = std::max(xmax, q.x);
            ymax = std::max(ymax, q.y);
        }
        polys.emplace_back(l.type, std::move(v));
    }
    if (polys.empty()) xmin = xmax = 0.0;
    const double scale = 20.0, pad = 1.0;
    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (xmax - xmin + 2 * pad) * scale << "\" height=\""
       << (ymax + 2 * pad) * scale << "\" viewBox=\"" << (xmin - pad) << " " << -(ymax + pad) << " "
       << (xmax - xmin + 2 * pad) << " " << (ymax + 2 * pad) << "\">\n";
    os << "<g stroke=\"#222\" stroke-width=\"0.03\">\n";
    for (const auto& [type, v] : polys) {
        const char* fill = type == Lozenge::A ? "#e8c547" : type == Lozenge::B ? "#5c80bc" : "#cdd1c4";
        os << "<polygon fill=\"" << fill << "\" points=\"";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i].x << "," << -v[i].y;
        os << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

std::string pattern_to_json(const GTPattern& p) {
    nlohmann::json j = p.rows;
    return j.dump() + "\n";
}

} // namespace gtedge
