#ifndef GTEDGE_COMBINATORICS_HPP
#define GTEDGE_COMBINATORICS_HPP

#include <gtedge/error.hpp>
#include <gtedge/kernel.hpp>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/random/mersenne_twister.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace gtedge {

using BigInt = boost::multiprecision::cpp_int;

/// rows[r-1] = y^{(r)}, r = 1..n, each strictly decreasing; rows[n-1] is the top row.
struct GTPattern {
    std::vector<std::vector<long>> rows;

    bool operator==(const GTPattern& o) const { return rows == o.rows; }
    bool operator<(const GTPattern& o) const { return rows < o.rows; }
    bool has_particle(long u, int r) const;
};

/// upper has one more entry than lower; checks u1 >= l1 > u2 >= l2 > ... > u_{k+1}.
bool interlaces(const std::vector<long>& upper, const std::vector<long>& lower);

/// Interlacing via det[1(upper_j >= lower_i)] over rows padded to a common length.
bool interlaces_by_determinant(const std::vector<long>& upper, const std::vector<long>& lower);

bool valid_pattern(const GTPattern& p);

/// Guard shared by every exhaustive routine: n <= 8 and x_1 - x_n <= 12.
void enumeration_guard(const TopRow& top);

/// Visits every pattern with the given top row once, in lexicographic order of
/// (y^{(n-1)}, y^{(n-2)}, ..., y^{(1)}).
void for_each_pattern(const TopRow& top, const std::function<void(const GTPattern&)>& visit);
std::vector<GTPattern> enumerate_patterns(const TopRow& top);

/// prod_{i<j} (x_i - x_j)/(j - i).
BigInt count_patterns(const TopRow& top);
BigInt count_patterns(const std::vector<long>& row);

/// splitmix64 finalizer; stream k of a seed is splitmix(seed + k * golden).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// Exact uniform sampler.  Rows are drawn top-down, each candidate weighted by
/// count_patterns of the row it heads.  Rows with at most enumerate_below
/// candidates are drawn from a cached table; wider rows are drawn one entry
/// at a time from Vandermonde marginals.  The generator is mt19937_64 seeded
/// with splitmix64(seed).
class PatternSampler {
public:
    explicit PatternSampler(TopRow top, std::uint64_t enumerate_below = 1u << 14);

    GTPattern sample(std::uint64_t seed);
    const TopRow& top() const { return top_; }

private:
    struct RowTable {
        std::vector<std::vector<long>> rows;
        std::vector<BigInt> cumulative;
    };
    const RowTable& table(const std::vector<long>& upper);
    std::vector<long> draw_row(const std::vector<long>& upper, boost::random::mt19937_64& eng);

    TopRow top_;
    std::uint64_t enumerate_below_;
    std::map<std::vector<long>, RowTable> cache_;
};

GTPattern sample_pattern(const TopRow& top, std::uint64_t seed);

Rational empirical_correlation(const TopRow& top, const std::vector<SiteCoord>& sites);

enum class Lozenge { A, B, C };

struct LozengePlacement {
    Lozenge type;
    long u;  // horizontal slot in pattern coordinates
    int row; // line r for type A, strip (r, r+1) for B and C
};

struct Tiling {
    int n = 0;
    std::vector<LozengePlacement> lozenges;
};

/// Type A at every particle on rows 1..n; B and C fill each strip between
/// consecutive rows inside the interlacing hull.
Tiling to_tiling(const GTPattern& p);
GTPattern from_tiling(const Tiling& t);
std::string tiling_svg(const Tiling& t);

std::string pattern_to_json(const GTPattern& p);

} // namespace gtedge

#endif
