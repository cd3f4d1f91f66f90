#ifndef GTEDGE_KERNEL_HPP
#define GTEDGE_KERNEL_HPP

#include <gtedge/error.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>
#include <vector>

namespace gtedge {

using Rational = boost::multiprecision::cpp_rational;

/// Strictly decreasing top row x_1 > ... > x_n.
struct TopRow {
    std::vector<long> x;

    int n() const { return static_cast<int>(x.size()); }
};

/// num/den with the sign moved to the numerator (the two-argument
/// cpp_rational constructor rejects negative denominators).
Rational make_rational(boost::multiprecision::cpp_int num, boost::multiprecision::cpp_int den);

TopRow make_top_row(std::vector<long> x); // throws InvalidTopRow

/// Site (u, r) on row r in 1..n-1.
struct SiteCoord {
    long u;
    int r;

    bool operator==(const SiteCoord& o) const { return u == o.u && r == o.r; }
    bool operator<(const SiteCoord& o) const { return r != o.r ? r < o.r : u < o.u; }
};

/// Throws RowOutOfRange unless 1 <= r <= n-1 and u >= x_n + n - r.
void check_site(const TopRow& top, const SiteCoord& s);
bool admissible(const TopRow& top, const SiteCoord& s);

Rational phi(int r, int s, long u, long v);
Rational ktilde(const TopRow& top, const SiteCoord& ur, const SiteCoord& vs);
Rational kernel(const TopRow& top, const SiteCoord& ur, const SiteCoord& vs);

/// det[K(site_i, site_j)] by fraction-free elimination.
Rational correlation(const TopRow& top, const std::vector<SiteCoord>& sites);

/// Fraction-free (Bareiss) determinant of an integer matrix.
boost::multiprecision::cpp_int bareiss_determinant(std::vector<std::vector<boost::multiprecision::cpp_int>> m);
Rational rational_determinant(const std::vector<std::vector<Rational>>& m);

struct ContourParams {
    std::complex<double> gamma_center;
    double gamma_radius = 0.0;
    std::complex<double> Gamma_center;
    double Gamma_radius = 0.0;
    int nodes = 1024;
};

/// Default circles for a query: Gamma around {x_j/n : x_j >= u}, gamma
/// concentric and 1.5x the radius enclosing Gamma and the w-poles.
ContourParams default_contours(const TopRow& top, const SiteCoord& ur, const SiteCoord& vs, int nodes = 1024);

/// Throws ContourViolation when the circles miss a required pole condition.
void check_contours(const TopRow& top, const SiteCoord& ur, const SiteCoord& vs, const ContourParams& p);

/// Trapezoid-rule double contour value of K_n (imaginary part is residue).
std::complex<double> kernel_contour(const TopRow& top, const SiteCoord& ur, const SiteCoord& vs,
                                    const ContourParams& p);

double to_double(const Rational& q);

/// {"n":..,"toprow":[..],"query":{..},"value":{"num":"..","den":".."}}
std::string kernel_json(const TopRow& top, const SiteCoord& ur, const SiteCoord& vs, const Rational& value);

} // namespace gtedge

#endif
