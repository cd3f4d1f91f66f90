#ifndef GTEDGE_MEASURE_HPP
#define GTEDGE_MEASURE_HPP

#include <gtedge/error.hpp>

#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gtedge {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Support threshold: a density value counts as nonzero (or as below one)
/// only when it clears this margin.
inline constexpr double kDensityTol = 1e-12;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains_open(double t) const { return t > lo && t < hi; }
    bool contains_closed(double t) const { return t >= lo && t <= hi; }
    bool is_point() const { return lo == hi; }
};

/// Polynomial density on a closed interval, coefficients in ascending degree
/// in the global variable x.
struct DensityPiece {
    Interval interval;
    std::vector<double> coeffs;
};

double poly_eval(const std::vector<double>& c, double x);
std::vector<double> poly_derivative(const std::vector<double>& c);
/// Real roots of c inside [lo, hi], sorted.  Degree must be at most 8.
std::vector<double> poly_real_roots(const std::vector<double>& c, double lo, double hi);

/// Cauchy transform w -> \int g(x) dx / (w - x) of an arbitrary signed
/// piecewise polynomial g, plus its w-derivatives.
class PiecewiseCauchy {
public:
    PiecewiseCauchy() = default;
    explicit PiecewiseCauchy(const std::vector<DensityPiece>& pieces);

    /// out[d] = d-th derivative for d = 0..max_order (max_order <= 4).
    void eval(cplx w, int max_order, cplx* out) const;
    cplx value(cplx w) const;
    cplx deriv(cplx w, int order) const;

    /// True when real t lies on a piece carrying nonzero density.
    bool on_support(double t) const;
    bool empty() const { return local_.empty(); }
    /// Sorted, deduplicated piece endpoints.
    std::vector<double> breakpoints() const;

private:
    struct Local {
        double lo, hi, mid, half;
        std::vector<double> q;       // coefficients in s = (x - mid) / half
        std::vector<double> moments; // \int_{-1}^{1} q(s) s^j ds, j = 0..
    };
    std::vector<Local> local_;
};

enum class Density { Zero, One, Partial };

/// Maximal run of one density kind.  Partial pieces are never merged.
struct DensityRegion {
    Interval span;
    Density kind;
    std::vector<double> coeffs; // meaningful for Partial only
};

class MeasureSpec {
public:
    const std::vector<DensityPiece>& pieces() const { return pieces_; }
    const std::vector<DensityRegion>& regions() const { return regions_; }
    double a() const { return a_; }
    double b() const { return b_; }
    const PiecewiseCauchy& transform() const { return cauchy_; }

    /// phi(x); at a breakpoint the right-hand value is returned.
    double density(double x) const;
    /// \int x^k mu[dx].
    double moment(int k) const;

private:
    friend MeasureSpec validate(std::vector<DensityPiece> raw);
    std::vector<DensityPiece> pieces_;
    std::vector<DensityRegion> regions_;
    double a_ = 0.0;
    double b_ = 0.0;
    PiecewiseCauchy cauchy_;
};

struct ValidationIssue {
    Errc code;
    std::string detail;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<ValidationIssue> issues);
    const std::vector<ValidationIssue>& issues() const { return issues_; }

private:
    std::vector<ValidationIssue> issues_;
};

/// All violated invariants of a candidate spec (empty when valid).
std::vector<ValidationIssue> check(const std::vector<DensityPiece>& raw);
/// Throws ValidationError carrying every issue found by check().
MeasureSpec validate(std::vector<DensityPiece> raw);

cplx cauchy(const MeasureSpec& spec, cplx w);
cplx cauchy_deriv(const MeasureSpec& spec, cplx w, int order);

/// Pieces of mu with the open interval (lo, hi) removed.
std::vector<DensityPiece> remove_interval(const std::vector<DensityPiece>& pieces, double lo,
                                          double hi);
/// Pieces of mu restricted to [lo, hi].
std::vector<DensityPiece> restrict_to(const std::vector<DensityPiece>& pieces, double lo, double hi);

enum class RTag { Mu, LambdaMinusMu, Zero, One, Two };
const char* rtag_name(RTag t);

/// Open interval or single point of the set R.
struct RComponent {
    Interval span;
    RTag tag;
};

struct RDecomposition {
    std::vector<RComponent> components; // sorted, pairwise disjoint

    /// Component holding t; points are matched within 1e-12 relative.
    std::optional<std::size_t> locate(double t) const;
};

RDecomposition r_decomposition(const MeasureSpec& spec);

/// Real-axis data at t in R using the branch bookkeeping for each part of R.
/// For Mu/LambdaMinusMu/Zero the derivatives c1..c3 of C are filled; for
/// LambdaMinusMu/One/Two, I = (t2, t1) is maximal and ci0..ci3 hold
/// C_I and its derivatives.
struct RealExtension {
    RTag tag;
    double t2 = -kInf;
    double t1 = kInf;
    double exp_c = 0.0;                         // e^{C(t)}
    double exp_neg_c = 0.0;                     // e^{-C(t)}
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;        // C', C'', C'''
    double ci0 = 0.0, ci1 = 0.0, ci2 = 0.0, ci3 = 0.0;
};

RealExtension real_extension(const MeasureSpec& spec, const RDecomposition& rd, double t);

struct ExpC {
    double value;   // e^{C(t)}, may be +inf at R1
    double inverse; // e^{-C(t)}, may be +inf at R2
};

ExpC extended_exp_c(const MeasureSpec& spec, double t);

struct SupportDecomposition {
    std::vector<Interval> s1, s2, s3;
    std::vector<Interval> s; // merged union
    std::optional<Interval> j1, j2, j3, j4;
    std::vector<Interval> k;
};

/// Closed trapezoid test used by every (chi, eta) entry point.
bool in_trapezoid(const MeasureSpec& spec, double chi, double eta, double tol = 1e-12);

SupportDecomposition support_sets(const MeasureSpec& spec, double chi, double eta);

/// Measure-spec JSON: {"pieces":[{"interval":[lo,hi],"poly":[c0,...]}]}.
MeasureSpec measure_from_json(const std::string& text);
std::string measure_to_json(const MeasureSpec& spec);

} // namespace gtedge

#endif
