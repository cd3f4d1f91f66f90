#ifndef GTEDGE_SADDLE_HPP
#define GTEDGE_SADDLE_HPP

#include <gtedge/measure.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gtedge {

/// f'_{(chi,eta)}(w) = C(w) + log(w - chi) - log(w - chi - eta + 1), held in
/// the split form of a signed piecewise density g (mu off [chi+eta-1, chi],
/// mu - lambda on it) so that one evaluator serves the half plane and the
/// admissible real set.  The MeasureSpec must outlive the context.
class SaddleContext {
public:
    SaddleContext(const MeasureSpec& spec, double chi, double eta);

    const MeasureSpec& measure() const { return *spec_; }
    double chi() const { return chi_; }
    double eta() const { return eta_; }
    double beta() const { return chi_ + eta_ - 1.0; }
    const SupportDecomposition& supports() const { return sets_; }

    /// True when real t lies in S1 u S2 u S3.
    bool singular(double t) const { return g_.on_support(t); }
    /// Real endpoints of the pieces of g, where f' has log singularities.
    const std::vector<double>& breakpoints() const { return breaks_; }

    cplx f_prime(cplx w) const;
    /// out[d] = f^{(d+1)}(w), d = 0..max_order.
    void derivs(cplx w, int max_order, cplx* out) const;

private:
    const MeasureSpec* spec_;
    double chi_;
    double eta_;
    SupportDecomposition sets_;
    PiecewiseCauchy g_;
    std::vector<double> breaks_;
};

cplx f_prime(const SaddleContext& ctx, cplx w);

struct Rect {
    double x0, x1, y0, y1;
};

/// Roots of f' in rect counted with multiplicity (argument principle), or on
/// a real interval (sign changes plus tangential zeros).
using RootRegion = std::variant<Rect, Interval>;
int count_roots(const SaddleContext& ctx, const RootRegion& region);

/// Winding number of f' around the rectangle boundary.
int winding_number(const SaddleContext& ctx, const Rect& r);

/// Rectangle in the upper half plane that holds every non-real root.
Rect search_rectangle(const SaddleContext& ctx);

std::optional<cplx> upper_root(const SaddleContext& ctx);

struct Membership {
    bool inside;
    std::optional<cplx> witness;
};
Membership liquid_membership(const SaddleContext& ctx);

struct ChiEta {
    double chi;
    double eta;
    double im_chi; // imaginary residue before casting, for diagnostics
    double im_eta;
};
ChiEta chi_eta_from_w(const MeasureSpec& spec, cplx w);

int real_root_multiplicity(const SaddleContext& ctx, double t);

enum class RootZone { UpperHalf, J1, J2, J3, J4, K };

struct Root {
    cplx location;
    int multiplicity;
    RootZone zone;
    int k_index = -1; // component index when zone == K
};

struct RootReport {
    std::vector<Root> roots;
    int upper = 0;                 // roots in H (each has a conjugate twin)
    int j[4] = {0, 0, 0, 0};       // real roots in J1..J4
    std::vector<int> k;            // real roots per K component
};

RootReport find_roots(const SaddleContext& ctx);

/// Violated root-count bounds for the applicable case (empty when none).
std::vector<std::string> root_bound_violations(const SaddleContext& ctx, const RootReport& rep);

} // namespace gtedge

#endif
