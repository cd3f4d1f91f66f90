#ifndef GTEDGE_FRONTIER_HPP
#define GTEDGE_FRONTIER_HPP

#include <gtedge/measure.hpp>

#include <string>
#include <vector>

namespace gtedge {

struct EdgePoint {
    double chi = 0.0;
    double eta = 0.0;
};

double distance(const EdgePoint& p, const EdgePoint& q);

/// Closed-form f_t'' .. f_t'''' on the real line at the edge point of t.
struct EdgeDerivs {
    double f2 = 0.0, f3 = 0.0, f4 = 0.0;
};

struct EdgeSample {
    double t = 0.0;
    EdgePoint point;
    RTag tag = RTag::Mu;
    int edge_case = 0;
    int multiplicity = 0;
    double x_vec[2] = {0.0, 0.0};
    double y_vec[2] = {0.0, 0.0};
    double a1 = 0.0, a2 = 0.0, b1 = 0.0, b2 = 0.0;
    EdgeDerivs derivs;
};

/// (chi_E, eta_E)(t).  Throws NotInR off R.
EdgePoint edge_point(const MeasureSpec& spec, double t);
EdgePoint edge_point(const MeasureSpec& spec, const RDecomposition& rd, double t);

/// (1/2 + \int x mu[dx], 0).
EdgePoint tangency_point(const MeasureSpec& spec);

/// Case number for a tag and multiplicity; 0 when the pair is not in the table.
int case_number(RTag tag, int multiplicity);

struct CaseInfo {
    int edge_case;
    int multiplicity;
};
CaseInfo classify_case(const MeasureSpec& spec, double t);

/// Orthogonal frame and coefficients of a(s) = a1 s + a2 s^2,
/// b(s) = b1 s^2 + b2 s^3 with E(t+s) - E(t) ~ a(s) x + b(s) y.
EdgeSample local_geometry(const MeasureSpec& spec, double t);
EdgeSample local_geometry(const MeasureSpec& spec, const RDecomposition& rd, double t);

/// Signed curvature of the polyline corner p1 (negative = clockwise turn).
double discrete_curvature(const EdgePoint& p0, const EdgePoint& p1, const EdgePoint& p2);

/// The five flat-boundary cases, or Unclassified.
enum class FlatCase { Case1 = 1, Case2, Case3, Case4, Case5, Unclassified };
const char* flat_case_name(FlatCase c);

/// A single point or an open interval of R \ R with one classification.
struct FlatPoint {
    Interval span;
    FlatCase kind;
};

/// Covers the complement of R, ordered by t.
std::vector<FlatPoint> flat_boundary_points(const MeasureSpec& spec);

struct Probe {
    std::vector<cplx> w;
    std::vector<EdgePoint> values;
    EdgePoint limit;   // last value
    double bound = 0;  // distance between the last two values
};

/// w_k = t + 2^{-k} e^{i angle}, k = 1..depths.
Probe boundary_probe(const MeasureSpec& spec, double t, int depths, double angle = 1.5707963267948966);
/// w_k = t_mid + 2^k e^{i pi/4}, approaching the tangency point.
Probe radial_probe(const MeasureSpec& spec, int depths);

/// Adaptive polyline over R ordered by t (clockwise from the tangency point).
std::vector<EdgeSample> sample_edge(const MeasureSpec& spec, int budget);

inline constexpr int kProbeDepth = 20;

/// Vertical probe of an Unclassified point.  The point counts as resolved
/// when the contact is linear and the probe distance to (t, 1) shrinks
/// between depth kProbeDepth/2 and kProbeDepth.
struct FlatProbe {
    double t = 0.0;
    bool linear_contact = false;
    EdgePoint limit;
    double distance = 0.0;
    bool approaching = false;
    bool resolved = false;
};

struct BoundaryAssembly {
    EdgePoint tangency;
    std::vector<std::vector<EdgeSample>> edge_segments; // maximal contiguous runs of R
    std::vector<Interval> flat_segments;                // emitted as {(t, 1)}
    std::vector<FlatPoint> flat_points;
    std::vector<FlatProbe> probes;                      // one per Unclassified point
    bool complete = false;
};

/// True when the density meets 0 or 1 at t with nonzero one-sided slope on
/// every side where it touches (the contact order handled by direct
/// calculation with w log w terms).
bool linear_contact(const MeasureSpec& spec, double t);

BoundaryAssembly assemble_boundary(const MeasureSpec& spec, int budget);

/// Header row then one LF-terminated row per sample.
std::string edge_csv(const std::vector<EdgeSample>& samples);
/// Tangency point, edge segments (sample fields as in edge_csv), flat
/// segments, flat points, probes and the completeness flag.
std::string boundary_json(const BoundaryAssembly& b);

} // namespace gtedge

#endif
