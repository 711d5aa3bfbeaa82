#ifndef NLFRONT_ACTION_HPP
#define NLFRONT_ACTION_HPP

#include <vector>

#include "nlfront/dynamics.hpp"

namespace nlfront {

// Large-deviations cost density H(b,u,w); u = phi, w = -tanh(beta J*phi),
// b = dphi + phi - tanh(beta J*phi).  Nonnegative, zero iff b = 0, convex in b.
double cost_density(double b, double u, double w);

struct ReversibilityRecord {
    double dF_term = 0.0;    // (beta/2)(F(end) - F(start))
    double clip_term = 0.0;  // integral of ||1 ∧ |f(phi)|||_2^2 dt
    double slack = 0.0;      // total - dF_term - clip_term
};

struct CostReport {
    double total = 0.0;
    double l2_cost = 0.0;  // comparison column: integral of b^2 dx dt
    ReversibilityRecord reversibility;
    // slab decomposition (filled by classify_slabs)
    double slab_length = 0.0;
    double delta_threshold = 0.0;
    std::vector<double> slab_cost;
    std::vector<bool> slab_good;
    int bad_count = 0;
};

// per-slice spatial integrals of H and of b^2 (trapezoid in x)
struct ActionDensity {
    double dt = 0.0;
    std::vector<double> h_per_slice;
    std::vector<double> b2_per_slice;
    std::vector<double> clip_per_slice;  // ||1 ∧ |f|||_2^2 per slice
};

ActionDensity action_density(const Trajectory& traj, const ModelParams& params);
CostReport action(const Trajectory& traj, const ModelParams& params);

// two-slab good/bad classification: slab j is good when both it and its
// predecessor carry cost below delta
CostReport classify_slabs(const Trajectory& traj, const ModelParams& params, double slab_length,
                          double delta);

struct TruncationResult {
    ForcingField b1;
    double truncated_mass = 0.0;  // integral of |b| over {|b| > Delta}
};

TruncationResult truncate_field(const ForcingField& b, double Delta);

struct AlphaField {
    Grid1D grid;
    double dt = 0.0;
    std::vector<std::vector<double>> slices;  // alpha(x, t)
    double c_star = 0.0;                      // max 1/alpha
};

// alpha(x,t) = sqrt((1 - m̄_{xi(t)}^2)/8) along a centers path
AlphaField weight_alpha(const CentersPath& path, const InstantonData& inst);

struct QuadraticErrorAudit {
    double C_measured = 0.0;   // smallest C with |H - b^2/(4(1+uw))| <= C|b|^3 on the sample
    double c_star = 0.0;
    double lhs_alpha_b2 = 0.0;  // integral |alpha b1|^2 on {|b|<=Delta}
    double lhs_h_error = 0.0;   // integral |H - b1^2/(4(1+uw))| on {|b|<=Delta}
    double h_mass = 0.0;        // integral H on {|b|<=Delta}
    double bound_alpha = 0.0;   // (1/(1-c*^2 C Delta)) h_mass
    double bound_error = 0.0;   // (c*^2 C Delta/(1-c*^2 C Delta)) h_mass
    bool ok_alpha = false;
    bool ok_error = false;
    double worst_b = 0.0, worst_u = 0.0, worst_w = 0.0;  // where C is attained
};

QuadraticErrorAudit quadratic_error_audit(const Trajectory& traj, const AlphaField& alpha,
                                          const ModelParams& params, double Delta);

}  // namespace nlfront

#endif
