#ifndef NLFRONT_DYNAMICS_HPP
#define NLFRONT_DYNAMICS_HPP

#include <functional>
#include <vector>

#include "nlfront/statics.hpp"

namespace nlfront {

// Time-indexed profiles on a uniform step; slice k lives at t0 + k*dt.
struct Trajectory {
    Grid1D grid;
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<std::vector<double>> slices;

    int steps() const { return static_cast<int>(slices.size()) - 1; }
    double horizon() const { return dt * steps(); }
    double time_of(int k) const { return t0 + k * dt; }
    Profile profile(int k) const { return Profile(grid, slices[k]); }
};

// External field b(x_i, t_k) on the same mesh as its trajectory.
struct ForcingField {
    Grid1D grid;
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<std::vector<double>> slices;

    int steps() const { return static_cast<int>(slices.size()) - 1; }
    static ForcingField zeros_like(const Trajectory& traj);
};

// RK4 on dm/dt = -m + tanh(beta J*m); states clamped after every stage.
// record_stride >= 1 keeps every record_stride-th step (slice dt = stride*dt).
Trajectory evolve_unforced(const Profile& m0, double horizon, double dt,
                           const ModelParams& params, int record_stride = 1);

// RK4 on dm/dt = -m + tanh(beta J*m) + b, with b held piecewise-constant over
// each stored interval of the field (midpoint value).  dt subdivides the
// field's step.  Output slices sit on the field's mesh.
Trajectory evolve_forced(const Profile& m0, const ForcingField& b, double dt,
                         const ModelParams& params);

// b(phi) = dphi/dt + phi - tanh(beta J*phi); centered differences inside,
// second-order one-sided at the endpoints.
ForcingField force_of(const Trajectory& traj, const ModelParams& params);

struct CentersPath {
    std::vector<double> times;
    std::vector<std::vector<double>> centers;  // one vector per time slice
};

struct CoupledSystemResult {
    Trajectory phi1;
    Trajectory m;
    CentersPath xi_tilde;
    int sweeps = 0;
    std::vector<double> sweep_gaps;   // max center change per sweep
    double contraction_ratio = 0.0;   // last gap ratio
};

struct AnalysisParams;  // analysis.hpp

// Appendix-style Picard iteration for the coupled auxiliary system on one
// good slab: solve b(phi1) = alpha_k b1 and b(m) = b(phi1), refreshing the
// approximate centers once per sweep, until the center paths settle.
CoupledSystemResult solve_coupled_system(const Trajectory& phi, const ForcingField& b1,
                                         const Profile& m_init, const InstantonData& inst,
                                         const ModelParams& params,
                                         const AnalysisParams& aparams);

}  // namespace nlfront

#endif
