#ifndef NLFRONT_MACRO_HPP
#define NLFRONT_MACRO_HPP

#include <optional>
#include <string>
#include <vector>

#include "nlfront/analysis.hpp"

namespace nlfront {

struct MacroProblem {
    double R = 1.0;      // macroscopic displacement
    double T = 1.0;      // macroscopic time
    double V = 1.0;      // R/T
    double F_bar = 0.0;  // F(m̄)
    double mu = 0.0;     // mobility
    double P = 0.0;      // cost budget, > inf_n w_n
    double epsilon = 0.05;

    static MacroProblem make(double R, double T, double epsilon, const InstantonData& inst);
    double meso_displacement() const { return R / epsilon; }
    double meso_horizon() const { return T / (epsilon * epsilon); }
};

// mu = 4 / ||m̄'||^2_{L2(dnu)}: fixed so w_0 equals the moving-instanton cost
double mobility(const InstantonData& inst);

// w_n = n 2F(m̄) + (2n+1) (1/mu) (V/(2n+1))^2 T
double macro_cost(const MacroProblem& problem, int n);

struct OptimalCount {
    int n = 0;
    double w = 0.0;
};
OptimalCount optimal_nucleation_count(const MacroProblem& problem, int n_max = -1);

// phi(x,t) = m̄_{eps V t}: endpoints m̄ and m̄_{eps^-1 R}
Trajectory build_moving_instanton(const MacroProblem& problem, const InstantonData& inst,
                                  double dt_record);

struct NucleationPath {
    Trajectory traj;        // m_beta -> droplet(gap), symmetric in x
    double cost = 0.0;      // action with the true H
    double forward_cost = 0.0;   // cost of the free/growth half (when spliced)
    double droplet_F = 0.0;      // F at the endpoint droplet
    double ell_eps = 0.0;        // e^{-alpha l_eps} = eps^{3/2}
    double target_gap = 0.0;
    double critical_halfwidth = 0.0;  // horizon-based shrink/persist edge
};

// Symmetric nucleation path built as the time reversal of the unforced
// collapse of the target droplet; a slow forced separation leg is spliced in
// when the target exceeds the calibrated critical half-width.
NucleationPath build_nucleation_path(const MacroProblem& problem, const InstantonData& inst,
                                     const ModelParams& params, double dt_record);

struct ParticleEvent {
    double time = 0.0;
    enum Kind { Nucleation, Collision } kind = Nucleation;
    int index = 0;        // first front index of the pair (0-based)
    double position = 0.0;  // nucleation site (pair centered here, gap |log eps|^2)
};

struct ParticlePath {
    double birth = 0.0;
    double death = 0.0;  // +inf if alive at horizon
    std::vector<double> t;
    std::vector<double> pos;  // piecewise linear
    int sigma = 1;
    double position_at(double time) const;
    bool alive(double time) const { return time >= birth && time < death; }
};

struct ParticleSchedule {
    std::vector<ParticleEvent> events;
    std::vector<ParticlePath> paths;
    double horizon = 0.0;
};

// w_n-optimal constant-speed schedule with n nucleations
ParticleSchedule make_optimal_schedule(const MacroProblem& problem, int n,
                                       const AnalysisParams& ap);

struct ParticleResult {
    double total_displacement = 0.0;  // sum_i int |v0_i|
    double required = 0.0;            // eps^-1 R minus the correction budget
    double correction = 0.0;
    double lower_bound_cost = 0.0;    // sum int v0^2/mu + n F(m̄) - error terms
    double error_terms = 0.0;
    bool feasible = false;
};

ParticleResult simulate_particles(const MacroProblem& problem, const ParticleSchedule& schedule,
                                  const AnalysisParams& ap);

struct StrategyResult {
    Trajectory traj;
    ParticleSchedule schedule;
    double action_total = 0.0;
    double nucleation_cost = 0.0;  // measured cost of the nucleation windows
    double transport_cost = 0.0;
    int n = 0;
    std::vector<double> initial_centers;
};

// 2n+1 fronts at constant speed with n nucleation segments; fronts merged and
// removed when their gap closes (free annihilation window)
StrategyResult build_upper_bound_strategy(const MacroProblem& problem, int n,
                                          const InstantonData& inst, const ModelParams& params,
                                          const AnalysisParams& ap, double dt_record);

struct BadComponentAudit {
    double t_lo = 0.0, t_hi = 0.0;
    double delta_sum = 0.0;       // cost carried by the component
    double l2_dev_sq = 0.0;       // ||m - m0||^2 at the component's check time
    double bound = 0.0;           // c e^{(2+beta)S} delta / Delta with fitted c
    double center_disp = 0.0;     // max displacement of surviving centers vs m0
    bool within_bound = true;
};

struct BadIntervalAudit {
    std::vector<BadComponentAudit> components;
    double total_center_disp = 0.0;
    double c_fitted = 0.0;
    double log_eps_sq = 0.0;
};

// integrates the unforced reference from each bad component start and
// measures the deviation it bounds (eq-level displacement audit)
BadIntervalAudit audit_bad_intervals(const Trajectory& traj, const CostReport& report,
                                     const InstantonData& inst, const ModelParams& params,
                                     const AnalysisParams& ap);

struct JumpReport {
    std::vector<double> S_eps;       // per good-slab-junction jump sizes
    std::vector<double> delta_j;     // measured per-slab costs feeding them
    std::vector<double> r_hat;       // shifted positions at the junction
    std::vector<int> erased_pairs;   // first index of each erased pair
    Profile reinitialized;           // min(phi, m̄_{r(t+)})
};

JumpReport inter_interval_jump(const Trajectory& traj, const CostReport& report,
                               const InstantonData& inst, const ModelParams& params,
                               const AnalysisParams& ap, int junction_slab);

}  // namespace nlfront

#endif
