#ifndef NLFRONT_ANALYSIS_HPP
#define NLFRONT_ANALYSIS_HPP

#include <vector>

#include "nlfront/action.hpp"
#include "nlfront/dynamics.hpp"

namespace nlfront {

struct AnalysisParams {
    double zeta = 0.17;        // phase accuracy, default 0.2 m_beta
    double ell_minus = 1.0;    // fine coarse-graining length
    double ell_plus = 4.0;     // block length (multiple of ell_minus)
    double theta_thresh = 0.1; // near-manifold distance threshold
    double epsilon = 0.05;
    double kappa = 2.0;
    double lambda = 1.0;       // lambda < kappa
    double delta = 0.0;        // |log eps|^-kappa
    double Delta = 0.0;        // |log eps|^-lambda
    double slab_S = 50.0;
    double alpha_star = 0.01;
    double budget_P = 0.0;     // cost budget (set per macro problem)
    int n_star = 0;            // 1 + 2P/F(m̄), rounded down
    double ell_star = 0.0;     // calibrated pair half-gap for eq-level energy additivity
    double tau = 0.0;          // measured collapse time of a 2*ell_star droplet
    double log_eps_sq = 0.0;   // |log eps|^2

    static AnalysisParams make(double epsilon, const InstantonData& inst,
                               const ModelParams& params, double budget_P = 0.0,
                               bool calibrate_tau = false);
};

// measured-once calibration of ell_star: smallest half-gap with
// |F(m̄_{(-l,l)}) - 2F(m̄)| <= gamma, gamma = 0.01 F(m̄)
double calibrate_ell_star(const InstantonData& inst, const ModelParams& params);

struct BlockValues {
    double ell = 0.0;
    int first_cell = 0;               // cell index n spans [n ell, (n+1) ell)
    std::vector<double> means;
    double mean_at(double x) const;
    int cell_of(double x) const;
};

BlockValues block_average(const Profile& m, double ell);
// eta in {-1, 0, +1} per ell-cell
std::vector<int> phase_indicator(const Profile& m, double zeta, double ell, double m_beta);

enum class ContourKind { Plus, Minus, MixedMinusPlus, MixedPlusMinus };

struct Contour {
    double x_lo = 0.0, x_hi = 0.0;  // [x_lo, x_hi)
    ContourKind kind = ContourKind::Plus;
    double peierls_weight = 0.0;
    bool mixed() const {
        return kind == ContourKind::MixedMinusPlus || kind == ContourKind::MixedPlusMinus;
    }
    double length() const { return x_hi - x_lo; }
};

struct ContourDecomposition {
    std::vector<Contour> contours;
    double c1_surrogate = 0.0, c2_surrogate = 0.0;
    int mixed_count() const;
};

ContourDecomposition extract_contours(const Profile& m, const AnalysisParams& ap,
                                      const InstantonData& inst, const ModelParams& params);

struct CenterSet {
    std::vector<double> xi;
    std::vector<int> sigma;       // +1 rising (odd index), -1 falling
    std::vector<double> residual; // |g(xi)| at the root
};

// dnu_xi-weighted orthogonality roots, one per mixed contour (leftmost root)
CenterSet find_centers(const Profile& m, const InstantonData& inst,
                       const ContourDecomposition& contours);
// convenience: contours + centers in one go
CenterSet find_centers(const Profile& m, const InstantonData& inst, const AnalysisParams& ap,
                       const ModelParams& params);

struct ManifoldDistance {
    double at_centers = 0.0;   // ||m - m̄_xibar||_{L2(dnu_xibar)} at the found centers
    double generic_inf = 0.0;  // infimum over xibar in the contour boxes
    std::vector<double> xi;
};

ManifoldDistance distance_to_manifold(const Profile& m, const InstantonData& inst,
                                      const ContourDecomposition& contours,
                                      const CenterSet& centers);

struct SpectralGapResult {
    double omega = 0.0;
    double goldstone_residual = 0.0;  // ||L m̄'|| / ||m̄'|| in L2(dnu)
    int iterations = 0;
};

// -largest Rayleigh quotient of Lu = -u + (1-m̄^2) beta J*u on {v ⟂ m̄'}_dnu,
// by power iteration with deflation in symmetrized coordinates
SpectralGapResult spectral_gap(const InstantonData& inst, const ModelParams& params);
// apply L to raw values (zero-extension convolution)
std::vector<double> apply_linearized(const InstantonData& inst, const ModelParams& params,
                                     const std::vector<double>& u);

struct ApproximateCenters {
    CentersPath path;
    std::vector<char> mask;          // 1_{A_alpha*} per node
    double mask_complement = 0.0;    // |A_alpha*^c|
    double comof_bound = 0.0;        // (8/alpha*) int ||alpha b1||^2_dnu
    std::vector<std::vector<double>> deviation;  // u = m - m̄_xi per slice
    std::vector<double> u_norm_sq;   // ||u||^2_{L2(dnu)} per slice
};

// masked orthogonality centers along a forced run; the A set is built from
// b1 over [t_lo, t_hi] (the enclosing slab pair)
ApproximateCenters approximate_centers(const Trajectory& m_traj, const ForcingField& b1,
                                       const InstantonData& inst, const ModelParams& params,
                                       const AnalysisParams& ap, double t_lo, double t_hi);

struct FrontKinematics {
    std::vector<double> times;
    std::vector<std::vector<double>> v0;  // per slice, per front
    std::vector<std::vector<double>> v;   // corrected velocities
    std::vector<std::vector<double>> r;   // integrated positions
    double c_fit = 0.0;                   // fitted correction constant
    bool partial_order_ok = true;         // r̄(t) <= ξ̄(t)
};

FrontKinematics front_velocities(const ApproximateCenters& ac, const ForcingField& b1,
                                 const AlphaField& alpha, const InstantonData& inst,
                                 double c_fit = 1.0);

struct InitializationResult {
    Profile profile;
    double t_offset = 0.0;  // 0 or tau
    int applied_case = 1;
    std::vector<double> centers;
};

// Section-5.3 style re-initialization: erase close odd pairs, push mid-range
// even pairs apart to gap 2|log eps|^2, pointwise min, optionally relax tau.
// known_centers carries centers tracked by the continuation machinery; pairs
// tighter than the contour resolution are invisible to extract_contours.
InitializationResult initialize_profile(const Profile& m, const InstantonData& inst,
                                        const AnalysisParams& ap, const ModelParams& params,
                                        const std::vector<double>* known_centers = nullptr);

}  // namespace nlfront

#endif
