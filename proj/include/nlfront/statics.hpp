#ifndef NLFRONT_STATICS_HPP
#define NLFRONT_STATICS_HPP

#include <vector>

#include "nlfront/grid.hpp"

namespace nlfront {

struct ModelParams {
    double beta = 1.5;  // inverse temperature, > 1
    Kernel kernel;

    static ModelParams make(double beta, const Grid1D& grid);
};

// The standing interface profile and its derived scalars.
struct InstantonData {
    Profile profile;                 // m̄, antisymmetric, increasing
    Profile derivative;              // m̄' = beta (1-m̄^2) (J'*m̄)
    NuWeights nu;                    // 1/(1-m̄^2)
    double m_beta = 0.0;
    double residual = 0.0;           // sup |m̄ - tanh(beta J*m̄)|
    double decay_alpha = 0.0;        // e^{alpha x} m̄'(x) -> a
    double decay_a = 0.0;
    double tail_fit_rel = 0.0;       // max relative misfit on the fit window
    double tail_window_lo = 0.0, tail_window_hi = 0.0;
    double norm_mprime_nu_sq = 0.0;  // ||m̄'||^2_{L2(dnu)}
    double free_energy = 0.0;        // F(m̄)

    // cubic interpolation of m̄ at position x - xi, constant +-m_beta outside
    double value_at(double z) const;
    // same for m̄', zero outside
    double deriv_at(double z) const;
};

double mean_field_magnetization(double beta);

InstantonData compute_instanton(const ModelParams& params, const Grid1D& grid);

Profile translate_instanton(const InstantonData& inst, double xi);
// derivative translate m̄'(x - xi) as raw values (zero beyond support)
std::vector<double> translate_derivative(const InstantonData& inst, double xi);

// Glued multi-instanton m̄_xibar: odd centers rising, even falling (1-based).
Profile multi_instanton(const InstantonData& inst, const std::vector<double>& centers);
// Internal gluing with explicit leading parity; first_rising=false gives the
// symmetric droplet 1_{x>=0} m̄_l - 1_{x<0} m̄_{-l} used by nucleation paths.
Profile glue_fronts(const InstantonData& inst, const std::vector<double>& centers,
                    bool first_rising);
// weights of dnu_xibar
NuWeights nu_at(const InstantonData& inst, const std::vector<double>& centers);

struct FreeEnergyResult {
    double value = 0.0;
    bool clamp_warning = false;  // entropy evaluated at clamped values somewhere
};

double free_energy(const Profile& m, const ModelParams& params);
FreeEnergyResult free_energy_checked(const Profile& m, const ModelParams& params);
// mean-field excess free energy phi_beta(m) (pointwise, min-shifted)
double phi_beta_pointwise(double m, double beta, double m_beta);

// f(m) = -J*m + arctanh(m)/beta, the functional derivative of F
std::vector<double> energy_gradient(const Profile& m, const ModelParams& params);
// 1 ∧ |f|
std::vector<double> clipped_gradient(const Profile& m, const ModelParams& params);

// finite-volume instanton with the reflected kernel (Neumann grid)
Profile finite_volume_instanton(const ModelParams& params, const Grid1D& grid);

}  // namespace nlfront

#endif
