#ifndef NLFRONT_GRID_HPP
#define NLFRONT_GRID_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlfront {

// Error taxonomy; the CLI maps these onto exit codes.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AuditError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr double kClamp = 1e-12;  // profiles live in [-1+kClamp, 1-kClamp]

inline double clamp_mag(double v) {
    const double lim = 1.0 - kClamp;
    return v > lim ? lim : (v < -lim ? -lim : v);
}

enum class BoundaryMode { TruncatedLine, Neumann };

// Uniform symmetric grid on [-L, L], odd point count, x_0 = -L.
struct Grid1D {
    double half_length = 20.0;
    int n_points = 801;
    double spacing = 0.05;
    BoundaryMode boundary = BoundaryMode::TruncatedLine;

    static Grid1D make(double L, int n, BoundaryMode mode = BoundaryMode::TruncatedLine);

    double x(int i) const { return -half_length + i * spacing; }
    bool compatible(const Grid1D& o) const {
        return n_points == o.n_points && std::abs(half_length - o.half_length) < 1e-12;
    }
    // trapezoid weight of node i
    double quad_weight(int i) const {
        return (i == 0 || i == n_points - 1) ? 0.5 * spacing : spacing;
    }
};

// Interaction kernel J(r) = (35/32)(1-r^2)^3 on |r|<=1: even, C^2, unit mass,
// nonincreasing on r>0.  Sampled weights are renormalized to discrete mass 1.
struct Kernel {
    double support_radius = 1.0;
    double spacing = 0.0;
    int half_width = 0;               // K, offsets -K..K
    std::vector<double> weights;      // h*J(k h), renormalized
    std::vector<double> dweights;     // h*J'(k h)

    static double eval(double r);
    static double eval_deriv(double r);
    static Kernel sampled(const Grid1D& grid);
};

struct Profile {
    Grid1D grid;
    std::vector<double> values;

    Profile() = default;
    Profile(const Grid1D& g, double fill = 0.0) : grid(g), values(g.n_points, fill) {}
    Profile(const Grid1D& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (static_cast<int>(values.size()) != g.n_points)
            throw DomainError("profile length does not match grid");
    }
    int size() const { return grid.n_points; }
    double& operator[](int i) { return values[i]; }
    double operator[](int i) const { return values[i]; }
    void clamp() {
        for (double& v : values) v = clamp_mag(v);
    }
};

// Per-node weights 1/(1 - mref^2) of the measure dnu relative to a reference
// (multi-)instanton profile.
struct NuWeights {
    std::vector<double> w;
    static NuWeights from_reference(const Profile& mref);
};

// J*m with m extended constantly by its boundary values (whole-line mode).
Profile convolve(const Kernel& kernel, const Profile& m);
// J^neum*m: doubly reflected kernel, equivalently mirror extension of m.
Profile convolve_neumann(const Kernel& kernel, const Profile& m);
// dispatch on the profile's boundary mode
Profile convolve_auto(const Kernel& kernel, const Profile& m);
// J*m with zero extension; used for the linearized operator.
std::vector<double> convolve_zero(const Kernel& kernel, const Grid1D& grid,
                                  std::span<const double> m);
// d/dx (J*m) = J'*m, constant extension
std::vector<double> convolve_deriv(const Kernel& kernel, const Grid1D& grid,
                                   std::span<const double> m);

double inner_product_nu(std::span<const double> f, std::span<const double> g,
                        const NuWeights& w, const Grid1D& grid);
double norm_nu_sq(std::span<const double> f, const NuWeights& w, const Grid1D& grid);
// plain trapezoid integral over the grid
double integrate(std::span<const double> f, const Grid1D& grid);

}  // namespace nlfront

#endif
