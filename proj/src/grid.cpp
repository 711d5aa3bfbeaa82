#include "nlfront/grid.hpp"

#include <algorithm>
#include <numeric>

namespace nlfront {

Grid1D Grid1D::make(double L, int n, BoundaryMode mode) {
    if (n < 3 || n % 2 == 0) throw DomainError("grid needs an odd point count >= 3");
    if (L < 10.0) throw DomainError("grid half-length must be >= 10");
    Grid1D g;
    g.half_length = L;
    g.n_points = n;
    g.spacing = 2.0 * L / (n - 1);
    g.boundary = mode;
    return g;
}

double Kernel::eval(double r) {
    if (std::abs(r) > 1.0) return 0.0;
    const double q = 1.0 - r * r;
    return (35.0 / 32.0) * q * q * q;
}

double Kernel::eval_deriv(double r) {
    if (std::abs(r) > 1.0) return 0.0;
    const double q = 1.0 - r * r;
    return -(105.0 / 16.0) * r * q * q;
}

Kernel Kernel::sampled(const Grid1D& grid) {
    Kernel k;
    k.spacing = grid.spacing;
    k.half_width = static_cast<int>(std::round(k.support_radius / grid.spacing));
    if (k.support_radius > grid.half_length)
        throw DomainError("kernel support exceeds grid half-length");
    k.weights.resize(2 * k.half_width + 1);
    k.dweights.resize(2 * k.half_width + 1);
    double mass = 0.0;
    for (int j = -k.half_width; j <= k.half_width; ++j) {
        k.weights[j + k.half_width] = grid.spacing * eval(j * grid.spacing);
        k.dweights[j + k.half_width] = grid.spacing * eval_deriv(j * grid.spacing);
        mass += k.weights[j + k.half_width];
    }
    for (double& w : k.weights) w /= mass;  // discrete unit mass
    return k;
}

NuWeights NuWeights::from_reference(const Profile& mref) {
    NuWeights nw;
    nw.w.resize(mref.values.size());
    for (size_t i = 0; i < nw.w.size(); ++i) {
        const double m = clamp_mag(mref.values[i]);
        nw.w[i] = 1.0 / (1.0 - m * m);
    }
    return nw;
}

namespace {

void check_kernel(const Kernel& k, const Grid1D& g) {
    if (std::abs(k.spacing - g.spacing) > 1e-14)
        throw DomainError("kernel sampled on a different grid spacing");
}

enum class Ext { Clamp, Mirror, Zero };

template <Ext E>
void conv_impl(const Kernel& k, const Grid1D& g, std::span<const double> m,
               const std::vector<double>& w, std::vector<double>& out) {
    const int n = g.n_points;
    const int K = k.half_width;
    out.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = -K; j <= K; ++j) {
            int idx = i - j;
            if constexpr (E == Ext::Clamp) {
                idx = std::clamp(idx, 0, n - 1);
            } else if constexpr (E == Ext::Mirror) {
                if (idx < 0) idx = -idx;
                if (idx > n - 1) idx = 2 * (n - 1) - idx;
            } else {
                if (idx < 0 || idx > n - 1) continue;
            }
            acc += w[j + K] * m[idx];
        }
        out[i] = acc;
    }
}

}  // namespace

Profile convolve(const Kernel& kernel, const Profile& m) {
    check_kernel(kernel, m.grid);
    Profile out(m.grid);
    conv_impl<Ext::Clamp>(kernel, m.grid, m.values, kernel.weights, out.values);
    return out;
}

Profile convolve_neumann(const Kernel& kernel, const Profile& m) {
    check_kernel(kernel, m.grid);
    if (m.grid.boundary != BoundaryMode::Neumann)
        throw DomainError("convolve_neumann requires a neumann-mode grid");
    Profile out(m.grid);
    conv_impl<Ext::Mirror>(kernel, m.grid, m.values, kernel.weights, out.values);
    return out;
}

Profile convolve_auto(const Kernel& kernel, const Profile& m) {
    if (m.grid.boundary == BoundaryMode::Neumann) return convolve_neumann(kernel, m);
    return convolve(kernel, m);
}

std::vector<double> convolve_zero(const Kernel& kernel, const Grid1D& grid,
                                  std::span<const double> m) {
    check_kernel(kernel, grid);
    std::vector<double> out;
    conv_impl<Ext::Zero>(kernel, grid, m, kernel.weights, out);
    return out;
}

std::vector<double> convolve_deriv(const Kernel& kernel, const Grid1D& grid,
                                   std::span<const double> m) {
    check_kernel(kernel, grid);
    std::vector<double> out;
    conv_impl<Ext::Clamp>(kernel, grid, m, kernel.dweights, out);
    return out;
}

double inner_product_nu(std::span<const double> f, std::span<const double> g,
                        const NuWeights& w, const Grid1D& grid) {
    if (f.size() != g.size() || f.size() != w.w.size() ||
        static_cast<int>(f.size()) != grid.n_points)
        throw DomainError("inner_product_nu: length mismatch");
    double acc = 0.0;
    for (int i = 0; i < grid.n_points; ++i) acc += grid.quad_weight(i) * f[i] * g[i] * w.w[i];
    return acc;
}

double norm_nu_sq(std::span<const double> f, const NuWeights& w, const Grid1D& grid) {
    return inner_product_nu(f, f, w, grid);
}

double integrate(std::span<const double> f, const Grid1D& grid) {
    if (static_cast<int>(f.size()) != grid.n_points)
        throw DomainError("integrate: length mismatch");
    double acc = 0.0;
    for (int i = 0; i < grid.n_points; ++i) acc += grid.quad_weight(i) * f[i];
    return acc;
}

}  // namespace nlfront
