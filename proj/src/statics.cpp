#include "nlfront/statics.hpp"

#include <algorithm>
#include <cmath>

namespace nlfront {

ModelParams ModelParams::make(double beta, const Grid1D& grid) {
    if (beta <= 1.0) throw DomainError("beta must exceed 1");
    ModelParams p;
    p.beta = beta;
    p.kernel = Kernel::sampled(grid);
    return p;
}

double mean_field_magnetization(double beta) {
    if (beta <= 1.0) throw DomainError("mean_field_magnetization: beta must exceed 1");
    double lo = 1e-300, hi = 1.0;
    // g(m) = m - tanh(beta m): negative on (0, m_beta), positive above
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid - std::tanh(beta * mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

double cubic_interp(const std::vector<double>& v, const Grid1D& g, double xv,
                    double left, double right) {
    const double L = g.half_length, h = g.spacing;
    if (xv < -L) return left;
    if (xv > L) return right;
    int j = std::min(static_cast<int>(std::floor((xv + L) / h)), g.n_points - 1);
    double t = (xv + L) / h - j;
    if (t < 1e-9) return v[j];  // grid-aligned: exact
    if (t > 1.0 - 1e-9) return v[std::min(j + 1, g.n_points - 1)];
    if (j < 1 || j > g.n_points - 3)  // edge cells: linear
        return v[j] + t * (v[j + 1] - v[j]);
    const double p0 = v[j - 1], p1 = v[j], p2 = v[j + 1], p3 = v[j + 2];
    // Catmull-Rom
    return p1 + 0.5 * t * (p2 - p0 +
                           t * (2 * p0 - 5 * p1 + 4 * p2 - p3 + t * (3 * (p1 - p2) + p3 - p0)));
}

}  // namespace

double InstantonData::value_at(double z) const {
    return cubic_interp(profile.values, profile.grid, z, -m_beta, m_beta);
}

double InstantonData::deriv_at(double z) const {
    return cubic_interp(derivative.values, derivative.grid, z, 0.0, 0.0);
}

InstantonData compute_instanton(const ModelParams& params, const Grid1D& grid) {
    const int n = grid.n_points;
    InstantonData out;
    out.m_beta = mean_field_magnetization(params.beta);

    Profile m(grid);
    for (int i = 0; i < n; ++i) {
        const double xv = grid.x(i);
        m[i] = xv > 0 ? out.m_beta : (xv < 0 ? -out.m_beta : 0.0);
    }

    auto residual_of = [&](const Profile& p) {
        Profile jm = convolve_auto(params.kernel, p);
        double r = 0.0;
        for (int i = 0; i < n; ++i)
            r = std::max(r, std::abs(p[i] - std::tanh(params.beta * jm[i])));
        return r;
    };

    const double lambda = 0.5;  // damping
    const int max_sweeps = 20000;
    double res = residual_of(m);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        Profile jm = convolve_auto(params.kernel, m);
        double step = 0.0;
        for (int i = 0; i < n; ++i) {
            const double next = (1.0 - lambda) * m[i] + lambda * std::tanh(params.beta * jm[i]);
            step = std::max(step, std::abs(next - m[i]));
            m[i] = next;
        }
        for (int i = 0; i < n / 2; ++i) {  // exact antisymmetrization each sweep
            const double a = 0.5 * (m[i] - m[n - 1 - i]);
            m[i] = a;
            m[n - 1 - i] = -a;
        }
        m[n / 2] = 0.0;
        if (step < 1e-15) break;
    }
    res = residual_of(m);
    if (res > 1e-8)
        throw ConvergenceError("instanton fixed point stalled at residual " + std::to_string(res));
    out.residual = res;
    out.profile = m;

    // derivative via m̄' = beta (1-m̄^2) (J'*m̄)
    std::vector<double> jpm = convolve_deriv(params.kernel, grid, m.values);
    Profile mp(grid);
    for (int i = 0; i < n; ++i) mp[i] = params.beta * (1.0 - m[i] * m[i]) * jpm[i];
    out.derivative = mp;
    out.nu = NuWeights::from_reference(m);
    out.norm_mprime_nu_sq = norm_nu_sq(mp.values, out.nu, grid);
    out.free_energy = free_energy(m, params);

    // Tail fit of (alpha, a) on log m̄'.  The window adapts to where m̄' is
    // exponentially clean: below 1e-3 (asymptotic regime) and above the
    // residual/roundoff floor.  At beta=1.5 alpha is ~4.26, so a fixed far
    // window like [L/2, L-2] sits entirely in the noise floor.
    const double floor_lo = std::max(100.0 * std::max(res, 1e-16), 1e-12);
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
        if (grid.x(i) >= 2.0 && grid.x(i) <= grid.half_length - 2.0 && mp[i] <= 1e-3 &&
            mp[i] >= floor_lo)
            idx.push_back(i);
    }
    if (idx.size() < 8) throw ConvergenceError("instanton tail window too short for decay fit");
    // least squares of log m̄' = log a - alpha x
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i : idx) {
        const double xv = grid.x(i), yv = std::log(mp[i]);
        sx += xv; sy += yv; sxx += xv * xv; sxy += xv * yv;
    }
    const double ns = static_cast<double>(idx.size());
    const double slope = (ns * sxy - sx * sy) / (ns * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / ns;
    out.decay_alpha = -slope;
    out.decay_a = std::exp(icpt);
    out.tail_window_lo = grid.x(idx.front());
    out.tail_window_hi = grid.x(idx.back());
    double rel = 0.0;
    for (int i : idx)
        rel = std::max(rel, std::abs(std::exp(out.decay_alpha * grid.x(i)) * mp[i] / out.decay_a - 1.0));
    out.tail_fit_rel = rel;
    if (out.decay_alpha <= 0.0) throw ConvergenceError("nonpositive decay exponent from tail fit");
    return out;
}

Profile translate_instanton(const InstantonData& inst, double xi) {
    const Grid1D& g = inst.profile.grid;
    if (std::abs(xi) >= g.half_length - 5.0)
        throw DomainError("translate_instanton: center too close to the boundary");
    Profile out(g);
    for (int i = 0; i < g.n_points; ++i) out[i] = inst.value_at(g.x(i) - xi);
    return out;
}

std::vector<double> translate_derivative(const InstantonData& inst, double xi) {
    const Grid1D& g = inst.profile.grid;
    std::vector<double> out(g.n_points);
    for (int i = 0; i < g.n_points; ++i) out[i] = inst.deriv_at(g.x(i) - xi);
    return out;
}

Profile glue_fronts(const InstantonData& inst, const std::vector<double>& centers,
                    bool first_rising) {
    const Grid1D& g = inst.profile.grid;
    const int k = static_cast<int>(centers.size());
    if (k < 1) throw DomainError("glue_fronts: need at least one center");
    for (int j = 0; j + 1 < k; ++j)
        if (centers[j + 1] <= centers[j])
            throw DomainError("glue_fronts: centers must be strictly increasing");
    Profile out(g);
    int j = 0;
    for (int i = 0; i < g.n_points; ++i) {
        const double xv = g.x(i);
        while (j + 1 < k && xv > 0.5 * (centers[j] + centers[j + 1])) ++j;
        const double sigma = (j % 2 == 0) == first_rising ? 1.0 : -1.0;
        out[i] = sigma * inst.value_at(xv - centers[j]);
    }
    return out;
}

Profile multi_instanton(const InstantonData& inst, const std::vector<double>& centers) {
    const Grid1D& g = inst.profile.grid;
    for (double c : centers)
        if (std::abs(c) >= g.half_length - 5.0)
            throw DomainError("multi_instanton: center too close to the boundary");
    for (size_t j = 0; j + 1 < centers.size(); ++j)
        if (centers[j + 1] - centers[j] < 4.0)
            throw DomainError("multi_instanton: consecutive centers closer than 4");
    return glue_fronts(inst, centers, true);
}

NuWeights nu_at(const InstantonData& inst, const std::vector<double>& centers) {
    return NuWeights::from_reference(glue_fronts(inst, centers, true));
}

namespace {

double entropy(double m) {
    const double mm = clamp_mag(m);
    return -0.5 * (1.0 - mm) * std::log(0.5 * (1.0 - mm)) -
           0.5 * (1.0 + mm) * std::log(0.5 * (1.0 + mm));
}

}  // namespace

double phi_beta_pointwise(double m, double beta, double m_beta) {
    const double shift = -0.5 * m_beta * m_beta - entropy(m_beta) / beta;
    return (-0.5 * m * m - entropy(m) / beta) - shift;
}

FreeEnergyResult free_energy_checked(const Profile& m, const ModelParams& params) {
    const Grid1D& g = m.grid;
    const int n = g.n_points;
    const double mb = mean_field_magnetization(params.beta);
    FreeEnergyResult r;
    double loc = 0.0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(m[i]) >= 1.0 - kClamp) r.clamp_warning = true;
        loc += g.quad_weight(i) * phi_beta_pointwise(m[i], params.beta, mb);
    }
    // 1/4 double integral of J(x-y)(m(x)-m(y))^2 restricted to |x-y|<=1
    const Kernel& k = params.kernel;
    double pair = 0.0;
    for (int d = 1; d <= k.half_width; ++d) {
        const double Jd = Kernel::eval(d * g.spacing);
        if (Jd == 0.0) continue;
        double s = 0.0;
        for (int i = d; i < n; ++i) {
            const double diff = m[i] - m[i - d];
            s += g.quad_weight(i) * g.quad_weight(i - d) * diff * diff;
        }
        pair += 2.0 * Jd * s;  // both orderings of (i, j)
    }
    r.value = loc + 0.25 * pair;
    return r;
}

double free_energy(const Profile& m, const ModelParams& params) {
    return free_energy_checked(m, params).value;
}

std::vector<double> energy_gradient(const Profile& m, const ModelParams& params) {
    Profile mc = m;
    mc.clamp();
    Profile jm = convolve_auto(params.kernel, mc);
    std::vector<double> f(m.size());
    for (int i = 0; i < m.size(); ++i) f[i] = -jm[i] + std::atanh(mc[i]) / params.beta;
    return f;
}

std::vector<double> clipped_gradient(const Profile& m, const ModelParams& params) {
    std::vector<double> f = energy_gradient(m, params);
    for (double& v : f) v = std::min(1.0, std::abs(v));
    return f;
}

Profile finite_volume_instanton(const ModelParams& params, const Grid1D& grid) {
    if (grid.boundary != BoundaryMode::Neumann)
        throw DomainError("finite_volume_instanton requires a neumann grid");
    const int n = grid.n_points;
    const double mb = mean_field_magnetization(params.beta);
    Profile m(grid);
    for (int i = 0; i < n; ++i) m[i] = grid.x(i) > 0 ? mb : (grid.x(i) < 0 ? -mb : 0.0);
    for (int sweep = 0; sweep < 20000; ++sweep) {
        Profile jm = convolve_neumann(params.kernel, m);
        double step = 0.0;
        for (int i = 0; i < n; ++i) {
            const double next = 0.5 * m[i] + 0.5 * std::tanh(params.beta * jm[i]);
            step = std::max(step, std::abs(next - m[i]));
            m[i] = next;
        }
        for (int i = 0; i < n / 2; ++i) {
            const double a = 0.5 * (m[i] - m[n - 1 - i]);
            m[i] = a;
            m[n - 1 - i] = -a;
        }
        m[n / 2] = 0.0;
        if (step < 1e-15) break;
    }
    Profile jm = convolve_neumann(params.kernel, m);
    double res = 0.0;
    for (int i = 0; i < n; ++i)
        res = std::max(res, std::abs(m[i] - std::tanh(params.beta * jm[i])));
    if (res > 1e-8) throw ConvergenceError("finite-volume instanton did not converge");
    return m;
}

}  // namespace nlfront
