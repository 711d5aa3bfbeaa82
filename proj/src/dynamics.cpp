#include "nlfront/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "nlfront/analysis.hpp"

namespace nlfront {

ForcingField ForcingField::zeros_like(const Trajectory& traj) {
    ForcingField b;
    b.grid = traj.grid;
    b.dt = traj.dt;
    b.t0 = traj.t0;
    b.slices.assign(traj.slices.size(), std::vector<double>(traj.grid.n_points, 0.0));
    return b;
}

namespace {

void rk4_step(std::vector<double>& m, double dt, const ModelParams& params, const Grid1D& grid,
              const std::vector<double>* b) {
    const int n = grid.n_points;
    auto rhs = [&](const std::vector<double>& s, std::vector<double>& out) {
        Profile p(grid, s);
        Profile jm = convolve_auto(params.kernel, p);
        out.resize(n);
        for (int i = 0; i < n; ++i) {
            out[i] = -s[i] + std::tanh(params.beta * jm[i]);
            if (b) out[i] += (*b)[i];
        }
    };
    static thread_local std::vector<double> k1, k2, k3, k4, tmp;
    rhs(m, k1);
    tmp.resize(n);
    for (int i = 0; i < n; ++i) tmp[i] = clamp_mag(m[i] + 0.5 * dt * k1[i]);
    rhs(tmp, k2);
    for (int i = 0; i < n; ++i) tmp[i] = clamp_mag(m[i] + 0.5 * dt * k2[i]);
    rhs(tmp, k3);
    for (int i = 0; i < n; ++i) tmp[i] = clamp_mag(m[i] + dt * k3[i]);
    rhs(tmp, k4);
    for (int i = 0; i < n; ++i)
        m[i] = clamp_mag(m[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]));
}

void check_blowup(const std::vector<double>& m) {
    int clamped = 0;
    for (double v : m)
        if (std::abs(v) >= 1.0 - 2 * kClamp) ++clamped;
    if (clamped == static_cast<int>(m.size()))
        throw ConvergenceError("integration blow-up: the whole profile is pinned at the clamp");
}

}  // namespace

Trajectory evolve_unforced(const Profile& m0, double horizon, double dt,
                           const ModelParams& params, int record_stride) {
    if (dt > 0.1 || dt <= 0.0) throw DomainError("evolve: need 0 < dt <= 0.1");
    if (record_stride < 1) throw DomainError("evolve: record_stride >= 1");
    const int steps = static_cast<int>(std::round(horizon / dt));
    Trajectory out;
    out.grid = m0.grid;
    out.dt = dt * record_stride;
    out.slices.reserve(steps / record_stride + 1);
    std::vector<double> m = m0.values;
    for (double& v : m) v = clamp_mag(v);
    out.slices.push_back(m);
    for (int k = 0; k < steps; ++k) {
        rk4_step(m, dt, params, m0.grid, nullptr);
        if ((k + 1) % record_stride == 0) {
            check_blowup(m);
            out.slices.push_back(m);
        }
    }
    return out;
}

Trajectory evolve_forced(const Profile& m0, const ForcingField& b, double dt,
                         const ModelParams& params) {
    if (dt > 0.1 || dt <= 0.0) throw DomainError("evolve: need 0 < dt <= 0.1");
    if (!m0.grid.compatible(b.grid)) throw DomainError("evolve_forced: grid mismatch");
    if (b.steps() < 1) throw DomainError("evolve_forced: field needs at least one interval");
    const int sub = std::max(1, static_cast<int>(std::round(b.dt / dt)));
    const double dts = b.dt / sub;
    Trajectory out;
    out.grid = m0.grid;
    out.dt = b.dt;
    out.t0 = b.t0;
    std::vector<double> m = m0.values;
    for (double& v : m) v = clamp_mag(v);
    out.slices.push_back(m);
    std::vector<double> bk(m0.grid.n_points);
    for (int k = 0; k < b.steps(); ++k) {
        // held piecewise-constant per stored interval at the midpoint value
        for (int i = 0; i < m0.grid.n_points; ++i)
            bk[i] = 0.5 * (b.slices[k][i] + b.slices[k + 1][i]);
        for (int s = 0; s < sub; ++s) rk4_step(m, dts, params, m0.grid, &bk);
        check_blowup(m);
        out.slices.push_back(m);
    }
    return out;
}

ForcingField force_of(const Trajectory& traj, const ModelParams& params) {
    const int M = traj.steps();
    if (M < 2) throw DomainError("force_of: need at least 3 time slices");
    const int n = traj.grid.n_points;
    ForcingField b;
    b.grid = traj.grid;
    b.dt = traj.dt;
    b.t0 = traj.t0;
    b.slices.assign(M + 1, std::vector<double>(n));
    const double dt = traj.dt;
    for (int k = 0; k <= M; ++k) {
        Profile p = traj.profile(k);
        Profile jm = convolve_auto(params.kernel, p);
        const auto& s = traj.slices;
        for (int i = 0; i < n; ++i) {
            double dphi;
            if (k == 0)
                dphi = (-3 * s[0][i] + 4 * s[1][i] - s[2][i]) / (2 * dt);
            else if (k == M)
                dphi = (3 * s[M][i] - 4 * s[M - 1][i] + s[M - 2][i]) / (2 * dt);
            else
                dphi = (s[k + 1][i] - s[k - 1][i]) / (2 * dt);
            b.slices[k][i] = dphi + s[k][i] - std::tanh(params.beta * jm[i]);
        }
    }
    return b;
}

CoupledSystemResult solve_coupled_system(const Trajectory& phi, const ForcingField& b1,
                                         const Profile& m_init, const InstantonData& inst,
                                         const ModelParams& params,
                                         const AnalysisParams& aparams) {
    const double dt_int = std::min(0.02, b1.dt);
    const double t_lo = b1.t0, t_hi = b1.t0 + b1.dt * b1.steps();

    auto scale_field = [&](const CentersPath& path) {
        ForcingField ab = b1;
        for (size_t k = 0; k < ab.slices.size(); ++k) {
            const auto& cs = path.centers[std::min(k, path.centers.size() - 1)];
            Profile ref = glue_fronts(inst, cs, true);
            for (int i = 0; i < ab.grid.n_points; ++i)
                ab.slices[k][i] *= std::sqrt((1.0 - ref[i] * ref[i]) / 8.0);
        }
        return ab;
    };

    CoupledSystemResult res;
    // xi^0 from b(m^0) = b1
    Trajectory m0 = evolve_forced(m_init, b1, dt_int, params);
    ApproximateCenters ac =
        approximate_centers(m0, b1, inst, params, aparams, t_lo, t_hi);
    CentersPath xi_prev = ac.path;

    const int max_sweeps = 100;
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        ForcingField ab = scale_field(xi_prev);
        res.phi1 = evolve_forced(phi.profile(0), ab, dt_int, params);
        // b(m) = b(phi1) = alpha b1, with the regularized initial condition
        res.m = evolve_forced(m_init, ab, dt_int, params);
        ApproximateCenters acm =
            approximate_centers(res.m, b1, inst, params, aparams, t_lo, t_hi);
        double gap = 0.0;
        const size_t nt = std::min(acm.path.centers.size(), xi_prev.centers.size());
        for (size_t k = 0; k < nt; ++k) {
            const size_t nc = std::min(acm.path.centers[k].size(), xi_prev.centers[k].size());
            if (acm.path.centers[k].size() != xi_prev.centers[k].size())
                gap = std::max(gap, 1.0);  // count changed: force another sweep
            for (size_t i = 0; i < nc; ++i)
                gap = std::max(gap, std::abs(acm.path.centers[k][i] - xi_prev.centers[k][i]));
        }
        res.sweep_gaps.push_back(gap);
        res.sweeps = sweep;
        xi_prev = acm.path;
        res.xi_tilde = acm.path;
        if (gap <= 1e-8) break;
        if (sweep == max_sweeps)
            throw ConvergenceError("coupled system: no contraction after 100 sweeps");
    }
    if (res.sweep_gaps.size() >= 2) {
        const double a = res.sweep_gaps[res.sweep_gaps.size() - 1];
        const double b = res.sweep_gaps[res.sweep_gaps.size() - 2];
        res.contraction_ratio = b > 0 ? a / b : 0.0;
    } else {
        res.contraction_ratio = 0.0;
    }
    if (res.contraction_ratio >= 1.0)
        throw ConvergenceError("coupled system: measured contraction factor >= 1");
    return res;
}

}  // namespace nlfront
