#include "nlfront/action.hpp"

#include <algorithm>
#include <cmath>

namespace nlfront {

double cost_density(double b, double u, double w) {
    if (u < -1.0 || u > 1.0) throw DomainError("cost_density: u outside [-1,1]");
    if (w <= -1.0 || w >= 1.0) throw DomainError("cost_density: w outside (-1,1)");
    const double upw = 1.0 + u * w;
    if (upw <= 0.0) throw DomainError("cost_density: 1 + uw must be positive");
    if (b == 0.0) return 0.0;
    const double Q = (1.0 - u * u) * (1.0 - w * w);  // (1+uw)^2 - (u+w)^2
    // small-b series around the collapsed square root: avoids the O(b^2)
    // cancellation between the log and sqrt terms
    if (std::abs(b) <= 1e-6 * (1.0 + std::abs(u + w))) {
        const double b2 = b * b;
        return b2 / (4.0 * upw) + b2 * b * (u + w) / (12.0 * upw * upw * upw);
    }
    const double s = b - u - w;
    const double D = std::sqrt(s * s + Q);
    const double g = (1.0 - u) * (1.0 - w);
    // for s < 0 the direct form s + D cancels; use (s+D)(D-s) = Q
    const double larg = s >= 0.0 ? (s + D) / g : Q / ((D - s) * g);
    return 0.5 * (s * std::log(larg) - D + upw);
}

ActionDensity action_density(const Trajectory& traj, const ModelParams& params) {
    const int M = traj.steps();
    if (M < 2) throw DomainError("action: need at least 3 slices");
    const int n = traj.grid.n_points;
    ActionDensity out;
    out.dt = traj.dt;
    out.h_per_slice.resize(M + 1);
    out.b2_per_slice.resize(M + 1);
    out.clip_per_slice.resize(M + 1);
    const double dt = traj.dt;
    for (int k = 0; k <= M; ++k) {
        Profile p = traj.profile(k);
        Profile jm = convolve_auto(params.kernel, p);
        const auto& s = traj.slices;
        double hsum = 0.0, b2sum = 0.0, csum = 0.0;
        for (int i = 0; i < n; ++i) {
            double dphi;
            if (k == 0)
                dphi = (-3 * s[0][i] + 4 * s[1][i] - s[2][i]) / (2 * dt);
            else if (k == M)
                dphi = (3 * s[M][i] - 4 * s[M - 1][i] + s[M - 2][i]) / (2 * dt);
            else
                dphi = (s[k + 1][i] - s[k - 1][i]) / (2 * dt);
            const double u = s[k][i];
            const double w = -std::tanh(params.beta * jm[i]);
            const double b = dphi + u + w;
            const double wq = traj.grid.quad_weight(i);
            hsum += wq * cost_density(b, u, w);
            b2sum += wq * b * b;
            const double uc = clamp_mag(u);
            const double f = std::min(1.0, std::abs(-jm[i] + std::atanh(uc) / params.beta));
            csum += wq * f * f;
        }
        out.h_per_slice[k] = hsum;
        out.b2_per_slice[k] = b2sum;
        out.clip_per_slice[k] = csum;
    }
    return out;
}

namespace {

double time_trapezoid(const std::vector<double>& per_slice, double dt, int k_lo, int k_hi) {
    double acc = 0.0;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double w = (k == k_lo || k == k_hi) ? 0.5 * dt : dt;
        acc += w * per_slice[k];
    }
    return acc;
}

}  // namespace

CostReport action(const Trajectory& traj, const ModelParams& params) {
    ActionDensity d = action_density(traj, params);
    const int M = traj.steps();
    CostReport r;
    r.total = time_trapezoid(d.h_per_slice, d.dt, 0, M);
    r.l2_cost = time_trapezoid(d.b2_per_slice, d.dt, 0, M);
    const double F0 = free_energy(traj.profile(0), params);
    const double F1 = free_energy(traj.profile(M), params);
    r.reversibility.dF_term = 0.5 * params.beta * (F1 - F0);
    r.reversibility.clip_term = time_trapezoid(d.clip_per_slice, d.dt, 0, M);
    r.reversibility.slack = r.total - r.reversibility.dF_term - r.reversibility.clip_term;
    return r;
}

CostReport classify_slabs(const Trajectory& traj, const ModelParams& params, double slab_length,
                          double delta) {
    CostReport r = action(traj, params);
    r.slab_length = slab_length;
    r.delta_threshold = delta;
    ActionDensity d = action_density(traj, params);
    const int per = static_cast<int>(std::round(slab_length / traj.dt));
    if (per < 1 || std::abs(per * traj.dt - slab_length) > 1e-9 * slab_length)
        throw DomainError("classify_slabs: slab length must be a multiple of the slice step");
    const int M = traj.steps();
    const int nslab = M / per;
    if (nslab < 1) throw DomainError("classify_slabs: horizon shorter than one slab");
    r.slab_cost.resize(nslab);
    for (int j = 0; j < nslab; ++j)
        r.slab_cost[j] = time_trapezoid(d.h_per_slice, d.dt, j * per, (j + 1) * per);
    r.slab_good.resize(nslab);
    r.bad_count = 0;
    for (int j = 0; j < nslab; ++j) {
        const bool own = r.slab_cost[j] < delta;
        const bool prev = j == 0 ? true : r.slab_cost[j - 1] < delta;
        r.slab_good[j] = own && prev;
        if (!r.slab_good[j]) ++r.bad_count;
    }
    return r;
}

TruncationResult truncate_field(const ForcingField& b, double Delta) {
    if (Delta <= 0.0) throw DomainError("truncate_field: Delta must be positive");
    TruncationResult out;
    out.b1 = b;
    const int M = b.steps();
    std::vector<double> mass_slice(M + 1, 0.0);
    for (int k = 0; k <= M; ++k) {
        for (int i = 0; i < b.grid.n_points; ++i) {
            const double v = b.slices[k][i];
            if (std::abs(v) > Delta) {
                out.b1.slices[k][i] = 0.0;
                mass_slice[k] += b.grid.quad_weight(i) * std::abs(v);
            }
        }
    }
    out.truncated_mass = time_trapezoid(mass_slice, b.dt, 0, M);
    return out;
}

AlphaField weight_alpha(const CentersPath& path, const InstantonData& inst) {
    AlphaField a;
    a.grid = inst.profile.grid;
    a.slices.reserve(path.centers.size());
    if (path.times.size() >= 2) a.dt = path.times[1] - path.times[0];
    double amin = 1.0;
    for (const auto& cs : path.centers) {
        Profile ref = glue_fronts(inst, cs, true);
        std::vector<double> row(a.grid.n_points);
        for (int i = 0; i < a.grid.n_points; ++i) {
            row[i] = std::sqrt((1.0 - ref[i] * ref[i]) / 8.0);
            amin = std::min(amin, row[i]);
        }
        a.slices.push_back(std::move(row));
    }
    a.c_star = 1.0 / std::max(amin, 1e-300);
    return a;
}

QuadraticErrorAudit quadratic_error_audit(const Trajectory& traj, const AlphaField& alpha,
                                          const ModelParams& params, double Delta) {
    QuadraticErrorAudit a;
    a.c_star = alpha.c_star;
    // Measure the cubic-bound constant on a b-grid over [-Delta, Delta]
    // crossed with the (u, w) pairs the trajectory actually realizes.  The
    // bound degenerates on unphysical corners of the full (u, w) square where
    // 1 + uw -> 0, which no profile attains (w is slaved to -tanh(beta J*u)).
    {
        const int M = traj.steps();
        for (int k = 0; k <= M; k += std::max(1, M / 16)) {
            Profile p = traj.profile(k);
            Profile jm = convolve_auto(params.kernel, p);
            for (int i = 0; i < traj.grid.n_points; i += 4) {
                const double u = p[i];
                const double w = -std::tanh(params.beta * jm[i]);
                for (int ib = 1; ib <= 20; ++ib) {
                    const double b = Delta * ib / 20.0;
                    for (double sb : {-b, b}) {
                        const double err =
                            std::abs(cost_density(sb, u, w) - sb * sb / (4.0 * (1.0 + u * w)));
                        const double c = err / (std::abs(sb) * sb * sb);
                        if (c > a.C_measured) {
                            a.C_measured = c;
                            a.worst_b = sb;
                            a.worst_u = u;
                            a.worst_w = w;
                        }
                    }
                }
            }
        }
    }
    // accumulate the three space-time integrals on {|b| <= Delta}
    const int M = traj.steps();
    const int n = traj.grid.n_points;
    std::vector<double> lhs_a(M + 1, 0.0), lhs_e(M + 1, 0.0), hm(M + 1, 0.0);
    for (int k = 0; k <= M; ++k) {
        Profile p = traj.profile(k);
        Profile jm = convolve_auto(params.kernel, p);
        const auto& s = traj.slices;
        const auto& al = alpha.slices[std::min<size_t>(k, alpha.slices.size() - 1)];
        for (int i = 0; i < n; ++i) {
            double dphi;
            if (k == 0)
                dphi = (-3 * s[0][i] + 4 * s[1][i] - s[2][i]) / (2 * traj.dt);
            else if (k == M)
                dphi = (3 * s[M][i] - 4 * s[M - 1][i] + s[M - 2][i]) / (2 * traj.dt);
            else
                dphi = (s[k + 1][i] - s[k - 1][i]) / (2 * traj.dt);
            const double u = s[k][i];
            const double w = -std::tanh(params.beta * jm[i]);
            const double b = dphi + u + w;
            if (std::abs(b) > Delta) continue;
            const double wq = traj.grid.quad_weight(i);
            const double H = cost_density(b, u, w);
            lhs_a[k] += wq * al[i] * al[i] * b * b;
            lhs_e[k] += wq * std::abs(H - b * b / (4.0 * (1.0 + u * w)));
            hm[k] += wq * H;
        }
    }
    a.lhs_alpha_b2 = time_trapezoid(lhs_a, traj.dt, 0, M);
    a.lhs_h_error = time_trapezoid(lhs_e, traj.dt, 0, M);
    a.h_mass = time_trapezoid(hm, traj.dt, 0, M);
    const double q = a.c_star * a.c_star * a.C_measured * Delta;
    if (q >= 1.0) throw AuditError("quadratic_error_audit: c*^2 C Delta >= 1, bounds vacuous");
    a.bound_alpha = a.h_mass / (1.0 - q);
    a.bound_error = q / (1.0 - q) * a.h_mass;
    a.ok_alpha = a.lhs_alpha_b2 <= a.bound_alpha + 1e-12;
    a.ok_error = a.lhs_h_error <= a.bound_error + 1e-12;
    return a;
}

}  // namespace nlfront
