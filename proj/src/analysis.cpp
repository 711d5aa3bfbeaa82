#include "nlfront/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlfront {

double calibrate_ell_star(const InstantonData& inst, const ModelParams& params) {
    const double gamma = 0.01 * inst.free_energy;
    const double target = 2.0 * inst.free_energy;
    double l = 0.3;
    for (; l <= 5.0; l += 0.05) {
        Profile pair = glue_fronts(inst, {-l, l}, false);
        if (std::abs(free_energy(pair, params) - target) <= gamma) break;
    }
    return l;
}

AnalysisParams AnalysisParams::make(double epsilon, const InstantonData& inst,
                                    const ModelParams& params, double budget_P,
                                    bool calibrate_tau) {
    if (epsilon <= 0.0 || epsilon >= 1.0) throw DomainError("epsilon must lie in (0,1)");
    AnalysisParams ap;
    ap.epsilon = epsilon;
    const double le = std::abs(std::log(epsilon));
    ap.log_eps_sq = le * le;
    ap.delta = std::pow(le, -ap.kappa);
    ap.Delta = std::pow(le, -ap.lambda);
    if (!(ap.lambda < ap.kappa)) throw DomainError("need lambda < kappa");
    ap.zeta = 0.2 * inst.m_beta;
    ap.budget_P = budget_P;
    ap.n_star = budget_P > 0.0
                    ? static_cast<int>(std::floor(1.0 + 2.0 * budget_P / inst.free_energy))
                    : 0;
    ap.ell_star = calibrate_ell_star(inst, params);
    if (calibrate_tau) {
        // measured collapse time of the gap-2l* droplet under the free flow
        Profile d = glue_fronts(inst, {-ap.ell_star, ap.ell_star}, false);
        Trajectory tr = evolve_unforced(d, 400.0, 0.05, params, 20);
        ap.tau = 400.0;
        for (int k = 0; k <= tr.steps(); ++k) {
            double dist = 0.0;
            for (double v : tr.slices[k]) dist = std::max(dist, std::abs(v - inst.m_beta));
            if (dist <= ap.theta_thresh) {
                ap.tau = k * tr.dt;
                break;
            }
        }
    }
    return ap;
}

// ---------------------------------------------------------------- contours

double BlockValues::mean_at(double x) const {
    const int c = cell_of(x);
    const int idx = c - first_cell;
    if (idx < 0 || idx >= static_cast<int>(means.size()))
        throw DomainError("block mean requested outside the covered range");
    return means[idx];
}

int BlockValues::cell_of(double x) const { return static_cast<int>(std::floor(x / ell)); }

BlockValues block_average(const Profile& m, double ell) {
    const Grid1D& g = m.grid;
    const double ratio = ell / g.spacing;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw DomainError("block_average: ell must be a multiple of the grid spacing");
    const int per = static_cast<int>(std::round(ratio));
    const int ncell = static_cast<int>(std::floor(2.0 * g.half_length / ell + 0.5));
    BlockValues bv;
    bv.ell = ell;
    bv.first_cell = static_cast<int>(std::floor(-g.half_length / ell + 0.5));
    bv.means.resize(ncell);
    for (int c = 0; c < ncell; ++c) {
        const int i0 = c * per;
        const int i1 = std::min(i0 + per, g.n_points - 1);
        double acc = 0.0;
        for (int i = i0; i <= i1; ++i) {
            const double w = (i == i0 || i == i1) ? 0.5 : 1.0;
            acc += w * m[i];
        }
        bv.means[c] = acc / (i1 - i0);
    }
    return bv;
}

std::vector<int> phase_indicator(const Profile& m, double zeta, double ell, double m_beta) {
    BlockValues bv = block_average(m, ell);
    std::vector<int> eta(bv.means.size());
    for (size_t c = 0; c < bv.means.size(); ++c) {
        if (std::abs(bv.means[c] - m_beta) <= zeta)
            eta[c] = 1;
        else if (std::abs(bv.means[c] + m_beta) <= zeta)
            eta[c] = -1;
        else
            eta[c] = 0;
    }
    return eta;
}

int ContourDecomposition::mixed_count() const {
    int k = 0;
    for (const auto& c : contours)
        if (c.mixed()) ++k;
    return k;
}

ContourDecomposition extract_contours(const Profile& m, const AnalysisParams& ap,
                                      const InstantonData& inst, const ModelParams& params) {
    const Grid1D& g = m.grid;
    const double lp = ap.ell_plus, lm = ap.ell_minus;
    const int per = static_cast<int>(std::round(lp / lm));
    if (std::abs(per * lm - lp) > 1e-9)
        throw DomainError("extract_contours: ell_plus must be a multiple of ell_minus");
    std::vector<int> eta = phase_indicator(m, ap.zeta, lm, inst.m_beta);
    const int ncell_m = static_cast<int>(eta.size());
    const int ncell_p = static_cast<int>(std::floor(2.0 * g.half_length / lp + 0.5));

    // eta constant over an lp-cell, with out-of-domain cells matching the edge
    auto eta_block = [&](int cp) {
        int val = 2;  // unset
        for (int j = 0; j < per; ++j) {
            int cm = cp * per + j;
            cm = std::clamp(cm, 0, ncell_m - 1);
            if (val == 2)
                val = eta[cm];
            else if (eta[cm] != val)
                return 0;
        }
        return val == 2 ? 0 : val;
    };
    auto theta = [&](int cp) {
        int v = 0;
        for (int d = -1; d <= 1; ++d) {
            const int c = std::clamp(cp + d, 0, ncell_p - 1);
            const int e = eta_block(c);
            if (d == -1)
                v = e;
            else if (e != v)
                return 0;
        }
        return v;
    };

    std::vector<int> th(ncell_p);
    for (int c = 0; c < ncell_p; ++c) th[c] = theta(c);

    ContourDecomposition out;
    // surrogate Peierls constants, calibrated on the instanton itself
    {
        // instanton's own mixed contour length under these parameters
        std::vector<int> eta0 = phase_indicator(inst.profile, ap.zeta, lm, inst.m_beta);
        // crude: count lp-cells whose theta would vanish for the instanton
        double len0 = 0.0;
        for (int c = 0; c < ncell_p; ++c) {
            bool zero = false;
            for (int d = -1; d <= 1 && !zero; ++d) {
                const int cc = std::clamp(c + d, 0, ncell_p - 1);
                int val = 2;
                for (int j = 0; j < per; ++j) {
                    const int cm = std::clamp(cc * per + j, 0, ncell_m - 1);
                    if (val == 2)
                        val = eta0[cm];
                    else if (eta0[cm] != val) {
                        val = 0;
                        break;
                    }
                }
                if (val == 0) zero = true;
            }
            if (zero) len0 += lp;
        }
        out.c1_surrogate = len0 > 0.0
                               ? 0.5 * inst.free_energy * lp / (ap.zeta * ap.zeta * lm * len0)
                               : 1.0;
        out.c2_surrogate =
            std::abs(free_energy(glue_fronts(inst, {-ap.ell_star, ap.ell_star}, false), params) -
                     2.0 * inst.free_energy) *
            std::exp(inst.decay_alpha * ap.ell_star);
    }

    const double x_left = -g.half_length;
    int c = 0;
    while (c < ncell_p) {
        if (th[c] != 0) {
            ++c;
            continue;
        }
        int c2 = c;
        while (c2 + 1 < ncell_p && th[c2 + 1] == 0) ++c2;
        Contour ct;
        ct.x_lo = x_left + c * lp;
        ct.x_hi = x_left + (c2 + 1) * lp;
        // classify by the eta value just outside each side
        auto side_eta = [&](double x) {
            BlockValues bv = block_average(m, lm);
            const double xc = std::clamp(x, -g.half_length, g.half_length - 1e-9);
            const double v = bv.mean_at(xc);
            if (std::abs(v - inst.m_beta) <= ap.zeta) return 1;
            if (std::abs(v + inst.m_beta) <= ap.zeta) return -1;
            return 0;
        };
        const int el = c > 0 ? side_eta(ct.x_lo - 0.5 * lm) : side_eta(ct.x_hi + 0.5 * lm);
        const int er =
            c2 + 1 < ncell_p ? side_eta(ct.x_hi + 0.5 * lm) : side_eta(ct.x_lo - 0.5 * lm);
        if (el > 0 && er > 0)
            ct.kind = ContourKind::Plus;
        else if (el < 0 && er < 0)
            ct.kind = ContourKind::Minus;
        else if (el <= 0 && er >= 0)
            ct.kind = ContourKind::MixedMinusPlus;
        else
            ct.kind = ContourKind::MixedPlusMinus;
        const double bulk = out.c1_surrogate * ap.zeta * ap.zeta * (lm / lp) * ct.length();
        if (ct.mixed())
            ct.peierls_weight = std::max(
                bulk, inst.free_energy - out.c2_surrogate * std::exp(-inst.decay_alpha * lp));
        else
            ct.peierls_weight = bulk;
        out.contours.push_back(ct);
        c = c2 + 1;
    }
    return out;
}

// ---------------------------------------------------------------- centers

namespace {

// g(xi) = (m, m̄'_xi)_{L2(dnu_xi)}
double center_residual(const Profile& m, const InstantonData& inst, double xi) {
    const Grid1D& g = m.grid;
    // m̄' support is effectively |z| <= z_max where it reaches the noise floor
    const double z_max = std::min(g.half_length, 40.0 / inst.decay_alpha + 2.0);
    const int i_lo = std::max(0, static_cast<int>(std::floor((xi - z_max + g.half_length) / g.spacing)));
    const int i_hi =
        std::min(g.n_points - 1, static_cast<int>(std::ceil((xi + z_max + g.half_length) / g.spacing)));
    double acc = 0.0;
    for (int i = i_lo; i <= i_hi; ++i) {
        const double z = g.x(i) - xi;
        const double mp = inst.deriv_at(z);
        if (mp == 0.0) continue;
        const double mb = inst.value_at(z);
        acc += g.quad_weight(i) * m[i] * mp / (1.0 - mb * mb);
    }
    return acc;
}

}  // namespace

CenterSet find_centers(const Profile& m, const InstantonData& inst,
                       const ContourDecomposition& contours) {
    CenterSet cs;
    const Grid1D& g = m.grid;
    for (const auto& ct : contours.contours) {
        if (!ct.mixed()) continue;
        const double lo = std::max(ct.x_lo, -g.half_length + 5.0);
        const double hi = std::min(ct.x_hi, g.half_length - 5.0);
        // scan for the leftmost sign change of g on the contour
        const int nscan = std::max(8, static_cast<int>(std::ceil((hi - lo) / (0.5 * g.spacing))));
        double a = lo, fa = center_residual(m, inst, a);
        double root = std::numeric_limits<double>::quiet_NaN();
        for (int s = 1; s <= nscan; ++s) {
            const double b = lo + (hi - lo) * s / nscan;
            const double fb = center_residual(m, inst, b);
            if (fa == 0.0) {
                root = a;
                break;
            }
            if (fa * fb < 0.0) {
                double ra = a, rb = b, fra = fa;
                for (int it = 0; it < 100 && rb - ra > 1e-10; ++it) {
                    const double mid = 0.5 * (ra + rb);
                    const double fm = center_residual(m, inst, mid);
                    if (fra * fm <= 0.0)
                        rb = mid;
                    else {
                        ra = mid;
                        fra = fm;
                    }
                }
                root = 0.5 * (ra + rb);
                break;
            }
            a = b;
            fa = fb;
        }
        if (std::isnan(root))
            throw ConvergenceError("find_centers: no orthogonality root in a mixed contour");
        cs.xi.push_back(root);
        cs.sigma.push_back(ct.kind == ContourKind::MixedMinusPlus ? 1 : -1);
        cs.residual.push_back(std::abs(center_residual(m, inst, root)));
    }
    return cs;
}

CenterSet find_centers(const Profile& m, const InstantonData& inst, const AnalysisParams& ap,
                       const ModelParams& params) {
    return find_centers(m, inst, extract_contours(m, ap, inst, params));
}

ManifoldDistance distance_to_manifold(const Profile& m, const InstantonData& inst,
                                      const ContourDecomposition& contours,
                                      const CenterSet& centers) {
    if (centers.xi.empty()) throw DomainError("distance_to_manifold: no centers");
    ManifoldDistance md;
    md.xi = centers.xi;
    const Grid1D& g = m.grid;
    auto dist_at = [&](const std::vector<double>& xs) {
        // leading parity from the first mixed contour
        bool first_rising = true;
        for (const auto& ct : contours.contours)
            if (ct.mixed()) {
                first_rising = ct.kind == ContourKind::MixedMinusPlus;
                break;
            }
        Profile ref = glue_fronts(inst, xs, first_rising);
        double acc = 0.0;
        for (int i = 0; i < g.n_points; ++i) {
            const double d = m[i] - ref[i];
            acc += g.quad_weight(i) * d * d / (1.0 - ref[i] * ref[i]);
        }
        return std::sqrt(acc);
    };
    md.at_centers = dist_at(centers.xi);

    // generic infimum over the contour boxes: coordinate descent with golden
    // section, two passes
    std::vector<double> xs = centers.xi;
    std::vector<std::pair<double, double>> boxes;
    for (const auto& ct : contours.contours)
        if (ct.mixed())
            boxes.emplace_back(std::max(ct.x_lo, -g.half_length + 5.0),
                               std::min(ct.x_hi, g.half_length - 5.0));
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int pass = 0; pass < 2; ++pass) {
        for (size_t i = 0; i < xs.size(); ++i) {
            double lo = boxes[i].first, hi = boxes[i].second;
            if (i > 0) lo = std::max(lo, xs[i - 1] + 1.0);
            if (i + 1 < xs.size()) hi = std::min(hi, xs[i + 1] - 1.0);
            auto f1 = [&](double v) {
                std::vector<double> t = xs;
                t[i] = v;
                return dist_at(t);
            };
            double a = lo, b = hi;
            double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
            double fc1 = f1(c1), fc2 = f1(c2);
            for (int it = 0; it < 60 && b - a > 1e-7; ++it) {
                if (fc1 < fc2) {
                    b = c2; c2 = c1; fc2 = fc1;
                    c1 = b - gr * (b - a); fc1 = f1(c1);
                } else {
                    a = c1; c1 = c2; fc1 = fc2;
                    c2 = a + gr * (b - a); fc2 = f1(c2);
                }
            }
            xs[i] = 0.5 * (a + b);
        }
    }
    md.generic_inf = std::min(dist_at(xs), md.at_centers);
    return md;
}

// ---------------------------------------------------------------- spectral gap

std::vector<double> apply_linearized(const InstantonData& inst, const ModelParams& params,
                                     const std::vector<double>& u) {
    const Grid1D& g = inst.profile.grid;
    std::vector<double> ju = convolve_zero(params.kernel, g, u);
    std::vector<double> out(g.n_points);
    for (int i = 0; i < g.n_points; ++i) {
        const double m = inst.profile[i];
        out[i] = -u[i] + (1.0 - m * m) * params.beta * ju[i];
    }
    return out;
}

SpectralGapResult spectral_gap(const InstantonData& inst, const ModelParams& params) {
    const Grid1D& g = inst.profile.grid;
    const int n = g.n_points;
    SpectralGapResult res;
    {
        std::vector<double> lm = apply_linearized(inst, params, inst.derivative.values);
        res.goldstone_residual = std::sqrt(norm_nu_sq(lm, inst.nu, g) / inst.norm_mprime_nu_sq);
    }
    // symmetrized coordinates v = u / sqrt(1-m̄^2): A v = c v + (-v + beta D^(1/2) J D^(1/2) v)
    std::vector<double> dh(n);
    for (int i = 0; i < n; ++i) dh[i] = std::sqrt(1.0 - inst.profile[i] * inst.profile[i]);
    const double shift = 1.0 + params.beta + 0.1;
    auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
        std::vector<double> t(n);
        for (int i = 0; i < n; ++i) t[i] = dh[i] * v[i];
        std::vector<double> jt = convolve_zero(params.kernel, g, t);
        out.resize(n);
        for (int i = 0; i < n; ++i) out[i] = (shift - 1.0) * v[i] + params.beta * dh[i] * jt[i];
    };
    std::vector<double> gold(n);
    for (int i = 0; i < n; ++i) gold[i] = inst.derivative[i] / dh[i];
    double gn = 0.0;
    for (double v : gold) gn += v * v;
    gn = std::sqrt(gn);
    for (double& v : gold) v /= gn;
    auto deflate = [&](std::vector<double>& v) {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += gold[i] * v[i];
        for (int i = 0; i < n; ++i) v[i] -= d * gold[i];
    };
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = std::sin(0.13 * i) + 0.7 * std::cos(0.41 * i + 1.0);
    deflate(v);
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (double& e : v) e /= norm;
    double lam = 0.0, lam_old = -1.0;
    std::vector<double> av;
    int it = 0;
    for (; it < 100000; ++it) {
        apply(v, av);
        deflate(av);
        lam = std::sqrt(std::inner_product(av.begin(), av.end(), av.begin(), 0.0));
        for (int i = 0; i < n; ++i) v[i] = av[i] / lam;
        if (std::abs(lam - lam_old) < 1e-13) break;
        lam_old = lam;
    }
    if (it >= 100000)
        throw ConvergenceError("spectral_gap: power iteration stalled, last eigenvalue change " +
                               std::to_string(std::abs(lam - lam_old)));
    res.omega = shift - lam;
    res.iterations = it;
    return res;
}

// ---------------------------------------------------------------- approximate centers

namespace {

// masked orthogonality residual with the per-slice multi-instanton weights
double masked_residual(const std::vector<double>& m, const Grid1D& g,
                       const std::vector<char>& mask, const InstantonData& inst,
                       const std::vector<double>& all_centers, size_t which, double xi,
                       int sigma) {
    std::vector<double> cs = all_centers;
    cs[which] = xi;
    const double z_max = std::min(g.half_length, 40.0 / inst.decay_alpha + 2.0);
    const int i_lo = std::max(0, static_cast<int>(std::floor((xi - z_max + g.half_length) / g.spacing)));
    const int i_hi =
        std::min(g.n_points - 1, static_cast<int>(std::ceil((xi + z_max + g.half_length) / g.spacing)));
    // dnu from the full translate vector, piecewise by nearest center
    double acc = 0.0;
    for (int i = i_lo; i <= i_hi; ++i) {
        if (!mask[i]) continue;
        const double z = g.x(i) - xi;
        const double mp = inst.deriv_at(z);
        if (mp == 0.0) continue;
        size_t j = 0;
        double best = 1e300;
        for (size_t c = 0; c < cs.size(); ++c) {
            const double d = std::abs(g.x(i) - cs[c]);
            if (d < best) {
                best = d;
                j = c;
            }
        }
        const double sj = (j % 2 == 0) ? 1.0 : -1.0;
        const double ref = sj * inst.value_at(g.x(i) - cs[j]);
        acc += g.quad_weight(i) * (m[i] - sigma * inst.value_at(z)) * mp / (1.0 - ref * ref);
    }
    return acc;
}

}  // namespace

ApproximateCenters approximate_centers(const Trajectory& m_traj, const ForcingField& b1,
                                       const InstantonData& inst, const ModelParams& params,
                                       const AnalysisParams& ap, double t_lo, double t_hi) {
    const Grid1D& g = m_traj.grid;
    const int n = g.n_points;
    ApproximateCenters out;
    // A_{alpha*} from the time integral of b1^2 over [t_lo, t_hi]
    std::vector<double> ib2(n, 0.0);
    {
        const int M = b1.steps();
        for (int k = 0; k <= M; ++k) {
            const double t = b1.t0 + k * b1.dt;
            if (t < t_lo - 1e-12 || t > t_hi + 1e-12) continue;
            const double w = (k == 0 || k == M) ? 0.5 * b1.dt : b1.dt;
            for (int i = 0; i < n; ++i) ib2[i] += w * b1.slices[k][i] * b1.slices[k][i];
        }
    }
    out.mask.assign(n, 1);
    double comp = 0.0;
    for (int i = 0; i < n; ++i)
        if (ib2[i] > ap.alpha_star) {
            out.mask[i] = 0;
            comp += g.quad_weight(i);
        }
    out.mask_complement = comp;
    // (8/alpha*) int ||alpha b1||^2_dnu ds with alpha^2 dnu = dx/8 identically
    double b2tot = 0.0;
    for (int i = 0; i < n; ++i) b2tot += g.quad_weight(i) * ib2[i];
    out.comof_bound = b2tot / ap.alpha_star;

    // initial centers from the exact orthogonality on slice 0
    ModelParams pcopy = params;
    ContourDecomposition cd = extract_contours(m_traj.profile(0), ap, inst, pcopy);
    CenterSet cs0 = find_centers(m_traj.profile(0), inst, cd);
    if (cs0.xi.empty()) throw ConvergenceError("approximate_centers: no mixed contour at start");
    std::vector<double> xi = cs0.xi;
    std::vector<int> sigma = cs0.sigma;

    const int M = m_traj.steps();
    out.path.times.resize(M + 1);
    out.path.centers.resize(M + 1);
    out.deviation.resize(M + 1);
    out.u_norm_sq.resize(M + 1);
    for (int k = 0; k <= M; ++k) {
        out.path.times[k] = m_traj.time_of(k);
        // per front: bisection of the masked orthogonality around the previous value
        for (size_t c = 0; c < xi.size(); ++c) {
            double lo = xi[c] - 2.0, hi = xi[c] + 2.0;
            lo = std::max(lo, -g.half_length + 5.0);
            hi = std::min(hi, g.half_length - 5.0);
            auto f = [&](double v) {
                return masked_residual(m_traj.slices[k], g, out.mask, inst, xi, c, v, sigma[c]);
            };
            double fa = f(lo), fb = f(hi);
            if (fa * fb > 0.0) {
                // widen once; center may have drifted
                lo -= 2.0; hi += 2.0;
                fa = f(lo); fb = f(hi);
                if (fa * fb > 0.0)
                    throw ConvergenceError("approximate_centers: lost a front mid-slab");
            }
            for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if (fa * fm <= 0.0) {
                    hi = mid;
                    fb = fm;
                } else {
                    lo = mid;
                    fa = fm;
                }
            }
            xi[c] = 0.5 * (lo + hi);
        }
        out.path.centers[k] = xi;
        Profile ref = glue_fronts(inst, xi, sigma.empty() || sigma[0] > 0);
        std::vector<double> u(n);
        double un = 0.0;
        for (int i = 0; i < n; ++i) {
            u[i] = m_traj.slices[k][i] - ref[i];
            un += g.quad_weight(i) * u[i] * u[i] / (1.0 - ref[i] * ref[i]);
        }
        out.deviation[k] = std::move(u);
        out.u_norm_sq[k] = un;
    }
    return out;
}

FrontKinematics front_velocities(const ApproximateCenters& ac, const ForcingField& b1,
                                 const AlphaField& alpha, const InstantonData& inst,
                                 double c_fit) {
    FrontKinematics fk;
    fk.c_fit = c_fit;
    fk.times = ac.path.times;
    const size_t nt = ac.path.times.size();
    if (nt < 2) throw DomainError("front_velocities: need at least two slices");
    const size_t nf = ac.path.centers[0].size();
    const Grid1D& g = b1.grid;
    const double dt = ac.path.times[1] - ac.path.times[0];

    // U_j^2 = int ||alpha b1||^2_dnu + S R_max
    double U2 = 0.0;
    for (size_t k = 0; k < nt; ++k) {
        const size_t kb = std::min<size_t>(k, b1.slices.size() - 1);
        const auto& al = alpha.slices[std::min<size_t>(k, alpha.slices.size() - 1)];
        Profile ref = glue_fronts(inst, ac.path.centers[k], true);
        double s = 0.0;
        for (int i = 0; i < g.n_points; ++i) {
            const double ab = al[i] * b1.slices[kb][i];
            s += g.quad_weight(i) * ab * ab / (1.0 - ref[i] * ref[i]);
        }
        U2 += ((k == 0 || k + 1 == nt) ? 0.5 * dt : dt) * s;
    }
    const double S = ac.path.times.back() - ac.path.times.front();
    const double log_eps_sq_half = 4.5;  // |log eps|^2 / 2 at the default eps
    U2 += S * c_fit * std::exp(-inst.decay_alpha * log_eps_sq_half);

    fk.v0.assign(nt, std::vector<double>(nf, 0.0));
    fk.v.assign(nt, std::vector<double>(nf, 0.0));
    fk.r.assign(nt, std::vector<double>(nf, 0.0));
    for (size_t k = 0; k < nt; ++k) {
        const size_t kb = std::min<size_t>(k, b1.slices.size() - 1);
        const auto& al = alpha.slices[std::min<size_t>(k, alpha.slices.size() - 1)];
        Profile ref = glue_fronts(inst, ac.path.centers[k], true);
        for (size_t c = 0; c < nf; ++c) {
            const double sigma = (c % 2 == 0) ? 1.0 : -1.0;
            const double xi = ac.path.centers[k][c];
            double ip = 0.0;
            for (int i = 0; i < g.n_points; ++i) {
                const double mp = inst.deriv_at(g.x(i) - xi);
                if (mp == 0.0) continue;
                ip += g.quad_weight(i) * al[i] * b1.slices[kb][i] * mp / (1.0 - ref[i] * ref[i]);
            }
            fk.v0[k][c] = sigma * std::abs(ip) / inst.norm_mprime_nu_sq;
            fk.v[k][c] = fk.v0[k][c] + sigma * c_fit * (U2 + ac.u_norm_sq.front());
        }
    }
    for (size_t c = 0; c < nf; ++c) fk.r[0][c] = ac.path.centers[0][c];
    for (size_t k = 1; k < nt; ++k)
        for (size_t c = 0; c < nf; ++c)
            fk.r[k][c] = fk.r[k - 1][c] + 0.5 * dt * (fk.v[k - 1][c] + fk.v[k][c]);
    // r̄(t) <= ξ̄(t): odd (rising, even 0-based) fronts r >= xi, even fronts r <= xi
    fk.partial_order_ok = true;
    for (size_t k = 0; k < nt; ++k)
        for (size_t c = 0; c < nf; ++c) {
            const double d = fk.r[k][c] - ac.path.centers[k][c];
            if ((c % 2 == 0 && d < -1e-6) || (c % 2 == 1 && d > 1e-6))
                fk.partial_order_ok = false;
        }
    return fk;
}

// ---------------------------------------------------------------- initialization

InitializationResult initialize_profile(const Profile& m, const InstantonData& inst,
                                        const AnalysisParams& ap, const ModelParams& params,
                                        const std::vector<double>* known_centers) {
    InitializationResult out;
    std::vector<double> xi;
    if (known_centers) {
        xi = *known_centers;
    } else {
        CenterSet cs = find_centers(m, inst, ap, params);
        xi = cs.xi;
    }
    const double wide = 2.0 * ap.log_eps_sq;

    bool all_wide = true;
    for (size_t j = 0; j + 1 < xi.size(); ++j)
        if (xi[j + 1] - xi[j] <= wide) all_wide = false;
    if (all_wide) {
        out.profile = m;
        out.t_offset = 0.0;
        out.applied_case = 1;
        out.centers = xi;
        return out;
    }

    // erase close pairs starting at odd 1-based index (plus-droplets)
    auto erase_odd_pairs = [&](std::vector<double> v, double gap) {
        for (size_t j = 0; j + 1 < v.size();) {
            if (j % 2 == 0 && v[j + 1] - v[j] <= gap)  // 0-based even == 1-based odd
                v.erase(v.begin() + j, v.begin() + j + 2);
            else
                ++j;
        }
        return v;
    };
    std::vector<double> x1 = erase_odd_pairs(xi, wide);
    // push mid-range even pairs symmetrically apart to gap 2|log eps|^2
    std::vector<double> x2 = x1;
    for (size_t j = 0; j + 1 < x2.size(); ++j) {
        if (j % 2 == 1) {  // 1-based even
            const double gap = x2[j + 1] - x2[j];
            if (gap >= 2.0 * ap.ell_star && gap <= wide) {
                const double mid = 0.5 * (x2[j] + x2[j + 1]);
                x2[j] = mid - 0.5 * wide;
                x2[j + 1] = mid + 0.5 * wide;
            }
        }
    }
    std::vector<double> x3 = erase_odd_pairs(x2, wide);

    bool has_tight_even = false;
    for (size_t j = 0; j + 1 < x3.size(); ++j)
        if (j % 2 == 1 && x3[j + 1] - x3[j] <= 2.0 * ap.ell_star) has_tight_even = true;

    Profile tilde(m.grid);
    Profile ref = x3.empty() ? Profile(m.grid, -inst.m_beta) : glue_fronts(inst, x3, true);
    for (int i = 0; i < m.size(); ++i) tilde[i] = std::min(m[i], ref[i]);

    if (!has_tight_even) {
        out.profile = tilde;
        out.t_offset = 0.0;
        out.applied_case = 2;
    } else {
        const double tau = ap.tau > 0.0 ? ap.tau : 150.0;
        Trajectory tr = evolve_unforced(tilde, tau, 0.05, params,
                                        static_cast<int>(std::round(tau / 0.05)));
        out.profile = tr.profile(tr.steps());
        out.t_offset = tau;
        out.applied_case = 3;
    }
    CenterSet after = find_centers(out.profile, inst, ap, params);
    out.centers = after.xi;
    return out;
}

}  // namespace nlfront
