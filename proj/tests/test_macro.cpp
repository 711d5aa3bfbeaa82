#include <random>

#include "doctest.h"
#include "nlfront/macro.hpp"
#include "support/fixtures.hpp"

using namespace nlfront;

TEST_SUITE("macro") {

TEST_CASE("mobility and w_n") {
    const InstantonData& inst = fixtures::default_instanton();
    const double mu = mobility(inst);
    CHECK(mu > 0.0);
    CHECK(mu == doctest::Approx(4.0 / inst.norm_mprime_nu_sq));

    MacroProblem pr = MacroProblem::make(1.0, 1.0, 0.05, inst);
    CHECK(macro_cost(pr, 0) == doctest::Approx(pr.V * pr.V * pr.T / pr.mu));
    // w_n grows linearly in n eventually
    CHECK(macro_cost(pr, 40) > macro_cost(pr, 10));
    CHECK_THROWS_AS(macro_cost(pr, -1), DomainError);

    // brute-force argmin matches the rounded continuous optimum
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> UR(0.2, 3.0), UT(0.2, 3.0);
    for (int t = 0; t < 40; ++t) {
        MacroProblem q = MacroProblem::make(UR(rng), UT(rng), 0.05, inst);
        OptimalCount oc = optimal_nucleation_count(q);
        int brute = 0;
        double best = macro_cost(q, 0);
        for (int n = 1; n <= 60; ++n) {
            const double w = macro_cost(q, n);
            if (w < best) {
                best = w;
                brute = n;
            }
        }
        CHECK(oc.n == brute);
        CHECK(oc.w == doctest::Approx(best));
        // the continuous optimum (2n+1)^2 = V^2 T/(mu F), compare neighbors
        const double cont = std::sqrt(q.V * q.V * q.T / (q.mu * q.F_bar));
        const int n_lo = std::max(0, static_cast<int>(std::floor(0.5 * (cont - 1.0))));
        CHECK((oc.n == n_lo || oc.n == n_lo + 1));
    }

    // w1 >= w0 iff V^2 T <= 3 mu F
    MacroProblem q1 = MacroProblem::make(1.0, 1.0, 0.05, inst);
    const double thresh = 3.0 * q1.mu * q1.F_bar;
    {
        MacroProblem below = MacroProblem::make(std::sqrt(thresh * 0.9), 1.0, 0.05, inst);
        CHECK(optimal_nucleation_count(below).n == 0);
        MacroProblem above = MacroProblem::make(std::sqrt(thresh * 1.5), 1.0, 0.05, inst);
        CHECK(optimal_nucleation_count(above).n >= 1);
    }

    // doubling T at fixed R (halving V) never increases the minimizer
    double R = 2.0;
    int prev = 1000;
    for (double T : {0.5, 1.0, 2.0, 4.0}) {
        MacroProblem q2 = MacroProblem::make(R, T, 0.05, inst);
        const int n = optimal_nucleation_count(q2).n;
        CHECK(n <= prev);
        prev = n;
    }
}

TEST_CASE("mobility is stable under grid refinement") {
    Grid1D g2 = Grid1D::make(20.0, 1601);  // h -> h/2
    ModelParams p2 = ModelParams::make(1.5, g2);
    InstantonData i2 = compute_instanton(p2, g2);
    const double mu1 = mobility(fixtures::default_instanton());
    const double mu2 = mobility(i2);
    CHECK(std::abs(mu1 / mu2 - 1.0) <= 1e-3);
}

TEST_CASE("nucleation path splice branch at small epsilon") {
    // at eps = 5e-4 the endpoint droplet is wider than the critical width, so
    // the path splices a slow forced-separation leg onto the reversal
    const InstantonData& inst = fixtures::default_instanton();
    const ModelParams& p = fixtures::default_params();
    MacroProblem pr = MacroProblem::make(0.25, 0.25, 5e-4, inst);
    NucleationPath np = build_nucleation_path(pr, inst, p, 0.1);
    CHECK(np.target_gap > 2.0 * np.critical_halfwidth - 0.5);
    CHECK(np.forward_cost > 0.0);
    CHECK(np.forward_cost <= 0.01 * inst.free_energy);
    // total cost still tracks beta F(droplet) plus the small push
    CHECK(np.cost <= p.beta * np.droplet_F + 0.05 * inst.free_energy);
    CHECK(np.cost >= p.beta * np.droplet_F * 0.9);
    for (double v : np.traj.slices.front())
        CHECK(v == doctest::Approx(inst.m_beta).epsilon(1e-6));
}

TEST_CASE("moving instanton endpoints and extracted force") {
    const InstantonData& inst = fixtures::default_instanton();
    const ModelParams& p = fixtures::default_params();
    MacroProblem pr = MacroProblem::make(0.25, 0.25, 0.05, inst);  // displacement 5
    Trajectory tr = build_moving_instanton(pr, inst, 0.25);
    // endpoints m̄ and m̄_{eps^-1 R}
    for (int i = 0; i < tr.grid.n_points; ++i)
        CHECK(tr.slices.front()[i] == doctest::Approx(inst.profile[i]).epsilon(1e-12));
    Profile end = translate_instanton(inst, 5.0);
    for (int i = 0; i < tr.grid.n_points; ++i)
        CHECK(tr.slices.back()[i] == doctest::Approx(end[i]).epsilon(1e-9));
    CHECK_THROWS_AS(build_moving_instanton(MacroProblem::make(1.0, 1.0, 0.05, inst), inst, 0.25),
                    DomainError);  // displacement 20 does not fit L = 20
}

TEST_CASE("nucleation path: endpoints, symmetry, cost near beta 2F") {
    const InstantonData& inst = fixtures::default_instanton();
    const ModelParams& p = fixtures::default_params();
    MacroProblem pr = MacroProblem::make(0.25, 0.25, 0.05, inst);
    NucleationPath np = build_nucleation_path(pr, inst, p, 0.1);
    const Grid1D& g = inst.profile.grid;
    // starts at m_beta, ends at the droplet
    for (double v : np.traj.slices.front())
        CHECK(v == doctest::Approx(inst.m_beta).epsilon(1e-6));
    // symmetry in x at every slice
    for (const auto& s : np.traj.slices)
        for (int i = 0; i < g.n_points / 2; ++i)
            CHECK(std::abs(s[i] - s[g.n_points - 1 - i]) <= 1e-8);
    // the measured cost sits at beta * F(droplet), not at 2F(m̄)
    CHECK(np.cost == doctest::Approx(p.beta * np.droplet_F).epsilon(0.01));
    CHECK(np.cost < 2.0 * p.beta * inst.free_energy * 1.1);
    CHECK(np.cost > 2.0 * inst.free_energy);  // the beta factor is real
}

TEST_CASE("particle schedules and the lower-bound bookkeeping") {
    const InstantonData& inst = fixtures::default_instanton();
    AnalysisParams ap = fixtures::default_analysis();

    MacroProblem pr = MacroProblem::make(1.0, 1.0, 0.05, inst);
    ap.n_star = static_cast<int>(std::floor(1.0 + 2.0 * pr.P / pr.F_bar));

    SUBCASE("single particle at constant speed") {
        ParticleSchedule s = make_optimal_schedule(pr, 0, ap);
        ParticleResult r = simulate_particles(pr, s, ap);
        CHECK(r.feasible);
        CHECK(r.total_displacement == doctest::Approx(pr.meso_displacement()).epsilon(1e-12));
        CHECK(r.lower_bound_cost + r.error_terms ==
              doctest::Approx(macro_cost(pr, 0)).epsilon(1e-9));
    }

    SUBCASE("2n+1 equal-lifetime particles track w_n") {
        for (int n : {1, 2}) {
            ParticleSchedule s = make_optimal_schedule(pr, n, ap);
            ParticleResult r = simulate_particles(pr, s, ap);
            CHECK(r.feasible);
            // kinematic + nucleation part matches w_n up to the collision gaps
            CHECK(r.lower_bound_cost + r.error_terms ==
                  doctest::Approx(macro_cost(pr, n)).epsilon(0.05));
        }
    }

    SUBCASE("front budget is enforced") {
        ParticleSchedule s = make_optimal_schedule(pr, 1, ap);  // 3 fronts
        AnalysisParams tight = ap;
        tight.n_star = 1;
        CHECK_THROWS_AS(simulate_particles(pr, s, tight), DomainError);
    }
}

TEST_CASE("slab audit on a spiked trajectory") {
    const ModelParams& p = fixtures::default_params();
    const InstantonData& inst = fixtures::default_instanton();
    AnalysisParams ap = fixtures::default_analysis();

    // zero-force trajectory: no bad slabs, audit trivially empty
    Trajectory still = evolve_unforced(inst.profile, 40.0, 0.05, p, 20);
    CostReport r0 = classify_slabs(still, p, 10.0, ap.delta);
    BadIntervalAudit a0 = audit_bad_intervals(still, r0, inst, p, ap);
    CHECK(a0.components.empty());
    CHECK(a0.total_center_disp == 0.0);

    // a cost spike in one slab
    ForcingField b = ForcingField::zeros_like(still);
    for (size_t k = 0; k < b.slices.size(); ++k) {
        const double t = k * b.dt;
        if (t >= 12.0 && t <= 16.0)
            for (int i = 0; i < b.grid.n_points; ++i) {
                const double z = (b.grid.x(i) - 5.0) / 1.2;
                b.slices[k][i] = 0.6 * std::exp(-0.5 * z * z);
            }
    }
    Trajectory forced = evolve_forced(still.profile(0), b, 0.05, p);
    CostReport r1 = classify_slabs(forced, p, 10.0, ap.delta);
    CHECK(r1.bad_count >= 1);
    BadIntervalAudit a1 = audit_bad_intervals(forced, r1, inst, p, ap);
    REQUIRE_FALSE(a1.components.empty());
    for (const auto& c : a1.components) {
        CHECK(c.within_bound);
        CHECK(c.delta_sum > 0.0);
    }
    CHECK(a1.total_center_disp < ap.log_eps_sq);
}

TEST_CASE("junction jump scale shrinks with epsilon") {
    // S_eps ~ delta(eps)/Delta(eps) = |log eps|^(lambda - kappa), decreasing
    // for lambda < kappa
    const InstantonData& inst = fixtures::default_instanton();
    const ModelParams& p = fixtures::default_params();
    double prev = 1e300;
    for (double eps : {0.1, 0.05, 0.025}) {
        AnalysisParams ap = AnalysisParams::make(eps, inst, p);
        const double s_eps = ap.delta / ap.Delta;  // worst good-slab jump scale
        CHECK(s_eps < prev);
        prev = s_eps;
    }
}

TEST_CASE("inter-interval jump bookkeeping") {
    const ModelParams& p = fixtures::default_params();
    const InstantonData& inst = fixtures::default_instanton();
    AnalysisParams ap = fixtures::default_analysis();

    Trajectory still = evolve_unforced(inst.profile, 40.0, 0.05, p, 20);
    CostReport r = classify_slabs(still, p, 10.0, ap.delta);
    JumpReport jr = inter_interval_jump(still, r, inst, p, ap, 1);
    // delta_j ~ 0 on a stationary run: no jump, no erasure
    CHECK(jr.S_eps[1] <= 1e-8);
    CHECK(jr.erased_pairs.empty());
    for (int i = 0; i < still.grid.n_points; ++i)
        CHECK(jr.reinitialized[i] <= still.slices.back()[i] + 1e-12);
    CHECK_THROWS_AS(inter_interval_jump(still, r, inst, p, ap, 99), DomainError);
}

TEST_CASE("upper-bound strategy, n = 0 reduces to the moving instanton") {
    const InstantonData& inst = fixtures::default_instanton();
    const ModelParams& p = fixtures::default_params();
    AnalysisParams ap = fixtures::default_analysis();
    MacroProblem pr = MacroProblem::make(0.25, 0.25, 0.05, inst);
    StrategyResult sr = build_upper_bound_strategy(pr, 0, inst, p, ap, 0.25);
    Trajectory mi = build_moving_instanton(pr, inst, 0.25);
    REQUIRE(sr.traj.slices.size() == mi.slices.size());
    for (size_t k = 0; k < mi.slices.size(); ++k)
        for (int i = 0; i < mi.grid.n_points; ++i)
            CHECK(sr.traj.slices[k][i] == doctest::Approx(mi.slices[k][i]).epsilon(1e-12));
    CHECK(sr.schedule.paths.size() == 1);
    CHECK(sr.action_total > 0.0);
}

}  // TEST_SUITE
