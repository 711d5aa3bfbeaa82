#include <random>

#include "doctest.h"
#include "nlfront/action.hpp"
#include "nlfront/analysis.hpp"
#include "nlfront/dynamics.hpp"
#include "support/fixtures.hpp"

using namespace nlfront;

namespace {

Trajectory empty_mesh(const Grid1D& g, double horizon, double dt) {
    Trajectory t;
    t.grid = g;
    t.dt = dt;
    t.slices.assign(static_cast<size_t>(std::round(horizon / dt)) + 1,
                    std::vector<double>(g.n_points, 0.0));
    return t;
}

ForcingField bump_forcing(const Trajectory& mesh_like, double amp, double x0, double sg,
                          double om) {
    ForcingField b = ForcingField::zeros_like(mesh_like);
    const Grid1D& g = b.grid;
    for (size_t k = 0; k < b.slices.size(); ++k) {
        const double t = k * b.dt;
        for (int i = 0; i < g.n_points; ++i) {
            const double z = (g.x(i) - x0) / sg;
            b.slices[k][i] = amp * std::sin(om * t) * std::exp(-0.5 * z * z);
        }
    }
    return b;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("instanton is stationary under the unforced flow") {
    const InstantonData& inst = fixtures::default_instanton();
    Trajectory tr = evolve_unforced(inst.profile, 50.0, 0.05, fixtures::default_params(), 100);
    double dev = 0.0;
    for (const auto& s : tr.slices)
        for (int i = 0; i < tr.grid.n_points; ++i)
            dev = std::max(dev, std::abs(s[i] - inst.profile[i]));
    CHECK(dev <= 1e-6);
}

TEST_CASE("free energy decreases along unforced runs") {
    const ModelParams& p = fixtures::default_params();
    const InstantonData& inst = fixtures::default_instanton();
    const Grid1D& g = fixtures::default_grid();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        Profile m0(g);
        for (int i = 0; i < g.n_points; ++i) {
            const double x = g.x(i);
            m0[i] = 0.8 * inst.m_beta * std::tanh(0.3 * x) + 0.15 * U(rng) * std::exp(-0.05 * x * x);
        }
        Trajectory tr = evolve_unforced(m0, 30.0, 0.02, p, 25);
        double prev = free_energy(tr.profile(0), p);
        for (int k = 1; k <= tr.steps(); ++k) {
            const double cur = free_energy(tr.profile(k), p);
            CHECK(cur <= prev + 1e-8);
            prev = cur;
        }
    }
}

TEST_CASE("small antisymmetric seeds grow an interface") {
    const ModelParams& p = fixtures::default_params();
    const InstantonData& inst = fixtures::default_instanton();
    const Grid1D& g = fixtures::default_grid();
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(0.5, 1.0);
    Profile m0(g);
    for (int i = 0; i < g.n_points / 2; ++i) {
        const double v = 0.01 * U(rng) * (1.0 + 0.3 * std::sin(0.2 * g.x(i)));
        m0[i] = -v;
        m0[g.n_points - 1 - i] = v;
    }
    m0[g.n_points / 2] = 0.0;
    Trajectory tr = evolve_unforced(m0, 60.0, 0.02, p, 100);
    const auto& end = tr.slices.back();
    CHECK(end.back() > 0.95 * inst.m_beta);
    CHECK(end.front() < -0.95 * inst.m_beta);
    // F decreases throughout the growth
    double prev = free_energy(tr.profile(0), p);
    for (int k = 1; k <= tr.steps(); ++k) {
        const double cur = free_energy(tr.profile(k), p);
        CHECK(cur <= prev + 1e-8);
        prev = cur;
    }
}

TEST_CASE("comparison principle and invariant region") {
    const ModelParams& p = fixtures::default_params();
    const InstantonData& inst = fixtures::default_instanton();
    const Grid1D& g = fixtures::default_grid();
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> U(0.0, 0.2);
    Profile lo(g), hi(g);
    for (int i = 0; i < g.n_points; ++i) {
        const double base = inst.m_beta * std::tanh(0.4 * g.x(i));
        lo[i] = base - 0.05 - U(rng) * std::exp(-0.02 * g.x(i) * g.x(i));
        hi[i] = base + 0.05 + U(rng) * std::exp(-0.02 * g.x(i) * g.x(i));
        lo[i] = clamp_mag(std::max(lo[i], -inst.m_beta));
        hi[i] = clamp_mag(std::min(hi[i], inst.m_beta));
    }
    Trajectory tl = evolve_unforced(lo, 20.0, 0.02, p, 50);
    Trajectory th = evolve_unforced(hi, 20.0, 0.02, p, 50);
    for (size_t k = 0; k < tl.slices.size(); ++k)
        for (int i = 0; i < g.n_points; ++i) {
            CHECK(tl.slices[k][i] <= th.slices[k][i] + 1e-12);
            CHECK(std::abs(tl.slices[k][i]) <= inst.m_beta + 1e-9);
            CHECK(std::abs(th.slices[k][i]) <= inst.m_beta + 1e-9);
        }
}

TEST_CASE("sustained clamping is reported as blow-up") {
    const ModelParams& p = fixtures::default_params();
    const Grid1D& g = fixtures::default_grid();
    Trajectory mesh;
    mesh.grid = g;
    mesh.dt = 1.0;
    mesh.slices.assign(61, std::vector<double>(g.n_points, 0.0));
    ForcingField b = ForcingField::zeros_like(mesh);
    for (auto& s : b.slices)
        for (double& v : s) v = 5.0;  // far beyond the drive capacity everywhere
    CHECK_THROWS_AS(evolve_forced(Profile(g, 0.5), b, 0.05, p), ConvergenceError);
}

TEST_CASE("zero forcing reproduces the unforced flow") {
    const ModelParams& p = fixtures::default_params();
    const InstantonData& inst = fixtures::default_instanton();
    Profile m0 = translate_instanton(inst, 1.3);
    Trajectory base = evolve_unforced(m0, 5.0, 0.02, p);
    ForcingField zero = ForcingField::zeros_like(base);
    Trajectory forced = evolve_forced(m0, zero, 0.02, p);
    for (size_t k = 0; k < base.slices.size(); ++k)
        for (int i = 0; i < base.grid.n_points; ++i)
            CHECK(forced.slices[k][i] == doctest::Approx(base.slices[k][i]).epsilon(1e-14));
}

TEST_CASE("force extraction: stationarity and the moving instanton") {
    const ModelParams& p = fixtures::default_params();
    const InstantonData& inst = fixtures::default_instanton();
    Trajectory still = evolve_unforced(inst.profile, 2.0, 0.02, p);
    ForcingField b = force_of(still, p);
    double bmax = 0.0;
    for (const auto& s : b.slices)
        for (double v : s) bmax = std::max(bmax, std::abs(v));
    CHECK(bmax <= 1e-6);

    // phi(x,t) = m̄(x - eps V t) gives b = -eps V m̄'
    const double epsV = 0.05;
    Trajectory mov;
    mov.grid = inst.profile.grid;
    mov.dt = 0.05;
    for (int k = 0; k <= 40; ++k)
        mov.slices.push_back(translate_instanton(inst, epsV * k * mov.dt).values);
    ForcingField bm = force_of(mov, p);
    const int mid = 20;
    std::vector<double> expect = translate_derivative(inst, epsV * mid * mov.dt);
    for (int i = 0; i < mov.grid.n_points; ++i)
        CHECK(bm.slices[mid][i] == doctest::Approx(-epsV * expect[i]).epsilon(2e-3));
}

TEST_CASE("force/evolve round trips") {
    const ModelParams& p = fixtures::default_params();
    const InstantonData& inst = fixtures::default_instanton();
    // amplitude within the drive capacity 1 - tanh(beta) of the pure phases,
    // else the state saturates at the clamp and the force is not recoverable
    Profile m0 = translate_instanton(inst, -2.0);
    Trajectory mesh = empty_mesh(m0.grid, 6.0, 0.05);
    ForcingField b = bump_forcing(mesh, 0.06, 1.0, 1.5, 0.9);
    Trajectory tr = evolve_forced(m0, b, 0.01, p);
    ForcingField back = force_of(tr, p);
    double err = 0.0;
    for (int k = 1; k < back.steps(); ++k)
        for (int i = 0; i < b.grid.n_points; ++i)
            err = std::max(err, std::abs(back.slices[k][i] - b.slices[k][i]));
    CHECK(err <= 5e-3);  // O(dt^2) at dt = 0.05

    Trajectory re = evolve_forced(tr.profile(0), back, 0.01, p);
    double perr = 0.0;
    for (size_t k = 0; k < tr.slices.size(); ++k)
        for (int i = 0; i < b.grid.n_points; ++i)
            perr = std::max(perr, std::abs(re.slices[k][i] - tr.slices[k][i]));
    CHECK(perr <= 5e-4);
}

TEST_CASE("ordered forcings give ordered trajectories") {
    const ModelParams& p = fixtures::default_params();
    const InstantonData& inst = fixtures::default_instanton();
    Profile m0 = translate_instanton(inst, 0.0);
    Trajectory mesh = empty_mesh(m0.grid, 4.0, 0.05);
    ForcingField b1 = ForcingField::zeros_like(mesh), b2 = ForcingField::zeros_like(mesh);
    for (size_t k = 0; k < b1.slices.size(); ++k)
        for (int i = 0; i < mesh.grid.n_points; ++i) {
            const double z = mesh.grid.x(i) / 2.0;
            b1.slices[k][i] = 0.05 * std::exp(-z * z);
            b2.slices[k][i] = 0.12 * std::exp(-z * z);
        }
    Trajectory t1 = evolve_forced(m0, b1, 0.02, p);
    Trajectory t2 = evolve_forced(m0, b2, 0.02, p);
    for (size_t k = 0; k < t1.slices.size(); ++k)
        for (int i = 0; i < mesh.grid.n_points; ++i)
            CHECK(t1.slices[k][i] <= t2.slices[k][i] + 1e-12);
}

TEST_CASE("coupled auxiliary system: zero field and contraction") {
    const ModelParams& p = fixtures::default_params();
    const InstantonData& inst = fixtures::default_instanton();
    const AnalysisParams& ap = fixtures::default_analysis();

    const double S = 10.0, dts = 0.1;
    Trajectory phi;
    phi.grid = inst.profile.grid;
    phi.dt = dts;
    const double v = 0.02;
    for (int k = 0; k <= static_cast<int>(S / dts); ++k)
        phi.slices.push_back(translate_instanton(inst, v * k * dts).values);
    ForcingField b = force_of(phi, p);
    TruncationResult tb = truncate_field(b, ap.Delta);

    SUBCASE("b1 = 0 keeps centers frozen") {
        ForcingField zero = ForcingField::zeros_like(phi);
        CoupledSystemResult r = solve_coupled_system(phi, zero, phi.profile(0), inst, p, ap);
        CHECK(r.sweeps <= 3);
        for (const auto& cs : r.xi_tilde.centers)
            for (double xi : cs) CHECK(std::abs(xi - 0.0) <= 1e-6);
    }

    SUBCASE("center-gap contraction on a good slab") {
        CoupledSystemResult r = solve_coupled_system(phi, tb.b1, phi.profile(0), inst, p, ap);
        CHECK(r.sweeps <= 20);
        CHECK(r.contraction_ratio < 1.0);
        // m is a sub-solution of phi1 (same force, ordered initial data)
        for (size_t k = 0; k < r.m.slices.size(); ++k)
            for (int i = 0; i < phi.grid.n_points; ++i)
                CHECK(r.m.slices[k][i] <= r.phi1.slices[k][i] + 1e-9);
    }
}

}  // TEST_SUITE
