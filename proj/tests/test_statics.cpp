#include <random>

#include "doctest.h"
#include "nlfront/analysis.hpp"
#include "nlfront/statics.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace nlfront;

TEST_SUITE("statics") {

TEST_CASE("mean-field magnetization against the scalar oracle") {
    CHECK(mean_field_magnetization(2.0) == doctest::Approx(oracles::mean_field_root(2.0)).epsilon(1e-12));
    CHECK(mean_field_magnetization(1.5) == doctest::Approx(oracles::mean_field_root(1.5)).epsilon(1e-12));
    // frozen oracle values
    CHECK(mean_field_magnetization(2.0) == doctest::Approx(0.95750402407727).epsilon(1e-10));
    CHECK(mean_field_magnetization(1.5) == doctest::Approx(0.85855963664011).epsilon(1e-10));
    // bifurcation: m_beta ~ sqrt(3(beta-1)) near beta = 1
    const double m = mean_field_magnetization(1.000001);
    CHECK(m < 2e-3);
    CHECK(m == doctest::Approx(std::sqrt(3e-6)).epsilon(0.01));
    CHECK_THROWS_AS(mean_field_magnetization(0.9), DomainError);
}

TEST_CASE("instanton fixed point, antisymmetry, tails") {
    const InstantonData& inst = fixtures::default_instanton();
    const Grid1D& g = fixtures::default_grid();
    CHECK(inst.residual <= 1e-8);
    CHECK(inst.profile[g.n_points / 2] == 0.0);
    for (int i = 0; i < g.n_points; ++i)
        CHECK(inst.profile[i] == doctest::Approx(-inst.profile[g.n_points - 1 - i]).epsilon(1e-14));
    // strictly increasing while the differences stay above roundoff; the tail
    // flattens to m_beta at machine precision beyond |x| ~ 8 for this kernel
    for (int i = 0; i + 1 < g.n_points; ++i) {
        CHECK(inst.profile[i + 1] - inst.profile[i] >= -1e-15);
        if (std::abs(g.x(i)) <= 6.0) CHECK(inst.profile[i + 1] > inst.profile[i]);
    }
    CHECK(std::abs(inst.profile[g.n_points - 1] - inst.m_beta) <= 1e-6);
    CHECK(std::abs(inst.profile[0] + inst.m_beta) <= 1e-6);
    // tanh(beta J*m̄) = m̄ as stated
    Profile jm = convolve(fixtures::default_params().kernel, inst.profile);
    for (int i = 0; i < g.n_points; i += 17)
        CHECK(std::tanh(1.5 * jm[i]) == doctest::Approx(inst.profile[i]).epsilon(1e-8));
}

TEST_CASE("tail decay fit") {
    const InstantonData& inst = fixtures::default_instanton();
    CHECK(inst.decay_alpha > 0.0);
    CHECK(inst.tail_fit_rel <= 0.05);
    // dispersion relation: beta (1-m_beta^2) \int J e^{alpha r} dr = 1
    double jhat = 0.0;
    const int N = 4000;
    for (int i = 0; i <= N; ++i) {
        const double r = -1.0 + 2.0 * i / N;
        const double w = (i == 0 || i == N) ? 0.5 : 1.0;
        jhat += w * (2.0 / N) * Kernel::eval(r) * std::cosh(inst.decay_alpha * r);
    }
    CHECK(1.5 * (1.0 - inst.m_beta * inst.m_beta) * jhat == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("translate: identity, zero crossing, interpolation") {
    const InstantonData& inst = fixtures::default_instanton();
    Profile t0 = translate_instanton(inst, 0.0);
    for (int i = 0; i < t0.size(); ++i) CHECK(t0[i] == inst.profile[i]);
    const double xi = 3.217;
    Profile t = translate_instanton(inst, xi);
    // zero crossing at xi within interpolation tolerance
    const Grid1D& g = t.grid;
    int iz = 0;
    for (int i = 0; i + 1 < g.n_points; ++i)
        if (t[i] <= 0.0 && t[i + 1] > 0.0) iz = i;
    const double x0 = g.x(iz) + g.spacing * (0.0 - t[iz]) / (t[iz + 1] - t[iz]);
    CHECK(x0 == doctest::Approx(xi).epsilon(1e-6));
    CHECK_THROWS_AS(translate_instanton(inst, 16.0), DomainError);
}

TEST_CASE("multi-instanton gluing") {
    const InstantonData& inst = fixtures::default_instanton();
    Profile one = multi_instanton(inst, {2.0});
    Profile tr = translate_instanton(inst, 2.0);
    for (int i = 0; i < one.size(); ++i) CHECK(one[i] == doctest::Approx(tr[i]).epsilon(1e-12));
    CHECK_THROWS_AS(multi_instanton(inst, {0.0, 2.0}), DomainError);  // gap < 4
    CHECK_THROWS_AS(multi_instanton(inst, {2.0, -2.0, 9.0}), DomainError);

    Profile three = multi_instanton(inst, {-9.0, 0.0, 9.0});
    // rising, falling, rising
    const Grid1D& g = three.grid;
    auto at = [&](double x) { return three[static_cast<int>(std::round((x + 20.0) / g.spacing))]; };
    CHECK(at(-12.0) < -0.8);
    CHECK(at(-4.5) > 0.8);
    CHECK(at(4.5) < -0.8);
    CHECK(at(12.0) > 0.8);
}

TEST_CASE("free energy: minimizers, constants, additivity") {
    const ModelParams& p = fixtures::default_params();
    const InstantonData& inst = fixtures::default_instanton();
    const Grid1D& g = fixtures::default_grid();
    CHECK(std::abs(free_energy(Profile(g, inst.m_beta), p)) <= 1e-10);
    CHECK(std::abs(free_energy(Profile(g, -inst.m_beta), p)) <= 1e-10);
    // m = 0: closed form 2L phi_beta(0)
    const double expect = 2.0 * g.half_length * phi_beta_pointwise(0.0, p.beta, inst.m_beta);
    CHECK(free_energy(Profile(g, 0.0), p) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(free_energy(inst.profile, p) > 0.0);
    // frozen instanton energy at beta = 1.5 on the default grid
    CHECK(inst.free_energy == doctest::Approx(0.1068558222906663).epsilon(1e-8));
    CHECK(inst.norm_mprime_nu_sq == doctest::Approx(2.7935861989765).epsilon(1e-8));

    // pair additivity improves exponentially with the gap, at rate ~ 2 alpha
    double prev = 1.0;
    for (double l : {2.0, 3.0, 4.0}) {
        Profile pair = glue_fronts(inst, {-l, l}, false);
        const double dev = std::abs(free_energy(pair, p) - 2.0 * inst.free_energy);
        CHECK(dev < prev);
        prev = dev;
    }
    const double d09 = std::abs(free_energy(glue_fronts(inst, {-0.9, 0.9}, false), p) -
                                2.0 * inst.free_energy);
    const double d10 = std::abs(free_energy(glue_fronts(inst, {-1.0, 1.0}, false), p) -
                                2.0 * inst.free_energy);
    const double rate = std::log(d09 / d10) / 0.1;  // gap step 0.2, rate vs 2 alpha
    CHECK(rate == doctest::Approx(2.0 * inst.decay_alpha).epsilon(0.15));

    // the calibrated pair half-gap achieves energy additivity within gamma
    const double lstar = calibrate_ell_star(inst, p);
    const double dev = std::abs(free_energy(glue_fronts(inst, {-lstar, lstar}, false), p) -
                                2.0 * inst.free_energy);
    CHECK(dev <= 0.01 * inst.free_energy);
}

TEST_CASE("energy gradient: critical points and finite differences") {
    const ModelParams& p = fixtures::default_params();
    const InstantonData& inst = fixtures::default_instanton();
    const Grid1D& g = fixtures::default_grid();
    std::vector<double> f = energy_gradient(inst.profile, p);
    for (double v : f) CHECK(std::abs(v) <= 1e-7);
    std::vector<double> fc = energy_gradient(Profile(g, inst.m_beta), p);
    for (double v : fc) CHECK(std::abs(v) <= 1e-9);

    // <dF/dm, v> = int f v dx against a central finite difference.  The
    // profile must be settled at the boundary: there the domain-truncated
    // pair term and the whole-line gradient agree.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Profile m(g);
    for (int i = 0; i < g.n_points; ++i) {
        const double x = g.x(i);
        m[i] = 0.6 * std::tanh(0.5 * x) + 0.15 * std::exp(-0.5 * (x - 3.0) * (x - 3.0));
    }
    std::vector<double> v(g.n_points);
    for (auto& e : v) e = U(rng);
    auto F = [&](const std::vector<double>& vals) {
        return free_energy(Profile(g, vals), p);
    };
    const double fd = oracles::directional_derivative(F, m.values, v, 1e-5);
    std::vector<double> fm = energy_gradient(m, p);
    double ip = 0.0;
    for (int i = 0; i < g.n_points; ++i) ip += g.quad_weight(i) * fm[i] * v[i];
    CHECK(fd == doctest::Approx(ip).epsilon(1e-5));
}

TEST_CASE("finite-volume instanton stays near the whole-line one") {
    Grid1D gn = Grid1D::make(20.0, 801, BoundaryMode::Neumann);
    ModelParams pn = ModelParams::make(1.5, gn);
    Profile fv = finite_volume_instanton(pn, gn);
    const InstantonData& inst = fixtures::default_instanton();
    double dev = 0.0;
    for (int i = 0; i < gn.n_points; ++i)
        dev = std::max(dev, std::abs(fv[i] - inst.profile[i]));
    CHECK(dev <= 1e-3);  // zeta-level agreement at this volume
}

}  // TEST_SUITE
