#include <random>

#include "doctest.h"
#include "nlfront/grid.hpp"
#include "support/fixtures.hpp"

using namespace nlfront;

TEST_SUITE("grid_kernel") {

TEST_CASE("kernel shape and discrete mass") {
    const Grid1D& g = fixtures::default_grid();
    Kernel k = Kernel::sampled(g);
    CHECK(Kernel::eval(1.2) == 0.0);
    CHECK(Kernel::eval(-0.3) == Kernel::eval(0.3));
    // nonincreasing on r > 0
    for (double r = 0.0; r < 1.0; r += 0.05) CHECK(Kernel::eval(r + 0.05) <= Kernel::eval(r));
    double mass = 0.0;
    for (double w : k.weights) mass += w;
    CHECK(std::abs(mass - 1.0) <= 1e-12);
    // C^2 across the support edge: J, J', J'' all vanish at |r| = 1
    const double h = 1e-5;
    CHECK(std::abs(Kernel::eval(1.0)) <= 1e-14);
    CHECK(std::abs(Kernel::eval_deriv(1.0)) <= 1e-14);
    const double j2_in = (Kernel::eval(1.0 - 2 * h) - 2 * Kernel::eval(1.0 - h)) / (h * h);
    CHECK(std::abs(j2_in) <= 1e-3);  // second derivative -> 0 at the edge
}

TEST_CASE("convolution preserves constants and linear profiles") {
    const Grid1D& g = fixtures::default_grid();
    Kernel k = Kernel::sampled(g);
    Profile c(g, 0.37);
    Profile jc = convolve(k, c);
    for (int i = 0; i < g.n_points; ++i) CHECK(jc[i] == doctest::Approx(0.37).epsilon(1e-13));

    Profile lin(g);
    for (int i = 0; i < g.n_points; ++i) lin[i] = 0.01 * g.x(i);
    Profile jl = convolve(k, lin);
    const int K = k.half_width;
    for (int i = K; i < g.n_points - K; ++i)
        CHECK(jl[i] == doctest::Approx(lin[i]).epsilon(1e-12));
}

TEST_CASE("convolution is linear and sup-bounded") {
    const Grid1D& g = fixtures::default_grid();
    Kernel k = Kernel::sampled(g);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-0.9, 0.9);
    Profile a(g), b(g);
    for (int i = 0; i < g.n_points; ++i) {
        a[i] = U(rng);
        b[i] = U(rng);
    }
    Profile ja = convolve(k, a), jb = convolve(k, b);
    Profile s(g);
    for (int i = 0; i < g.n_points; ++i) s[i] = 2.0 * a[i] - 0.5 * b[i];
    Profile js = convolve(k, s);
    double amax = 0.0, jamax = 0.0;
    for (int i = 0; i < g.n_points; ++i) {
        CHECK(js[i] == doctest::Approx(2.0 * ja[i] - 0.5 * jb[i]).epsilon(1e-12));
        amax = std::max(amax, std::abs(a[i]));
        jamax = std::max(jamax, std::abs(ja[i]));
    }
    CHECK(jamax <= amax + 1e-14);
}

TEST_CASE("neumann convolution: constants, antisymmetry, interior agreement") {
    Grid1D g = Grid1D::make(20.0, 801, BoundaryMode::Neumann);
    Kernel k = Kernel::sampled(g);
    Profile c(g, -0.6);
    Profile jc = convolve_neumann(k, c);
    for (int i = 0; i < g.n_points; ++i) CHECK(jc[i] == doctest::Approx(-0.6).epsilon(1e-13));

    Profile odd(g);
    for (int i = 0; i < g.n_points; ++i) odd[i] = std::sin(0.7 * g.x(i)) * 0.4;
    Profile jo = convolve_neumann(k, odd);
    for (int i = 0; i < g.n_points; ++i)
        CHECK(jo[i] == doctest::Approx(-jo[g.n_points - 1 - i]).epsilon(1e-11));

    Grid1D gt = Grid1D::make(20.0, 801);
    Profile m(gt);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-0.8, 0.8);
    for (int i = 0; i < gt.n_points; ++i) m[i] = U(rng);
    Profile mn(g, m.values);
    Profile a = convolve(k, m), b = convolve_neumann(k, mn);
    const int K = k.half_width;
    for (int i = K; i < g.n_points - K; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-14);
}

TEST_CASE("nu-weighted inner product") {
    const Grid1D& g = fixtures::default_grid();
    const InstantonData& inst = fixtures::default_instanton();
    std::vector<double> zero(g.n_points, 0.0);
    CHECK(inner_product_nu(zero, zero, inst.nu, g) == 0.0);
    // weights >= 1 strictly inflate the norm of m̄'
    double plain = 0.0;
    for (int i = 0; i < g.n_points; ++i)
        plain += g.quad_weight(i) * inst.derivative[i] * inst.derivative[i];
    CHECK(inst.norm_mprime_nu_sq > plain);
    for (double w : inst.nu.w) CHECK(w >= 1.0);
    // (m̄_xi - m̄_xi, m̄'_xi) = 0 trivially
    CHECK(inner_product_nu(zero, inst.derivative.values, inst.nu, g) == 0.0);
    // symmetric bilinear, positive definite
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> f(g.n_points), h(g.n_points);
    for (int i = 0; i < g.n_points; ++i) {
        f[i] = U(rng);
        h[i] = U(rng);
    }
    CHECK(inner_product_nu(f, h, inst.nu, g) ==
          doctest::Approx(inner_product_nu(h, f, inst.nu, g)));
    CHECK(inner_product_nu(f, f, inst.nu, g) > 0.0);
}

TEST_CASE("dimension mismatches are rejected") {
    const Grid1D& g = fixtures::default_grid();
    Grid1D g2 = Grid1D::make(10.0, 801);  // finer spacing
    Kernel k2 = Kernel::sampled(g2);
    Profile m(g, 0.1);
    CHECK_THROWS_AS(convolve(k2, m), DomainError);
    CHECK_THROWS_AS((Profile{g, std::vector<double>(7, 0.0)}), DomainError);
}

}  // TEST_SUITE
