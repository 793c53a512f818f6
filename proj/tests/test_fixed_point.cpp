#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "ssprof/fixed_point.hpp"

using namespace ssprof;

namespace {

RadialGrid inner_grid(double delta, std::size_t n) {
    return build_grid(delta, delta, n, 0, grading_for_rmin(n, 1e-4));
}

PhysicalParams params_half() { return PhysicalParams{}; }

PhysicalParams params_one() {
    PhysicalParams pp;
    pp.alpha = 1.0;
    pp.mu0 = 1.0;
    pp.lambda0 = 0.0;
    return pp;
}

// A P_delta^{1/2} Theta0 / A = 0.1 demo of the alpha < 1 regime
BoundaryData demo_bd() {
    BoundaryData bd;
    bd.a_slope = 1e-3;
    bd.delta = 1e-2;
    bd.p_delta = 1e-2;
    bd.theta0 = 1e-3;
    bd.eps_norm = 0.375;
    return bd;
}

}  // namespace

TEST_CASE("norm of the seed pair is 3A in the alpha < 1 regime") {
    const BoundaryData bd = demo_bd();
    const PhysicalParams pp = params_half();
    const RadialGrid g = inner_grid(bd.delta, 64);
    const IterationState s = seed_state(bd, g);
    const double n = norm_Edelta(s.u, s.u_prime, s.theta, s.theta_prime, g, bd, pp);
    CHECK(n == doctest::Approx(3.0 * bd.a_slope).epsilon(1e-12));
}

TEST_CASE("norm of the zero pair with constant temperature is A") {
    const BoundaryData bd = demo_bd();
    const PhysicalParams pp = params_half();
    const RadialGrid g = inner_grid(bd.delta, 64);
    std::vector<double> zero(g.size(), 0.0), theta(g.size(), bd.theta0);
    const double n = norm_Edelta(zero, zero, theta, zero, g, bd, pp);
    CHECK(n == doctest::Approx(bd.a_slope).epsilon(1e-12));
}

TEST_CASE("norm is a seminorm: triangle inequality and homogeneity") {
    const BoundaryData bd = demo_bd();
    const PhysicalParams pp = params_half();
    const RadialGrid g = inner_grid(bd.delta, 48);
    oracle::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> u1(g.size()), up1(g.size()), t1(g.size()), tp1(g.size());
        std::vector<double> u2(g.size()), up2(g.size()), t2(g.size()), tp2(g.size());
        std::vector<double> us(g.size()), ups(g.size()), ts(g.size()), tps(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double r = g.nodes[i];
            u1[i] = rng.uniform(-1, 1) * r;
            up1[i] = rng.uniform(-1, 1);
            t1[i] = rng.uniform(-1, 1);
            tp1[i] = rng.uniform(-1, 1) * r;
            u2[i] = rng.uniform(-1, 1) * r;
            up2[i] = rng.uniform(-1, 1);
            t2[i] = rng.uniform(-1, 1);
            tp2[i] = rng.uniform(-1, 1) * r;
            us[i] = u1[i] + u2[i];
            ups[i] = up1[i] + up2[i];
            ts[i] = t1[i] + t2[i];
            tps[i] = tp1[i] + tp2[i];
        }
        const double n1 = norm_Edelta(u1, up1, t1, tp1, g, bd, pp);
        const double n2 = norm_Edelta(u2, up2, t2, tp2, g, bd, pp);
        const double ns = norm_Edelta(us, ups, ts, tps, g, bd, pp);
        CHECK(ns <= (n1 + n2) * (1.0 + 1e-12));
        const double lam = rng.uniform(0.1, 5.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            us[i] = lam * u1[i];
            ups[i] = lam * up1[i];
            ts[i] = lam * t1[i];
            tps[i] = lam * tp1[i];
        }
        CHECK(norm_Edelta(us, ups, ts, tps, g, bd, pp) ==
              doctest::Approx(lam * n1).epsilon(1e-12));
    }
}

TEST_CASE("smallness report: limit along Theta0 ~ A passes, large parameters fail") {
    PhysicalParams pp = params_half();
    {
        BoundaryData bd;
        bd.a_slope = 1e-6;
        bd.delta = 1e-6;
        bd.p_delta = 1e-6;
        bd.theta0 = 3e-6;  // Theta0 proportional to A
        const SmallnessReport rep = check_smallness(pp, bd);
        CHECK(rep.pass);
        CHECK(rep.composite < 1e-2);
    }
    {
        BoundaryData bd;
        bd.a_slope = 0.4;
        bd.delta = 0.5;
        bd.p_delta = 0.5;
        bd.theta0 = 0.1;
        const SmallnessReport rep = check_smallness(pp, bd);
        CHECK_FALSE(rep.pass);
        CHECK(rep.composite > 0.1);
    }
    {
        BoundaryData bd;
        bd.a_slope = 1e-3;
        bd.delta = 1e-2;
        bd.p_delta = 1e-2;
        const PhysicalParams p1 = params_one();
        bd.theta0 = BoundaryData::forced_theta0(p1, bd.a_slope);
        const SmallnessReport rep = check_smallness(p1, bd);
        CHECK(rep.a_log_inv_delta == doctest::Approx(1e-3 * std::log(100.0)));
        CHECK(rep.pass);
    }
    {
        BoundaryData bd = demo_bd();
        bd.theta0 = 0.0;
        const SmallnessReport rep = check_smallness(pp, bd);
        CHECK(rep.division_by_zero);
        CHECK_FALSE(rep.pass);
    }
}

TEST_CASE("F_U closed form for the resting state over a power-law density") {
    const PhysicalParams pp = params_half();
    BoundaryData bd = demo_bd();
    bd.a_slope = 2e-3;
    const double k = 0.25, delta = bd.delta, p_delta = bd.p_delta;
    const RadialGrid g = inner_grid(delta, 512);
    IterationState st;
    st.u.assign(g.size(), 0.0);
    st.u_prime.assign(g.size(), 0.0);
    st.theta.assign(g.size(), bd.theta0);
    st.theta_prime.assign(g.size(), 0.0);
    std::vector<double> p(g.size()), dp(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        p[i] = p_delta * std::pow(g.nodes[i] / delta, k);
        dp[i] = k * p[i] / g.nodes[i];
    }
    KernelSet kern;
    kern.v_tilde.assign(g.size(), 0.0);
    const auto f_u = compute_F_U(st, p, dp, kern, g, pp, bd);
    // the bracket reduces to (P R Theta0)'/P^a whose integral is
    // R Theta0 P^{1-a}/(1-a); the startup slope of the state is 0, matching
    // the exponent k of the supplied density only through the P' samples.
    const double lead = pp.two_mu_lambda() * pp.d * bd.a_slope;
    for (std::size_t i : {std::size_t(0), std::size_t(256), g.size() - 1}) {
        const double exact =
            lead + pp.gas_r * bd.theta0 * std::pow(p[i], 1.0 - pp.alpha) / (1.0 - pp.alpha);
        CHECK(f_u[i] == doctest::Approx(exact).epsilon(1e-7));
    }
}

TEST_CASE("F_U vanishes identically in the fully degenerate case") {
    const PhysicalParams pp = params_half();
    BoundaryData bd = demo_bd();
    bd.a_slope = 0.0;
    const RadialGrid g = inner_grid(bd.delta, 64);
    IterationState st;
    st.u.assign(g.size(), 0.0);
    st.u_prime.assign(g.size(), 0.0);
    st.theta.assign(g.size(), 0.0);
    st.theta_prime.assign(g.size(), 0.0);
    std::vector<double> p(g.size(), bd.p_delta), dp(g.size(), 0.0);
    KernelSet kern;
    kern.v_tilde.assign(g.size(), 0.0);
    for (double v : compute_F_U(st, p, dp, kern, g, pp, bd)) CHECK(v == 0.0);
}

TEST_CASE("F_U alpha=1 closed form over a power-law density") {
    const PhysicalParams pp = params_one();
    BoundaryData bd;
    bd.a_slope = 5e-3;
    bd.delta = 1e-2;
    bd.p_delta = 1e-2;
    bd.theta0 = BoundaryData::forced_theta0(pp, bd.a_slope);
    bd.eps_norm = 0.1;
    const double k = 0.2, A = bd.a_slope;
    const RadialGrid g = inner_grid(bd.delta, 512);
    IterationState st;
    st.u.resize(g.size());
    st.u_prime.assign(g.size(), A);
    st.theta.assign(g.size(), bd.theta0);
    st.theta_prime.assign(g.size(), 0.0);
    std::vector<double> p(g.size()), dp(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.nodes[i];
        st.u[i] = A * r;
        p[i] = bd.p_delta * std::pow(r / bd.delta, k);
        dp[i] = k * p[i] / r;
    }
    const auto f_u = compute_F_U_alpha1(st, p, dp, g, pp);
    for (std::size_t i : {std::size_t(0), std::size_t(200), g.size() - 1}) {
        const double r = g.nodes[i];
        const double exact = pp.gas_r * bd.theta0 + A * A * r * r +
                             (pp.d - 1) * A * A * r * r / (k + 2.0) +
                             2.0 * pp.mu0 * (pp.d - 1) * A;
        CHECK(f_u[i] == doctest::Approx(exact).epsilon(1e-7));
    }
}

TEST_CASE("F_Theta vanishes when the velocity vanishes") {
    const PhysicalParams pp = params_half();
    const BoundaryData bd = demo_bd();
    const RadialGrid g = inner_grid(bd.delta, 64);
    IterationState st;
    st.u.assign(g.size(), 0.0);
    st.u_prime.assign(g.size(), 0.0);
    st.theta.assign(g.size(), bd.theta0);
    st.theta_prime.assign(g.size(), 0.0);
    std::vector<double> p(g.size(), bd.p_delta), dp(g.size(), 0.0);
    for (double v : compute_F_Theta(st, p, dp, g, pp)) CHECK(v == 0.0);
}

TEST_CASE("F_Theta term-by-term closed form on the seed over a power law") {
    const PhysicalParams pp = params_half();
    BoundaryData bd = demo_bd();
    const double A = bd.a_slope, th0 = bd.theta0, k = 0.4;
    const double delta = bd.delta, p_delta = bd.p_delta;
    const RadialGrid g = inner_grid(delta, 16384);
    IterationState st;
    st.u.resize(g.size());
    st.u_prime.assign(g.size(), A);
    st.theta.assign(g.size(), th0);
    st.theta_prime.assign(g.size(), 0.0);
    std::vector<double> p(g.size()), dp(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.nodes[i];
        st.u[i] = A * r;
        p[i] = p_delta * std::pow(r / delta, k);
        dp[i] = k * p[i] / r;
    }
    const auto f = compute_F_Theta(st, p, dp, g, pp);
    const double tml = pp.two_mu_lambda();
    const double cp = p_delta * std::pow(delta, -k);
    const double ca = std::pow(p_delta, pp.alpha) * std::pow(delta, -k * pp.alpha);
    const double ka = k * pp.alpha;
    for (std::size_t i : {std::size_t(2000), std::size_t(10000), g.size() - 1}) {
        const double r = g.nodes[i];
        const double core = A * cp * ((pp.c_v + pp.gas_r) * th0 * std::pow(r, k + 1.0) +
                                      0.5 * A * A * std::pow(r, k + 3.0));
        const double icore = A * cp * ((pp.c_v + pp.gas_r) * th0 * std::pow(r, k + 2.0) / (k + 2.0) +
                                       0.5 * A * A * std::pow(r, k + 4.0) / (k + 4.0));
        const double pa_uup = ca * A * A * std::pow(r, ka + 1.0);
        const double ipa = ca * A * A * std::pow(r, ka + 2.0) / (ka + 2.0);
        const double exact = core + (pp.d - 2) / r * icore - tml * (pa_uup + (pp.d - 2) / r * ipa) -
                             pp.lambda0 * (pp.d - 1) * (pa_uup + (pp.d - 2) / r * ipa) +
                             pp.kappa / pp.c_v * (A * A * r + 0.5 * (pp.d - 2) * A * A * r);
        CHECK(f[i] == doctest::Approx(exact).epsilon(1e-7));
    }
}

TEST_CASE("Phi fixes the degenerate constant branch") {
    const PhysicalParams pp = params_half();
    BoundaryData bd = demo_bd();
    bd.a_slope = 0.0;
    const RadialGrid g = inner_grid(bd.delta, 128);
    const IterationState seed = seed_state(bd, g);
    const PhiResult phi = apply_Phi(seed, pp, bd, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(phi.state.u[i] == 0.0);
        CHECK(phi.p[i] == bd.p_delta);
        CHECK(phi.state.theta[i] <= bd.theta0 * (1.0 + 1e-12));
        CHECK(phi.state.theta[i] > 0.9 * bd.theta0);
    }
    CHECK(phi.state.theta[0] == doctest::Approx(bd.theta0).epsilon(1e-9));

    PicardOptions opt;
    opt.require_smallness = false;  // the A = 0 limit divides by zero in the report
    const PicardResult res = picard_solve(pp, bd, g, opt);
    CHECK(res.converged());
    CHECK(res.history.size() <= 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(res.inner.u[i] == 0.0);
        CHECK(res.inner.p[i] == bd.p_delta);
    }
}

TEST_CASE("Phi maps the seed close to itself and preserves the ball") {
    const PhysicalParams pp = params_half();
    const BoundaryData bd = demo_bd();
    const RadialGrid g = inner_grid(bd.delta, 256);
    const IterationState seed = seed_state(bd, g);
    const PhiResult phi = apply_Phi(seed, pp, bd, g);
    const double dist = distance_Edelta(phi.state, seed, g, bd, pp);
    CHECK(dist <= bd.a_slope / 4.0);
    CHECK(distance_to_center(phi.state, g, bd, pp) <= bd.a_slope / 2.0);
}

TEST_CASE("Phi contracts pairs of ball elements") {
    const PhysicalParams pp = params_half();
    const BoundaryData bd = demo_bd();
    const RadialGrid g = inner_grid(bd.delta, 256);
    oracle::Rng rng(41);
    double worst = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
        IterationState x1 = seed_state(bd, g), x2 = seed_state(bd, g);
        const double a1 = rng.uniform(-0.2, 0.2), a2 = rng.uniform(-0.2, 0.2);
        const double b1 = rng.uniform(-0.2, 0.2), b2 = rng.uniform(-0.2, 0.2);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double r = g.nodes[i], q = r / bd.delta;
            // smooth in-ball perturbations with analytic derivatives
            x1.u[i] *= 1.0 + a1 * q * q;
            x1.u_prime[i] = bd.a_slope * (1.0 + 3.0 * a1 * q * q);
            x1.theta[i] *= 1.0 + b1 * q * q;
            x1.theta_prime[i] = bd.theta0 * 2.0 * b1 * q / bd.delta;
            x2.u[i] *= 1.0 + a2 * q * q;
            x2.u_prime[i] = bd.a_slope * (1.0 + 3.0 * a2 * q * q);
            x2.theta[i] *= 1.0 + b2 * q * q;
            x2.theta_prime[i] = bd.theta0 * 2.0 * b2 * q / bd.delta;
        }
        const double d0 = distance_Edelta(x1, x2, g, bd, pp);
        if (d0 == 0.0) continue;
        const PhiResult y1 = apply_Phi(x1, pp, bd, g);
        const PhiResult y2 = apply_Phi(x2, pp, bd, g);
        const double d1 = distance_Edelta(y1.state, y2.state, g, bd, pp);
        worst = std::max(worst, d1 / d0);
    }
    CHECK(worst < 1.0);
}

TEST_CASE("picard converges on the demo parameters with decreasing distances") {
    const PhysicalParams pp = params_half();
    const BoundaryData bd = demo_bd();
    const RadialGrid g = inner_grid(bd.delta, 256);
    PicardOptions opt;
    opt.smallness_threshold = 0.15;  // composite is ~0.133 by construction here
    opt.tol = 1e-14;
    opt.max_iter = 40;
    const PicardResult res = picard_solve(pp, bd, g, opt);
    CHECK(res.converged());
    REQUIRE(res.history.size() >= 5);
    for (std::size_t k = 1; k < res.history.size(); ++k) {
        CHECK(res.history[k].norm_distance < res.history[k - 1].norm_distance);
        if (k >= 1) CHECK(res.history[k].contraction_estimate < 1.0);
    }
    // exponential mass identity
    CHECK(res.inner.p.back() == doctest::Approx(bd.p_delta).epsilon(1e-12));
    const auto v = compute_V(res.inner.u, res.inner.u_prime, res.inner.grid, pp.d);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double lhs = std::log(res.inner.p[i]) - std::log(bd.p_delta);
        CHECK(lhs == doctest::Approx(v[i] - v.back()).epsilon(1e-10));
    }
    // regularity at the origin: U'(0) = A by construction of the map
    CHECK(res.inner.u_prime[0] ==
          doctest::Approx(bd.a_slope).epsilon(2e-2));
    // Theta'(0) = 0: Theta deviates from Theta0 quadratically
    for (std::size_t i = 0; i < 32; ++i) {
        const double r = g.nodes[i];
        CHECK(std::abs(res.inner.theta[i] - bd.theta0) <=
              100.0 * (bd.p_delta * bd.theta0 + bd.a_slope * bd.a_slope) * r * r);
    }
}

TEST_CASE("picard fails fast when smallness fails") {
    const PhysicalParams pp = params_half();
    BoundaryData bd = demo_bd();
    bd.a_slope = 0.4;
    bd.delta = 0.5;
    bd.p_delta = 0.5;
    const RadialGrid g = inner_grid(bd.delta, 64);
    const PicardResult res = picard_solve(pp, bd, g, {});
    CHECK(res.status == PicardStatus::smallness_failed);
}

TEST_CASE("alpha = 1: converged run holds the origin slope, perturbed theta0 exits") {
    const PhysicalParams pp = params_one();
    BoundaryData bd;
    bd.a_slope = 1e-3;
    bd.delta = 1e-3;   // delta^eps/eps must be small in this regime
    bd.p_delta = 1e-2;
    bd.eps_norm = 0.5;
    bd.theta0 = BoundaryData::forced_theta0(pp, bd.a_slope);
    const RadialGrid g = inner_grid(bd.delta, 256);
    const PicardResult good = picard_solve(pp, bd, g, {});
    CHECK(good.converged());
    CHECK(good.inner.u[0] / g.nodes[0] == doctest::Approx(bd.a_slope).epsilon(1e-2));

    BoundaryData bad = bd;
    bad.theta0 = 1.1 * bd.theta0;  // off the forced value
    const PicardResult res = picard_solve(pp, bad, g, {});
    const bool rejected = res.status == PicardStatus::ball_exit ||
                          res.status == PicardStatus::contraction_failure ||
                          (!res.history.empty() &&
                           res.history.back().contraction_estimate >= 1.0);
    CHECK(rejected);
}
