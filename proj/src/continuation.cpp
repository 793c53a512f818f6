#include "ssprof/continuation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ssprof/calculus.hpp"

namespace ssprof {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double slack_of(double lhs, double rhs) {
    if (lhs <= 0.0) return kInf;
    return rhs / lhs;
}

}  // namespace

std::vector<InequalityCheck> bootstrap_chain(const PhysicalParams& pp, const BoundaryData& bd,
                                             const BootstrapConstants& c, double q) {
    const double a = pp.alpha;
    const double A = bd.a_slope, pd = bd.p_delta, th0 = bd.theta0, del = bd.delta;
    const double pd1ma = std::pow(pd, 1.0 - a);
    const double log_term = std::log(1.0 / (del * del * pd1ma));

    std::vector<InequalityCheck> v;
    // boundary-tight lattice points must not flicker on pow() rounding
    auto add = [&v](std::string name, double lhs, double rhs) {
        v.push_back({std::move(name), lhs, rhs, slack_of(lhs, rhs),
                     lhs <= rhs * (1.0 + 1e-12)});
    };
    add("M2 << M1", c.m2, q * c.m1);
    add("M1 << M1'", c.m1, q * c.m1p);
    add("M1' << 1", c.m1p, q);
    add("A << M1", A, q * c.m1);
    add("Theta0 << M2", th0, q * c.m2);
    add("A^2 << P_delta M2", A * A, q * pd * c.m2);
    add("M1' log(1/(delta^2 P_delta^{1-a})) <= 1", c.m1p * log_term, 1.0);
    add("(P_delta^{1-a}/A) M1' <= 1", pd1ma * c.m1p, A);
    add("M2 << M1 P_delta^{1/2+a}", c.m2, q * c.m1 * std::pow(pd, 0.5 + a));
    add("M1 M1' << P_delta M2", c.m1 * c.m1p, q * pd * c.m2);
    add("M1^3 << P_delta^{1-2a} Theta0", c.m1 * c.m1 * c.m1,
        q * std::pow(pd, 1.0 - 2.0 * a) * th0);
    add("M1 M1' << Theta0 P_delta^{1-a}", c.m1 * c.m1p, q * th0 * pd1ma);
    add("positivity: M1^3/P^{1-2a} + M1 M1'/P^{1-a} << Theta0",
        c.m1 * c.m1 * c.m1 / std::pow(pd, 1.0 - 2.0 * a) + c.m1 * c.m1p / pd1ma, q * th0);
    return v;
}

ConstantsSearch find_bootstrap_constants(const PhysicalParams& pp, const BoundaryData& bd,
                                         double chain_ratio) {
    // half-decade lattice over [1e-40, 1e-0.5] for each constant
    std::vector<double> lattice;
    for (int k = 1; k <= 80; ++k) lattice.push_back(std::pow(10.0, -0.5 * k));

    ConstantsSearch best;
    best.min_slack = -kInf;
    double best_violation = -kInf;  // min slack of the least violated point

    for (double m1p : lattice)
        for (double m1 : lattice)
            for (double m2 : lattice) {
                const BootstrapConstants c{m1, m1p, m2};
                auto checks = bootstrap_chain(pp, bd, c, chain_ratio);
                double mins = kInf;
                bool ok = true;
                for (const auto& ch : checks) {
                    mins = std::min(mins, ch.slack);
                    ok = ok && ch.pass;
                }
                if (ok && mins > best.min_slack) {
                    best.feasible = true;
                    best.min_slack = mins;
                    best.consts = c;
                    best.checks = std::move(checks);
                } else if (!best.feasible && mins > best_violation) {
                    best_violation = mins;
                    best.min_slack = mins;
                    best.consts = c;
                    best.checks = std::move(checks);
                }
            }

    // name the tightest inequality at the reported point
    double mins = kInf;
    for (const auto& ch : best.checks)
        if (ch.slack < mins) {
            mins = ch.slack;
            best.tightest = ch.name;
        }
    return best;
}

ConstantsSearch find_monitor_constants(const PhysicalParams& pp, const BoundaryData& bd,
                                       double chain_ratio) {
    std::vector<double> lattice;
    for (int k = 1; k <= 80; ++k) lattice.push_back(std::pow(10.0, -0.5 * k));

    ConstantsSearch best;
    double best_score = kInf;
    for (double m1p : lattice)
        for (double m1 : lattice)
            for (double m2 : lattice) {
                const BootstrapConstants c{m1, m1p, m2};
                auto checks = bootstrap_chain(pp, bd, c, chain_ratio);
                double mins = kInf;
                bool ok = true;
                for (const auto& ch : checks) {
                    mins = std::min(mins, ch.slack);
                    ok = ok && ch.pass;
                }
                if (!ok) continue;
                const double score =
                    std::max({bd.a_slope / m1, bd.a_slope / m1p, bd.theta0 / m2});
                if (score < best_score) {
                    best_score = score;
                    best.feasible = true;
                    best.consts = c;
                    best.min_slack = mins;
                    best.checks = std::move(checks);
                }
            }
    double mins = kInf;
    for (const auto& ch : best.checks)
        if (ch.slack < mins) {
            mins = ch.slack;
            best.tightest = ch.name;
        }
    return best;
}

namespace {

using State = std::array<double, 5>;  // (P, U, U', Theta, Theta')

State ode_rhs(double r, const State& y, const PhysicalParams& par) {
    const double P = y[0], U = y[1], Up = y[2], Th = y[3], Thp = y[4];
    const int d = par.d;
    const double tml = par.two_mu_lambda();
    const double drift = 0.5 * r - U;
    if (!(drift > 0.0)) throw NumericError("denominator-vanishing", r, "r/2 - U <= 0");
    if (!(P > 0.0)) throw NumericError("nonpositive-density", r, "P <= 0 during extension");

    const double Pp = P * (Up + (d - 1) * U / r) / drift;
    const double Pa = std::pow(P, par.alpha);
    const double Pap = par.alpha * std::pow(P, par.alpha - 1.0) * Pp;

    // momentum equation solved for U''
    const double lhs_mom = -0.5 * P * U - 0.5 * r * (Pp * U + P * Up) +
                           (Pp * U * U + 2.0 * P * U * Up) + (d - 1) * P * U * U / r +
                           par.gas_r * (Pp * Th + P * Thp);
    const double Upp = (lhs_mom - tml * Pa * ((d - 1) * Up / r - (d - 1) * U / (r * r)) -
                        tml * Pap * Up - par.lambda0 * Pap * (d - 1) * U / r) /
                       (tml * Pa);

    // energy equation solved for Theta''
    const double E = 0.5 * U * U + par.c_v * Th;
    const double Ep = U * Up + par.c_v * Thp;
    const double flux = U * P * E + U * P * par.gas_r * Th;
    const double flux_p = Up * P * E + U * Pp * E + U * P * Ep +
                          par.gas_r * (Up * P * Th + U * Pp * Th + U * P * Thp);
    const double visc = 2.0 * par.mu0 * Pa * (Up * Up + (d - 1) * U * U / (r * r)) +
                        par.lambda0 * Pa * std::pow(Up + (d - 1) * U / r, 2) +
                        tml * Pa * (Upp + (d - 1) * Up / r - (d - 1) * U / (r * r)) * U +
                        tml * Pap * Up * U + par.lambda0 * Pap * (d - 1) * U * U / r;
    const double Thpp = (-P * E - 0.5 * r * (Pp * E + P * Ep) + flux_p + (d - 1) / r * flux -
                         par.kappa * (d - 1) * Thp / r - visc) /
                        par.kappa;

    return State{Pp, Up, Upp, Thp, Thpp};
}

// Dormand-Prince 5(4) coefficients.
struct Dopri5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

State axpy(const State& y, double h, const State& k) {
    State r;
    for (int i = 0; i < 5; ++i) r[i] = y[i] + h * k[i];
    return r;
}

// One adaptive step; updates r, y, h. Returns the error estimate of the
// accepted step.
void dopri5_step(double& r, State& y, double& h, double r_end, double rel_tol,
                 const PhysicalParams& par, const std::array<double, 5>& scale) {
    using D = Dopri5;
    const double h_min = 1e-14 * std::max(r, 1.0);
    for (int attempt = 0; attempt < 60; ++attempt) {
        if (r + h > r_end) h = r_end - r;
        const State k1 = ode_rhs(r, y, par);
        const State k2 = ode_rhs(r + D::c2 * h, axpy(y, h * D::a21, k1), par);
        State t;
        for (int i = 0; i < 5; ++i) t[i] = y[i] + h * (D::a31 * k1[i] + D::a32 * k2[i]);
        const State k3 = ode_rhs(r + D::c3 * h, t, par);
        for (int i = 0; i < 5; ++i)
            t[i] = y[i] + h * (D::a41 * k1[i] + D::a42 * k2[i] + D::a43 * k3[i]);
        const State k4 = ode_rhs(r + D::c4 * h, t, par);
        for (int i = 0; i < 5; ++i)
            t[i] = y[i] + h * (D::a51 * k1[i] + D::a52 * k2[i] + D::a53 * k3[i] + D::a54 * k4[i]);
        const State k5 = ode_rhs(r + D::c5 * h, t, par);
        for (int i = 0; i < 5; ++i)
            t[i] = y[i] + h * (D::a61 * k1[i] + D::a62 * k2[i] + D::a63 * k3[i] +
                               D::a64 * k4[i] + D::a65 * k5[i]);
        const State k6 = ode_rhs(r + h, t, par);
        State y5;
        for (int i = 0; i < 5; ++i)
            y5[i] = y[i] + h * (D::b1 * k1[i] + D::b3 * k3[i] + D::b4 * k4[i] + D::b5 * k5[i] +
                                D::b6 * k6[i]);
        const State k7 = ode_rhs(r + h, y5, par);

        double err = 0.0;
        for (int i = 0; i < 5; ++i) {
            const double ei = h * (D::e1 * k1[i] + D::e3 * k3[i] + D::e4 * k4[i] +
                                   D::e5 * k5[i] + D::e6 * k6[i] + D::e7 * k7[i]);
            const double sc = rel_tol * std::max({std::abs(y[i]), std::abs(y5[i]), scale[i]});
            err = std::max(err, std::abs(ei) / sc);
        }
        if (err <= 1.0) {
            r += h;
            y = y5;
            const double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            h *= std::min(5.0, std::max(0.2, grow));
            return;
        }
        h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
        if (h < h_min) throw NumericError("step-underflow", r, "adaptive step below minimum");
    }
    throw NumericError("step-underflow", r, "too many rejected steps");
}

}  // namespace

ProfileTriple extend_global(const ProfileTriple& inner, const PhysicalParams& pp, double r_max,
                            std::size_t outer_count, double rel_tol) {
    const double delta = inner.grid.delta;
    if (!(r_max > delta)) throw std::invalid_argument("extend_global: r_max must exceed delta");
    if (outer_count < 16) throw std::invalid_argument("extend_global: outer_count must be >= 16");

    ProfileTriple out;
    out.grid.nodes.assign(inner.grid.nodes.begin(), inner.grid.nodes.end());
    out.grid.inner_count = inner.grid.inner_count;
    out.grid.grading = inner.grid.grading;
    out.grid.delta = delta;
    out.grid.r_max = r_max;
    {
        const double ratio = std::log(r_max / delta);
        for (std::size_t k = 1; k <= outer_count; ++k)
            out.grid.nodes.push_back(delta * std::exp(ratio * static_cast<double>(k) /
                                                      static_cast<double>(outer_count)));
        out.grid.nodes.back() = r_max;
    }
    out.startup = inner.startup;
    out.p = inner.p;
    out.u = inner.u;
    out.theta = inner.theta;
    out.u_prime = inner.u_prime;
    out.theta_prime = inner.theta_prime;

    const std::size_t di = inner.grid.inner_count - 1;
    State y{inner.p[di], inner.u[di], inner.u_prime[di], inner.theta[di], inner.theta_prime[di]};
    std::array<double, 5> scale;
    for (int i = 0; i < 5; ++i) scale[i] = std::max(std::abs(y[i]), 1e-30);
    const double blowup = 1e6;

    double r = delta;
    double h = 1e-3 * delta;
    for (std::size_t k = inner.grid.inner_count; k < out.grid.size(); ++k) {
        const double target = out.grid.nodes[k];
        while (r < target) dopri5_step(r, y, h, target, rel_tol, pp, scale);
        for (int i = 0; i < 5; ++i)
            if (std::abs(y[i]) > blowup * std::max(scale[i], 1.0))
                throw NumericError("blow-up", r, "state exceeded 1e6 x initial scale");
        out.p.push_back(y[0]);
        out.u.push_back(y[1]);
        out.u_prime.push_back(y[2]);
        out.theta.push_back(y[3]);
        out.theta_prime.push_back(y[4]);
    }
    return out;
}

ZMonitorResult bootstrap_monitor(const ProfileTriple& profile, const BootstrapConstants& c,
                                 const BoundaryData& bd, const PhysicalParams& pp) {
    ZMonitorResult res;
    const auto& r = profile.grid.nodes;
    const double wu = std::pow(bd.p_delta, 0.5 - 0.5 * pp.alpha);
    const double wt = std::sqrt(bd.p_delta);
    res.z.resize(r.size());
    double running = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double s = r[i];
        const double fu = std::pow(1.0 + wu * s, 2);
        const double ft = std::pow(1.0 + wt * s, 2);
        const double term1 = fu / (c.m1 * s) * std::abs(profile.u[i]);
        const double term2 =
            fu / c.m1p * std::abs(profile.u_prime[i] + (pp.d - 1) * profile.u[i] / s);
        const double term3 = ft / c.m2 * profile.theta[i];
        const double term4 = ft / (c.m2 * bd.p_delta * s) * std::abs(profile.theta_prime[i]);
        running = std::max(running, term1 + term2 + term3 + term4);
        res.z[i] = running;
    }
    const std::size_t di = std::min<std::size_t>(profile.grid.delta_index(), r.size() - 1);
    res.z_delta = res.z[di];
    res.z_sup = res.z.back();
    res.verdict = res.z_delta <= 0.5 && res.z_sup <= 0.5;
    return res;
}

namespace {

struct LinFit {
    double constant = 0.0;  // value at 1/r^2 -> 0
    double slope = 0.0;
    double rms = 0.0;
};

// least squares y = constant + slope * x with centered x
LinFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LinFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.constant = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.constant + f.slope * x[i]);
        ss += e * e;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

// correction exponent: negative slope of log|y - fitted constant| vs log r
double fit_rate(const std::vector<double>& r, const std::vector<double>& y, double constant) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double res = std::abs(y[i] - constant);
        if (res > 0.0) {
            lx.push_back(std::log(r[i]));
            ly.push_back(std::log(res));
        }
    }
    if (lx.size() < 4) return 0.0;
    return -fit_linear(lx, ly).slope;
}

}  // namespace

AsymptoticFit fit_asymptotics(const ProfileTriple& profile, double r_lo, double r_hi) {
    if (!(r_hi >= 1.5 * r_lo))
        throw std::invalid_argument("fit_asymptotics: window needs r_hi >= 1.5 r_lo");
    const auto& r = profile.grid.nodes;
    std::vector<double> rw, x, yp, yu, yt;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < r_lo || r[i] > r_hi) continue;
        rw.push_back(r[i]);
        x.push_back(1.0 / (r[i] * r[i]));
        yp.push_back(profile.p[i]);
        yu.push_back(r[i] * profile.u[i]);
        yt.push_back(r[i] * r[i] * profile.theta[i]);
    }
    if (rw.size() < 8) throw NumericError("fit-degenerate", r_lo, "fewer than 8 window nodes");

    AsymptoticFit fit;
    fit.r_lo = r_lo;
    fit.r_hi = r_hi;
    const LinFit fp = fit_linear(x, yp);
    const LinFit fu = fit_linear(x, yu);
    const LinFit ft = fit_linear(x, yt);
    fit.p_inf = fp.constant;
    fit.u_inf = fu.constant;
    fit.theta_inf = ft.constant;
    fit.resid_p = fp.rms;
    fit.resid_u = fu.rms;
    fit.resid_theta = ft.rms;
    fit.rate_p = fit_rate(rw, yp, fp.constant);
    fit.rate_u = fit_rate(rw, yu, fu.constant);
    fit.rate_theta = fit_rate(rw, yt, ft.constant);
    return fit;
}

}  // namespace ssprof
