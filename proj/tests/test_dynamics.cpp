#include "krc/dynamics.hpp"
#include "krc/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace krc;

namespace {

std::shared_ptr<const NetworkSpec> pair_graph()
{
    const std::vector<Edge> e{{0, 1}};
    return std::make_shared<const NetworkSpec>(NetworkSpec::from_edges(2, e));
}

double circ_diff(double a, double b)
{
    return std::remainder(a - b, kTwoPi);
}

// Integrates with plain RK4 on unwrapped phases; reference for the Integrator.
std::vector<double> naive_rk4(const KuramotoSystem& sys, std::vector<double> th, double dt, int steps)
{
    const std::size_t n = th.size();
    auto f = [&](const std::vector<double>& x) { return sys.rhs(x); };
    for (int s = 0; s < steps; ++s) {
        const auto k1 = f(th);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = th[i] + 0.5 * dt * k1[i];
        const auto k2 = f(y);
        for (std::size_t i = 0; i < n; ++i) y[i] = th[i] + 0.5 * dt * k2[i];
        const auto k3 = f(y);
        for (std::size_t i = 0; i < n; ++i) y[i] = th[i] + dt * k3[i];
        const auto k4 = f(y);
        for (std::size_t i = 0; i < n; ++i) th[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    return th;
}

double phase_error(const std::vector<double>& a, const std::vector<double>& b)
{
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        e = std::max(e, std::abs(circ_diff(a[i], b[i])));
    }
    return e;
}

std::vector<double> integrate(const KuramotoSystem& sys, std::vector<double> th, double dt, double T)
{
    OscillatorState s = make_state(sys, std::move(th));
    Integrator integ(sys, dt);
    const auto steps = std::llround(T / dt);
    for (long long k = 0; k < steps; ++k) {
        integ.step(s);
    }
    return s.theta;
}

} // namespace

TEST_SUITE("dynamics") {

TEST_CASE("rhs hand examples")
{
    const auto g = complete_graph(2);
    const CouplingScheme rs{CouplingVariant::Regular, 1.0};
    auto out = kuramoto_rhs(std::vector<double>{0, 0}, g, std::vector<double>{0, 0}, rs);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);

    out = kuramoto_rhs(std::vector<double>{0, 0}, g, std::vector<double>{0.5, -0.5}, rs);
    CHECK(out[0] == 0.5);
    CHECK(out[1] == -0.5);

    // k_i = 1: theta_1' = 0.5 + sin(pi/2), theta_2' = -0.5 + sin(-pi/2).
    out = kuramoto_rhs(std::vector<double>{0, std::numbers::pi / 2}, *pair_graph(), std::vector<double>{0.5, -0.5}, rs);
    CHECK(out[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(-1.5).epsilon(1e-15));
}

TEST_CASE("explosive coupling scales with |omega|")
{
    const CouplingScheme es{CouplingVariant::Explosive, 2.0};
    const auto g = es.node_coupling(std::vector<double>{-1.5, 0.25});
    CHECK(g[0] == 3.0);
    CHECK(g[1] == 0.5);
    CHECK_THROWS_AS((CouplingScheme{CouplingVariant::Regular, -1.0}.node_coupling(std::vector<double>{1.0})), ConfigError);
}

TEST_CASE("rhs matches a dense double-loop oracle on an ER graph")
{
    const auto net = erdos_renyi(40, 5, 3);
    const auto omega = NaturalFrequencies::sample_normal(40, 4);
    const auto th = random_phases(40, 5);
    for (auto variant : {CouplingVariant::Regular, CouplingVariant::Explosive}) {
        const CouplingScheme cs{variant, 1.7};
        const auto got = kuramoto_rhs(th, net, omega.omega, cs);
        for (std::size_t i = 0; i < 40; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < 40; ++j) {
                sum += net.has_edge(i, j) ? std::sin(th[j] - th[i]) : 0.0;
            }
            const double li = variant == CouplingVariant::Regular ? 1.7 : 1.7 * std::abs(omega.omega[i]);
            CHECK(got[i] == doctest::Approx(omega.omega[i] + li / net.degree(i) * sum).epsilon(1e-12));
        }
    }
}

TEST_CASE("rotational equivariance and frequency-sum conservation")
{
    const auto net = complete_graph(50);
    const auto omega = NaturalFrequencies::sample_normal(50, 1);
    auto th = random_phases(50, 2);
    const CouplingScheme rs{CouplingVariant::Regular, 2.3};
    const auto a = kuramoto_rhs(th, net, omega.omega, rs);
    for (auto& x : th) x += 1.234;
    const auto b = kuramoto_rhs(th, net, omega.omega, rs);
    double sum = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(std::abs(a[i] - b[i]) < 1e-12);
        sum += a[i] - omega.omega[i];
    }
    CHECK(std::abs(sum) < 1e-10);
}

TEST_CASE("step: fixed point, exact linear flow, wrapping")
{
    const auto g = std::make_shared<const NetworkSpec>(complete_graph(2));
    KuramotoSystem sym(g, {{0.0, 0.0}}, {CouplingVariant::Regular, 1.0});
    auto s = make_state(sym, {0.0, 0.0});
    s = step_rk4(s, 0.37, sym);
    CHECK(s.theta[0] == 0.0);
    CHECK(s.theta[1] == 0.0);

    KuramotoSystem free(g, {{1.0, 1.0}}, {CouplingVariant::Regular, 0.0});
    auto f = step_rk4(make_state(free, {0.0, 0.0}), 0.1, free);
    CHECK(f.theta[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(f.t == doctest::Approx(0.1));

    KuramotoSystem fast(g, {{7.0, -9.0}}, {CouplingVariant::Regular, 0.5});
    auto w = make_state(fast, {6.2, 0.05});
    Integrator integ(fast, 0.01);
    for (int k = 0; k < 2000; ++k) {
        integ.step(w);
        CHECK(w.theta[0] >= 0.0);
        CHECK(w.theta[0] < kTwoPi);
        CHECK(w.theta[1] >= 0.0);
        CHECK(w.theta[1] < kTwoPi);
    }
}

TEST_CASE("Integrator matches naive RK4 and converges at fourth order")
{
    const auto net = std::make_shared<const NetworkSpec>(erdos_renyi(10, 4, 8));
    const KuramotoSystem sys(net, NaturalFrequencies::sample_normal(10, 9), {CouplingVariant::Explosive, 1.5});
    const auto th0 = random_phases(10, 10);

    CHECK(phase_error(integrate(sys, th0, 0.05, 5.0), naive_rk4(sys, th0, 0.05, 100)) < 1e-12);

    const auto ref = naive_rk4(sys, th0, 0.0025, 2000);
    const double e1 = phase_error(integrate(sys, th0, 0.1, 5.0), ref);
    const double e2 = phase_error(integrate(sys, th0, 0.05, 5.0), ref);
    // Halving dt divides a fourth-order error by 16; allow a factor of 4 either way.
    CHECK(e1 / e2 > 4.0);
    CHECK(e1 / e2 < 64.0);
}

TEST_CASE("two coupled oscillators lock at the closed-form phase difference")
{
    // Complete graph with self-loops: k = 2, phi' = -1 - lambda sin(phi), so sin(phi*) = -1 / lambda.
    const auto g = std::make_shared<const NetworkSpec>(complete_graph(2));
    const KuramotoSystem sys(g, {{0.5, -0.5}}, {CouplingVariant::Regular, 2.0});
    const auto res = relax_to_locked(sys, {0.0, 0.0}, {200.0, 1e-10, 0.01});
    REQUIRE(res.locked);
    const double phi = circ_diff(res.state.theta[1], res.state.theta[0]);
    CHECK(std::sin(phi) == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(std::cos(phi) > 0.0);
}

TEST_CASE("two-oscillator lock threshold within 2% of |dw|/2")
{
    // k = 1: phi' = dw - 2 lambda sin(phi), locking iff lambda >= |dw| / 2.
    const double dw = 1.0;
    auto locks = [&](double lambda) {
        const KuramotoSystem sys(pair_graph(), {{0.5, -0.5}}, {CouplingVariant::Regular, lambda});
        return relax_to_locked(sys, {0.0, 0.0}, {3000.0, 1e-6, 0.01}).locked;
    };
    double lo = 0.1, hi = 1.0;
    REQUIRE_FALSE(locks(lo));
    REQUIRE(locks(hi));
    for (int k = 0; k < 12; ++k) {
        const double mid = 0.5 * (lo + hi);
        (locks(mid) ? hi : lo) = mid;
    }
    CHECK(std::abs(hi - dw / 2) / (dw / 2) < 0.02);
    CHECK_FALSE(locks(0.4));
}

TEST_CASE("relaxation of a large RS network")
{
    const auto net = std::make_shared<const NetworkSpec>(complete_graph(500));
    const auto omega = NaturalFrequencies::sample_normal(500, 1);
    CHECK(relax_to_locked(KuramotoSystem(net, omega, {CouplingVariant::Regular, 5.0}), random_phases(500, 2)).locked);
    CHECK_FALSE(
        relax_to_locked(KuramotoSystem(net, omega, {CouplingVariant::Regular, 0.5}), random_phases(500, 2)).locked);
}

TEST_CASE("run_driven sampling")
{
    const auto net = std::make_shared<const NetworkSpec>(complete_graph(10));
    const KuramotoSystem sys(net, NaturalFrequencies::sample_normal(10, 3), {CouplingVariant::Regular, 3.0});
    auto s = make_state(sys, random_phases(10, 4));

    auto empty = run_driven(s, sys, nullptr, 0.0, 0.1);
    CHECK(empty.samples() == 0);
    CHECK_THROWS_AS(run_driven(s, sys, nullptr, 1.0, 0.015), ConfigError);

    auto a = s;
    auto b = s;
    const auto ha = run_driven(a, sys, nullptr, 5.0, 0.1, 0.01);
    const auto hb = run_driven(b, sys, nullptr, 5.0, 0.1, 0.005);
    CHECK(ha.samples() == 51);
    CHECK(ha.t_end() == doctest::Approx(5.0));
    // Difference of O(dt^4) with dt = 0.01.
    CHECK((ha.freq - hb.freq).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("clamped input node follows the drive")
{
    const auto net = std::make_shared<const NetworkSpec>(complete_graph(20));
    const auto omega = NaturalFrequencies::sample_normal(20, 5);
    const KuramotoSystem sys(net, omega, {CouplingVariant::Regular, 4.0});
    auto relaxed = relax_to_locked(sys, random_phases(20, 6));
    REQUIRE(relaxed.locked);

    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(8001, 1, 0.7);
    auto drive = std::make_shared<const TimeSeries>(0.0, 0.01, v);
    InputBinding bind;
    bind.nodes = {3};
    bind.drive = drive;
    bind.scale = 0.5;
    bind.offset = 1.0;
    // Co-rotate with the locked common frequency so the rest can follow.
    // Uniform coupling on a complete graph locks at the mean frequency.
    double common = 0.0;
    for (double w : omega.omega) common += w / 20.0;
    bind.frame_rate = common;

    auto s = relaxed.state;
    s.t = 0.0;
    const auto h = run_driven(s, sys, &bind, 60.0, 0.1);
    CHECK(std::abs(circ_diff(s.theta[3], 0.5 * 0.7 + 1.0 + 60.0 * common)) < 1e-9);
    // A constant clamp re-locks the rest of the network to the frame frequency.
    const Eigen::RowVectorXd last = h.freq.row(h.samples() - 1);
    const Eigen::RowVectorXd prev = h.freq.row(h.samples() - 11);
    CHECK((last - prev).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((last.array() - common).abs().maxCoeff() < 1e-4);
    CHECK(last(3) == doctest::Approx(common).epsilon(1e-12));

    CHECK_THROWS_AS(run_driven(s, sys, &bind, 30.0, 0.1), RangeError);

    InputBinding bad = bind;
    bad.nodes = {3, 3};
    CHECK_THROWS_AS(Integrator(sys, 0.01, &bad), ConfigError);
    bad.nodes = {20};
    CHECK_THROWS_AS(Integrator(sys, 0.01, &bad), ConfigError);
    bad.nodes = {};
    CHECK_THROWS_AS(Integrator(sys, 0.01, &bad), ConfigError);
}

}
