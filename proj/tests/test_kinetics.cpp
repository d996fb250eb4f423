#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "hsc/errors.hpp"
#include "hsc/kinetics.hpp"
#include "test_util.hpp"

using namespace hsc;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Anisotropic Gaussian momentum density; far from equilibrium, so the
// collision integral carries signal.
double aniso(const Vec3& p) {
    double e = 0.4 * p.x * p.x + 1.0 * p.y * p.y + 2.2 * p.z * p.z;
    return 0.7 * std::exp(-0.5 * e);
}

double maxwellian(const Vec3& p, double beta) {
    return gaussian3_density(p, beta);
}

Vec3 momentum_mean(const MomentumEnsemble& e) {
    Vec3 m{};
    for (const auto& p : e.momenta) m += p;
    return (1.0 / static_cast<double>(e.momenta.size())) * m;
}

double kinetic_energy(const MomentumEnsemble& e) {
    double s = 0.0;
    for (const auto& p : e.momenta) s += norm2(p);
    return s;
}

} // namespace

TEST_CASE("collision integral vanishes on the Maxwellian") {
    auto f = [](const Vec3& p) { return maxwellian(p, 1.0); };
    CounterRng rng(3, 0, 0);
    for (int rep = 0; rep < 4; ++rep) {
        Vec3 p1 = rng.gaussian3(1.0);
        auto v = boltzmann_collision_integral(f, p1, 40000, 100 + rep);
        CHECK(v.std_error > 0.0);
        CHECK(std::abs(v.value) < 4.0 * v.std_error + 1e-10);
    }
}

TEST_CASE("collision integral sees a non-equilibrium datum") {
    auto v = boltzmann_collision_integral(aniso, {1.5, 0.0, 0.0}, 200000, 7);
    CHECK(std::abs(v.value) > 5.0 * v.std_error);
}

TEST_CASE("collision-invariant moments vanish") {
    std::vector<std::function<double(const Vec3&)>> invariants = {
        [](const Vec3&) { return 1.0; },
        [](const Vec3& p) { return p.x; },
        [](const Vec3& p) { return norm2(p); },
    };
    std::uint64_t seed = 11;
    for (const auto& phi : invariants) {
        auto v = collision_integral_moment(aniso, phi, 120000, seed++);
        CHECK(std::abs(v.value) < 4.0 * v.std_error + 1e-10);
    }
}

TEST_CASE("DSMC steps conserve momentum and energy exactly") {
    MomentumEnsemble ens = bimodal_ensemble(20000, 1.0, 1.0, 1.2, 17);
    Vec3 m0 = momentum_mean(ens);
    double e0 = kinetic_energy(ens);
    DsmcStats stats;
    for (int k = 0; k < 20; ++k)
        ens = dsmc_step(ens, 0.005, 1.0, CounterRng::derive_key(17, 4, k), &stats);
    CHECK(stats.accepted > 0);
    CHECK(stats.accepted <= stats.candidates);
    CHECK(stats.v_max > 0.0);
    CHECK(norm(momentum_mean(ens) - m0) < 1e-12);
    CHECK(std::abs(kinetic_energy(ens) - e0) < 1e-9 * e0);
    CHECK(ens.time == doctest::Approx(20 * 0.005));
}

TEST_CASE("DSMC leaves the Maxwellian stationary") {
    MomentumEnsemble ens = maxwellian_ensemble(30000, 1.0, 1.0, 19);
    Moments before = ensemble_moments(ens);
    for (int k = 0; k < 50; ++k)
        ens = dsmc_step(ens, 0.005, 1.0, CounterRng::derive_key(19, 4, k));
    Moments after = ensemble_moments(ens);
    CHECK(after.temperature == doctest::Approx(before.temperature).epsilon(1e-10));
    double ratio = after.m4 / (after.temperature * after.temperature);
    CHECK(std::abs(ratio - 15.0) < 0.5);  // Maxwellian: E|v|^4 = 15 T^2
}

TEST_CASE("DSMC step size guard") {
    MomentumEnsemble ens = bimodal_ensemble(2000, 50.0, 1.0, 1.2, 23);
    CHECK_THROWS_AS(dsmc_step(ens, 1.0, 1.0, 1), ConfigError);
}

TEST_CASE("H functional: Gaussian entropy oracle and scaling covariance") {
    const double rho = 0.8, beta = 1.3;
    MomentumEnsemble ens = maxwellian_ensemble(200000, rho, beta, 29);
    HistogramSpec spec{14, 0.0};  // auto box from the sample spread
    double h = h_functional(ens, spec);
    double s_exact = 1.5 * std::log(2.0 * kPi * std::exp(1.0) / beta);
    double h_exact = rho * (std::log(rho) - s_exact);
    CHECK(std::abs(h - h_exact) < 0.05 * rho);

    // Doubling every momentum raises the differential entropy by 3 log 2;
    // the auto box scales along, so the binning bias cancels in the shift.
    MomentumEnsemble wide = ens;
    for (auto& p : wide.momenta) p *= 2.0;
    double hw = h_functional(wide, spec);
    CHECK(std::abs(hw - (h - rho * 3.0 * std::log(2.0))) < 0.02 * rho);
}

TEST_CASE("H functional resolution guard") {
    MomentumEnsemble ens = maxwellian_ensemble(5000, 1.0, 1.0, 31);
    CHECK_THROWS_AS(h_functional(ens, HistogramSpec{64, 50.0}), ResolutionError);
}

TEST_CASE("ensemble constructors and moments") {
    MomentumEnsemble mx = maxwellian_ensemble(100000, 0.7, 2.0, 37);
    Moments m = ensemble_moments(mx);
    CHECK(m.n == 100000);
    CHECK(norm(m.mean) < 0.02);
    CHECK(std::abs(m.temperature - 0.5) < 0.01);

    double drift = 1.1, beta = 1.0;
    MomentumEnsemble bi = bimodal_ensemble(100000, 1.0, beta, drift, 41);
    Moments mb = ensemble_moments(bi);
    CHECK(norm(mb.mean) < 0.02);
    CHECK(std::abs(mb.temperature - (1.0 / beta + drift * drift / 3.0)) < 0.02);
}

TEST_CASE("Enskog term at uniform density is sigma^2 times Boltzmann") {
    const double sigma = 0.3;
    auto G1 = [](const PhasePoint& pt) { return aniso(pt.p); };
    PhasePoint x1{{0.2, -0.1, 0.3}, {1.5, 0.0, 0.0}};
    auto ensk = enskog_collision_term(G1, x1, sigma, 200000, 43);
    auto boltz = boltzmann_collision_integral(aniso, x1.p, 200000, 44);
    double err = std::sqrt(ensk.std_error * ensk.std_error +
                           sigma * sigma * sigma * sigma * boltz.std_error *
                               boltz.std_error);
    CHECK(std::abs(ensk.value - sigma * sigma * boltz.value) < 4.0 * err);
}

TEST_CASE("scattering cumulant: hand expansion of the pair term") {
    auto f = [](const SystemState& st) {
        double e = 0.0;
        for (const auto& pt : st.points) e += norm2(pt.q) + norm2(pt.p);
        return std::exp(-0.3 * e);
    };
    CounterRng rng(47, 0, 0);
    for (int rep = 0; rep < 10; ++rep) {
        SystemState x = hsc::testutil::random_allowed_state(rng, 2, 0.7, 1.5);
        double t = rng.uniform(0.2, 0.8);
        double got = hat_cumulant(t, {0, 1}, f)(x);

        SystemState back = flow(x, -t);
        double joint = is_allowed(back)
                           ? f(SystemState{x.sigma, free_stream(back.points, t)})
                           : 0.0;
        // Subtracted product term: free backward feet, exclusion indicator
        // there, free forward flight back to the original configuration.
        SystemState feet{x.sigma, free_stream(x.points, -t)};
        double split = is_allowed(feet) ? f(x) : 0.0;
        CHECK(got == doctest::Approx(joint - split).epsilon(1e-12));
    }
}

TEST_CASE("scattering cumulant functionals: degenerate cases") {
    auto g1 = [](const PhasePoint& pt) {
        return std::exp(-0.5 * (norm2(pt.q) + norm2(pt.p)));
    };
    SystemState single{0.5, {{{0.2, 0.1, 0.0}, {0.4, 0.1, 0.0}}}};
    // The one-index cumulant at t = 0 is the identity on the product.
    CHECK(scattering_cumulant_apply(0.0, 1, 0, g1, single) ==
          doctest::Approx(g1(single.points[0])).epsilon(1e-13));
    // Genuine cumulants over two or more indices vanish at t = 0.
    SystemState near{0.5,
                     {{{0.0, 0.0, 0.0}, {0.4, 0.1, 0.0}},
                      {{0.8, 0.2, 0.0}, {-0.5, 0.0, 0.2}}}};
    CHECK(std::abs(scattering_cumulant_apply(0.0, 2, 0, g1, near)) < 1e-13);
    CHECK(std::abs(scattering_cumulant_apply(0.0, 1, 1, g1, near)) < 1e-13);

    // Non-interacting spheres: every multi-index cumulant decorrelates to
    // zero at any time.
    SystemState far{0.05,
                    {{{20.0, 0.0, 0.0}, {0.3, 0.0, 0.0}},
                     {{-20.0, 0.0, 0.0}, {-0.2, 0.1, 0.0}}}};
    CHECK(std::abs(scattering_cumulant_apply(0.7, 2, 0, g1, far)) < 1e-13);
    CHECK(std::abs(scattering_cumulant_apply(0.7, 1, 1, g1, far)) < 1e-13);
}

TEST_CASE("scaling probe order 0 is the exact free pullback") {
    auto g1 = [](const PhasePoint& pt) {
        double e = 0.35 * pt.p.x * pt.p.x + pt.p.y * pt.p.y + 2.5 * pt.p.z * pt.p.z;
        return 0.05 * std::exp(-0.25 * norm2(pt.q)) * std::exp(-0.5 * e);
    };
    PhasePoint probe{{0.2, 0.1, 0.0}, {0.4, -0.3, 0.2}};
    QuadratureSpec spec;
    spec.samples_per_order = 1000;
    spec.seed = 5;
    auto r = bg_scaling_probe(1.25, 1, 0, {0.1, 0.05, 0.025}, g1, probe, spec);
    REQUIRE(r.points.size() == 3);
    PhasePoint back{probe.q - 1.25 * probe.p, probe.p};
    for (const auto& pt : r.points) {
        CHECK(pt.magnitude == doctest::Approx(g1(back)).epsilon(1e-13));
        CHECK(pt.std_error == 0.0);
    }
    CHECK(r.slope == doctest::Approx(0.0));
}

TEST_CASE("scaling probe order 1 against a brute-force volume integral") {
    auto g1 = [](const PhasePoint& pt) {
        double e = 0.35 * pt.p.x * pt.p.x + pt.p.y * pt.p.y + 2.5 * pt.p.z * pt.p.z;
        return 0.05 * std::exp(-0.25 * norm2(pt.q)) * std::exp(-0.5 * e);
    };
    PhasePoint probe{{0.2, 0.1, 0.0}, {0.4, -0.3, 0.2}};
    const double t = 1.25, eps = 0.3;

    QuadratureSpec spec;
    spec.samples_per_order = 60000;
    spec.seed = 53;
    spec.workers = 2;
    auto r = bg_scaling_probe(t, 1, 1, {2.0 * eps, 1.5 * eps, eps}, g1, probe, spec);
    REQUIRE(r.points.size() == 3);
    const ScalingPoint& target = r.points[2];

    // Brute force: sample x2 over a large box times a Gaussian momentum
    // proposal and average the bare pair cumulant of the chaos operand;
    // forbidden initial configurations carry a vanishing interacting term
    // and the free term keeps the exclusion indicator at the backward feet.
    const double half = 4.0;
    const double vol = 8.0 * half * half * half;
    long n = 400000;
    double sum = 0.0, sum2 = 0.0;
    for (long i = 0; i < n; ++i) {
        CounterRng rng(531, 0, static_cast<std::uint64_t>(i));
        Vec3 q = probe.q + rng.uniform_box({-half, -half, -half}, {half, half, half});
        Vec3 p = rng.gaussian3(1.0);
        double w = vol / gaussian3_density(p, 1.0);
        PhasePoint f1{probe.q - t * probe.p, probe.p};
        PhasePoint f2{q - t * p, p};
        double free_term =
            norm(f1.q - f2.q) < eps * (1.0 - kGeomTol) ? 0.0 : g1(f1) * g1(f2);
        double joint = 0.0;
        if (norm(q - probe.q) >= eps * (1.0 - kGeomTol)) {
            try {
                SystemState back = flow(SystemState{eps, {probe, {q, p}}}, -t);
                joint = g1(back.points[0]) * g1(back.points[1]);
            } catch (const PathologyError&) {
                joint = free_term;  // measure-zero: drop the sample
            }
        }
        double v = w * (joint - free_term);
        sum += v;
        sum2 += v * v;
    }
    double mean = sum / static_cast<double>(n);
    double var = (sum2 / static_cast<double>(n) - mean * mean) /
                 static_cast<double>(n);
    double err = std::sqrt(var + target.std_error * target.std_error);
    CHECK(std::abs(target.magnitude - std::abs(mean)) < 4.0 * err);
}

TEST_CASE("CSV emitters are deterministic") {
    MomentumEnsemble ens = maxwellian_ensemble(100, 1.0, 1.0, 59);
    std::ostringstream a, b;
    emit_timeseries_header(a);
    emit_timeseries_row(a, 0.5, ens, -1.25);
    emit_timeseries_header(b);
    emit_timeseries_row(b, 0.5, ens, -1.25);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("t,rho,px,py,pz,T,H", 0) == 0);
    std::ostringstream c;
    emit_scaling_header(c);
    emit_scaling_row(c, 1, {0.1, 2e-5, 1e-6});
    CHECK(c.str().rfind("eps,n,magnitude,std_error", 0) == 0);
}
