#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "hsc/dynamics.hpp"
#include "hsc/errors.hpp"
#include "hsc/rng.hpp"
#include "test_util.hpp"

using namespace hsc;
using hsc::testutil::random_allowed_state;

namespace {

Vec3 total_momentum(const SystemState& st) {
    Vec3 p{};
    for (const auto& pt : st.points) p += pt.p;
    return p;
}

double total_energy(const SystemState& st) {
    double e = 0.0;
    for (const auto& pt : st.points) e += 0.5 * norm2(pt.p);
    return e;
}

} // namespace

TEST_CASE("collide conserves momentum and energy and is an involution") {
    CounterRng rng(1, 0, 0);
    for (int rep = 0; rep < 200; ++rep) {
        Vec3 pi = rng.gaussian3(1.0), pj = rng.gaussian3(1.0);
        Vec3 eta = rng.unit_sphere();
        auto [qi, qj] = collide(pi, pj, eta);
        CHECK(norm(qi + qj - pi - pj) < 1e-14);
        CHECK(std::abs(norm2(qi) + norm2(qj) - norm2(pi) - norm2(pj)) < 1e-13);
        auto [ri, rj] = collide(qi, qj, eta);
        CHECK(norm(ri - pi) < 1e-14);
        CHECK(norm(rj - pj) < 1e-14);
        // Normal relative momentum flips sign, tangential part survives.
        CHECK(std::abs(dot(qi - qj, eta) + dot(pi - pj, eta)) < 1e-13);
    }
}

TEST_CASE("two-body analytic contact times") {
    const double sigma = 0.7, d = 2.0, v = 0.9;
    SUBCASE("head-on") {
        SystemState st{sigma, {{{-d, 0, 0}, {v, 0, 0}}, {{d, 0, 0}, {-v, 0, 0}}}};
        auto ev = next_event(st, 100.0);
        REQUIRE(ev.has_value());
        double expect = (2.0 * d - sigma) / (2.0 * v);
        CHECK(std::abs(ev->time - expect) < 1e-12);
        CHECK(ev->i == 0);
        CHECK(ev->j == 1);
        CHECK(norm(ev->eta - Vec3{-1, 0, 0}) < 1e-12);
    }
    SUBCASE("finite impact parameter") {
        const double b = 0.3;
        SystemState st{sigma,
                       {{{-d, 0, 0}, {v, 0, 0}}, {{d, b, 0}, {-v, 0, 0}}}};
        auto ev = next_event(st, 100.0);
        REQUIRE(ev.has_value());
        double expect = (2.0 * d - std::sqrt(sigma * sigma - b * b)) / (2.0 * v);
        CHECK(std::abs(ev->time - expect) < 1e-12);
    }
    SUBCASE("receding spheres never collide") {
        SystemState st{sigma, {{{-d, 0, 0}, {-v, 0, 0}}, {{d, 0, 0}, {v, 0, 0}}}};
        CHECK(!next_event(st, 100.0).has_value());
    }
    SUBCASE("impact parameter beyond the diameter misses") {
        SystemState st{sigma,
                       {{{-d, 0, 0}, {v, 0, 0}},
                        {{d, sigma + 1e-6, 0}, {-v, 0, 0}}}};
        CHECK(!next_event(st, 100.0).has_value());
    }
}

TEST_CASE("conservation and reversibility over random scattering events") {
    CounterRng rng(7, 0, 0);
    long collisions_seen = 0;
    for (int rep = 0; rep < 300; ++rep) {
        std::size_t n = 2 + static_cast<std::size_t>(rng.next_u64() % 3);
        SystemState st = random_allowed_state(rng, n, 0.8, 1.4);
        double t = rng.uniform(0.5, 1.5);
        FlowStats stats;
        SystemState fwd = flow(st, t, &stats);
        collisions_seen += stats.collisions;
        CHECK(norm(total_momentum(fwd) - total_momentum(st)) < 1e-10);
        CHECK(std::abs(total_energy(fwd) - total_energy(st)) < 1e-10);
        CHECK(is_allowed(fwd));
        SystemState back = flow(fwd, -t);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            err = std::max(err, norm(back.points[i].q - st.points[i].q));
            err = std::max(err, norm(back.points[i].p - st.points[i].p));
        }
        CHECK(err < 1e-10);
    }
    // The ensemble is dense enough that collisions actually occur.
    CHECK(collisions_seen > 80);
}

TEST_CASE("flow through zero time is the identity") {
    CounterRng rng(9, 0, 0);
    SystemState st = random_allowed_state(rng, 3, 0.8, 2.0);
    SystemState same = flow(st, 0.0);
    for (std::size_t i = 0; i < st.size(); ++i) {
        CHECK(norm(same.points[i].q - st.points[i].q) == 0.0);
        CHECK(norm(same.points[i].p - st.points[i].p) == 0.0);
    }
}

TEST_CASE("simultaneous contacts raise PathologyError") {
    // Two movers hit the stationary center sphere at the same instant.
    SystemState st{1.0,
                   {{{0, 0, 0}, {0, 0, 0}},
                    {{-3, 0, 0}, {1, 0, 0}},
                    {{3, 0, 0}, {-1, 0, 0}}}};
    CHECK_THROWS_AS(flow(st, 3.0), PathologyError);
}

TEST_CASE("collision cap raises RunawayError") {
    CounterRng rng(13, 0, 0);
    SystemState st = random_allowed_state(rng, 4, 0.9, 2.0);
    FlowStats stats;
    flow(st, 2.0, &stats);
    if (stats.collisions > 0)
        CHECK_THROWS_AS(flow(st, 2.0, nullptr, 0), RunawayError);
}

TEST_CASE("is_allowed detects overlaps") {
    SystemState ok{1.0, {{{0, 0, 0}, {}}, {{1.5, 0, 0}, {}}}};
    SystemState bad{1.0, {{{0, 0, 0}, {}}, {{0.5, 0, 0}, {}}}};
    CHECK(is_allowed(ok));
    CHECK(!is_allowed(bad));
}

TEST_CASE("evolved density: free case and forbidden configurations") {
    auto d0 = [](PointSpan pts) {
        double e = 0.0;
        for (const auto& pt : pts) e += norm2(pt.q) + norm2(pt.p);
        return std::exp(-0.5 * e);
    };
    // Far-separated small spheres never interact: pullback equals the free
    // backward flight.
    SystemState st{0.05,
                   {{{5, 0, 0}, {0.3, 0.1, 0}}, {{-5, 0, 0}, {-0.2, 0.4, 0}}}};
    double t = 0.7;
    double got = evolved_density(d0, t, st);
    std::vector<PhasePoint> back = free_stream(st.points, -t);
    CHECK(got == doctest::Approx(d0(back)).epsilon(1e-13));

    SystemState overlap{1.0, {{{0, 0, 0}, {}}, {{0.5, 0, 0}, {}}}};
    CHECK(evolved_density(d0, t, overlap) == 0.0);
}

TEST_CASE("scattering operator reduces to the identity without interaction") {
    auto f = [](PointSpan pts) {
        double e = 0.0;
        for (const auto& pt : pts) e += norm2(pt.q) + norm2(pt.p);
        return std::exp(-0.4 * e);
    };
    SystemState st{0.05,
                   {{{4, 0, 0}, {0.3, 0, 0}}, {{-4, 1, 0}, {-0.1, 0.2, 0}}}};
    CHECK(scattering_apply(0.9, f, st) == doctest::Approx(f(st.points)).epsilon(1e-13));
    CHECK(scattering_apply(0.0, f, st) == doctest::Approx(f(st.points)).epsilon(1e-14));
}
