#include "hsc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hsc/errors.hpp"

namespace hsc {

bool is_allowed(double sigma, PointSpan points) {
    double min2 = sigma * sigma * (1.0 - kGeomTol) * (1.0 - kGeomTol);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (norm2(points[i].q - points[j].q) < min2) return false;
    return true;
}

bool is_allowed(const SystemState& state) {
    return is_allowed(state.sigma, state.points);
}

std::pair<Vec3, Vec3> collide(const Vec3& p_i, const Vec3& p_j, const Vec3& eta) {
    if (std::abs(norm(eta) - 1.0) > 1e-9)
        throw DomainError("contact vector is not a unit vector");
    double h = dot(eta, p_i - p_j);
    return {p_i - h * eta, p_j + h * eta};
}

namespace {

struct Candidate {
    double time;
    int i, j;
};

// Smallest nonnegative root of |dq + t dp| = sigma for an approaching pair,
// in the cancellation-free form t = c / (-b + sqrt(disc)).  Tangent passes
// with |<eta, dp>| below the grazing tolerance count as no collision.
std::optional<double> contact_time(const Vec3& dq, const Vec3& dp, double sigma) {
    double b = dot(dq, dp);
    if (b >= 0.0) return std::nullopt;  // receding
    double a = norm2(dp);
    double c = norm2(dq) - sigma * sigma;
    double disc = b * b - a * c;
    double graze = kGeomTol * sigma;
    if (disc <= graze * graze) return std::nullopt;
    double t = c / (-b + std::sqrt(disc));
    if (t < 0.0) t = 0.0;  // tolerated boundary overlap resolves immediately
    return t;
}

} // namespace

std::optional<CollisionEvent> next_event(const SystemState& state, double horizon) {
    const auto& pts = state.points;
    std::vector<Candidate> hits;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            auto t = contact_time(pts[i].q - pts[j].q, pts[i].p - pts[j].p, state.sigma);
            if (t && *t <= horizon)
                hits.push_back({*t, static_cast<int>(i), static_cast<int>(j)});
        }
    }
    if (hits.empty()) return std::nullopt;
    auto best = std::min_element(hits.begin(), hits.end(),
                                 [](const Candidate& a, const Candidate& b) {
                                     return a.time < b.time;
                                 });
    double coincidence = kGeomTol * std::max(horizon, 1e-300);
    for (const auto& h : hits)
        if (&h != &*best && h.time - best->time <= coincidence)
            throw PathologyError("simultaneous hard-sphere contacts");

    CollisionEvent ev;
    ev.time = best->time;
    ev.i = best->i;
    ev.j = best->j;
    Vec3 sep = (pts[ev.i].q + ev.time * pts[ev.i].p) -
               (pts[ev.j].q + ev.time * pts[ev.j].p);
    ev.eta = (1.0 / norm(sep)) * sep;
    // eta points from sphere j to sphere i, so an approaching pair has
    // <eta, p_i - p_j> < 0 at contact.
    if (dot(ev.eta, pts[ev.i].p - pts[ev.j].p) >= 0.0)
        throw PathologyError("contact without approach");
    return ev;
}

std::vector<PhasePoint> free_stream(PointSpan points, double t) {
    std::vector<PhasePoint> out(points.begin(), points.end());
    for (auto& pt : out) pt.q += t * pt.p;
    return out;
}

SystemState flow(const SystemState& state, double t, FlowStats* stats,
                 long collision_cap) {
    if (t == 0.0) return state;
    if (t < 0.0) {
        // Time reversal: reverse momenta, run forward, reverse again.
        SystemState rev = state;
        for (auto& pt : rev.points) pt.p = -pt.p;
        SystemState fwd = flow(rev, -t, stats, collision_cap);
        for (auto& pt : fwd.points) pt.p = -pt.p;
        return fwd;
    }

    SystemState cur = state;
    double remaining = t;
    long collisions = 0;
    for (;;) {
        auto ev = next_event(cur, remaining);
        if (!ev) {
            cur.points = free_stream(cur.points, remaining);
            break;
        }
        cur.points = free_stream(cur.points, ev->time);
        auto [pi, pj] = collide(cur.points[ev->i].p, cur.points[ev->j].p, ev->eta);
        cur.points[ev->i].p = pi;
        cur.points[ev->j].p = pj;
        if (++collisions > collision_cap)
            throw RunawayError("collision count exceeded cap");
        remaining -= ev->time;
        if (remaining <= 0.0) break;
    }
    if (stats) stats->collisions += collisions;
    return cur;
}

double evolved_density(const NPointEvaluator& d0, double t, const SystemState& x) {
    if (!is_allowed(x)) return 0.0;
    SystemState y = flow(x, -t);
    return d0(y.points);
}

double scattering_apply(double t, const NPointEvaluator& f, const SystemState& x) {
    SystemState y = flow(x, -t);
    if (!is_allowed(y)) return 0.0;
    return f(free_stream(y.points, t));
}

} // namespace hsc
