#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hsc/vec3.hpp"

namespace hsc {

// Single sphere: position q (units of the diameter scale) and momentum p
// (unit mass, so p is the velocity).
struct PhasePoint {
    Vec3 q;
    Vec3 p;
};

using PointSpan = std::span<const PhasePoint>;

// n labeled spheres of common diameter sigma.
struct SystemState {
    double sigma{1.0};
    std::vector<PhasePoint> points;

    std::size_t size() const { return points.size(); }
};

struct CollisionEvent {
    double time{0.0};
    int i{0}, j{0};            // colliding pair, i < j
    Vec3 eta;                  // unit contact vector (q_i - q_j)/sigma at contact
};

struct FlowStats {
    long collisions{0};
};

inline constexpr double kGeomTol = 1e-12;
inline constexpr long kDefaultCollisionCap = 1000000;

// True iff every pairwise center distance is >= sigma (relative tolerance
// kGeomTol; exact contact is an allowed boundary configuration).
bool is_allowed(const SystemState& state);
bool is_allowed(double sigma, PointSpan points);

// Elastic hard-sphere momentum exchange along the unit contact vector eta
// (pointing from sphere j to sphere i).  The map is an involution: it sends
// pre-collision to post-collision momenta and back.
std::pair<Vec3, Vec3> collide(const Vec3& p_i, const Vec3& p_j, const Vec3& eta);

// Earliest pair contact within `horizon` under free streaming, or nullopt.
// Throws PathologyError when two distinct contacts coincide within
// kGeomTol * horizon (simultaneous-collision set).
std::optional<CollisionEvent> next_event(const SystemState& state, double horizon);

// Exact event-driven flow through signed time t.  Negative times use momentum
// reversal around the forward integrator.  Throws PathologyError /
// RunawayError as described above.
SystemState flow(const SystemState& state, double t,
                 FlowStats* stats = nullptr, long collision_cap = kDefaultCollisionCap);

using NPointEvaluator = std::function<double(PointSpan)>;

// Pullback of an initial n-sphere density along the backward trajectory:
// D0(flow(x, -t)) on allowed configurations, 0 on forbidden ones.
double evolved_density(const NPointEvaluator& d0, double t, const SystemState& x);

// Scattering operator: backward n-body flow, allowed-configuration
// indicator, then forward free flight of each sphere.
double scattering_apply(double t, const NPointEvaluator& f, const SystemState& x);

// Free flight of every sphere through time t (no interactions).
std::vector<PhasePoint> free_stream(PointSpan points, double t);

} // namespace hsc
