#pragma once

#include <cstdint>

#include "hsc/vec3.hpp"

namespace hsc {

// Counter-based stream: every (seed, worker, sample) triple names an
// independent stream, and draws depend only on the stream key and a local
// counter.  Results are therefore reproducible regardless of scheduling.
class CounterRng {
public:
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t worker,
                                    std::uint64_t sample) {
        return mix(mix(seed) ^ mix(0xa0761d6478bd642fULL + worker) ^
                   mix(0xe7037ed1a0b428dbULL + sample));
    }

    explicit CounterRng(std::uint64_t key) : key_(key) {}
    CounterRng(std::uint64_t seed, std::uint64_t worker, std::uint64_t sample)
        : key_(derive_key(seed, worker, sample)) {}

    std::uint64_t next_u64() { return mix(key_ ^ mix(0x2545f4914f6cdd1dULL * ++ctr_)); }

    // Uniform in [0,1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0,1); safe under log().
    double uniform_pos() {
        double u = uniform();
        return u > 0.0 ? u : 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // Box-Muller
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Isotropic Gaussian momentum with density ~ exp(-beta |p|^2 / 2).
    Vec3 gaussian3(double beta) {
        double s = 1.0 / std::sqrt(beta);
        return {s * normal(), s * normal(), s * normal()};
    }

    // Uniform direction; Marsaglia rejection.
    Vec3 unit_sphere() {
        for (;;) {
            double v = uniform(-1.0, 1.0);
            double w = uniform(-1.0, 1.0);
            double s = v * v + w * w;
            if (s >= 1.0 || s == 0.0) continue;
            double f = 2.0 * std::sqrt(1.0 - s);
            return {v * f, w * f, 1.0 - 2.0 * s};
        }
    }

    Vec3 uniform_box(const Vec3& lo, const Vec3& hi) {
        return {uniform(lo.x, hi.x), uniform(lo.y, hi.y), uniform(lo.z, hi.z)};
    }

    // Uniform in a ball of given radius around the origin.
    Vec3 uniform_ball(double radius) {
        for (;;) {
            Vec3 v{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
            if (norm2(v) <= 1.0) return radius * v;
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_{0};
    bool have_spare_{false};
    double spare_{0.0};
};

// Density of gaussian3(beta) at p.
inline double gaussian3_density(const Vec3& p, double beta) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    double c = std::pow(beta / two_pi, 1.5);
    return c * std::exp(-0.5 * beta * norm2(p));
}

} // namespace hsc
