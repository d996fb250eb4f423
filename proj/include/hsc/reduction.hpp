#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hsc/correlations.hpp"
#include "hsc/rng.hpp"
#include "hsc/sequence.hpp"

namespace hsc {

// Monte Carlo quadrature plan for the series over unobserved spheres.
// Proposal: Gaussian in each momentum (inverse temperature beta_prop),
// uniform in position over the declared box.
struct QuadratureSpec {
    int n_max{2};
    long samples_per_order{10000};
    double beta_prop{1.0};
    Vec3 box_lo{-2.0, -2.0, -2.0};
    Vec3 box_hi{2.0, 2.0, 2.0};
    std::uint64_t seed{0};
    int workers{1};

    double box_volume() const {
        return (box_hi.x - box_lo.x) * (box_hi.y - box_lo.y) * (box_hi.z - box_lo.z);
    }
};

struct OrderContribution {
    int order{0};
    double value{0.0};
    double std_error{0.0};
    long pathology_resamples{0};
};

struct ReducedEstimate {
    double value{0.0};
    double std_error{0.0};  // per-order errors combined in quadrature
    std::vector<OrderContribution> per_order;
};

struct ConsistencyResidual {
    double residual{0.0};
    double combined_error{0.0};
};

// Deterministic fixed-order pairwise sum.
double pairwise_sum(const std::vector<double>& v);

// Derived stream seed so independently named estimates never share draws.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t tag, int order);

// Importance-sampled estimate of (1/n!) * integral of `integrand` over n
// proposal-drawn phase points.  The integrand may throw PathologyError;
// such samples are redrawn from fresh sub-streams (counted in the result).
OrderContribution mc_sample_order(
    int n, const QuadratureSpec& spec, std::uint64_t tag,
    const std::function<double(const std::vector<PhasePoint>&)>& integrand);

// Evaluates fn(i) for i in [0, n) over `workers` threads; deterministic
// because fn derives all randomness from (seed, worker, sample) streams.
std::vector<double> parallel_map(long n, int workers,
                                 const std::function<double(long)>& fn);

// Sum over n of (1/n!) integrals of the evolved densities; time invariant by
// phase-volume preservation, which the caller can test by comparing times.
ReducedEstimate grand_partition_estimate(double t, const FunctionSequence& d0,
                                         double sigma, const QuadratureSpec& spec);

// Reduced distribution function F_s(t, x) via the cluster-correlation series.
ReducedEstimate estimate_F(double t, std::size_t s, const SystemState& x,
                           const FunctionSequence& init, const QuadratureSpec& spec);

// Reduced correlation function G_s(t, x) via the plain correlation series.
ReducedEstimate estimate_G(double t, std::size_t s, const SystemState& x,
                           const FunctionSequence& init, const QuadratureSpec& spec);

// |F_s - sum over partitions of products of G blocks| with first-order error
// propagation; the two sides are estimated independently.
ConsistencyResidual fg_consistency(double t, std::size_t s, const SystemState& x,
                                   const FunctionSequence& init,
                                   const QuadratureSpec& spec);

// Mean and variance functionals of an additive one-particle observable.
struct DispersionResult {
    double mean{0.0};
    double mean_error{0.0};
    double variance{0.0};
    double variance_error{0.0};
};
DispersionResult dispersion_functional(double t, const OnePointEvaluator& a1,
                                       double sigma, const FunctionSequence& init,
                                       const QuadratureSpec& spec);

// Series sum_n (1/n!) int f_n over the proposal box; shared by the grand
// partition estimate and the algebra identity checks.
ReducedEstimate series_integral_estimate(const FunctionSequence& f,
                                         const QuadratureSpec& spec,
                                         std::uint64_t stream_tag = 0);

struct Provenance {
    std::uint64_t config_hash{0};
    std::string version{"1.0.0"};
};

// One JSON line per estimate with full provenance.
void emit_record(std::ostream& os, const std::string& quantity, std::size_t s,
                 double t, const SystemState& x, const ReducedEstimate& est,
                 const QuadratureSpec& spec, const Provenance& prov = {});

// Default initial datum: rho0 x C^2 compact bump of radius R in q x
// Maxwellian(beta) in p.
struct InitialData {
    double rho0{0.05};
    double bump_radius{1.5};
    double beta{1.0};
    double sigma{0.1};

    double bump(const Vec3& q) const {
        double u2 = norm2(q) / (bump_radius * bump_radius);
        if (u2 >= 1.0) return 0.0;
        double w = 1.0 - u2;
        return w * w * w;
    }
    double g1(const PhasePoint& pt) const {
        return rho0 * bump(pt.q) * gaussian3_density(pt.p, beta);
    }
    // Chaos correlation sequence (0, g1, 0, ...).
    FunctionSequence chaos_sequence(std::size_t cap) const;
    // Box that contains the bump support with the given margin.
    void default_box(QuadratureSpec& spec, double margin = 0.5) const;
};

} // namespace hsc
