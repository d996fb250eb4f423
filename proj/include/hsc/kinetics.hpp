#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "hsc/correlations.hpp"
#include "hsc/reduction.hpp"

namespace hsc {

// Spatially homogeneous momentum ensemble representing number density rho.
struct MomentumEnsemble {
    double rho{1.0};
    double time{0.0};
    std::vector<Vec3> momenta;
};

// Cubic momentum histogram: bins^3 cells over [-half_width, half_width]^3.
// half_width <= 0 selects the smallest cube covering the ensemble.
struct HistogramSpec {
    int bins{24};
    double half_width{0.0};
};

struct McReal {
    double value{0.0};
    double std_error{0.0};
};

struct DsmcStats {
    long candidates{0};
    long accepted{0};
    double v_max{0.0};
};

struct Moments {
    long n{0};
    Vec3 mean;
    double temperature{0.0};  // (1/3) * mean squared deviation from the mean
    double m4{0.0};           // fourth moment of |p - mean|
};

using MomentumDensity = std::function<double(const Vec3&)>;

// Hard-sphere collision integral at p1 (unit diameter): MC estimate of
// int dp2 deta <eta, p1 - p2>_+ (f(p1*) f(p2*) - f(p1) f(p2)) with eta
// uniform on the sphere restricted to the admissible hemisphere and p2 from
// a Gaussian proposal with importance weights.
McReal boltzmann_collision_integral(const MomentumDensity& f, const Vec3& p1,
                                    long samples, std::uint64_t seed,
                                    double beta_prop = 0.5);

// Moment of the collision integral against phi, both momenta sampled.
McReal collision_integral_moment(const MomentumDensity& f,
                                 const std::function<double(const Vec3&)>& phi,
                                 long samples, std::uint64_t seed,
                                 double beta_prop = 0.5);

// One majorant-rate (no-time-counter) DSMC step of size dt.  Candidate pairs
// are accepted with probability |relative speed| / v_max and the contact
// direction is drawn by rejection against the hard-sphere kernel.  Momentum
// and energy are conserved by the exact pair update.  Throws KernelBoundError
// if the refreshed majorant is exceeded.
MomentumEnsemble dsmc_step(const MomentumEnsemble& ens, double dt, double sigma,
                           std::uint64_t seed, DsmcStats* stats = nullptr);

// H = rho * (log rho - S) with S the histogram plug-in differential entropy
// of the momentum distribution, Miller-Madow bias corrected.  Throws
// ResolutionError when more than half the cells are empty.
double h_functional(const MomentumEnsemble& ens, const HistogramSpec& bins);

// Boltzmann-Enskog collision term at x1: sigma^2 * int dp2 deta <eta,dp>_+
// (G1(q1, p1*) G1(q1 - sigma eta, p2*) - G1(q1, p1) G1(q1 + sigma eta, p2)).
McReal enskog_collision_term(const OnePointEvaluator& G1, const PhasePoint& x1,
                             double sigma, long samples, std::uint64_t seed,
                             double beta_prop = 0.5);

// Scattering-cumulant combinator: cumulant of backward flows over the listed
// indices (as singleton clusters), sandwiched with the allowed-configuration
// indicator on those indices and forward free flight of each of them.
StateEvaluator hat_cumulant(double t, std::vector<int> idx, StateEvaluator f);

// Low-order correlation-functional generating operators applied to the
// product of one-particle factors g1_t; n = 0 is the single scattering
// cumulant over the s observed spheres, n = 1 the two-term combination with
// one integrated sphere (x carries s + n points).
double scattering_cumulant_apply(double t, std::size_t s, int n,
                                 const OnePointEvaluator& g1_t,
                                 const SystemState& x);

// G2(t, x1, x2 | g1_t) truncated at one integrated sphere: the n = 0 term
// exactly plus the n = 1 term by Monte Carlo.
ReducedEstimate correlation_functional_G2(double t, const PhasePoint& x1,
                                          const PhasePoint& x2, double sigma,
                                          const OnePointEvaluator& g1_t,
                                          const QuadratureSpec& spec);

struct ScalingPoint {
    double eps{0.0};
    double magnitude{0.0};
    double std_error{0.0};
};
struct ScalingResult {
    std::vector<ScalingPoint> points;
    double slope{0.0};
    double slope_error{0.0};
    bool conclusive{true};  // false when magnitudes sit below the MC noise floor
};

// Low-density scaling probe: magnitude of the order-n term of the
// one-particle correlation series at the probe point, with sphere diameter
// eps, for each eps in the (decreasing) list; returns the log-log slope.
// Supported: s = 1, n in {0, 1}.  The order-1 integral is evaluated on the
// exact collision-cylinder plus overlap-ball strata, so its cost does not
// grow as eps shrinks.
ScalingResult bg_scaling_probe(double t, int s, int n,
                               const std::vector<double>& epsilons,
                               const OnePointEvaluator& g1_0,
                               const PhasePoint& probe,
                               const QuadratureSpec& spec);

Moments ensemble_moments(const MomentumEnsemble& ens);
MomentumEnsemble maxwellian_ensemble(long n, double rho, double beta,
                                     std::uint64_t seed);
// Two opposed drifting Maxwellian streams (+/- drift along x).
MomentumEnsemble bimodal_ensemble(long n, double rho, double beta, double drift,
                                  std::uint64_t seed);

// CSV emission: "t,rho,px,py,pz,T,H" rows and "eps,n,magnitude,std_error".
void emit_timeseries_header(std::ostream& os);
void emit_timeseries_row(std::ostream& os, double t, const MomentumEnsemble& ens,
                         double h_value);
void emit_scaling_header(std::ostream& os);
void emit_scaling_row(std::ostream& os, int n, const ScalingPoint& pt);

} // namespace hsc
