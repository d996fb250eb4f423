#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>

#include "hsc/dynamics.hpp"
#include "hsc/sequence.hpp"

namespace hsc {

using StateEvaluator = std::function<double(const SystemState&)>;
using OnePointEvaluator = std::function<double(const PhasePoint&)>;

// Memo of backward subset flows of one fixed state, keyed by the particle
// index mask.  Every cumulant term flows some subset of the spheres as an
// isolated subsystem; across partition terms the same subsets recur.
class FlowCache {
public:
    FlowCache(const SystemState& base, double t) : base_(&base), t_(t) {}

    // Flowed phase points of the masked subset (in increasing index order).
    const std::vector<PhasePoint>& backward(std::uint32_t mask);

    const SystemState& base() const { return *base_; }
    double t() const { return t_; }

private:
    const SystemState* base_;
    double t_;
    std::unordered_map<std::uint32_t, std::vector<PhasePoint>> memo_;
};

// Cumulant of the flow groups: sum over partitions P' of the cluster list of
// (-1)^(|P'|-1)(|P'|-1)! with each partition block's particle union flowed
// backward through t as an isolated subsystem, then f evaluated at the
// composite point.  `clusters` lists disjoint index groups into x.points.
double cumulant_apply(double t, const std::vector<std::vector<int>>& clusters,
                      const StateEvaluator& f, const SystemState& x,
                      FlowCache* cache = nullptr);

// Correlation function g_s(t, x): partitions of the s observed spheres, each
// partition contributing a cumulant of flow groups applied to the product of
// initial correlations over its blocks.
double evolve_correlations(double t, const FunctionSequence& g0, std::size_t s,
                           const SystemState& x);

// Initial correlation of a cluster of |Y| spheres with a tail of plain
// spheres, expressed through the plain initial correlations.
double initial_cluster_correlation(const FunctionSequence& g0, PointSpan y,
                                   PointSpan tail);

// Cluster correlation g_{1+n}(t, {x_1..x_s}, x_{s+1}..x_{s+n}); x carries all
// s+n spheres, the first s forming the cluster.
double evolve_cluster_correlations(double t, const FunctionSequence& g0,
                                   std::size_t s, std::size_t n,
                                   const SystemState& x);

// Chaos initial data: g_s(t) = (s-th order cumulant of flows) applied to the
// factorized one-particle product with the allowed-configuration indicator.
double chaos_correlations(double t, const OnePointEvaluator& g1_0, std::size_t s,
                          const SystemState& x);

// |G(t1+t2 | g0) - G(t1 | G(t2 | g0))| at x for the nonlinear group of the
// correlation evolution.
double nonlinear_group_compose_check(double t1, double t2, const FunctionSequence& g0,
                                     std::size_t s, const SystemState& x);

// Deviation of the evolved correlations from the steady Maxwellian datum
// (0, e^{-beta p^2/2}, 0, ...): s = 1 must reproduce the Maxwellian, s >= 2
// must vanish.
double equilibrium_residual(double beta, std::size_t s, const SystemState& x, double t);

// Runs fn(x); on a flow pathology retries once with the positions jittered by
// 1e-9 sigma, then rethrows.  The pathological set has measure zero, so the
// jitter leaves Monte Carlo estimates unbiased.
double with_jitter_retry(const SystemState& x,
                         const std::function<double(const SystemState&)>& fn);

// Product of one-particle factors with the allowed-configuration indicator;
// the operand of the chaos-case cumulants.
StateEvaluator chaos_product(const OnePointEvaluator& g1);

} // namespace hsc
