#include "hsc/correlations.hpp"

#include <algorithm>
#include <cmath>

#include "hsc/errors.hpp"
#include "hsc/partitions.hpp"

namespace hsc {

namespace {

std::vector<PhasePoint> gather(const std::vector<PhasePoint>& pts,
                               const std::vector<int>& idx) {
    std::vector<PhasePoint> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(pts[static_cast<std::size_t>(i)]);
    return out;
}

} // namespace

const std::vector<PhasePoint>& FlowCache::backward(std::uint32_t mask) {
    auto it = memo_.find(mask);
    if (it != memo_.end()) return it->second;
    SystemState sub;
    sub.sigma = base_->sigma;
    for (std::size_t i = 0; i < base_->points.size(); ++i)
        if ((mask >> i) & 1) sub.points.push_back(base_->points[i]);
    SystemState flowed = flow(sub, -t_);
    return memo_.emplace(mask, std::move(flowed.points)).first->second;
}

double cumulant_apply(double t, const std::vector<std::vector<int>>& clusters,
                      const StateEvaluator& f, const SystemState& x,
                      FlowCache* cache) {
    FlowCache local(x, t);
    if (!cache) cache = &local;

    std::size_t m = clusters.size();
    double sum = 0.0;
    SystemState composite = x;
    for (const auto& part : index_partitions(m)) {
        // Restore the composite to the base state lazily per term.
        composite.points = x.points;
        for (const auto& block : part) {
            std::uint32_t mask = 0;
            std::vector<int> members;
            for (int e : block)
                for (int i : clusters[static_cast<std::size_t>(e)]) {
                    mask |= std::uint32_t{1} << i;
                    members.push_back(i);
                }
            const auto& flowed = cache->backward(mask);
            // flowed points are in increasing index order
            std::sort(members.begin(), members.end());
            for (std::size_t k = 0; k < members.size(); ++k)
                composite.points[static_cast<std::size_t>(members[k])] = flowed[k];
        }
        sum += static_cast<double>(cumulant_coefficient(static_cast<int>(part.size()))) *
               f(composite);
    }
    return sum;
}

double evolve_correlations(double t, const FunctionSequence& g0, std::size_t s,
                           const SystemState& x) {
    if (s > g0.cap()) throw CapacityError("order exceeds sequence cap");
    if (x.points.size() != s) throw DomainError("state size does not match order");
    FlowCache cache(x, t);
    double total = 0.0;
    for (const auto& part : index_partitions(s)) {
        StateEvaluator f = [&part, &g0](const SystemState& st) {
            double prod = 1.0;
            for (const auto& block : part)
                prod *= g0(block.size(), gather(st.points, block));
            return prod;
        };
        std::vector<std::vector<int>> clusters(part.begin(), part.end());
        total += cumulant_apply(t, clusters, f, x, &cache);
    }
    return total;
}

double initial_cluster_correlation(const FunctionSequence& g0, PointSpan y,
                                   PointSpan tail) {
    // Cumulant over partitions of the cluster-marked set, each block
    // contributing the full cluster expansion of its declusterized members.
    std::vector<PhasePoint> all(y.begin(), y.end());
    all.insert(all.end(), tail.begin(), tail.end());
    std::size_t m = 1 + tail.size();
    double sum = 0.0;
    for (const auto& part : index_partitions(m)) {
        double prod = static_cast<double>(
            cumulant_coefficient(static_cast<int>(part.size())));
        for (const auto& block : part) {
            std::vector<int> members;  // particle indices into `all`
            for (int e : block) {
                if (e == 0)
                    for (std::size_t i = 0; i < y.size(); ++i)
                        members.push_back(static_cast<int>(i));
                else
                    members.push_back(static_cast<int>(y.size() + static_cast<std::size_t>(e) - 1));
            }
            auto pts = gather(all, members);
            double inner = 0.0;
            for (const auto& sub : index_partitions(pts.size())) {
                double p = 1.0;
                for (const auto& sb : sub) p *= g0(sb.size(), gather(pts, sb));
                inner += p;
            }
            prod *= inner;
        }
        sum += prod;
    }
    return sum;
}

double evolve_cluster_correlations(double t, const FunctionSequence& g0,
                                   std::size_t s, std::size_t n,
                                   const SystemState& x) {
    if (s + n > g0.cap()) throw CapacityError("order exceeds sequence cap");
    if (x.points.size() != s + n) throw DomainError("state size does not match order");
    FlowCache cache(x, t);
    double total = 0.0;
    // Elements: 0 is the fused cluster of the first s spheres, 1..n singles.
    for (const auto& part : index_partitions(1 + n)) {
        // Each partition block declusterizes to a flow group; the block
        // holding the cluster carries the cluster initial correlation.
        std::vector<std::vector<int>> clusters;
        clusters.reserve(part.size());
        for (const auto& block : part) {
            std::vector<int> members;
            for (int e : block) {
                if (e == 0)
                    for (std::size_t i = 0; i < s; ++i)
                        members.push_back(static_cast<int>(i));
                else
                    members.push_back(static_cast<int>(s + static_cast<std::size_t>(e) - 1));
            }
            clusters.push_back(std::move(members));
        }
        StateEvaluator f = [&part, &clusters, &g0, s](const SystemState& st) {
            double prod = 1.0;
            for (std::size_t b = 0; b < part.size(); ++b) {
                bool has_cluster = part[b].front() == 0;
                if (has_cluster) {
                    std::vector<PhasePoint> yv(st.points.begin(),
                                               st.points.begin() + static_cast<std::ptrdiff_t>(s));
                    std::vector<PhasePoint> tailv;
                    for (int i : clusters[b])
                        if (i >= static_cast<int>(s))
                            tailv.push_back(st.points[static_cast<std::size_t>(i)]);
                    prod *= initial_cluster_correlation(g0, yv, tailv);
                } else {
                    prod *= g0(clusters[b].size(), gather(st.points, clusters[b]));
                }
            }
            return prod;
        };
        total += cumulant_apply(t, clusters, f, x, &cache);
    }
    return total;
}

StateEvaluator chaos_product(const OnePointEvaluator& g1) {
    return [g1](const SystemState& st) {
        if (!is_allowed(st)) return 0.0;
        double prod = 1.0;
        for (const auto& pt : st.points) prod *= g1(pt);
        return prod;
    };
}

double chaos_correlations(double t, const OnePointEvaluator& g1_0, std::size_t s,
                          const SystemState& x) {
    if (x.points.size() != s) throw DomainError("state size does not match order");
    std::vector<std::vector<int>> singles(s);
    for (std::size_t i = 0; i < s; ++i) singles[i] = {static_cast<int>(i)};
    return cumulant_apply(t, singles, chaos_product(g1_0), x);
}

double nonlinear_group_compose_check(double t1, double t2, const FunctionSequence& g0,
                                     std::size_t s, const SystemState& x) {
    double lhs = evolve_correlations(t1 + t2, g0, s, x);
    double sigma = x.sigma;
    FunctionSequence mid(g0.cap());
    mid.set_scalar(g0.scalar());
    for (std::size_t m = 1; m <= g0.cap(); ++m) {
        mid.set_component(m, [t2, g0, m, sigma](PointSpan pts) {
            SystemState st{sigma, {pts.begin(), pts.end()}};
            return evolve_correlations(t2, g0, m, st);
        });
    }
    double rhs = evolve_correlations(t1, mid, s, x);
    return std::abs(lhs - rhs);
}

double equilibrium_residual(double beta, std::size_t s, const SystemState& x, double t) {
    FunctionSequence geq(std::max<std::size_t>(s, 1));
    geq.set_component(1, [beta](PointSpan pts) {
        return std::exp(-0.5 * beta * norm2(pts[0].p));
    });
    double val = evolve_correlations(t, geq, s, x);
    double expected = (s == 1) ? std::exp(-0.5 * beta * norm2(x.points[0].p)) : 0.0;
    return std::abs(val - expected);
}

double with_jitter_retry(const SystemState& x,
                         const std::function<double(const SystemState&)>& fn) {
    try {
        return fn(x);
    } catch (const PathologyError&) {
        SystemState jig = x;
        double eps = 1e-9 * x.sigma;
        for (std::size_t i = 0; i < jig.points.size(); ++i) {
            // fixed pseudo-random directions, one per sphere index
            Vec3 d{std::sin(1.0 + 2.7 * static_cast<double>(i)),
                   std::cos(0.4 + 1.9 * static_cast<double>(i)),
                   std::sin(2.3 + 1.3 * static_cast<double>(i))};
            jig.points[i].q += (eps / norm(d)) * d;
        }
        return fn(jig);
    }
}

} // namespace hsc
