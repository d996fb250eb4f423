#include "hsc/sequence.hpp"

#include <cmath>

#include "hsc/errors.hpp"
#include "hsc/partitions.hpp"

namespace hsc {

void FunctionSequence::set_component(std::size_t n, Component c) {
    if (n == 0) throw DomainError("component 0 is the scalar; use set_scalar");
    if (n > cap_) throw CapacityError("component index exceeds truncation cap");
    comps_[n] = std::move(c);
}

bool FunctionSequence::has_component(std::size_t n) const {
    return n >= 1 && n <= cap_ && static_cast<bool>(comps_[n]);
}

double FunctionSequence::operator()(std::size_t n, PointSpan pts) const {
    if (n != pts.size())
        throw DomainError("component order does not match point count");
    if (n == 0) return scalar_;
    if (n > cap_) throw CapacityError("component index exceeds truncation cap");
    if (!comps_[n]) return 0.0;
    return comps_[n](pts);
}

void FunctionSequence::set_cluster_component(std::size_t tail_size, ClusterComponent c) {
    if (cluster_comps_.size() <= tail_size) cluster_comps_.resize(tail_size + 1);
    cluster_comps_[tail_size] = std::move(c);
}

double FunctionSequence::cluster_eval(PointSpan y, PointSpan tail) const {
    if (tail.size() >= cluster_comps_.size() || !cluster_comps_[tail.size()])
        throw DomainError("cluster component not defined for this tail size");
    return cluster_comps_[tail.size()](y, tail);
}

FunctionSequence unit_sequence(std::size_t cap) {
    FunctionSequence u(cap);
    u.set_scalar(1.0);
    return u;
}

namespace {

std::vector<PhasePoint> gather(PointSpan pts, const std::vector<int>& idx) {
    std::vector<PhasePoint> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(pts[static_cast<std::size_t>(i)]);
    return out;
}

} // namespace

FunctionSequence star_product(const FunctionSequence& f, const FunctionSequence& g) {
    if (f.cap() != g.cap())
        throw ConfigError("star product needs a shared truncation cap");
    FunctionSequence out(f.cap());
    out.set_scalar(f.scalar() * g.scalar());
    for (std::size_t s = 1; s <= out.cap(); ++s) {
        out.set_component(s, [f, g, s](PointSpan pts) {
            double sum = 0.0;
            std::size_t masks = std::size_t{1} << s;
            for (std::size_t mask = 0; mask < masks; ++mask) {
                std::vector<PhasePoint> left, right;
                for (std::size_t i = 0; i < s; ++i)
                    ((mask >> i) & 1 ? left : right).push_back(pts[i]);
                sum += f(left.size(), left) * g(right.size(), right);
            }
            return sum;
        });
    }
    return out;
}

FunctionSequence exp_star(const FunctionSequence& h) {
    if (h.scalar() != 0.0)
        throw DomainError("exp_star needs a vanishing zeroth component");
    FunctionSequence out(h.cap());
    out.set_scalar(1.0);
    for (std::size_t s = 1; s <= out.cap(); ++s) {
        out.set_component(s, [h, s](PointSpan pts) {
            double sum = 0.0;
            for (const auto& part : index_partitions(s)) {
                double prod = 1.0;
                for (const auto& block : part)
                    prod *= h(block.size(), gather(pts, block));
                sum += prod;
            }
            return sum;
        });
    }
    return out;
}

FunctionSequence ln_star(const FunctionSequence& u) {
    if (u.scalar() != 1.0)
        throw DomainError("ln_star needs a unit zeroth component");
    FunctionSequence out(u.cap());
    out.set_scalar(0.0);
    for (std::size_t s = 1; s <= out.cap(); ++s) {
        out.set_component(s, [u, s](PointSpan pts) {
            double sum = 0.0;
            for (const auto& part : index_partitions(s)) {
                double prod = static_cast<double>(
                    cumulant_coefficient(static_cast<int>(part.size())));
                for (const auto& block : part)
                    prod *= u(block.size(), gather(pts, block));
                sum += prod;
            }
            return sum;
        });
    }
    return out;
}

FunctionSequence shift_map(const std::vector<PhasePoint>& y, const FunctionSequence& f) {
    if (y.size() > f.cap())
        throw CapacityError("shift set larger than sequence cap");
    std::size_t cap = f.cap() - y.size();
    FunctionSequence out(cap);
    out.set_scalar(f(y.size(), y));
    for (std::size_t n = 1; n <= cap; ++n) {
        out.set_component(n, [y, f, n](PointSpan pts) {
            std::vector<PhasePoint> all(y);
            all.insert(all.end(), pts.begin(), pts.end());
            return f(all.size(), all);
        });
    }
    return out;
}

FunctionSequence shift_map_cluster(const std::vector<PhasePoint>& y,
                                   const FunctionSequence& f) {
    if (!f.has_cluster_components())
        throw DomainError("sequence has no cluster components");
    FunctionSequence out(f.cap());
    out.set_scalar(f.cluster_eval(y, {}));
    for (std::size_t n = 1; n <= out.cap(); ++n) {
        out.set_component(n, [y, f](PointSpan pts) {
            return f.cluster_eval(y, pts);
        });
    }
    return out;
}

double exp_star_cluster(const FunctionSequence& h, PointSpan y, PointSpan tail) {
    // Elements: index 0 is the fused cluster {Y}, indices 1..n the tail points.
    std::size_t m = 1 + tail.size();
    double sum = 0.0;
    for (const auto& part : index_partitions(m)) {
        double prod = 1.0;
        for (const auto& block : part) {
            bool has_cluster = block.front() == 0;
            std::vector<PhasePoint> z;
            for (int e : block)
                if (e != 0) z.push_back(tail[static_cast<std::size_t>(e) - 1]);
            prod *= has_cluster ? h.cluster_eval(y, z) : h(z.size(), z);
        }
        sum += prod;
    }
    return sum;
}

} // namespace hsc
