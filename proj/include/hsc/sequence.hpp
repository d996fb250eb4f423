#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hsc/dynamics.hpp"

namespace hsc {

// Family n -> symmetric evaluator on n phase points, truncated at n_cap.
// Component 0 is a scalar.  Components default to zero.  An optional family
// of cluster components f_{1+m}({Y}, z_1..z_m) supports the shift maps on
// cluster-marked sequences; Y is passed separately from the tail.
class FunctionSequence {
public:
    using Component = std::function<double(PointSpan)>;
    using ClusterComponent = std::function<double(PointSpan /*Y*/, PointSpan /*tail*/)>;

    explicit FunctionSequence(std::size_t cap) : cap_(cap), comps_(cap + 1) {}

    std::size_t cap() const { return cap_; }

    void set_scalar(double v) { scalar_ = v; }
    double scalar() const { return scalar_; }

    void set_component(std::size_t n, Component c);
    bool has_component(std::size_t n) const;

    // Evaluate component n at pts (pts.size() must equal n; n = 0 is scalar).
    double operator()(std::size_t n, PointSpan pts) const;

    void set_cluster_component(std::size_t tail_size, ClusterComponent c);
    bool has_cluster_components() const { return !cluster_comps_.empty(); }
    double cluster_eval(PointSpan y, PointSpan tail) const;

private:
    std::size_t cap_;
    double scalar_{0.0};
    std::vector<Component> comps_;
    std::vector<ClusterComponent> cluster_comps_;
};

// Unit of the star algebra: (1, 0, 0, ...).
FunctionSequence unit_sequence(std::size_t cap);

// (f * g)_s = sum over subsets Z of (x_1..x_s) of f_{|Z|}(Z) g_{s-|Z|}(rest).
FunctionSequence star_product(const FunctionSequence& f, const FunctionSequence& g);

// Component s = delta_{s,0} + sum over partitions P of prod_i h_{|X_i|}(X_i).
// Requires h_0 = 0.
FunctionSequence exp_star(const FunctionSequence& h);

// Component s = sum over partitions of (-1)^(|P|-1)(|P|-1)! prod (u - I)(X_i).
// Requires u_0 = 1; exact inverse of exp_star on truncated sequences.
FunctionSequence ln_star(const FunctionSequence& u);

// Shift by a concrete tuple Y of phase points: component n evaluates
// f_{|Y|+n} with Y prepended.  Requires |Y| + cap(result) <= cap(f).
FunctionSequence shift_map(const std::vector<PhasePoint>& y, const FunctionSequence& f);

// Cluster shift: component n evaluates the cluster component f_{1+n}({Y}, .).
FunctionSequence shift_map_cluster(const std::vector<PhasePoint>& y,
                                   const FunctionSequence& f);

// (Exp h)_{1+n}({Y}, z_1..z_n): partitions of the cluster-marked ground set,
// the block holding {Y} drawing on h's cluster components.
double exp_star_cluster(const FunctionSequence& h, PointSpan y, PointSpan tail);

} // namespace hsc
