#include "hsc/reduction.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "json.hpp"

#include "hsc/errors.hpp"
#include "hsc/partitions.hpp"

namespace hsc {

double pairwise_sum(const std::vector<double>& v) {
    std::function<double(std::size_t, std::size_t)> rec =
        [&](std::size_t lo, std::size_t hi) -> double {
            if (hi - lo <= 8) {
                double s = 0.0;
                for (std::size_t i = lo; i < hi; ++i) s += v[i];
                return s;
            }
            std::size_t mid = lo + (hi - lo) / 2;
            return rec(lo, mid) + rec(mid, hi);
        };
    return v.empty() ? 0.0 : rec(0, v.size());
}

std::vector<double> parallel_map(long n, int workers,
                                 const std::function<double(long)>& fn) {
    if (workers < 1) throw ConfigError("worker count must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    if (workers == 1 || n < 2) {
        for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (long i = w; i < n; i += workers)
                    out[static_cast<std::size_t>(i)] = fn(i);
            } catch (...) {
                errs[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

namespace {
constexpr long kMaxResamples = 64;
} // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t tag, int order) {
    return seed ^ (0x9E3779B97F4A7C15ULL * (tag + 1)) ^
           (0xBF58476D1CE4E5B9ULL * static_cast<std::uint64_t>(order + 1));
}

OrderContribution mc_sample_order(
    int n, const QuadratureSpec& spec, std::uint64_t tag,
    const std::function<double(const std::vector<PhasePoint>&)>& h) {
    OrderContribution out;
    out.order = n;
    const long N = spec.samples_per_order;
    if (N < 1) throw ConfigError("samples_per_order must be >= 1");
    const double vol = spec.box_volume();
    if (!(vol > 0.0)) throw ConfigError("quadrature box must have positive volume");
    const std::uint64_t sseed = stream_seed(spec.seed, tag, n);

    std::vector<double> vals(static_cast<std::size_t>(N));
    std::vector<long> resamples(static_cast<std::size_t>(N), 0);

    auto draw_one = [&](long i) -> double {
        for (long attempt = 0;; ++attempt) {
            if (attempt > kMaxResamples)
                throw PathologyError("sample exhausted its resample budget");
            CounterRng rng(CounterRng::derive_key(
                sseed, static_cast<std::uint64_t>(i % spec.workers),
                static_cast<std::uint64_t>(i) +
                    (static_cast<std::uint64_t>(attempt) << 40)));
            std::vector<PhasePoint> pts(static_cast<std::size_t>(n));
            double weight = 1.0;
            for (auto& pt : pts) {
                pt.q = rng.uniform_box(spec.box_lo, spec.box_hi);
                pt.p = rng.gaussian3(spec.beta_prop);
                weight *= vol / gaussian3_density(pt.p, spec.beta_prop);
            }
            try {
                double v = h(pts);
                resamples[static_cast<std::size_t>(i)] = attempt;
                return v * weight;
            } catch (const PathologyError&) {
                continue;
            }
        }
    };

    vals = parallel_map(N, spec.workers, draw_one);

    // Effective-sample-size guard over the material draws.  Draws far below
    // the peak are cancellation dust from the cumulant combinations, not
    // support; the failure mode to catch is many material draws whose
    // importance weights are dominated by a couple of samples, which is the
    // signature of a proposal that does not cover the integrand.
    double vmax = 0.0;
    for (double v : vals) vmax = std::max(vmax, std::abs(v));
    double sum_abs = 0.0, sum_sq = 0.0;
    long n_nz = 0;
    for (double v : vals) {
        if (std::abs(v) > 1e-12 * vmax) {
            sum_abs += std::abs(v);
            sum_sq += v * v;
            ++n_nz;
        }
    }
    if (n > 0 && n_nz >= 16) {
        double ess = sum_abs * sum_abs / sum_sq;
        if (ess < 8.0)
            throw WeightBlowupError("effective sample size collapsed at order " +
                                    std::to_string(n));
    }

    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    double mean = pairwise_sum(vals) / static_cast<double>(N);
    double var = 0.0;
    if (N > 1) {
        std::vector<double> dev2(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) {
            double d = vals[i] - mean;
            dev2[i] = d * d;
        }
        var = pairwise_sum(dev2) / static_cast<double>(N - 1);
    }
    out.value = mean / fact;
    out.std_error = std::sqrt(var / static_cast<double>(N)) / fact;
    for (long r : resamples) out.pathology_resamples += r;
    return out;
}

namespace {

OrderContribution exact_order(double value) {
    OrderContribution c;
    c.order = 0;
    c.value = value;
    return c;
}

ReducedEstimate combine(std::vector<OrderContribution> orders) {
    ReducedEstimate est;
    double err2 = 0.0;
    for (const auto& c : orders) {
        est.value += c.value;
        err2 += c.std_error * c.std_error;
    }
    est.std_error = std::sqrt(err2);
    est.per_order = std::move(orders);
    return est;
}

SystemState augmented(const SystemState& x, const std::vector<PhasePoint>& extra) {
    SystemState y;
    y.sigma = x.sigma;
    y.points = x.points;
    y.points.insert(y.points.end(), extra.begin(), extra.end());
    return y;
}

} // namespace

ReducedEstimate series_integral_estimate(const FunctionSequence& f,
                                         const QuadratureSpec& spec,
                                         std::uint64_t stream_tag) {
    std::vector<OrderContribution> orders;
    orders.push_back(exact_order(f.scalar()));
    for (int n = 1; n <= static_cast<int>(f.cap()); ++n) {
        orders.push_back(mc_sample_order(n, spec, stream_tag,
                                  [&](const std::vector<PhasePoint>& pts) {
                                      return f(static_cast<std::size_t>(n), pts);
                                  }));
    }
    return combine(std::move(orders));
}

ReducedEstimate grand_partition_estimate(double t, const FunctionSequence& d0,
                                         double sigma, const QuadratureSpec& spec) {
    FunctionSequence dt(d0.cap());
    dt.set_scalar(d0.scalar());
    for (std::size_t n = 1; n <= d0.cap(); ++n) {
        if (!d0.has_component(n)) continue;
        dt.set_component(n, [&d0, n, sigma, t](PointSpan pts) {
            SystemState st{sigma, {pts.begin(), pts.end()}};
            return evolved_density([&d0, n](PointSpan y) { return d0(n, y); }, t, st);
        });
    }
    return series_integral_estimate(dt, spec, 0xD0);
}

ReducedEstimate estimate_F(double t, std::size_t s, const SystemState& x,
                           const FunctionSequence& init, const QuadratureSpec& spec) {
    std::vector<OrderContribution> orders;
    orders.push_back(exact_order(evolve_cluster_correlations(t, init, s, 0, x)));
    for (int n = 1; n <= spec.n_max; ++n) {
        orders.push_back(mc_sample_order(n, spec, 0xF0 + s,
                                  [&](const std::vector<PhasePoint>& pts) {
                                      SystemState y = augmented(x, pts);
                                      return evolve_cluster_correlations(
                                          t, init, s, static_cast<std::size_t>(n), y);
                                  }));
    }
    return combine(std::move(orders));
}

ReducedEstimate estimate_G(double t, std::size_t s, const SystemState& x,
                           const FunctionSequence& init, const QuadratureSpec& spec) {
    std::vector<OrderContribution> orders;
    orders.push_back(exact_order(evolve_correlations(t, init, s, x)));
    for (int n = 1; n <= spec.n_max; ++n) {
        orders.push_back(mc_sample_order(n, spec, 0x60 + s,
                                  [&](const std::vector<PhasePoint>& pts) {
                                      SystemState y = augmented(x, pts);
                                      return evolve_correlations(
                                          t, init, s + static_cast<std::size_t>(n), y);
                                  }));
    }
    return combine(std::move(orders));
}

ConsistencyResidual fg_consistency(double t, std::size_t s, const SystemState& x,
                                   const FunctionSequence& init,
                                   const QuadratureSpec& spec) {
    ReducedEstimate f_est = estimate_F(t, s, x, init, spec);

    // One independent G estimate per nonempty subset of the observed spheres.
    std::vector<ReducedEstimate> g_by_mask(1u << s);
    for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
        SystemState sub;
        sub.sigma = x.sigma;
        for (std::size_t k = 0; k < s; ++k)
            if (mask & (1u << k)) sub.points.push_back(x.points[k]);
        QuadratureSpec sub_spec = spec;
        sub_spec.seed = stream_seed(spec.seed, 0x6600 + mask, 0);
        g_by_mask[mask] = estimate_G(t, sub.size(), sub, init, sub_spec);
    }

    double total = 0.0;
    std::vector<double> dtotal(1u << s, 0.0);  // sensitivity to each subset value
    LabelSet ground;
    for (std::size_t k = 0; k < s; ++k) ground.labels.push_back(static_cast<int>(k));
    for (const auto& part : enumerate_partitions(ground)) {
        double prod = 1.0;
        std::vector<std::uint32_t> masks;
        for (const auto& block : part.blocks) {
            std::uint32_t m = 0;
            for (int e : block) m |= (1u << e);
            masks.push_back(m);
            prod *= g_by_mask[m].value;
        }
        total += prod;
        for (std::size_t b = 0; b < masks.size(); ++b) {
            double partial = 1.0;
            for (std::size_t c = 0; c < masks.size(); ++c)
                if (c != b) partial *= g_by_mask[masks[c]].value;
            dtotal[masks[b]] += partial;
        }
    }

    double err2 = f_est.std_error * f_est.std_error;
    for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
        double e = dtotal[mask] * g_by_mask[mask].std_error;
        err2 += e * e;
    }
    return {std::abs(f_est.value - total), std::sqrt(err2)};
}

DispersionResult dispersion_functional(double t, const OnePointEvaluator& a1,
                                       double sigma, const FunctionSequence& init,
                                       const QuadratureSpec& spec) {
    auto series = [&](std::size_t base, std::uint64_t tag,
                      const std::function<double(PointSpan)>& weight)
        -> ReducedEstimate {
        std::vector<OrderContribution> orders;
        for (int n = 0; n <= spec.n_max; ++n) {
            // The observed spheres are sampled too, so every order is Monte
            // Carlo; the order-n draw has base + n points and the 1/n! factor
            // must not touch the base block.
            int total_pts = static_cast<int>(base) + n;
            OrderContribution c =
                mc_sample_order(total_pts, spec, tag + static_cast<std::uint64_t>(n) * 131,
                         [&](const std::vector<PhasePoint>& pts) {
                             SystemState y{sigma, pts};
                             return weight(PointSpan(pts.data(), base)) *
                                    evolve_correlations(t, init, base + n, y);
                         });
            // mc_order divided by (base+n)!; restore to 1/n!.
            double scale = 1.0;
            for (int k = n + 1; k <= total_pts; ++k) scale *= k;
            c.order = n;
            c.value *= scale;
            c.std_error *= scale;
            orders.push_back(c);
        }
        return combine(std::move(orders));
    };

    ReducedEstimate mean_est =
        series(1, 0xA1, [&](PointSpan y) { return a1(y[0]); });
    double mean = mean_est.value;
    ReducedEstimate one_body = series(1, 0xA2, [&, mean](PointSpan y) {
        double a = a1(y[0]);
        return a * a - mean * mean;
    });
    ReducedEstimate two_body = series(2, 0xA3, [&](PointSpan y) {
        return a1(y[0]) * a1(y[1]);
    });

    DispersionResult out;
    out.mean = mean;
    out.mean_error = mean_est.std_error;
    out.variance = one_body.value + two_body.value;
    out.variance_error = std::sqrt(one_body.std_error * one_body.std_error +
                                   two_body.std_error * two_body.std_error);
    return out;
}

void emit_record(std::ostream& os, const std::string& quantity, std::size_t s,
                 double t, const SystemState& x, const ReducedEstimate& est,
                 const QuadratureSpec& spec, const Provenance& prov) {
    nlohmann::json rec;
    rec["quantity"] = quantity;
    rec["s"] = s;
    rec["t"] = t;
    rec["sigma"] = x.sigma;
    rec["value"] = est.value;
    rec["std_error"] = est.std_error;
    nlohmann::json orders = nlohmann::json::array();
    for (const auto& c : est.per_order) {
        orders.push_back({{"order", c.order},
                          {"value", c.value},
                          {"std_error", c.std_error},
                          {"pathology_resamples", c.pathology_resamples}});
    }
    rec["per_order"] = std::move(orders);
    rec["seed"] = spec.seed;
    rec["samples_per_order"] = spec.samples_per_order;
    rec["workers"] = spec.workers;
    rec["config_hash"] = prov.config_hash;
    rec["version"] = prov.version;
    os << rec.dump() << '\n';
}

FunctionSequence InitialData::chaos_sequence(std::size_t cap) const {
    FunctionSequence g0(cap);
    InitialData self = *this;
    g0.set_component(1, [self](PointSpan pts) { return self.g1(pts[0]); });
    return g0;
}

void InitialData::default_box(QuadratureSpec& spec, double margin) const {
    double r = bump_radius + margin;
    spec.box_lo = {-r, -r, -r};
    spec.box_hi = {r, r, r};
}

} // namespace hsc
