#include "hsc/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <ostream>

#include "hsc/errors.hpp"

namespace hsc {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

struct MeanErr {
    double mean{0.0};
    double std_error{0.0};
};

MeanErr mean_and_error(const std::vector<double>& vals) {
    const long n = static_cast<long>(vals.size());
    MeanErr out;
    out.mean = pairwise_sum(vals) / static_cast<double>(n);
    if (n > 1) {
        std::vector<double> dev2(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) {
            double d = vals[i] - out.mean;
            dev2[i] = d * d;
        }
        out.std_error = std::sqrt(pairwise_sum(dev2) /
                                  static_cast<double>((n - 1)) /
                                  static_cast<double>(n));
    }
    return out;
}

double checked(const MomentumDensity& f, const Vec3& p) {
    double v = f(p);
    if (v < 0.0) throw DomainError("negative one-point momentum density");
    return v;
}

} // namespace

McReal boltzmann_collision_integral(const MomentumDensity& f, const Vec3& p1,
                                    long samples, std::uint64_t seed,
                                    double beta_prop) {
    if (samples < 2) throw ConfigError("need at least 2 samples");
    const double f1 = checked(f, p1);
    std::vector<double> vals(static_cast<std::size_t>(samples));
    for (long i = 0; i < samples; ++i) {
        CounterRng rng(CounterRng::derive_key(seed, 0,
                                              static_cast<std::uint64_t>(i)));
        Vec3 p2 = rng.gaussian3(beta_prop);
        double wp = 1.0 / gaussian3_density(p2, beta_prop);
        Vec3 eta = rng.unit_sphere();
        double k = dot(eta, p1 - p2);
        double v = 0.0;
        if (k > 0.0) {
            auto [p1s, p2s] = collide(p1, p2, eta);
            v = wp * kFourPi * k *
                (checked(f, p1s) * checked(f, p2s) - f1 * checked(f, p2));
        }
        vals[static_cast<std::size_t>(i)] = v;
    }
    MeanErr me = mean_and_error(vals);
    return {me.mean, me.std_error};
}

McReal collision_integral_moment(const MomentumDensity& f,
                                 const std::function<double(const Vec3&)>& phi,
                                 long samples, std::uint64_t seed,
                                 double beta_prop) {
    if (samples < 2) throw ConfigError("need at least 2 samples");
    std::vector<double> vals(static_cast<std::size_t>(samples));
    for (long i = 0; i < samples; ++i) {
        CounterRng rng(CounterRng::derive_key(seed, 1,
                                              static_cast<std::uint64_t>(i)));
        Vec3 p1 = rng.gaussian3(beta_prop);
        Vec3 p2 = rng.gaussian3(beta_prop);
        double wp = 1.0 / (gaussian3_density(p1, beta_prop) *
                           gaussian3_density(p2, beta_prop));
        Vec3 eta = rng.unit_sphere();
        double k = dot(eta, p1 - p2);
        double v = 0.0;
        if (k > 0.0) {
            auto [p1s, p2s] = collide(p1, p2, eta);
            v = wp * kFourPi * k * phi(p1) *
                (checked(f, p1s) * checked(f, p2s) -
                 checked(f, p1) * checked(f, p2));
        }
        vals[static_cast<std::size_t>(i)] = v;
    }
    MeanErr me = mean_and_error(vals);
    return {me.mean, me.std_error};
}

MomentumEnsemble dsmc_step(const MomentumEnsemble& ens, double dt, double sigma,
                           std::uint64_t seed, DsmcStats* stats) {
    MomentumEnsemble out = ens;
    out.time += dt;
    const long n = static_cast<long>(out.momenta.size());
    if (n < 2) return out;

    Vec3 mean{0, 0, 0};
    for (const Vec3& p : out.momenta) mean = mean + p;
    mean = mean * (1.0 / static_cast<double>(n));
    double dev_max = 0.0;
    for (const Vec3& p : out.momenta)
        dev_max = std::max(dev_max, norm(p - mean));
    const double v_max = 2.0 * dev_max;  // strict bound on any relative speed
    if (stats) stats->v_max = v_max;
    if (v_max == 0.0) return out;

    const double m_real = 0.5 * static_cast<double>(n - 1) * ens.rho *
                          std::numbers::pi * sigma * sigma * v_max * dt;
    // Candidate budget: more than one candidate per four particles means the
    // per-particle collision probability can no longer stay below ~0.1.
    if (m_real > 0.25 * static_cast<double>(n))
        throw ConfigError("dsmc time step too large for the candidate budget");

    CounterRng rng(CounterRng::derive_key(seed, 0, 0));
    long m = static_cast<long>(std::floor(m_real));
    if (rng.uniform() < m_real - std::floor(m_real)) ++m;
    if (stats) stats->candidates = m;

    long accepted = 0;
    for (long c = 0; c < m; ++c) {
        long i = std::min<long>(static_cast<long>(rng.uniform() * n), n - 1);
        long j = i;
        while (j == i) j = std::min<long>(static_cast<long>(rng.uniform() * n), n - 1);
        Vec3& pi = out.momenta[static_cast<std::size_t>(i)];
        Vec3& pj = out.momenta[static_cast<std::size_t>(j)];
        const double g = norm(pi - pj);
        if (g > v_max)
            throw KernelBoundError("relative speed exceeds the majorant");
        if (rng.uniform() * v_max >= g) continue;
        // Contact direction by rejection against the hard-sphere kernel
        // |<eta, g_hat>| (uniform direction otherwise).
        Vec3 ghat = (pi - pj) * (1.0 / g);
        Vec3 eta;
        for (;;) {
            eta = rng.unit_sphere();
            if (rng.uniform() < std::abs(dot(eta, ghat))) break;
        }
        auto [pis, pjs] = collide(pi, pj, eta);
        pi = pis;
        pj = pjs;
        ++accepted;
    }
    if (stats) stats->accepted = accepted;
    return out;
}

double h_functional(const MomentumEnsemble& ens, const HistogramSpec& bins) {
    const long n = static_cast<long>(ens.momenta.size());
    if (n < 2) throw ConfigError("ensemble too small for a histogram");
    const int b = bins.bins;
    if (b < 2) throw ConfigError("need at least 2 bins per axis");

    Vec3 mean{0, 0, 0};
    for (const Vec3& p : ens.momenta) mean = mean + p;
    mean = mean * (1.0 / static_cast<double>(n));

    double hw[3];
    if (bins.half_width > 0.0) {
        hw[0] = hw[1] = hw[2] = bins.half_width;
    } else {
        // Per-axis width from the sample spread; out-of-range tails are
        // clamped into the edge cells.
        double var[3] = {0, 0, 0};
        for (const Vec3& p : ens.momenta) {
            Vec3 d = p - mean;
            var[0] += d.x * d.x;
            var[1] += d.y * d.y;
            var[2] += d.z * d.z;
        }
        for (int a = 0; a < 3; ++a)
            hw[a] = 2.8 * std::sqrt(var[a] / static_cast<double>(n)) + 1e-300;
    }

    std::vector<long> counts(static_cast<std::size_t>(b) * b * b, 0);
    auto cell_index = [&](double u, double w) {
        int k = static_cast<int>((u + w) / (2.0 * w) * b);
        return std::clamp(k, 0, b - 1);
    };
    for (const Vec3& p : ens.momenta) {
        Vec3 d = p - mean;
        std::size_t idx =
            (static_cast<std::size_t>(cell_index(d.x, hw[0])) * b +
             static_cast<std::size_t>(cell_index(d.y, hw[1]))) * b +
            static_cast<std::size_t>(cell_index(d.z, hw[2]));
        ++counts[idx];
    }

    long k_nz = 0;
    double s_plug = 0.0;
    for (long c : counts) {
        if (c == 0) continue;
        ++k_nz;
        double q = static_cast<double>(c) / static_cast<double>(n);
        s_plug -= q * std::log(q);
    }
    const std::size_t k_total = counts.size();
    if (static_cast<double>(k_total - static_cast<std::size_t>(k_nz)) >
        0.5 * static_cast<double>(k_total))
        throw ResolutionError("more than half of the histogram cells are empty");

    double cell_vol = 1.0;
    for (int a = 0; a < 3; ++a) cell_vol *= 2.0 * hw[a] / b;
    double entropy = s_plug + std::log(cell_vol) +
                     static_cast<double>(k_nz - 1) / (2.0 * static_cast<double>(n));
    return ens.rho * (std::log(ens.rho) - entropy);
}

McReal enskog_collision_term(const OnePointEvaluator& G1, const PhasePoint& x1,
                             double sigma, long samples, std::uint64_t seed,
                             double beta_prop) {
    if (samples < 2) throw ConfigError("need at least 2 samples");
    auto val = [&](const Vec3& q, const Vec3& p) {
        double v = G1(PhasePoint{q, p});
        if (v < 0.0) throw DomainError("negative one-point phase density");
        return v;
    };
    const double f1 = val(x1.q, x1.p);
    std::vector<double> vals(static_cast<std::size_t>(samples));
    for (long i = 0; i < samples; ++i) {
        CounterRng rng(CounterRng::derive_key(seed, 2,
                                              static_cast<std::uint64_t>(i)));
        Vec3 p2 = rng.gaussian3(beta_prop);
        double wp = 1.0 / gaussian3_density(p2, beta_prop);
        Vec3 eta = rng.unit_sphere();
        double k = dot(eta, x1.p - p2);
        double v = 0.0;
        if (k > 0.0) {
            auto [p1s, p2s] = collide(x1.p, p2, eta);
            v = wp * kFourPi * k *
                (val(x1.q, p1s) * val(x1.q - eta * sigma, p2s) -
                 f1 * val(x1.q + eta * sigma, p2));
        }
        vals[static_cast<std::size_t>(i)] = v;
    }
    MeanErr me = mean_and_error(vals);
    return {sigma * sigma * me.mean, sigma * sigma * me.std_error};
}

StateEvaluator hat_cumulant(double t, std::vector<int> idx, StateEvaluator f) {
    return [t, idx = std::move(idx), f = std::move(f)](const SystemState& x) {
        std::vector<std::vector<int>> clusters;
        clusters.reserve(idx.size());
        for (int i : idx) clusters.push_back({i});
        StateEvaluator operand = [&](const SystemState& y) -> double {
            for (std::size_t a = 0; a + 1 < idx.size(); ++a)
                for (std::size_t b = a + 1; b < idx.size(); ++b) {
                    Vec3 d = y.points[static_cast<std::size_t>(idx[a])].q -
                             y.points[static_cast<std::size_t>(idx[b])].q;
                    if (norm(d) < y.sigma * (1.0 - kGeomTol)) return 0.0;
                }
            SystemState z = y;
            for (int i : idx) {
                PhasePoint& pt = z.points[static_cast<std::size_t>(i)];
                pt.q = pt.q + pt.p * t;
            }
            return f(z);
        };
        return cumulant_apply(t, clusters, operand, x);
    };
}

double scattering_cumulant_apply(double t, std::size_t s, int n,
                                 const OnePointEvaluator& g1_t,
                                 const SystemState& x) {
    if (n != 0 && n != 1)
        throw ConfigError("scattering cumulants implemented for 0 or 1 added spheres");
    if (x.size() != s + static_cast<std::size_t>(n))
        throw ConfigError("state size must equal s + n");
    const std::size_t m = s + static_cast<std::size_t>(n);
    StateEvaluator prod = [&g1_t, m](const SystemState& y) {
        double v = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            double g = g1_t(y.points[i]);
            if (g < 0.0) throw DomainError("negative one-particle factor");
            v *= g;
        }
        return v;
    };
    std::vector<int> base(s);
    std::iota(base.begin(), base.end(), 0);
    if (n == 0) return hat_cumulant(t, base, prod)(x);

    std::vector<int> all(s + 1);
    std::iota(all.begin(), all.end(), 0);
    double term1 = hat_cumulant(t, all, prod)(x);
    double sub = 0.0;
    for (int j = 0; j < static_cast<int>(s); ++j) {
        StateEvaluator inner = hat_cumulant(t, {j, static_cast<int>(s)}, prod);
        sub += hat_cumulant(t, base, inner)(x);
    }
    return term1 - sub;
}

ReducedEstimate correlation_functional_G2(double t, const PhasePoint& x1,
                                          const PhasePoint& x2, double sigma,
                                          const OnePointEvaluator& g1_t,
                                          const QuadratureSpec& spec) {
    SystemState pair{sigma, {x1, x2}};
    OrderContribution c0;
    c0.order = 0;
    c0.value = scattering_cumulant_apply(t, 2, 0, g1_t, pair);

    OrderContribution c1 = mc_sample_order(
        1, spec, 0xC2, [&](const std::vector<PhasePoint>& pts) {
            SystemState y{sigma, {x1, x2, pts[0]}};
            return scattering_cumulant_apply(t, 2, 1, g1_t, y);
        });

    ReducedEstimate est;
    est.value = c0.value + c1.value;
    est.std_error = c1.std_error;
    est.per_order = {c0, c1};
    return est;
}

namespace {

// Order-1 term of the one-particle correlation series for diameter eps,
// integrated over the unobserved sphere on the exact strata where the pair
// cumulant is nonzero: the backward collision cylinder (relative offset
// y = eps*eta + w*tau, measure eps^2 <eta,w>_+ deta dtau) and the overlap
// ball |y| < eps where only the free-flight term survives with sign -1.
MeanErr bg_order1_magnitude(double t, double eps, const OnePointEvaluator& g1_0,
                            const PhasePoint& probe, const QuadratureSpec& spec) {
    const long n_samp = spec.samples_per_order;
    std::vector<double> vals(static_cast<std::size_t>(n_samp));
    const double ball_vol = (4.0 / 3.0) * std::numbers::pi * eps * eps * eps;

    auto pair_value = [&](const PhasePoint& a, const PhasePoint& b,
                          double sep_scale) {
        Vec3 d = a.q - b.q;
        if (norm(d) < sep_scale * (1.0 - kGeomTol)) return 0.0;
        return g1_0(a) * g1_0(b);
    };

    // Shared streams across eps values (common random numbers) so the
    // log-log slope is not washed out by independent noise.
    std::vector<double> out = parallel_map(n_samp, spec.workers, [&](long i) {
        CounterRng rng(CounterRng::derive_key(
            stream_seed(spec.seed, 0xB6, 1),
            static_cast<std::uint64_t>(i % spec.workers),
            static_cast<std::uint64_t>(i)));
        Vec3 p2 = rng.gaussian3(spec.beta_prop);
        const double wp = 1.0 / gaussian3_density(p2, spec.beta_prop);
        const Vec3 w = p2 - probe.p;

        double v = 0.0;
        // Cylinder stratum: first backward contact at time tau in (0, t].
        Vec3 eta = rng.unit_sphere();
        double k = dot(eta, w);
        if (k > 0.0) {
            double tau = rng.uniform_pos() * t;
            PhasePoint x2{probe.q + eta * eps + w * tau, p2};
            SystemState st{eps, {probe, x2}};
            SystemState back = flow(st, -t);
            double b_flow = g1_0(back.points[0]) * g1_0(back.points[1]);
            PhasePoint f1{probe.q - probe.p * t, probe.p};
            PhasePoint f2{x2.q - x2.p * t, x2.p};
            double b_free = pair_value(f1, f2, eps);
            v += wp * kFourPi * t * eps * eps * k * (b_flow - b_free);
        }
        // Overlap-ball stratum: forbidden now, so only -free survives.
        Vec3 y = rng.uniform_ball(eps);
        PhasePoint x2b{probe.q + y, p2};
        PhasePoint f1{probe.q - probe.p * t, probe.p};
        PhasePoint f2b{x2b.q - x2b.p * t, x2b.p};
        v -= wp * ball_vol * pair_value(f1, f2b, eps);
        return v;
    });
    vals = std::move(out);
    return mean_and_error(vals);
}

} // namespace

ScalingResult bg_scaling_probe(double t, int s, int n,
                               const std::vector<double>& epsilons,
                               const OnePointEvaluator& g1_0,
                               const PhasePoint& probe,
                               const QuadratureSpec& spec) {
    if (s != 1 || (n != 0 && n != 1))
        throw ConfigError("scaling probe implemented for s = 1, n in {0, 1}");
    if (epsilons.size() < 3)
        throw ConfigError("scaling probe needs at least 3 diameters");
    for (std::size_t i = 0; i + 1 < epsilons.size(); ++i)
        if (!(epsilons[i] > epsilons[i + 1]))
            throw ConfigError("diameters must be strictly decreasing");

    ScalingResult res;
    for (double eps : epsilons) {
        ScalingPoint pt;
        pt.eps = eps;
        if (n == 0) {
            // Leading term: free backward flight, independent of the diameter.
            PhasePoint back{probe.q - probe.p * t, probe.p};
            pt.magnitude = std::abs(g1_0(back));
            pt.std_error = 0.0;
        } else {
            MeanErr me = bg_order1_magnitude(t, eps, g1_0, probe, spec);
            pt.magnitude = std::abs(me.mean);
            pt.std_error = me.std_error;
        }
        res.points.push_back(pt);
        if (pt.magnitude <= 2.0 * pt.std_error && !(n == 0 && pt.magnitude > 0.0))
            res.conclusive = false;
    }

    // Weighted-free least squares of log magnitude against log eps.
    const std::size_t m = res.points.size();
    double lbar = 0.0, ybar = 0.0;
    std::vector<double> l(m), yv(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (res.points[i].magnitude <= 0.0) {
            res.conclusive = false;
            return res;
        }
        l[i] = std::log(res.points[i].eps);
        yv[i] = std::log(res.points[i].magnitude);
        lbar += l[i];
        ybar += yv[i];
    }
    lbar /= static_cast<double>(m);
    ybar /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0, var = 0.0;
    for (std::size_t i = 0; i < m; ++i) sxx += (l[i] - lbar) * (l[i] - lbar);
    for (std::size_t i = 0; i < m; ++i) {
        double c = (l[i] - lbar) / sxx;
        sxy += (l[i] - lbar) * (yv[i] - ybar);
        double rel = res.points[i].std_error / res.points[i].magnitude;
        var += c * c * rel * rel;
    }
    res.slope = sxy / sxx;
    res.slope_error = std::sqrt(var);
    return res;
}

Moments ensemble_moments(const MomentumEnsemble& ens) {
    Moments mo;
    mo.n = static_cast<long>(ens.momenta.size());
    if (mo.n == 0) return mo;
    for (const Vec3& p : ens.momenta) mo.mean = mo.mean + p;
    mo.mean = mo.mean * (1.0 / static_cast<double>(mo.n));
    double s2 = 0.0, s4 = 0.0;
    for (const Vec3& p : ens.momenta) {
        double d2 = norm2(p - mo.mean);
        s2 += d2;
        s4 += d2 * d2;
    }
    mo.temperature = s2 / (3.0 * static_cast<double>(mo.n));
    mo.m4 = s4 / static_cast<double>(mo.n);
    return mo;
}

MomentumEnsemble maxwellian_ensemble(long n, double rho, double beta,
                                     std::uint64_t seed) {
    MomentumEnsemble ens;
    ens.rho = rho;
    ens.momenta.resize(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        CounterRng rng(CounterRng::derive_key(seed, 3,
                                              static_cast<std::uint64_t>(i)));
        ens.momenta[static_cast<std::size_t>(i)] = rng.gaussian3(beta);
    }
    return ens;
}

MomentumEnsemble bimodal_ensemble(long n, double rho, double beta, double drift,
                                  std::uint64_t seed) {
    MomentumEnsemble ens = maxwellian_ensemble(n, rho, beta, seed);
    for (long i = 0; i < n; ++i) {
        double sign = (i % 2 == 0) ? 1.0 : -1.0;
        ens.momenta[static_cast<std::size_t>(i)].x += sign * drift;
    }
    return ens;
}

void emit_timeseries_header(std::ostream& os) {
    os << "t,rho,px,py,pz,T,H\n";
}

void emit_timeseries_row(std::ostream& os, double t, const MomentumEnsemble& ens,
                         double h_value) {
    Moments mo = ensemble_moments(ens);
    os << std::setprecision(17) << t << ',' << ens.rho << ',' << mo.mean.x << ','
       << mo.mean.y << ',' << mo.mean.z << ',' << mo.temperature << ','
       << h_value << '\n';
}

void emit_scaling_header(std::ostream& os) {
    os << "eps,n,magnitude,std_error\n";
}

void emit_scaling_row(std::ostream& os, int n, const ScalingPoint& pt) {
    os << std::setprecision(17) << pt.eps << ',' << n << ',' << pt.magnitude
       << ',' << pt.std_error << '\n';
}

} // namespace hsc
