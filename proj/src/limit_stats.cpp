#include "torwalk/limit_stats.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace torwalk {

namespace {

template <typename Fn>
void parallel_replicas(long reps, int threads, Fn&& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || reps < 2 * threads) {
        for (long r = 0; r < reps; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (long r = t; r < reps; r += threads) fn(r);
        });
    for (auto& th : pool) th.join();
}

std::vector<long> default_checkpoints(long n) {
    std::vector<long> cps;
    long k = 1;
    while (k < n) {
        cps.push_back(k);
        long next = static_cast<long>(std::ceil(static_cast<double>(k) * 1.25));
        k = std::max(next, k + 1);
    }
    cps.push_back(n);
    return cps;
}

}  // namespace

LlnResult lln_check(const TestFunction& f, const FiniteSupportMeasure& mu,
                    std::span<const double> x0, long n, RngStream rng, long envelope_reps) {
    if (std::isnan(f.mean_ref)) throw std::invalid_argument("lln_check: mean_ref required");
    FloatWalker walker(mu);
    LlnResult out;
    out.ns = default_checkpoints(n);

    {
        RngStream stream = rng.derived(0);
        std::vector<double> x(x0.begin(), x0.end());
        double s = 0.0;
        std::size_t ci = 0;
        for (long k = 0; k < n; ++k) {
            s += f(x) - f.mean_ref;
            walker.step(x, stream);
            while (ci < out.ns.size() && out.ns[ci] == k + 1) {
                out.series.push_back(s / static_cast<double>(k + 1));
                ++ci;
            }
        }
    }
    double env = 0.0;
    for (long r = 1; r <= envelope_reps; ++r) {
        RngStream stream = rng.derived(static_cast<std::uint64_t>(r));
        std::vector<double> x(x0.begin(), x0.end());
        double s = 0.0;
        for (long k = 0; k < n; ++k) {
            s += f(x) - f.mean_ref;
            walker.step(x, stream);
        }
        env = std::max(env, std::abs(s / static_cast<double>(n)));
    }
    out.envelope_max = env;
    out.envelope_trajectories = envelope_reps;
    return out;
}

VarianceEstimate sigma2_estimate(const TestFunction& f, const FiniteSupportMeasure& mu, int N,
                                 IntegrationMode mode, RngStream rng, long reps, int threads) {
    PoissonSolution sol = poisson_solve(f, mu, N, rng.derived(0xF00Dull));
    const int d = mu.dim();

    std::vector<std::vector<double>> points;
    if (mode == IntegrationMode::Grid) {
        if (d > 2) throw std::invalid_argument("sigma2_estimate: grid mode is d <= 2");
        const long side = d == 1 ? 4096 : 64;
        if (d == 1) {
            for (long i = 0; i < side; ++i)
                points.push_back({(static_cast<double>(i) + 0.5) / static_cast<double>(side)});
        } else {
            for (long i = 0; i < side; ++i)
                for (long j = 0; j < side; ++j)
                    points.push_back({(static_cast<double>(i) + 0.5) / static_cast<double>(side),
                                      (static_cast<double>(j) + 0.5) / static_cast<double>(side)});
        }
    }

    const long total = mode == IntegrationMode::Grid
                           ? static_cast<long>(points.size()) *
                                 std::max<long>(1, reps / static_cast<long>(points.size()))
                           : reps;
    const long per_point = mode == IntegrationMode::Grid
                               ? std::max<long>(1, reps / static_cast<long>(points.size()))
                               : 1;

    std::vector<double> g2(static_cast<std::size_t>(total));
    std::vector<double> pg2(static_cast<std::size_t>(total));
    parallel_replicas(total, threads, [&](long r) {
        RngStream stream = rng.derived(0x100000000ull + static_cast<std::uint64_t>(r));
        std::vector<double> x;
        if (mode == IntegrationMode::Grid) {
            x = points[static_cast<std::size_t>(r / per_point)];
        } else {
            x.resize(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = stream.next_real53();
        }
        // independent draws; products estimate the squared expectations
        const double y1 = sol.draw_gN(x, stream);
        const double y2 = sol.draw_gN(x, stream);
        const double z1 = sol.draw_PgN(x, stream);
        const double z2 = sol.draw_PgN(x, stream);
        g2[static_cast<std::size_t>(r)] = y1 * y2;
        pg2[static_cast<std::size_t>(r)] = z1 * z2;
    });

    RunningStats diff, sg2, spg2;
    for (long r = 0; r < total; ++r) {
        diff.add(g2[static_cast<std::size_t>(r)] - pg2[static_cast<std::size_t>(r)]);
        sg2.add(g2[static_cast<std::size_t>(r)]);
        spg2.add(pg2[static_cast<std::size_t>(r)]);
    }
    VarianceEstimate est;
    est.sigma2_hat = diff.mean();
    est.stderr_ = diff.stderr_();
    est.comp_g2 = sg2.mean();
    est.comp_pg2 = spg2.mean();
    est.N = N;
    est.negative_flag = est.sigma2_hat < -4.0 * est.stderr_;
    return est;
}

BoundedSumResult bounded_sum_check(const FiniteSupportMeasure& mu,
                                   std::span<const std::vector<double>> x0_grid, long n,
                                   long reps, RngStream rng) {
    const TestFunction f = tf_coboundary_dist0(mu);
    FloatWalker walker(mu);
    BoundedSumResult out;
    const long per_start =
        std::max<long>(1, reps / std::max<std::size_t>(1, x0_grid.size()));
    for (std::size_t s = 0; s < x0_grid.size(); ++s) {
        for (long r = 0; r < per_start; ++r) {
            RngStream stream = rng.derived(s * 1000003ull + static_cast<std::uint64_t>(r));
            std::vector<double> x = x0_grid[s];
            const double g0_start = dist0_euclidean(x);
            double sum = 0.0;
            for (long k = 0; k < n; ++k) {
                sum += f(x);
                walker.step(x, stream);
                out.max_abs_sum = std::max(out.max_abs_sum, std::abs(sum));
            }
            const double residual = std::abs(sum - (g0_start - dist0_euclidean(x)));
            out.max_residual = std::max(out.max_residual, residual);
            ++out.trajectories;
        }
    }
    return out;
}

std::vector<ExceedanceCurve> nonconcentration_curve(const TestFunction& f,
                                                    const FiniteSupportMeasure& mu,
                                                    std::span<const double> x0,
                                                    std::span<const double> eps_list,
                                                    std::span<const long> n_list, long reps,
                                                    RngStream rng, bool scale_by_norm,
                                                    int threads) {
    if (std::isnan(f.mean_ref))
        throw std::invalid_argument("nonconcentration_curve: mean_ref required");
    const double scale = scale_by_norm ? f.norm_alpha() : 1.0;
    FloatWalker walker(mu);
    long n_max = 0;
    for (long n : n_list) n_max = std::max(n_max, n);

    // shared samples across the eps grid: exceedance is monotone in eps
    std::vector<std::vector<double>> abs_sums(
        n_list.size(), std::vector<double>(static_cast<std::size_t>(reps)));
    parallel_replicas(reps, threads, [&](long r) {
        RngStream stream = rng.derived(static_cast<std::uint64_t>(r));
        std::vector<double> x(x0.begin(), x0.end());
        double s = 0.0;
        for (long k = 0; k < n_max; ++k) {
            s += f(x) - f.mean_ref;
            walker.step(x, stream);
            for (std::size_t i = 0; i < n_list.size(); ++i)
                if (n_list[i] == k + 1)
                    abs_sums[i][static_cast<std::size_t>(r)] = std::abs(s);
        }
    });

    std::vector<ExceedanceCurve> out;
    for (double eps : eps_list) {
        ExceedanceCurve curve;
        curve.eps = eps;
        curve.threshold_scale = scale;
        for (std::size_t i = 0; i < n_list.size(); ++i) {
            const double threshold = static_cast<double>(n_list[i]) * eps * scale;
            std::size_t hits = 0;
            for (double v : abs_sums[i])
                if (v > threshold) ++hits;
            curve.ns.push_back(n_list[i]);
            curve.probs.push_back(static_cast<double>(hits) / static_cast<double>(reps));
            curve.stderrs.push_back(wilson_stderr(hits, static_cast<std::size_t>(reps)));
        }
        out.push_back(std::move(curve));
    }
    return out;
}

CltSamples clt_sample(const TestFunction& f, const FiniteSupportMeasure& mu,
                      std::span<const double> x0, long n, long reps, RngStream rng,
                      int threads) {
    if (n < 100) throw std::invalid_argument("clt_sample: n >= 100");
    FloatWalker walker(mu);
    CltSamples out;
    out.n = n;
    out.final_value.resize(static_cast<std::size_t>(reps));
    out.running_max.resize(static_cast<std::size_t>(reps));
    out.time_avg.resize(static_cast<std::size_t>(reps));
    const double root_n = std::sqrt(static_cast<double>(n));
    parallel_replicas(reps, threads, [&](long r) {
        RngStream stream = rng.derived(static_cast<std::uint64_t>(r));
        std::vector<double> x(x0.begin(), x0.end());
        double s = 0.0, mx = 0.0;
        KahanSum avg;
        for (long k = 0; k < n; ++k) {
            s += f(x) - f.mean_ref;
            walker.step(x, stream);
            mx = std::max(mx, s);
            avg.add(s);
        }
        out.final_value[static_cast<std::size_t>(r)] = s / root_n;
        out.running_max[static_cast<std::size_t>(r)] = mx / root_n;
        out.time_avg[static_cast<std::size_t>(r)] =
            avg.sum() / static_cast<double>(n) / root_n;
    });
    return out;
}

CltSamples gaussian_walk_oracle(double sigma2, long n, long paths, RngStream rng,
                                int threads) {
    if (sigma2 < 0.0) throw std::invalid_argument("gaussian_walk_oracle: sigma2 >= 0");
    const double sigma = std::sqrt(sigma2);
    CltSamples out;
    out.n = n;
    out.final_value.resize(static_cast<std::size_t>(paths));
    out.running_max.resize(static_cast<std::size_t>(paths));
    out.time_avg.resize(static_cast<std::size_t>(paths));
    const double root_n = std::sqrt(static_cast<double>(n));
    parallel_replicas(paths, threads, [&](long r) {
        RngStream stream = rng.derived(static_cast<std::uint64_t>(r));
        double s = 0.0, mx = 0.0;
        KahanSum avg;
        for (long k = 0; k < n; ++k) {
            s += sigma * stream.next_normal();
            mx = std::max(mx, s);
            avg.add(s);
        }
        out.final_value[static_cast<std::size_t>(r)] = s / root_n;
        out.running_max[static_cast<std::size_t>(r)] = mx / root_n;
        out.time_avg[static_cast<std::size_t>(r)] =
            avg.sum() / static_cast<double>(n) / root_n;
    });
    return out;
}

AscltSeries asclt_average(const TestFunction& f, const FiniteSupportMeasure& mu,
                          std::span<const double> x0,
                          const std::function<double(double)>& phi, long n_max, RngStream rng,
                          std::span<const long> checkpoints) {
    FloatWalker walker(mu);
    AscltSeries out;
    std::vector<long> cps(checkpoints.begin(), checkpoints.end());
    if (cps.empty()) cps = default_checkpoints(n_max);
    std::sort(cps.begin(), cps.end());

    RngStream stream = rng.derived(0);
    std::vector<double> x(x0.begin(), x0.end());
    double s = 0.0;
    KahanSum harmonic;
    std::size_t ci = 0;
    for (long k = 1; k <= n_max; ++k) {
        s += f(x) - f.mean_ref;
        walker.step(x, stream);
        harmonic.add(phi(s / std::sqrt(static_cast<double>(k))) / static_cast<double>(k));
        while (ci < cps.size() && cps[ci] == k) {
            out.ns.push_back(k);
            out.averages.push_back(k >= 2 ? harmonic.sum() / std::log(static_cast<double>(k))
                                          : harmonic.sum());
            ++ci;
        }
    }
    return out;
}

}  // namespace torwalk
