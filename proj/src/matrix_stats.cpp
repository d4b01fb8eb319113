#include "torwalk/matrix_stats.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace torwalk {

namespace {

void matmul(const std::vector<double>& a, const std::vector<double>& b, std::vector<double>& out,
            int d) {
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k)
                s += a[static_cast<std::size_t>(i * d + k)] * b[static_cast<std::size_t>(k * d + j)];
            out[static_cast<std::size_t>(i * d + j)] = s;
        }
}

// simple deterministic replica parallelism: results land in replica order
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

}  // namespace

MatrixAtoms linear_atoms(const FiniteSupportMeasure& mu) {
    MatrixAtoms out;
    out.d = mu.dim();
    double acc = 0.0;
    for (const auto& atom : mu.atoms()) {
        out.mats.push_back(atom.g.linear().to_double());
        acc += atom.weight.get_d();
        out.cum.push_back(acc);
        out.log_norms.push_back(std::log(spectral_norm(out.mats.back(), out.d)));
    }
    out.cum.back() = 1.0;
    return out;
}

MatrixAtoms affine_embed(const FiniteSupportMeasure& mu) {
    MatrixAtoms out;
    const int d = mu.dim();
    out.d = d + 1;
    double acc = 0.0;
    for (const auto& atom : mu.atoms()) {
        std::vector<double> m(static_cast<std::size_t>(out.d) * out.d, 0.0);
        auto lin = atom.g.linear().to_double();
        auto b = atom.g.translation_numeric();
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j)
                m[static_cast<std::size_t>(i * out.d + j)] = lin[static_cast<std::size_t>(i * d + j)];
            m[static_cast<std::size_t>(i * out.d + d)] = b[static_cast<std::size_t>(i)];
        }
        m[static_cast<std::size_t>(d * out.d + d)] = 1.0;
        out.mats.push_back(std::move(m));
        acc += atom.weight.get_d();
        out.cum.push_back(acc);
        out.log_norms.push_back(std::log(spectral_norm(out.mats.back(), out.d)));
    }
    out.cum.back() = 1.0;
    return out;
}

double log_norm_product(const MatrixAtoms& mu0, long n, RngStream& rng) {
    const int d = mu0.d;
    std::vector<double> prod(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) prod[static_cast<std::size_t>(i * d + i)] = 1.0;
    std::vector<double> tmp(prod.size());
    double log_acc = 0.0;
    for (long k = 0; k < n; ++k) {
        const std::size_t a = mu0.sample(rng);
        matmul(mu0.mats[a], prod, tmp, d);
        prod.swap(tmp);
        if ((k + 1) % kRenormStride == 0 || k + 1 == n) {
            const double nrm = spectral_norm(prod, d);
            if (nrm <= 0.0) throw std::runtime_error("log_norm_product: singular product");
            log_acc += std::log(nrm);
            for (auto& v : prod) v /= nrm;
        }
    }
    return log_acc;
}

LyapunovEstimate lyapunov_top(const MatrixAtoms& mu0, long n, long reps, RngStream rng,
                              int threads) {
    if (n < 1 || reps < 1) throw std::invalid_argument("lyapunov_top: n, reps >= 1");
    std::vector<double> vals(static_cast<std::size_t>(reps));
    parallel_replicas(reps, threads, [&](long r) {
        RngStream stream = rng.derived(static_cast<std::uint64_t>(r));
        vals[static_cast<std::size_t>(r)] =
            log_norm_product(mu0, n, stream) / static_cast<double>(n);
    });
    RunningStats st;
    for (double v : vals) st.add(v);
    return {st.mean(), st.stderr_(), n, reps};
}

TailCurve ldp_tail(const MatrixAtoms& mu0, double lambda_ref, double eps,
                   std::span<const long> ns, long reps, RngStream rng, int threads) {
    if (eps <= 0.0) throw std::invalid_argument("ldp_tail: eps > 0");
    TailCurve out;
    out.epsilon = eps;
    long n_max = 0;
    for (long n : ns) n_max = std::max(n_max, n);
    std::vector<std::vector<std::uint8_t>> hits(
        ns.size(), std::vector<std::uint8_t>(static_cast<std::size_t>(reps), 0));
    parallel_replicas(reps, threads, [&](long r) {
        RngStream stream = rng.derived(static_cast<std::uint64_t>(r));
        const int d = mu0.d;
        std::vector<double> prod(static_cast<std::size_t>(d) * d, 0.0);
        for (int i = 0; i < d; ++i) prod[static_cast<std::size_t>(i * d + i)] = 1.0;
        std::vector<double> tmp(prod.size());
        double log_acc = 0.0;
        long k = 0;
        for (long step = 1; step <= n_max; ++step) {
            const std::size_t a = mu0.sample(stream);
            matmul(mu0.mats[a], prod, tmp, d);
            prod.swap(tmp);
            bool checkpoint = step % kRenormStride == 0;
            for (std::size_t i = 0; i < ns.size(); ++i) checkpoint |= ns[i] == step;
            if (checkpoint) {
                const double nrm = spectral_norm(prod, d);
                log_acc += std::log(nrm);
                for (auto& v : prod) v /= nrm;
                for (std::size_t i = 0; i < ns.size(); ++i)
                    if (ns[i] == step) {
                        const double stat = log_acc / static_cast<double>(step);
                        hits[i][static_cast<std::size_t>(r)] =
                            std::abs(stat - lambda_ref) >= eps ? 1 : 0;
                    }
            }
            (void)k;
        }
    });
    for (std::size_t i = 0; i < ns.size(); ++i) {
        std::size_t h = 0;
        for (auto b : hits[i]) h += b;
        out.ns.push_back(ns[i]);
        out.probs.push_back(static_cast<double>(h) / static_cast<double>(reps));
        out.stderrs.push_back(wilson_stderr(h, static_cast<std::size_t>(reps)));
    }
    return out;
}

ExponentEquality exponent_equality_check(const FiniteSupportMeasure& mu, long n, long reps,
                                         RngStream rng, int threads) {
    ExponentEquality out;
    bool linear_only = true;
    for (const auto& atom : mu.atoms()) {
        for (double v : atom.g.translation_numeric())
            if (v != 0.0) linear_only = false;
    }
    out.linear_only = linear_only;
    const MatrixAtoms embedded = affine_embed(mu);
    const MatrixAtoms lin = linear_atoms(mu);
    out.affine = lyapunov_top(embedded, n, reps, rng.derived(1), threads);
    out.linear = lyapunov_top(lin, n, reps, rng.derived(2), threads);
    const double se = std::hypot(out.affine.stderr_, out.linear.stderr_);
    out.z_score = se > 0.0 ? std::abs(out.affine.lambda1_hat - out.linear.lambda1_hat) / se
                           : std::abs(out.affine.lambda1_hat - out.linear.lambda1_hat) * 1e18;
    return out;
}

TailCurve translation_growth(const FiniteSupportMeasure& mu, std::vector<double> x,
                             double lambda_ref, double eps, std::span<const long> ns,
                             long reps, RngStream rng, int threads) {
    if (eps <= 0.0) throw std::invalid_argument("translation_growth: eps > 0");
    const int d = mu.dim();
    if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("translation_growth: x has wrong dimension");

    // atoms as (matrix, translation) pairs in doubles
    std::vector<std::vector<double>> mats;
    std::vector<std::vector<double>> trans;
    std::vector<double> cum;
    double acc = 0.0;
    for (const auto& atom : mu.atoms()) {
        mats.push_back(atom.g.linear().to_double());
        trans.push_back(atom.g.translation_numeric());
        acc += atom.weight.get_d();
        cum.push_back(acc);
    }
    cum.back() = 1.0;

    const double log1px = [&] {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::log1p(std::sqrt(s));
    }();

    long n_max = 0;
    for (long n : ns) n_max = std::max(n_max, n);
    std::vector<std::vector<std::uint8_t>> hits(
        ns.size(), std::vector<std::uint8_t>(static_cast<std::size_t>(reps), 0));

    parallel_replicas(reps, threads, [&](long r) {
        RngStream stream = rng.derived(static_cast<std::uint64_t>(r));
        // log-domain representation y = e^s u with ||u|| = 1; the zero vector
        // is a separate state. Three safe update regimes:
        //   zero:    y' = b
        //   s <  0:  y' = A (e^s u) + b          (all terms of size O(1))
        //   s >= 0:  y' = e^s (A u + e^{-s} b)   (e^{-s} <= 1, may underflow to 0)
        bool is_zero = true;
        double s = 0.0;
        std::vector<double> u(static_cast<std::size_t>(d), 0.0);
        {
            double nrm = 0.0;
            for (double v : x) nrm += v * v;
            nrm = std::sqrt(nrm);
            if (nrm > 0.0) {
                is_zero = false;
                s = std::log(nrm);
                for (int i = 0; i < d; ++i)
                    u[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] / nrm;
            }
        }
        std::vector<double> w(static_cast<std::size_t>(d));
        for (long step = 1; step <= n_max; ++step) {
            const double du = stream.next_real53();
            std::size_t a = cum.size() - 1;
            for (std::size_t i = 0; i + 1 < cum.size(); ++i)
                if (du < cum[i]) { a = i; break; }
            const bool additive = is_zero || s < 0.0;  // w is y' itself
            const double uscale = is_zero ? 0.0 : (s < 0.0 ? std::exp(s) : 1.0);
            const double bscale = additive ? 1.0 : std::exp(-s);
            double wn = 0.0;
            for (int i = 0; i < d; ++i) {
                double t = bscale * trans[a][static_cast<std::size_t>(i)];
                for (int j = 0; j < d; ++j)
                    t += mats[a][static_cast<std::size_t>(i * d + j)] * uscale *
                         u[static_cast<std::size_t>(j)];
                w[static_cast<std::size_t>(i)] = t;
                wn += t * t;
            }
            wn = std::sqrt(wn);
            if (wn == 0.0) {
                is_zero = true;
                s = 0.0;
            } else {
                s = additive ? std::log(wn) : s + std::log(wn);
                is_zero = false;
                for (int i = 0; i < d; ++i)
                    u[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / wn;
            }
            for (std::size_t i = 0; i < ns.size(); ++i)
                if (ns[i] == step) {
                    const double lognorm =
                        is_zero ? 0.0 : (s > 36.0 ? s : std::log1p(std::exp(s)));
                    const double stat = (lognorm - log1px) / static_cast<double>(step);
                    hits[i][static_cast<std::size_t>(r)] =
                        std::abs(stat - lambda_ref) >= eps ? 1 : 0;
                }
        }
    });

    TailCurve out;
    out.epsilon = eps;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        std::size_t h = 0;
        for (auto b : hits[i]) h += b;
        out.ns.push_back(ns[i]);
        out.probs.push_back(static_cast<double>(h) / static_cast<double>(reps));
        out.stderrs.push_back(wilson_stderr(h, static_cast<std::size_t>(reps)));
    }
    return out;
}

}  // namespace torwalk
