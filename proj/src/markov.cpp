#include "torwalk/markov.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "torwalk/errors.hpp"

namespace torwalk {

namespace {

std::string encode_exact_vec(std::span<const SymbolicScalar> v) {
    std::ostringstream os;
    for (const auto& s : v) os << s.encode() << ";";
    return os.str();
}

}  // namespace

ExactImageMeasure push_point(const FiniteSupportMeasure& mu, const TorusPoint& x, long n,
                             std::size_t cap) {
    if (mu.mode() != Mode::Exact || x.mode() != Mode::Exact)
        throw std::invalid_argument("push_point: exact mode required");
    ExactImageMeasure im;
    im.d = mu.dim();
    im.basis = mu.basis();
    im.atoms.emplace_back(x.exact_coords(), Rat(1));
    for (long step = 0; step < n; ++step) {
        std::vector<std::pair<std::vector<SymbolicScalar>, Rat>> next;
        std::unordered_map<Digest128, std::size_t, Digest128Hash> index;
        for (const auto& [pt, w] : im.atoms)
            for (const auto& atom : mu.atoms()) {
                std::vector<SymbolicScalar> y = atom.g.linear().apply(pt);
                for (std::size_t i = 0; i < y.size(); ++i) {
                    y[i] += atom.g.translation_exact()[i];
                    y[i].reduce_mod1();
                }
                Rat nw = w * atom.weight;
                Digest128 key = fnv128(encode_exact_vec(y));
                auto it = index.find(key);
                if (it == index.end()) {
                    if (next.size() >= cap)
                        throw CapacityError("push_point: image cap exceeded", step + 1);
                    index.emplace(key, next.size());
                    next.emplace_back(std::move(y), std::move(nw));
                } else {
                    next[it->second].second += nw;
                }
            }
        im.atoms = std::move(next);
    }
    return im;
}

ExactImageMeasure push_point_affine(const FiniteSupportMeasure& mu,
                                    std::span<const SymbolicScalar> x, long n,
                                    std::size_t cap) {
    if (mu.mode() != Mode::Exact)
        throw std::invalid_argument("push_point_affine: exact mode required");
    ExactImageMeasure im;
    im.d = mu.dim();
    im.basis = mu.basis();
    im.atoms.emplace_back(std::vector<SymbolicScalar>(x.begin(), x.end()), Rat(1));
    for (long step = 0; step < n; ++step) {
        std::vector<std::pair<std::vector<SymbolicScalar>, Rat>> next;
        std::unordered_map<Digest128, std::size_t, Digest128Hash> index;
        for (const auto& [pt, w] : im.atoms)
            for (const auto& atom : mu.atoms()) {
                std::vector<SymbolicScalar> y = act_affine(atom.g, pt);
                Rat nw = w * atom.weight;
                Digest128 key = fnv128(encode_exact_vec(y));
                auto it = index.find(key);
                if (it == index.end()) {
                    if (next.size() >= cap)
                        throw CapacityError("push_point_affine: image cap exceeded", step + 1);
                    index.emplace(key, next.size());
                    next.emplace_back(std::move(y), std::move(nw));
                } else {
                    next[it->second].second += nw;
                }
            }
        im.atoms = std::move(next);
    }
    return im;
}

ValueStderr apply_markov(const TestFunction& f, const TorusPoint& x,
                         const FiniteSupportMeasure& mu, long n, Method method, RngStream rng,
                         long reps, std::size_t cap) {
    if (f.d != mu.dim()) throw std::invalid_argument("apply_markov: dimension mismatch");
    if (method == Method::Exact) {
        ExactImageMeasure im = push_point(mu, x, n, cap);
        double acc = 0.0;
        for (const auto& [pt, w] : im.atoms) {
            std::vector<double> num(pt.size());
            for (std::size_t i = 0; i < pt.size(); ++i)
                num[i] = pt[i].eval_double_mod1(*im.basis);
            acc += w.get_d() * f(num);
        }
        return {acc, 0.0};
    }
    if (reps < 1) throw std::invalid_argument("apply_markov: mc needs reps >= 1");
    FloatWalker walker(mu);
    std::vector<double> x0 = x.numeric_coords();
    RunningStats stats;
    std::vector<double> pt;
    for (long r = 0; r < reps; ++r) {
        RngStream stream = rng.derived(static_cast<std::uint64_t>(r));
        pt = x0;
        for (long k = 0; k < n; ++k) walker.step(pt, stream);
        stats.add(f(pt));
    }
    return stats.value_stderr();
}

std::complex<double> fourier_coefficient(const EmpiricalTorusMeasure& theta,
                                         const FrequencyVector& c) {
    const double two_pi = 2.0 * std::numbers::pi;
    std::complex<double> acc(0.0, 0.0);
    if (theta.exact) {
        for (const auto& [pt, w] : theta.exact->atoms) {
            double phase = 0.0;
            for (std::size_t i = 0; i < pt.size(); ++i)
                phase += static_cast<double>(c.c[i]) * pt[i].eval_double_mod1(*theta.exact->basis);
            acc += w.get_d() * std::complex<double>(std::cos(two_pi * phase),
                                                    std::sin(two_pi * phase));
        }
        return acc;
    }
    const std::size_t cnt = theta.count();
    if (cnt == 0) throw std::invalid_argument("fourier_coefficient: empty measure");
    const int d = theta.d;
    for (std::size_t s = 0; s < cnt; ++s) {
        double phase = 0.0;
        for (int i = 0; i < d; ++i)
            phase += static_cast<double>(c.c[static_cast<std::size_t>(i)]) *
                     theta.samples[s * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)];
        acc += std::complex<double>(std::cos(two_pi * phase), std::sin(two_pi * phase));
    }
    return acc / static_cast<double>(cnt);
}

namespace {

// enumerate c with 0 < ||c||_inf <= K, one of each conjugate pair {c,-c}
std::vector<std::vector<long>> half_frequencies(int d, long K) {
    std::vector<std::vector<long>> out;
    std::vector<long> c(static_cast<std::size_t>(d), -K);
    for (;;) {
        bool nonzero = false, leading_positive = false;
        for (long v : c)
            if (v != 0) {
                nonzero = true;
                leading_positive = v > 0;
                break;
            }
        if (nonzero && leading_positive) out.push_back(c);
        int i = 0;
        for (; i < d; ++i) {
            if (c[static_cast<std::size_t>(i)] < K) {
                ++c[static_cast<std::size_t>(i)];
                break;
            }
            c[static_cast<std::size_t>(i)] = -K;
        }
        if (i == d) break;
    }
    return out;
}

}  // namespace

double fourier_distance(const EmpiricalTorusMeasure& theta, long K) {
    if (K < 1) throw std::invalid_argument("fourier_distance: K >= 1");
    double m = 0.0;
    for (auto& c : half_frequencies(theta.d, K))
        m = std::max(m, std::abs(fourier_coefficient(theta, FrequencyVector{c})));
    return m;
}

double test_bank_deviation(const EmpiricalTorusMeasure& theta,
                           std::span<const TestFunction> bank) {
    double worst = 0.0;
    for (const auto& f : bank) {
        if (std::isnan(f.mean_ref)) continue;
        double acc = 0.0;
        if (theta.exact) {
            for (const auto& [pt, w] : theta.exact->atoms) {
                std::vector<double> num(pt.size());
                for (std::size_t i = 0; i < pt.size(); ++i)
                    num[i] = pt[i].eval_double_mod1(*theta.exact->basis);
                acc += w.get_d() * f(num);
            }
        } else {
            const std::size_t cnt = theta.count();
            if (cnt == 0) throw std::invalid_argument("test_bank_deviation: empty measure");
            for (std::size_t s = 0; s < cnt; ++s)
                acc += f(std::span<const double>(
                    theta.samples.data() + s * static_cast<std::size_t>(theta.d),
                    static_cast<std::size_t>(theta.d)));
            acc /= static_cast<double>(cnt);
        }
        worst = std::max(worst, std::abs(acc - f.mean_ref));
    }
    return worst;
}

std::vector<TestFunction> default_test_bank(int d) {
    std::vector<TestFunction> bank;
    std::vector<long> e1(static_cast<std::size_t>(d), 0), e2 = e1, diag = e1;
    e1[0] = 1;
    if (d > 1) e2[1] = 1;
    diag[0] = 1;
    if (d > 1) diag[1] = -1;
    bank.push_back(tf_re_ec(e1));
    bank.push_back(tf_im_ec(e1));
    if (d > 1) {
        bank.push_back(tf_re_ec(e2));
        bank.push_back(tf_re_ec(diag));
    }
    bank.push_back(tf_fq(d, 3, 1.0));
    bank.push_back(tf_fq(d, 5, 1.0));
    if (d <= 2) bank.push_back(tf_dist0_euclid(d));
    return bank;
}

FourierAccumulator::FourierAccumulator(int d, long K) : d_(d), K_(K) {
    freqs_ = half_frequencies(d, K);
    sums_.assign(freqs_.size(), {0.0, 0.0});
}

void FourierAccumulator::add(std::span<const double> x) {
    const double two_pi = 2.0 * std::numbers::pi;
    // per-axis power tables e^{2 i pi k x_j}, k = 0..K
    const std::size_t cols = static_cast<std::size_t>(K_) + 1;
    std::complex<double> table[8 * 16];
    if (d_ > 8 || cols > 16) throw std::invalid_argument("FourierAccumulator: d or K too large");
    for (int j = 0; j < d_; ++j) {
        std::complex<double> base(std::cos(two_pi * x[static_cast<std::size_t>(j)]),
                                  std::sin(two_pi * x[static_cast<std::size_t>(j)]));
        std::complex<double> p(1.0, 0.0);
        for (std::size_t k = 0; k < cols; ++k) {
            table[static_cast<std::size_t>(j) * 16 + k] = p;
            p *= base;
        }
    }
    for (std::size_t fi = 0; fi < freqs_.size(); ++fi) {
        std::complex<double> v(1.0, 0.0);
        for (int j = 0; j < d_; ++j) {
            long k = freqs_[fi][static_cast<std::size_t>(j)];
            std::complex<double> t = table[static_cast<std::size_t>(j) * 16 +
                                           static_cast<std::size_t>(std::labs(k))];
            v *= k >= 0 ? t : std::conj(t);
        }
        sums_[fi] += v;
    }
    ++n_;
}

double FourierAccumulator::max_abs() const {
    if (n_ == 0) return 0.0;
    double m = 0.0;
    for (const auto& s : sums_) m = std::max(m, std::abs(s) / static_cast<double>(n_));
    return m;
}

FourierMoment fourier_moment_exact(const FiniteSupportMeasure& mu, const FrequencyVector& c,
                                   long n, int L, std::size_t cap) {
    if (mu.mode() != Mode::Exact)
        throw std::invalid_argument("fourier_moment_exact: exact mode required");
    if (L < 1 || L > 2) throw std::invalid_argument("fourier_moment_exact: L in {1,2}");
    const FiniteSupportMeasure pw = convolve_power(mu, n, cap);

    // group the power's atoms by the pushed frequency v = t(a) c
    struct Group {
        Rat w;
        std::complex<double> z;
    };
    const double two_pi = 2.0 * std::numbers::pi;
    std::map<std::vector<Int>, Group> groups;
    for (const auto& atom : pw.atoms()) {
        std::vector<Int> cv(c.c.begin(), c.c.end());
        std::vector<Int> v = atom.g.linear().transpose().apply(cv);
        double phase = 0.0;
        for (std::size_t i = 0; i < c.c.size(); ++i) {
            if (c.c[i] == 0) continue;
            phase += static_cast<double>(c.c[i]) *
                     atom.g.translation_exact()[i].eval_double_mod1(*mu.basis());
        }
        auto& g = groups[v];
        g.w += atom.weight;
        g.z += atom.weight.get_d() *
               std::complex<double>(std::cos(two_pi * phase), std::sin(two_pi * phase));
    }

    FourierMoment out;
    if (L == 1) {
        Rat lin(0);
        std::complex<double> aff(0.0, 0.0);
        for (const auto& [v, g] : groups) {
            lin += g.w * g.w;
            aff += g.z * std::conj(g.z);
        }
        out.linear_exact = lin;
        out.linear = lin.get_d();
        out.affine = aff.real();
        out.imag_residue = std::abs(aff.imag());
        return out;
    }
    // L = 2: additive self-convolution of the grouped data over keys v
    std::map<std::vector<Int>, Group> conv;
    for (const auto& [v1, g1] : groups)
        for (const auto& [v2, g2] : groups) {
            std::vector<Int> key(v1.size());
            for (std::size_t i = 0; i < key.size(); ++i) key[i] = v1[i] + v2[i];
            auto& g = conv[key];
            g.w += g1.w * g2.w;
            g.z += g1.z * g2.z;
        }
    Rat lin(0);
    std::complex<double> aff(0.0, 0.0);
    for (const auto& [v, g] : conv) {
        lin += g.w * g.w;
        aff += g.z * std::conj(g.z);
    }
    out.linear_exact = lin;
    out.linear = lin.get_d();
    out.affine = aff.real();
    out.imag_residue = std::abs(aff.imag());
    return out;
}

PoissonSolution poisson_solve(const TestFunction& f, const FiniteSupportMeasure& mu, int N,
                              RngStream rng, long probe_reps) {
    if (N < 1) throw std::invalid_argument("poisson_solve: N >= 1");
    if (std::isnan(f.mean_ref)) throw std::invalid_argument("poisson_solve: mean_ref required");
    const double mean = f.mean_ref;
    FloatWalker walker(mu);
    const int d = mu.dim();

    // Decay probe: |P^k f - mean| averaged over a small grid of starts. The
    // sentinel fires when the tail half shows no decrease.
    const int grid_side = d == 1 ? 16 : 8;
    std::vector<std::vector<double>> probes;
    if (d == 1) {
        for (int i = 0; i < grid_side; ++i)
            probes.push_back({(i + 0.5) / grid_side});
    } else {
        for (int i = 0; i < grid_side; ++i)
            for (int j = 0; j < grid_side; ++j) {
                std::vector<double> p(static_cast<std::size_t>(d), 0.0);
                p[0] = (i + 0.5) / grid_side;
                p[1] = (j + 0.5) / grid_side;
                probes.push_back(std::move(p));
            }
    }
    // per-point estimates of P^k f - mean; the profile averages |.| over the
    // probe grid so symmetric cancellations cannot mask a frozen walk
    const long reps_per_probe = std::max<long>(1, probe_reps / static_cast<long>(probes.size()));
    std::vector<std::vector<RunningStats>> per_point(
        probes.size(), std::vector<RunningStats>(static_cast<std::size_t>(N)));
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
        for (long r = 0; r < reps_per_probe; ++r) {
            RngStream stream = rng.derived(pi * 1000003ull + static_cast<std::uint64_t>(r));
            std::vector<double> x = probes[pi];
            for (int k = 0; k < N; ++k) {
                per_point[pi][static_cast<std::size_t>(k)].add(f(x) - mean);
                walker.step(x, stream);
            }
        }
    }
    std::vector<double> profile(static_cast<std::size_t>(N));
    std::vector<double> floor_est(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
        double acc = 0.0, se = 0.0;
        for (std::size_t pi = 0; pi < probes.size(); ++pi) {
            acc += std::abs(per_point[pi][static_cast<std::size_t>(k)].mean());
            se += per_point[pi][static_cast<std::size_t>(k)].stderr_();
        }
        profile[static_cast<std::size_t>(k)] = acc / static_cast<double>(probes.size());
        floor_est[static_cast<std::size_t>(k)] = se / static_cast<double>(probes.size());
    }

    // sentinel: the tail half neither decreases nor sits at the Monte-Carlo
    // noise floor
    if (N >= 4) {
        std::vector<double> xs, ys;
        for (int k = N / 2; k < N; ++k) {
            double v = std::max(profile[static_cast<std::size_t>(k)], 1e-300);
            xs.push_back(static_cast<double>(k));
            ys.push_back(std::log(v));
        }
        LineFit fit = least_squares(xs, ys);
        const bool still_large = profile.back() > 5.0 * floor_est.back() + 1e-9;
        if (fit.slope > -1e-3 && still_large)
            throw DivergenceSentinel("poisson_solve: |P^k f - mean| shows no decay");
    }

    PoissonSolution sol;
    sol.N = N;
    sol.mean_ref = mean;
    sol.decay_profile = std::move(profile);
    auto fcopy = f;  // keep the evaluator alive inside the closures
    sol.draw_gN = [walker, fcopy, mean, N](std::span<const double> x, RngStream& stream) {
        std::vector<double> pt(x.begin(), x.end());
        double acc = 0.0;
        for (int k = 0; k < N; ++k) {
            acc += fcopy(pt) - mean;
            walker.step(pt, stream);
        }
        return acc;
    };
    sol.draw_PgN = [walker, fcopy, mean, N](std::span<const double> x, RngStream& stream) {
        std::vector<double> pt(x.begin(), x.end());
        walker.step(pt, stream);  // fresh first step: g ~ mu
        double acc = 0.0;
        for (int k = 0; k < N; ++k) {
            acc += fcopy(pt) - mean;
            walker.step(pt, stream);
        }
        return acc;
    };
    return sol;
}

FqSeries fq_test(const FiniteSupportMeasure& mu, int q, double alpha, long n_max,
                 RngStream rng, long reps, std::size_t cap) {
    const TestFunction f = tf_fq(mu.dim(), q, alpha);
    FqSeries out;
    out.mean_ref = f.mean_ref;

    // Exact path when every translation is rational: the orbit of 0 is
    // confined and the image measure stays small.
    bool all_rational = mu.mode() == Mode::Exact;
    if (all_rational)
        for (const auto& atom : mu.atoms())
            for (const auto& s : atom.g.translation_exact())
                if (s.has_generator_part()) all_rational = false;

    if (all_rational) {
        out.exact = true;
        // exact rational distance to the grid (1/q)Z, so on-grid orbits give
        // the value 1 exactly rather than 1 minus float noise
        auto exact_value = [&](const std::vector<std::pair<std::vector<SymbolicScalar>, Rat>>&
                                   atoms) {
            Rat on_grid_weight(0);
            double acc = 0.0;
            for (const auto& [pt, w] : atoms) {
                Rat dist(0);
                for (const auto& s : pt) {
                    Rat t = s.rational() * q;
                    Int fl;
                    mpz_fdiv_q(fl.get_mpz_t(), t.get_num().get_mpz_t(),
                               t.get_den().get_mpz_t());
                    t -= Rat(fl);
                    Rat dcoord = t <= Rat(1, 2) ? t : Rat(1) - t;
                    dcoord /= q;
                    if (dcoord > dist) dist = dcoord;
                }
                if (dist == 0) {
                    on_grid_weight += w;
                } else {
                    acc += w.get_d() *
                           (1.0 - std::min(1.0, std::pow(static_cast<double>(q), 2.0 * alpha) *
                                                    std::pow(dist.get_d(), alpha)));
                }
            }
            if (on_grid_weight == 1) return 1.0;
            return acc + on_grid_weight.get_d();
        };
        ExactImageMeasure im;
        im.d = mu.dim();
        im.basis = mu.basis();
        im.atoms.emplace_back(
            std::vector<SymbolicScalar>(
                static_cast<std::size_t>(mu.dim()),
                SymbolicScalar::rational_value(Rat(0), mu.basis()->size())),
            Rat(1));
        for (long n = 0; n <= n_max; ++n) {
            out.ns.push_back(n);
            out.values.push_back(exact_value(im.atoms));
            out.stderrs.push_back(0.0);
            if (n < n_max) {
                std::vector<std::pair<std::vector<SymbolicScalar>, Rat>> merged;
                std::unordered_map<Digest128, std::size_t, Digest128Hash> index;
                for (const auto& [pt, w] : im.atoms)
                    for (const auto& atom : mu.atoms()) {
                        std::vector<SymbolicScalar> y = atom.g.linear().apply(pt);
                        for (std::size_t i = 0; i < y.size(); ++i) {
                            y[i] += atom.g.translation_exact()[i];
                            y[i].reduce_mod1();
                        }
                        Rat nw = w * atom.weight;
                        Digest128 key = fnv128(encode_exact_vec(y));
                        auto it = index.find(key);
                        if (it == index.end()) {
                            if (merged.size() >= cap)
                                throw CapacityError("fq_test: image cap exceeded", n + 1);
                            index.emplace(key, merged.size());
                            merged.emplace_back(std::move(y), std::move(nw));
                        } else {
                            merged[it->second].second += nw;
                        }
                    }
                im.atoms = std::move(merged);
            }
        }
        return out;
    }

    // Monte Carlo path: reps independent walks, recording f along the way
    FloatWalker walker(mu.mode() == Mode::Exact ? mu.to_float() : mu);
    std::vector<RunningStats> per_n(static_cast<std::size_t>(n_max) + 1);
    for (long r = 0; r < reps; ++r) {
        RngStream stream = rng.derived(static_cast<std::uint64_t>(r));
        std::vector<double> x(static_cast<std::size_t>(mu.dim()), 0.0);
        per_n[0].add(f(x));
        for (long n = 1; n <= n_max; ++n) {
            walker.step(x, stream);
            per_n[static_cast<std::size_t>(n)].add(f(x));
        }
    }
    for (long n = 0; n <= n_max; ++n) {
        out.ns.push_back(n);
        out.values.push_back(per_n[static_cast<std::size_t>(n)].mean());
        out.stderrs.push_back(per_n[static_cast<std::size_t>(n)].stderr_());
    }
    return out;
}

}  // namespace torwalk
