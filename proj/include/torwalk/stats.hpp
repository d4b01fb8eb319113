#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace torwalk {

struct ValueStderr {
    double value = 0.0;
    double stderr_ = 0.0;
};

// Welford running mean/variance.
class RunningStats {
public:
    void add(double x) {
        ++n_;
        double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double stddev() const { return std::sqrt(variance()); }
    double stderr_() const { return n_ > 0 ? stddev() / std::sqrt(static_cast<double>(n_)) : 0.0; }
    ValueStderr value_stderr() const { return {mean(), stderr_()}; }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

// Kahan compensated accumulator for long harmonic-weighted sums.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double sum() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

inline LineFit least_squares(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("least_squares: need >= 2 paired points");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) { sx += xs[i]; sy += ys[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("least_squares: degenerate x values");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

struct RateFit {
    double C = 0.0;
    double t = 0.0;
    double r2 = 0.0;
};

// Fits value_n = C e^{-t n} by least squares on ln(value). Rejects
// nonpositive values.
inline RateFit rate_fit(std::span<const double> ns, std::span<const double> values) {
    if (ns.size() != values.size() || ns.size() < 4)
        throw std::invalid_argument("rate_fit: need >= 4 points");
    std::vector<double> logs(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0))
            throw std::invalid_argument("rate_fit: values must be positive");
        logs[i] = std::log(values[i]);
    }
    LineFit fit = least_squares(ns, logs);
    return {std::exp(fit.intercept), -fit.slope, fit.r2};
}

// One-sigma half width of the Wilson score interval for a binomial proportion.
inline double wilson_stderr(std::size_t hits, std::size_t n) {
    if (n == 0) return 0.0;
    const double z = 1.0;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    const double denom = 1.0 + z * z / nn;
    const double half = (z / denom) * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn));
    return half;
}

inline double normal_cdf(double x, double mu = 0.0, double sigma = 1.0) {
    if (sigma <= 0.0) return x < mu ? 0.0 : 1.0;
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}

// Kolmogorov-Smirnov distance of a sample against a reference CDF.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - f,
                                 f - static_cast<double>(i) / n));
    }
    return d;
}

// Two-sample Kolmogorov-Smirnov distance.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Largest singular value by power iteration on A^T A.
// Tolerance and iteration cap are part of every report that uses this.
struct SpectralNormParams {
    double tol = 1e-10;
    int max_iter = 200;
};

double spectral_norm(std::span<const double> a, int d, SpectralNormParams p = {});

}  // namespace torwalk
