#pragma once

#include <vector>

#include "torwalk/markov.hpp"

namespace torwalk {

struct LlnResult {
    std::vector<long> ns;
    std::vector<double> series;    // S_k f / k along one seeded trajectory
    double envelope_max = 0.0;     // max |S_n f / n| at the final n over extra trajectories
    long envelope_trajectories = 0;
};

LlnResult lln_check(const TestFunction& f, const FiniteSupportMeasure& mu,
                    std::span<const double> x0, long n, RngStream rng,
                    long envelope_reps = 100);

struct VarianceEstimate {
    double sigma2_hat = 0.0;
    double stderr_ = 0.0;
    double comp_g2 = 0.0;   // estimate of int g_N^2 dnu
    double comp_pg2 = 0.0;  // estimate of int (P g_N)^2 dnu
    int N = 0;
    bool negative_flag = false;  // materially negative point estimate
};

enum class IntegrationMode { Grid, McUniform };

// sigma^2(f) = int g^2 - (Pg)^2 dnu with g = g_N from the Neumann series.
// Each integrand value is the product of two independent one-trajectory
// draws, so squares of expectations stay unbiased.
VarianceEstimate sigma2_estimate(const TestFunction& f, const FiniteSupportMeasure& mu, int N,
                                 IntegrationMode mode, RngStream rng, long reps,
                                 int threads = 1);

struct BoundedSumResult {
    double max_residual = 0.0;  // |S_n f - (g0(X_0) - g0(X_n))|
    double max_abs_sum = 0.0;   // max |S_n f|
    long trajectories = 0;
};

// The zero-variance configuration: f = g0 - P g0 with g0 = Euclidean distance
// to 0 and an isometric two-atom measure. Checks the telescoping identity and
// the uniform bound along seeded trajectories from each start in x0_grid.
BoundedSumResult bounded_sum_check(const FiniteSupportMeasure& mu,
                                   std::span<const std::vector<double>> x0_grid, long n,
                                   long reps, RngStream rng);

struct ExceedanceCurve {
    double eps = 0.0;
    double threshold_scale = 1.0;  // multiplies n*eps; ||f||_alpha or 1
    std::vector<long> ns;
    std::vector<double> probs;
    std::vector<double> stderrs;   // Wilson
};

// empirical P(|S_n f| > n * eps * scale); scale = ||f||_alpha when
// scale_by_norm, else 1
std::vector<ExceedanceCurve> nonconcentration_curve(const TestFunction& f,
                                                    const FiniteSupportMeasure& mu,
                                                    std::span<const double> x0,
                                                    std::span<const double> eps_list,
                                                    std::span<const long> n_list, long reps,
                                                    RngStream rng, bool scale_by_norm = true,
                                                    int threads = 1);

struct CltSamples {
    long n = 0;
    std::vector<double> final_value;  // S_n f / sqrt(n)
    std::vector<double> running_max;  // max_k S_k f / sqrt(n) over the mesh
    std::vector<double> time_avg;     // mean_k S_k f / sqrt(n)
};

CltSamples clt_sample(const TestFunction& f, const FiniteSupportMeasure& mu,
                      std::span<const double> x0, long n, long reps, RngStream rng,
                      int threads = 1);

// Gaussian-random-walk oracle with matched per-step variance; returns the
// same mesh statistics
CltSamples gaussian_walk_oracle(double sigma2, long n, long paths, RngStream rng,
                                int threads = 1);

struct AscltSeries {
    std::vector<long> ns;          // checkpoints
    std::vector<double> averages;  // (1/ln n) sum_{k<=n} (1/k) phi(S_k/sqrt k)
};

AscltSeries asclt_average(const TestFunction& f, const FiniteSupportMeasure& mu,
                          std::span<const double> x0,
                          const std::function<double(double)>& phi, long n_max, RngStream rng,
                          std::span<const long> checkpoints);

}  // namespace torwalk
