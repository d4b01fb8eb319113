#pragma once

#include <vector>

#include "torwalk/measure.hpp"
#include "torwalk/rng.hpp"
#include "torwalk/stats.hpp"

namespace torwalk {

// Weighted double-precision matrices, the working form of the random-matrix
// statistics. Built from a measure's linear parts or from its affine
// embedding into dimension d+1.
struct MatrixAtoms {
    int d = 0;
    std::vector<std::vector<double>> mats;
    std::vector<double> cum;        // cumulative weights
    std::vector<double> log_norms;  // ln ||a|| per atom (spectral norm)

    std::size_t sample(RngStream& rng) const {
        const double u = rng.next_real53();
        for (std::size_t i = 0; i + 1 < cum.size(); ++i)
            if (u < cum[i]) return i;
        return cum.size() - 1;
    }
};

// linear parts only (translations dropped)
MatrixAtoms linear_atoms(const FiniteSupportMeasure& mu);

// block embedding ((a, b), (0, 1)) into dimension d+1, translations evaluated
// numerically
MatrixAtoms affine_embed(const FiniteSupportMeasure& mu);

struct LyapunovEstimate {
    double lambda1_hat = 0.0;  // nats per step
    double stderr_ = 0.0;
    long n = 0;
    long reps = 0;
};

inline constexpr int kRenormStride = 10;

// top Lyapunov exponent: mean over replicas of (1/n) ln ||a_n..a_1||,
// renormalizing every kRenormStride steps to avoid overflow
LyapunovEstimate lyapunov_top(const MatrixAtoms& mu0, long n, long reps, RngStream rng,
                              int threads = 1);

// one replica of the accumulated log spectral norm after n steps
double log_norm_product(const MatrixAtoms& mu0, long n, RngStream& rng);

struct TailCurve {
    double epsilon = 0.0;
    std::vector<long> ns;
    std::vector<double> probs;
    std::vector<double> stderrs;
};

// empirical mass of { |(1/n) ln ||product|| - lambda_ref| >= eps }
TailCurve ldp_tail(const MatrixAtoms& mu0, double lambda_ref, double eps,
                   std::span<const long> ns, long reps, RngStream rng, int threads = 1);

struct ExponentEquality {
    LyapunovEstimate affine;
    LyapunovEstimate linear;
    double z_score = 0.0;
    bool linear_only = false;  // mu concentrated on SL_d x {0}
};

ExponentEquality exponent_equality_check(const FiniteSupportMeasure& mu, long n, long reps,
                                         RngStream rng, int threads = 1);

// tail curve of (1/n) ln (1+||g x||)/(1+||x||) around lambda_ref, affine
// action on R^d with log-domain tracking (no overflow failures)
TailCurve translation_growth(const FiniteSupportMeasure& mu, std::vector<double> x,
                             double lambda_ref, double eps, std::span<const long> ns,
                             long reps, RngStream rng, int threads = 1);

}  // namespace torwalk
