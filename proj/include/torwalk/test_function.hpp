#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "torwalk/measure.hpp"

namespace torwalk {

// Frequency vector c of the character e_c(x) = exp(2 i pi <c,x>).
struct FrequencyVector {
    std::vector<long> c;
    bool is_zero() const {
        for (long v : c)
            if (v) return false;
        return true;
    }
};

// A test function on T^d with its declared Holder data and known mean
// against Lebesgue. The norm fields are declared upper bounds; the pair
// property test samples point pairs against them.
struct TestFunction {
    std::string id;
    int d = 2;
    double alpha = 1.0;
    double mean_ref = 0.0;    // integral against Lebesgue
    double sup_bound = 1.0;   // ||f||_inf upper bound
    double m_alpha_bound = 1.0;
    std::function<double(std::span<const double>)> eval;

    double norm_alpha() const { return sup_bound + m_alpha_bound; }
    double operator()(std::span<const double> x) const { return eval(x); }
};

TestFunction tf_constant(int d, double value);
TestFunction tf_re_ec(std::vector<long> c);
TestFunction tf_im_ec(std::vector<long> c);

// bump at the rational grid (1/q)Z^d: f_q(x) = 1 - min(1, q^{2a} d(x,X_q)^a),
// sup-norm metric; closed-form Lebesgue mean 2^d q^{-d} a/(d+a) for q >= 2
TestFunction tf_fq(int d, int q, double alpha);
double fq_mean(int d, int q, double alpha);

// Euclidean distance to 0 on the torus; mean has a closed form for d = 2
TestFunction tf_dist0_euclid(int d);

// f = g0 - P g0 for a two-atom measure whose second atom is an isometric
// twin of the first (g0 = Euclidean distance to 0). P g0(x) collapses to
// g0(a x + b) pointwise.
TestFunction tf_coboundary_dist0(const FiniteSupportMeasure& mu);

// values tabulated on a regular grid, bilinear periodic interpolation;
// mean is the grid average
TestFunction tf_tabulated(int d, int grid_n, std::vector<double> values, double alpha,
                          double m_alpha_bound);

}  // namespace torwalk
