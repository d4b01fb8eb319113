#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "torwalk/stats.hpp"
#include "torwalk/test_function.hpp"
#include "torwalk/walk.hpp"

namespace torwalk {

enum class Method { Exact, Mc };

// mu^{*n} * delta_x with exact dedup of image points
struct ExactImageMeasure {
    int d = 0;
    BasisPtr basis;
    std::vector<std::pair<std::vector<SymbolicScalar>, Rat>> atoms;
};

ExactImageMeasure push_point(const FiniteSupportMeasure& mu, const TorusPoint& x, long n,
                             std::size_t cap = kDefaultAtomCap);

// same push but through the affine action on R^d (no torus reduction); used
// for lifted measures
ExactImageMeasure push_point_affine(const FiniteSupportMeasure& mu,
                                    std::span<const SymbolicScalar> x, long n,
                                    std::size_t cap = kDefaultAtomCap);

// Empirical or exact-atom distribution on the torus.
struct EmpiricalTorusMeasure {
    int d = 0;
    std::vector<double> samples;  // flattened float samples, size = count * d
    std::optional<ExactImageMeasure> exact;
    std::size_t count() const { return exact ? exact->atoms.size() : samples.size() / d; }
};

// P^n f(x): exact through the image measure, or Monte Carlo over reps
// independent n-step images of x
ValueStderr apply_markov(const TestFunction& f, const TorusPoint& x,
                         const FiniteSupportMeasure& mu, long n, Method method, RngStream rng,
                         long reps, std::size_t cap = kDefaultAtomCap);

std::complex<double> fourier_coefficient(const EmpiricalTorusMeasure& theta,
                                         const FrequencyVector& c);

// max over 0 < ||c||_inf <= K of |theta_hat(c)|
double fourier_distance(const EmpiricalTorusMeasure& theta, long K);

// companion proxy: max over a declared bank of |int f dtheta - int f dnu|
double test_bank_deviation(const EmpiricalTorusMeasure& theta,
                           std::span<const TestFunction> bank);

// the default bank for d = 2: Re/Im e_c for small c, f_q bumps, dist0
std::vector<TestFunction> default_test_bank(int d);

// Streaming accumulator for the same quantity over float samples.
class FourierAccumulator {
public:
    FourierAccumulator(int d, long K);
    void add(std::span<const double> x);
    double max_abs() const;
    std::size_t count() const { return n_; }

private:
    int d_;
    long K_;
    std::size_t n_ = 0;
    std::vector<std::complex<double>> sums_;  // one per frequency
    std::vector<std::vector<long>> freqs_;
};

// Exact 2L-th Fourier moments of P^n e_c and P_0^n e_c against Lebesgue:
// linear = mass of { t(a_1+..+a_L-a_{L+1}-..-a_{2L}) c = 0 } under mu_0^{*n} tensors,
// affine = the same sum weighted by e^{2 i pi <c, b-sums>}. affine <= linear.
struct FourierMoment {
    double affine = 0.0;
    double linear = 0.0;
    Rat linear_exact;
    double imag_residue = 0.0;
};

FourierMoment fourier_moment_exact(const FiniteSupportMeasure& mu, const FrequencyVector& c,
                                   long n, int L, std::size_t cap = kDefaultAtomCap);

// Truncated Neumann solution g_N = sum_{k<N} (P^k f - mean). The evaluator is
// Monte Carlo; an estimate of g_N(x) is the centered partial sum along one
// fresh trajectory from x.
struct PoissonSolution {
    int N = 0;
    double mean_ref = 0.0;
    // one unbiased draw of g_N(x); average many for a point estimate
    std::function<double(std::span<const double> x, RngStream&)> draw_gN;
    // one unbiased draw of P g_N(x) (fresh first step, then as above)
    std::function<double(std::span<const double> x, RngStream&)> draw_PgN;
    // diagnostic decay profile |P^k f - mean| on the probe grid
    std::vector<double> decay_profile;
};

PoissonSolution poisson_solve(const TestFunction& f, const FiniteSupportMeasure& mu, int N,
                              RngStream rng, long probe_reps = 4000);

struct FqSeries {
    std::vector<long> ns;
    std::vector<double> values;
    std::vector<double> stderrs;
    double mean_ref = 0.0;
    bool exact = false;
};

// The necessity experiment: mu = 1/2 delta_{(a,0)} + 1/2 delta_{(b,v)},
// series of P^n f_q(0). Rational v runs exactly; irrational v by Monte Carlo.
FqSeries fq_test(const FiniteSupportMeasure& mu, int q, double alpha, long n_max,
                 RngStream rng, long reps, std::size_t cap = kDefaultAtomCap);

}  // namespace torwalk
