#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torwalk/markov.hpp"
#include "torwalk/matrix_stats.hpp"

namespace torwalk {

// Deduplicated coefficients of the translation vectors of supp mu, as exact
// scalars of T^1.
struct CoefficientSet {
    BasisPtr basis;
    std::vector<SymbolicScalar> values;
};

CoefficientSet coefficient_set(const FiniteSupportMeasure& mu);

struct DiophantineReport {
    std::vector<Int> q_grid;
    std::vector<double> neg_log_margin;       // -ln m(Q)
    std::vector<std::string> margin_sci;      // margins as short scientific strings
    double L_hat = 0.0;
    double r2 = 0.0;
    bool used_fast_path = false;
    bool all_certified_nonzero = true;        // symbolic nonzero certificate per margin
};

// m(Q) = min d(sum_f L_f f, 0) over nonzero integer vectors, max|L_f| <= Q,
// exact-zero combinations excluded symbolically. Brute force costs
// (2Q+1)^{|F|}; a single irrational coefficient takes the continued-fraction
// fast path over convergents.
DiophantineReport diophantine_margin(const CoefficientSet& F, std::span<const Int> q_grid,
                                     std::size_t cost_cap = 20'000'000);

// convergents of the numeric value of xi with denominators <= qmax
struct Convergent {
    Int p, q;
    double dist;      // d(q xi, 0)
    double log_dist;  // ln of the same, computed at high precision
};

// resolution_truncated reports that the expansion stopped because the next
// distance could not be certified positive even at maximum precision
std::vector<Convergent> convergents_of(const SymbolicScalar& xi, const GeneratorBasis& basis,
                                       const Int& qmax, bool* resolution_truncated = nullptr);

// min over 1 <= q <= qmax of q * d(q xi, 0); attained on convergent
// denominators
double min_q_dist(const SymbolicScalar& xi, const GeneratorBasis& basis, const Int& qmax);

struct XqWitness {
    bool member = false;
    Int q;
    std::vector<Int> p;
    std::vector<IntMatrix> M;
    std::string reason;  // for non-members, the smallest violated constraint
    std::string encode() const;
};

// x in X_Q(B): some q <= Q with q x = p + sum_b M_b b, max-abs-entry norm of
// each M_b <= Q. Coefficients are read off the symbolic form; small q values
// are searched in order.
XqWitness xq_membership(const TorusPoint& x, std::span<const std::vector<SymbolicScalar>> B,
                        long Q, std::size_t cost_cap = 5'000'000);

// empirical fraction of n-tuples with prod ||a_i|| <= e^{Mn}; sufficient
// proxy for the subsequence-product condition since every ||a|| >= 1
double gnm_proxy_fraction(const MatrixAtoms& mu0, long n, double M, long reps, RngStream rng);

// probability that det(sum_i c_i a_i) != 0 over d independent mu_0^{*n}
// draws, c = (1-d, 1, .., 1); exact enumeration or Monte Carlo with exact
// integer determinants
Rat det_nondegeneracy_rate_exact(const FiniteSupportMeasure& mu0, long n,
                                 std::size_t cap = kDefaultAtomCap);
double det_nondegeneracy_rate_mc(const FiniteSupportMeasure& mu0, long n, long reps,
                                 RngStream rng);

struct CollisionTable {
    std::vector<long> ns;
    std::vector<Rat> masses;              // sum of squared image weights
    std::vector<std::size_t> image_counts;
};

// mass_n = mu^{*n} (x) mu^{*n} {g_1 x = g_2 x} = sum_v p_v^2 over the exact
// image measure
CollisionTable collision_mass(const FiniteSupportMeasure& mu, const TorusPoint& x, long n_max,
                              std::size_t cap = kDefaultAtomCap);

// same through the lifted affine action on R^d
CollisionTable collision_mass_lifted(const FiniteSupportMeasure& lifted,
                                     std::span<const SymbolicScalar> x, long n_max,
                                     std::size_t cap = kDefaultAtomCap);

// strip rational parts of an exact point (the pi_Q complement projection)
std::vector<SymbolicScalar> lift_point(const TorusPoint& x);

struct NearMass {
    double value = 0.0;
    double stderr_ = 0.0;
    bool guard_flag = false;  // some exact distance fell within 2^-50 of r
};

// mu^{*n} { g : d(g x, y) <= r }, exact (weights of image atoms within r,
// with a guard band around r) or Monte Carlo
NearMass near_coincidence_mass(const FiniteSupportMeasure& mu, const TorusPoint& x,
                               const TorusPoint& y, double r, long n, Method method,
                               RngStream rng, long reps, std::size_t cap = kDefaultAtomCap);

}  // namespace torwalk
