#pragma once

#include <span>
#include <string>
#include <vector>

#include "torwalk/generator_basis.hpp"

namespace torwalk {

// Exact torus coordinate: a rational plus an integer combination of the
// basis generators. Torus reduction folds only the rational part into [0,1);
// generator coefficients are never folded, so equality of reduced values is
// plain coefficient equality.
class SymbolicScalar {
public:
    SymbolicScalar() = default;
    SymbolicScalar(Rat rational, std::vector<Int> coeffs);

    static SymbolicScalar rational_value(Rat r, std::size_t basis_size);
    static SymbolicScalar generator(std::size_t index, std::size_t basis_size);

    const Rat& rational() const { return rational_; }
    const std::vector<Int>& coeffs() const { return coeffs_; }
    std::size_t basis_size() const { return coeffs_.size(); }

    SymbolicScalar& operator+=(const SymbolicScalar& o);
    SymbolicScalar& operator-=(const SymbolicScalar& o);
    friend SymbolicScalar operator+(SymbolicScalar a, const SymbolicScalar& b) { return a += b; }
    friend SymbolicScalar operator-(SymbolicScalar a, const SymbolicScalar& b) { return a -= b; }
    SymbolicScalar operator-() const;
    SymbolicScalar times(const Int& k) const;
    SymbolicScalar& add_rational(const Rat& r) { rational_ += r; return *this; }

    // fold the rational part into [0,1)
    void reduce_mod1();
    SymbolicScalar reduced_mod1() const {
        SymbolicScalar s = *this;
        s.reduce_mod1();
        return s;
    }

    // zero as an element of T^1 (all coefficients zero, rational integral)
    bool torus_zero() const;
    // zero as a real number
    bool is_zero() const;
    bool has_generator_part() const;

    bool operator==(const SymbolicScalar& o) const {
        return rational_ == o.rational_ && coeffs_ == o.coeffs_;
    }
    bool operator!=(const SymbolicScalar& o) const { return !(*this == o); }

    // canonical text form "p/q+c0*g0+c1*g1+..."; injective on canonical values
    std::string encode() const;

    // numeric value to >= prec_bits fractional bits, optionally mod 1 into
    // [0,1). Throws PrecisionLossError if a coefficient exceeds the certified
    // range of its generator's evaluator.
    BigFloat eval(const GeneratorBasis& basis, long prec_bits, bool mod1) const;
    double eval_double_mod1(const GeneratorBasis& basis) const;
    double eval_double(const GeneratorBasis& basis) const;

private:
    Rat rational_ = Rat(0);
    std::vector<Int> coeffs_;
};

// circle distance of two already-evaluated coordinates in [0,1)
inline double circle_dist(double u, double v) {
    double t = u - v;
    if (t < 0) t = -t;
    return t <= 0.5 ? t : 1.0 - t;
}

}  // namespace torwalk
