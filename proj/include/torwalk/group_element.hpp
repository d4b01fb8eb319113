#pragma once

#include <string>
#include <vector>

#include "torwalk/int_matrix.hpp"
#include "torwalk/torus_point.hpp"

namespace torwalk {

// Element (a,b) of SL_d(Z) x T^d. The linear part is always an exact integer
// matrix with det = 1 (checked at construction); the translation is symbolic
// in exact mode, double in float mode.
class GroupElement {
public:
    static GroupElement exact(IntMatrix a, std::vector<SymbolicScalar> b, BasisPtr basis);
    static GroupElement floating(IntMatrix a, std::vector<double> b);
    static GroupElement identity(int d, BasisPtr basis);           // exact
    static GroupElement identity_float(int d);

    Mode mode() const { return mode_; }
    int dim() const { return a_.dim(); }
    const IntMatrix& linear() const { return a_; }
    const BasisPtr& basis() const { return basis_; }
    const std::vector<SymbolicScalar>& translation_exact() const { return b_exact_; }
    const std::vector<double>& translation_float() const { return b_flt_; }
    std::vector<double> translation_numeric() const;

    // canonical text form "a=[[..],[..]];b=[..]"
    std::string encode() const;

    // strip the rational part of every translation coordinate (the lift that
    // projects away Q^d); the result is meant to act on R^d without reduction
    GroupElement lift_rational_part() const;

private:
    IntMatrix a_{1};
    Mode mode_ = Mode::Float;
    std::vector<SymbolicScalar> b_exact_;
    std::vector<double> b_flt_;
    BasisPtr basis_;
};

// (a2,b2) o (a1,b1) = (a2 a1, a2 b1 + b2): g1 applies first
GroupElement compose(const GroupElement& g2, const GroupElement& g1);

// x -> a x + b mod 1 (exact mode reduces the rational part only)
TorusPoint act(const GroupElement& g, const TorusPoint& x);

// (a,b)^{-1} = (a^{-1}, -a^{-1} b), with a^{-1} exact over the integers
GroupElement invert(const GroupElement& g);

// affine action on R^d without torus reduction (for lifted elements)
std::vector<SymbolicScalar> act_affine(const GroupElement& g,
                                       std::span<const SymbolicScalar> x);

}  // namespace torwalk
