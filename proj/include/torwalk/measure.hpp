#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "torwalk/group_element.hpp"

namespace torwalk {

// 128-bit FNV-1a over a canonical encoding. Distinct canonical forms are
// assumed to never collide at this width (documented assumption).
struct Digest128 {
    unsigned __int128 v = 0;
    bool operator==(const Digest128& o) const { return v == o.v; }
    std::string hex() const;
};

Digest128 fnv128(const std::string& s);

struct Digest128Hash {
    std::size_t operator()(const Digest128& d) const {
        return static_cast<std::size_t>(d.v ^ (d.v >> 64));
    }
};

struct Atom {
    GroupElement g;
    Rat weight;
};

// Finitely supported probability measure on SL_d(Z) x T^d. Weights are exact
// rationals summing to exactly 1; atoms are pairwise distinct in canonical
// encoding.
class FiniteSupportMeasure {
public:
    FiniteSupportMeasure(std::vector<Atom> atoms, Mode mode, int d, BasisPtr basis);

    static FiniteSupportMeasure dirac(GroupElement g);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t support_size() const { return atoms_.size(); }
    Mode mode() const { return mode_; }
    int dim() const { return d_; }
    const BasisPtr& basis() const { return basis_; }
    const std::string& digest() const { return digest_; }

    // cumulative weights as doubles, for inverse-CDF sampling in atom order
    const std::vector<double>& cumulative() const { return cum_; }

    // float-mode copy (translations evaluated numerically)
    FiniteSupportMeasure to_float() const;

private:
    std::vector<Atom> atoms_;
    Mode mode_;
    int d_;
    BasisPtr basis_;
    std::string digest_;
    std::vector<double> cum_;
};

inline constexpr std::size_t kDefaultAtomCap = 2'000'000;

// exact convolution with dedup by canonical-encoding digest
FiniteSupportMeasure convolve(const FiniteSupportMeasure& a, const FiniteSupportMeasure& b,
                              std::size_t cap = kDefaultAtomCap);

// mu^{*n}; n = 0 is the Dirac measure at (I_d, 0)
FiniteSupportMeasure convolve_power(const FiniteSupportMeasure& mu, long n,
                                    std::size_t cap = kDefaultAtomCap);

// projection on SL_d(Z): atoms (a, 0), weights merged over equal linear parts
FiniteSupportMeasure linear_projection(const FiniteSupportMeasure& mu);

// rational parts of all translations stripped (measure on SL_d(Z) x R^d,
// acting without torus reduction)
FiniteSupportMeasure lift_rational_part(const FiniteSupportMeasure& mu);

}  // namespace torwalk
