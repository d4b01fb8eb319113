#pragma once

#include <span>
#include <string>
#include <vector>

#include "torwalk/generator_basis.hpp"
#include "torwalk/symbolic.hpp"

namespace torwalk {

// Square integer matrix with arbitrary-precision entries; no fixed-width
// overflow can occur under composition.
class IntMatrix {
public:
    explicit IntMatrix(int d) : d_(d), e_(static_cast<std::size_t>(d) * d, Int(0)) {}
    IntMatrix(int d, std::vector<Int> entries);

    static IntMatrix identity(int d);

    int dim() const { return d_; }
    const Int& at(int i, int j) const { return e_[static_cast<std::size_t>(i) * d_ + j]; }
    Int& at(int i, int j) { return e_[static_cast<std::size_t>(i) * d_ + j]; }

    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator+(const IntMatrix& o) const;
    IntMatrix operator-(const IntMatrix& o) const;
    IntMatrix times(const Int& k) const;
    IntMatrix transpose() const;
    bool operator==(const IntMatrix& o) const { return d_ == o.d_ && e_ == o.e_; }
    bool is_identity() const;

    Int det() const;
    // exact inverse for det = +-1 matrices (adjugate over the integers)
    IntMatrix inverse_unimodular() const;

    // max absolute entry, the witness norm used by the X_Q diagnostics
    Int max_abs_entry() const;

    std::vector<double> to_double() const;
    std::string encode() const;  // [[a,b],[c,d]]

    std::vector<Int> apply(std::span<const Int> v) const;
    std::vector<SymbolicScalar> apply(std::span<const SymbolicScalar> v) const;

private:
    int d_;
    std::vector<Int> e_;
};

}  // namespace torwalk
