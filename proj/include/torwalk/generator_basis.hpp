#pragma once

#include <gmpxx.h>

#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace torwalk {

using Int = mpz_class;
using Rat = mpq_class;
using BigFloat = mpf_class;

// How a generator's numeric value is produced. Tagged generators can be
// re-evaluated at any precision; decimal ones are certified only up to the
// digits supplied.
enum class GeneratorKind { Golden, Sqrt2, Liouville6, Decimal };

struct Generator {
    std::string name;
    GeneratorKind kind = GeneratorKind::Decimal;
    std::string decimal;  // only for Decimal
};

// An ordered list of real constants gamma_1..gamma_m, declared Q-linearly
// independent together with 1. The declaration is an input contract, not
// verified; feeding dependent generators voids the exactness guarantees.
// Immutable after construction; every symbolic value in one experiment shares
// one basis.
class GeneratorBasis {
public:
    explicit GeneratorBasis(std::vector<Generator> gens);

    std::size_t size() const { return gens_.size(); }
    const Generator& gen(std::size_t i) const { return gens_[i]; }

    // Bits to which gen i's value can be certified. Tagged generators are
    // recomputable to arbitrary precision.
    long certified_bits(std::size_t i) const;

    // All generator values at working precision >= prec_bits. Cached per
    // precision; thread safe.
    std::vector<BigFloat> values(long prec_bits) const;

    std::string describe() const;

    static constexpr long kUnbounded = std::numeric_limits<long>::max();

private:
    std::vector<Generator> gens_;
    mutable std::mutex mu_;
    mutable std::map<long, std::vector<BigFloat>> cache_;
};

using BasisPtr = std::shared_ptr<const GeneratorBasis>;

// value of a single generator at the requested working precision
BigFloat evaluate_generator(const Generator& g, long prec_bits);

}  // namespace torwalk
