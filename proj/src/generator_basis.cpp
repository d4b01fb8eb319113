#include "torwalk/generator_basis.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace torwalk {

namespace {

long count_fraction_digits(const std::string& dec) {
    auto dot = dec.find('.');
    if (dot == std::string::npos) return 0;
    long n = 0;
    for (std::size_t i = dot + 1; i < dec.size(); ++i) {
        if (dec[i] < '0' || dec[i] > '9') break;
        ++n;
    }
    return n;
}

}  // namespace

BigFloat evaluate_generator(const Generator& g, long prec_bits) {
    const long work = prec_bits + 64;
    switch (g.kind) {
        case GeneratorKind::Golden: {
            BigFloat five(5, work);
            BigFloat r(0, work);
            mpf_sqrt(r.get_mpf_t(), five.get_mpf_t());
            return BigFloat((r - 1) / 2, work);
        }
        case GeneratorKind::Sqrt2: {
            BigFloat two(2, work);
            BigFloat r(0, work);
            mpf_sqrt(r.get_mpf_t(), two.get_mpf_t());
            return r;
        }
        case GeneratorKind::Liouville6: {
            // sum_{k=1..6} 10^{-k!}; rationally a single fraction with
            // denominator 10^720, summed exactly before the float division.
            Int num = 0;
            Int den = 1;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, 720);
            long fact = 1;
            for (long k = 1; k <= 6; ++k) {
                fact *= k;
                Int term = 1;
                mpz_ui_pow_ui(term.get_mpz_t(), 10, static_cast<unsigned long>(720 - fact));
                num += term;
            }
            BigFloat n(num, work), d(den, work);
            return BigFloat(n / d, work);
        }
        case GeneratorKind::Decimal: {
            BigFloat v(0, work);
            if (mpf_set_str(v.get_mpf_t(), g.decimal.c_str(), 10) != 0)
                throw std::invalid_argument("generator '" + g.name +
                                            "': unparsable decimal expansion");
            return v;
        }
    }
    throw std::logic_error("unknown generator kind");
}

GeneratorBasis::GeneratorBasis(std::vector<Generator> gens) : gens_(std::move(gens)) {
    for (const auto& g : gens_) {
        if (g.name.empty()) throw std::invalid_argument("generator with empty name");
        if (g.kind == GeneratorKind::Decimal) {
            if (count_fraction_digits(g.decimal) < 21)
                throw std::invalid_argument(
                    "generator '" + g.name +
                    "': decimal expansion too short, need >= 21 fractional digits (64 bits)");
        }
    }
}

long GeneratorBasis::certified_bits(std::size_t i) const {
    const Generator& g = gens_.at(i);
    if (g.kind != GeneratorKind::Decimal) return kUnbounded;
    // ~3.32 bits per decimal digit, minus a small guard
    return static_cast<long>(std::floor(count_fraction_digits(g.decimal) * 3.321)) - 4;
}

std::vector<BigFloat> GeneratorBasis::values(long prec_bits) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.lower_bound(prec_bits);
    if (it != cache_.end()) return it->second;
    std::vector<BigFloat> vals;
    vals.reserve(gens_.size());
    for (const auto& g : gens_) vals.push_back(evaluate_generator(g, prec_bits));
    cache_.emplace(prec_bits, vals);
    return vals;
}

std::string GeneratorBasis::describe() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        if (i) os << ",";
        os << gens_[i].name << ":";
        switch (gens_[i].kind) {
            case GeneratorKind::Golden: os << "golden"; break;
            case GeneratorKind::Sqrt2: os << "sqrt2"; break;
            case GeneratorKind::Liouville6: os << "liouville6"; break;
            case GeneratorKind::Decimal: os << gens_[i].decimal; break;
        }
    }
    return os.str();
}

}  // namespace torwalk
