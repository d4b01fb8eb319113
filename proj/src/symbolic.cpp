#include "torwalk/symbolic.hpp"

#include <sstream>
#include <stdexcept>

#include "torwalk/errors.hpp"

namespace torwalk {

SymbolicScalar::SymbolicScalar(Rat rational, std::vector<Int> coeffs)
    : rational_(std::move(rational)), coeffs_(std::move(coeffs)) {
    rational_.canonicalize();
}

SymbolicScalar SymbolicScalar::rational_value(Rat r, std::size_t basis_size) {
    return SymbolicScalar(std::move(r), std::vector<Int>(basis_size, Int(0)));
}

SymbolicScalar SymbolicScalar::generator(std::size_t index, std::size_t basis_size) {
    std::vector<Int> c(basis_size, Int(0));
    c.at(index) = 1;
    return SymbolicScalar(Rat(0), std::move(c));
}

SymbolicScalar& SymbolicScalar::operator+=(const SymbolicScalar& o) {
    if (coeffs_.size() != o.coeffs_.size())
        throw std::invalid_argument("SymbolicScalar: basis size mismatch");
    rational_ += o.rational_;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

SymbolicScalar& SymbolicScalar::operator-=(const SymbolicScalar& o) {
    if (coeffs_.size() != o.coeffs_.size())
        throw std::invalid_argument("SymbolicScalar: basis size mismatch");
    rational_ -= o.rational_;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

SymbolicScalar SymbolicScalar::operator-() const {
    SymbolicScalar s = *this;
    s.rational_ = -s.rational_;
    for (auto& c : s.coeffs_) c = -c;
    return s;
}

SymbolicScalar SymbolicScalar::times(const Int& k) const {
    SymbolicScalar s = *this;
    s.rational_ *= Rat(k);
    for (auto& c : s.coeffs_) c *= k;
    return s;
}

void SymbolicScalar::reduce_mod1() {
    // rational -> rational - floor(rational)
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), rational_.get_num().get_mpz_t(), rational_.get_den().get_mpz_t());
    rational_ -= Rat(fl);
}

bool SymbolicScalar::torus_zero() const {
    for (const auto& c : coeffs_)
        if (c != 0) return false;
    return rational_.get_den() == 1;
}

bool SymbolicScalar::is_zero() const {
    for (const auto& c : coeffs_)
        if (c != 0) return false;
    return rational_ == 0;
}

bool SymbolicScalar::has_generator_part() const {
    for (const auto& c : coeffs_)
        if (c != 0) return true;
    return false;
}

std::string SymbolicScalar::encode() const {
    std::ostringstream os;
    os << rational_.get_str();
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        os << "+" << coeffs_[i].get_str() << "*g" << i;
    return os.str();
}

BigFloat SymbolicScalar::eval(const GeneratorBasis& basis, long prec_bits, bool mod1) const {
    if (coeffs_.size() != basis.size())
        throw std::invalid_argument("SymbolicScalar: wrong basis for eval");
    // Magnitude of the combination adds ~bits(coeff) to the relative error;
    // refuse rather than round when the certified range cannot cover it.
    long extra = 8;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        long cbits = static_cast<long>(mpz_sizeinbase(coeffs_[i].get_mpz_t(), 2));
        extra = std::max(extra, cbits + 8);
        long cert = basis.certified_bits(i);
        if (cert != GeneratorBasis::kUnbounded && prec_bits + cbits > cert)
            throw PrecisionLossError("coefficient of generator '" + basis.gen(i).name +
                                     "' exceeds the evaluator's certified range");
    }
    const long work = prec_bits + extra + 16;
    std::vector<BigFloat> gvals = basis.values(work);
    BigFloat acc(rational_, work);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        BigFloat term(gvals[i]);
        term *= BigFloat(coeffs_[i], work);
        acc += term;
    }
    if (mod1) {
        BigFloat fl(0, work);
        mpf_floor(fl.get_mpf_t(), acc.get_mpf_t());
        acc -= fl;
        if (acc >= 1) acc -= 1;  // guard against rounding at the seam
        if (acc < 0) acc += 1;
    }
    return acc;
}

double SymbolicScalar::eval_double_mod1(const GeneratorBasis& basis) const {
    double v = eval(basis, 64, true).get_d();
    if (v >= 1.0) v = 0.0;
    if (v < 0.0) v = 0.0;
    return v;
}

double SymbolicScalar::eval_double(const GeneratorBasis& basis) const {
    return eval(basis, 64, false).get_d();
}

}  // namespace torwalk
