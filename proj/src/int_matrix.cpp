#include "torwalk/int_matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace torwalk {

IntMatrix::IntMatrix(int d, std::vector<Int> entries) : d_(d), e_(std::move(entries)) {
    if (d <= 0 || e_.size() != static_cast<std::size_t>(d) * d)
        throw std::invalid_argument("IntMatrix: bad dimensions");
}

IntMatrix IntMatrix::identity(int d) {
    IntMatrix m(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (d_ != o.d_) throw std::invalid_argument("IntMatrix: dimension mismatch");
    IntMatrix r(d_);
    for (int i = 0; i < d_; ++i)
        for (int k = 0; k < d_; ++k) {
            const Int& aik = at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < d_; ++j) r.at(i, j) += aik * o.at(k, j);
        }
    return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
    if (d_ != o.d_) throw std::invalid_argument("IntMatrix: dimension mismatch");
    IntMatrix r(d_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
    if (d_ != o.d_) throw std::invalid_argument("IntMatrix: dimension mismatch");
    IntMatrix r(d_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
}

IntMatrix IntMatrix::times(const Int& k) const {
    IntMatrix r = *this;
    for (auto& v : r.e_) v *= k;
    return r;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix r(d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool IntMatrix::is_identity() const { return *this == identity(d_); }

Int IntMatrix::det() const {
    if (d_ == 1) return at(0, 0);
    if (d_ == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    // Bareiss fraction-free elimination
    std::vector<Int> m = e_;
    auto el = [&](int i, int j) -> Int& { return m[static_cast<std::size_t>(i) * d_ + j]; };
    Int sign = 1;
    Int prev = 1;
    for (int k = 0; k < d_ - 1; ++k) {
        if (el(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < d_; ++i)
                if (el(i, k) != 0) { p = i; break; }
            if (p < 0) return Int(0);
            for (int j = 0; j < d_; ++j) std::swap(el(k, j), el(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < d_; ++i)
            for (int j = k + 1; j < d_; ++j) {
                Int num = el(i, j) * el(k, k) - el(i, k) * el(k, j);
                mpz_divexact(el(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        prev = el(k, k);
    }
    return sign * el(d_ - 1, d_ - 1);
}

namespace {

Int minor_det(const IntMatrix& m, int row, int col) {
    const int d = m.dim();
    IntMatrix sub(d - 1);
    int si = 0;
    for (int i = 0; i < d; ++i) {
        if (i == row) continue;
        int sj = 0;
        for (int j = 0; j < d; ++j) {
            if (j == col) continue;
            sub.at(si, sj) = m.at(i, j);
            ++sj;
        }
        ++si;
    }
    return sub.det();
}

}  // namespace

IntMatrix IntMatrix::inverse_unimodular() const {
    Int dt = det();
    if (dt != 1 && dt != -1)
        throw std::invalid_argument("inverse_unimodular: determinant is not a unit");
    IntMatrix inv(d_);
    if (d_ == 1) {
        inv.at(0, 0) = dt;
        return inv;
    }
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) {
            Int c = minor_det(*this, j, i);
            if ((i + j) % 2 != 0) c = -c;
            inv.at(i, j) = dt == 1 ? c : -c;
        }
    return inv;
}

Int IntMatrix::max_abs_entry() const {
    Int m = 0;
    for (const auto& v : e_) {
        Int a = abs(v);
        if (a > m) m = a;
    }
    return m;
}

std::vector<double> IntMatrix::to_double() const {
    std::vector<double> r(e_.size());
    for (std::size_t i = 0; i < e_.size(); ++i) r[i] = e_[i].get_d();
    return r;
}

std::string IntMatrix::encode() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < d_; ++i) {
        if (i) os << ",";
        os << "[";
        for (int j = 0; j < d_; ++j) {
            if (j) os << ",";
            os << at(i, j).get_str();
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

std::vector<Int> IntMatrix::apply(std::span<const Int> v) const {
    if (static_cast<int>(v.size()) != d_) throw std::invalid_argument("apply: size mismatch");
    std::vector<Int> r(d_, Int(0));
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j)
            if (at(i, j) != 0) r[i] += at(i, j) * v[j];
    return r;
}

std::vector<SymbolicScalar> IntMatrix::apply(std::span<const SymbolicScalar> v) const {
    if (static_cast<int>(v.size()) != d_) throw std::invalid_argument("apply: size mismatch");
    std::vector<SymbolicScalar> r;
    r.reserve(d_);
    for (int i = 0; i < d_; ++i) {
        SymbolicScalar acc = SymbolicScalar::rational_value(Rat(0), v[0].basis_size());
        for (int j = 0; j < d_; ++j)
            if (at(i, j) != 0) acc += v[j].times(at(i, j));
        r.push_back(std::move(acc));
    }
    return r;
}

}  // namespace torwalk
