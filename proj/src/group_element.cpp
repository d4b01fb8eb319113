#include "torwalk/group_element.hpp"

#include <sstream>
#include <stdexcept>

namespace torwalk {

namespace {

void require_det_one(const IntMatrix& a) {
    if (a.det() != 1) throw std::invalid_argument("GroupElement: linear part must have det 1");
}

void require_compatible(const GroupElement& g, const GroupElement& h) {
    if (g.dim() != h.dim()) throw std::invalid_argument("GroupElement: dimension mismatch");
    if (g.mode() != h.mode()) throw std::invalid_argument("GroupElement: mode mismatch");
    if (g.mode() == Mode::Exact && g.basis() != h.basis())
        throw std::invalid_argument("GroupElement: basis mismatch");
}

}  // namespace

GroupElement GroupElement::exact(IntMatrix a, std::vector<SymbolicScalar> b, BasisPtr basis) {
    require_det_one(a);
    if (!basis) throw std::invalid_argument("GroupElement: exact mode needs a basis");
    if (static_cast<int>(b.size()) != a.dim())
        throw std::invalid_argument("GroupElement: translation size mismatch");
    GroupElement g;
    g.a_ = std::move(a);
    g.mode_ = Mode::Exact;
    g.basis_ = std::move(basis);
    for (auto& c : b) {
        if (c.basis_size() != g.basis_->size())
            throw std::invalid_argument("GroupElement: translation/basis size mismatch");
        c.reduce_mod1();
    }
    g.b_exact_ = std::move(b);
    return g;
}

GroupElement GroupElement::floating(IntMatrix a, std::vector<double> b) {
    require_det_one(a);
    if (static_cast<int>(b.size()) != a.dim())
        throw std::invalid_argument("GroupElement: translation size mismatch");
    GroupElement g;
    g.a_ = std::move(a);
    g.mode_ = Mode::Float;
    for (auto& v : b) v = wrap01(v);
    g.b_flt_ = std::move(b);
    return g;
}

GroupElement GroupElement::identity(int d, BasisPtr basis) {
    std::vector<SymbolicScalar> b(d, SymbolicScalar::rational_value(Rat(0), basis->size()));
    return exact(IntMatrix::identity(d), std::move(b), std::move(basis));
}

GroupElement GroupElement::identity_float(int d) {
    return floating(IntMatrix::identity(d), std::vector<double>(d, 0.0));
}

std::vector<double> GroupElement::translation_numeric() const {
    if (mode_ == Mode::Float) return b_flt_;
    std::vector<double> r(b_exact_.size());
    for (std::size_t i = 0; i < b_exact_.size(); ++i)
        r[i] = b_exact_[i].eval_double_mod1(*basis_);
    return r;
}

std::string GroupElement::encode() const {
    std::ostringstream os;
    os << "a=" << a_.encode() << ";b=[";
    if (mode_ == Mode::Exact) {
        for (std::size_t i = 0; i < b_exact_.size(); ++i) {
            if (i) os << ",";
            os << b_exact_[i].encode();
        }
    } else {
        os.precision(17);
        for (std::size_t i = 0; i < b_flt_.size(); ++i) {
            if (i) os << ",";
            os << b_flt_[i];
        }
    }
    os << "]";
    return os.str();
}

GroupElement GroupElement::lift_rational_part() const {
    if (mode_ != Mode::Exact)
        throw std::invalid_argument("lift_rational_part: exact mode required");
    GroupElement g;
    g.a_ = a_;
    g.mode_ = Mode::Exact;
    g.basis_ = basis_;
    g.b_exact_.reserve(b_exact_.size());
    for (const auto& c : b_exact_)
        g.b_exact_.emplace_back(Rat(0), c.coeffs());
    return g;
}

GroupElement compose(const GroupElement& g2, const GroupElement& g1) {
    require_compatible(g2, g1);
    IntMatrix a = g2.linear() * g1.linear();
    if (g2.mode() == Mode::Exact) {
        std::vector<SymbolicScalar> b = g2.linear().apply(g1.translation_exact());
        for (std::size_t i = 0; i < b.size(); ++i) b[i] += g2.translation_exact()[i];
        return GroupElement::exact(std::move(a), std::move(b), g2.basis());
    }
    const int d = g2.dim();
    std::vector<double> b(d, 0.0);
    for (int i = 0; i < d; ++i) {
        double acc = g2.translation_float()[i];
        for (int j = 0; j < d; ++j)
            acc += g2.linear().at(i, j).get_d() * g1.translation_float()[j];
        b[i] = acc;
    }
    return GroupElement::floating(std::move(a), std::move(b));
}

TorusPoint act(const GroupElement& g, const TorusPoint& x) {
    if (g.dim() != x.dim()) throw std::invalid_argument("act: dimension mismatch");
    if (g.mode() != x.mode()) throw std::invalid_argument("act: mode mismatch");
    if (g.mode() == Mode::Exact) {
        if (g.basis() != x.basis()) throw std::invalid_argument("act: basis mismatch");
        std::vector<SymbolicScalar> y = g.linear().apply(x.exact_coords());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += g.translation_exact()[i];
        return TorusPoint::exact(std::move(y), g.basis());
    }
    const int d = g.dim();
    std::vector<double> y(d, 0.0);
    for (int i = 0; i < d; ++i) {
        double acc = g.translation_float()[i];
        for (int j = 0; j < d; ++j) acc += g.linear().at(i, j).get_d() * x.float_coords()[j];
        y[i] = acc;
    }
    return TorusPoint::floating(std::move(y));
}

GroupElement invert(const GroupElement& g) {
    IntMatrix ainv = g.linear().inverse_unimodular();
    if (g.mode() == Mode::Exact) {
        std::vector<SymbolicScalar> b = ainv.apply(g.translation_exact());
        for (auto& c : b) c = -c;
        return GroupElement::exact(std::move(ainv), std::move(b), g.basis());
    }
    const int d = g.dim();
    std::vector<double> b(d, 0.0);
    for (int i = 0; i < d; ++i) {
        double acc = 0.0;
        for (int j = 0; j < d; ++j) acc -= ainv.at(i, j).get_d() * g.translation_float()[j];
        b[i] = acc;
    }
    return GroupElement::floating(std::move(ainv), std::move(b));
}

std::vector<SymbolicScalar> act_affine(const GroupElement& g,
                                       std::span<const SymbolicScalar> x) {
    if (g.mode() != Mode::Exact) throw std::invalid_argument("act_affine: exact mode required");
    std::vector<SymbolicScalar> y = g.linear().apply(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += g.translation_exact()[i];
    return y;
}

}  // namespace torwalk
