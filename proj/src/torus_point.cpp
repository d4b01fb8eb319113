#include "torwalk/torus_point.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace torwalk {

TorusPoint TorusPoint::exact(std::vector<SymbolicScalar> coords, BasisPtr basis) {
    if (!basis) throw std::invalid_argument("TorusPoint: exact mode needs a basis");
    TorusPoint p;
    p.mode_ = Mode::Exact;
    p.d_ = static_cast<int>(coords.size());
    p.exact_ = std::move(coords);
    p.basis_ = std::move(basis);
    for (auto& c : p.exact_) {
        if (c.basis_size() != p.basis_->size())
            throw std::invalid_argument("TorusPoint: coordinate/basis size mismatch");
        c.reduce_mod1();
    }
    return p;
}

TorusPoint TorusPoint::exact_zero(int d, BasisPtr basis) {
    std::vector<SymbolicScalar> c(d, SymbolicScalar::rational_value(Rat(0), basis->size()));
    return exact(std::move(c), std::move(basis));
}

TorusPoint TorusPoint::floating(std::vector<double> coords) {
    TorusPoint p;
    p.mode_ = Mode::Float;
    p.d_ = static_cast<int>(coords.size());
    p.flt_ = std::move(coords);
    for (auto& v : p.flt_) v = wrap01(v);
    return p;
}

std::vector<double> TorusPoint::numeric_coords() const {
    if (mode_ == Mode::Float) return flt_;
    std::vector<double> r(d_);
    for (int i = 0; i < d_; ++i) r[i] = exact_[i].eval_double_mod1(*basis_);
    return r;
}

bool TorusPoint::operator==(const TorusPoint& o) const {
    if (mode_ != o.mode_ || d_ != o.d_) return false;
    if (mode_ == Mode::Float) return flt_ == o.flt_;
    for (int i = 0; i < d_; ++i)
        if (!(exact_[i] == o.exact_[i])) return false;
    return true;
}

std::string TorusPoint::encode() const {
    std::ostringstream os;
    os << "[";
    if (mode_ == Mode::Exact) {
        for (int i = 0; i < d_; ++i) {
            if (i) os << ",";
            os << exact_[i].encode();
        }
    } else {
        os.precision(17);
        for (int i = 0; i < d_; ++i) {
            if (i) os << ",";
            os << flt_[i];
        }
    }
    os << "]";
    return os.str();
}

double dist_sup(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("dist_sup: dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, circle_dist(x[i], y[i]));
    return m;
}

double dist_sup(const TorusPoint& x, const TorusPoint& y) {
    if (x.dim() != y.dim()) throw std::invalid_argument("dist_sup: dimension mismatch");
    if (x.mode() == Mode::Exact && y.mode() == Mode::Exact) {
        // symbolic equality decides exact zeros before any rounding
        double m = 0.0;
        for (int i = 0; i < x.dim(); ++i) {
            if (x.exact_coords()[i] == y.exact_coords()[i]) continue;
            double u = x.exact_coords()[i].eval_double_mod1(*x.basis());
            double v = y.exact_coords()[i].eval_double_mod1(*y.basis());
            m = std::max(m, circle_dist(u, v));
        }
        return m;
    }
    auto xv = x.numeric_coords();
    auto yv = y.numeric_coords();
    return dist_sup(xv, yv);
}

double dist0_euclidean(std::span<const double> x) {
    double s = 0.0;
    for (double u : x) {
        double t = u - std::floor(u);
        if (t > 0.5) t = 1.0 - t;
        s += t * t;
    }
    return std::sqrt(s);
}

double dist_to_grid(double u, int q) {
    double scaled = u * q;
    double frac = scaled - std::floor(scaled);
    double d = std::min(frac, 1.0 - frac);
    return d / q;
}

}  // namespace torwalk
