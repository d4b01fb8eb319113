#include "torwalk/walk.hpp"

#include <stdexcept>

namespace torwalk {

std::size_t sample_index(const FiniteSupportMeasure& mu, RngStream& rng) {
    const auto& cum = mu.cumulative();
    const double u = rng.next_real53();
    // supports are small; linear scan in atom order
    for (std::size_t i = 0; i + 1 < cum.size(); ++i)
        if (u < cum[i]) return i;
    return cum.size() - 1;
}

const GroupElement& sample(const FiniteSupportMeasure& mu, RngStream& rng) {
    return mu.atoms()[sample_index(mu, rng)].g;
}

Trajectory simulate_walk(const FiniteSupportMeasure& mu, const TorusPoint& x0, long n,
                         RngStream rng) {
    if (mu.mode() != x0.mode())
        throw std::invalid_argument("simulate_walk: measure/point mode mismatch");
    Trajectory t;
    t.start = x0;
    t.points.reserve(static_cast<std::size_t>(n) + 1);
    t.word.reserve(static_cast<std::size_t>(n));
    t.points.push_back(x0);
    TorusPoint x = x0;
    for (long k = 0; k < n; ++k) {
        std::size_t i = sample_index(mu, rng);
        x = act(mu.atoms()[i].g, x);
        t.points.push_back(x);
        t.word.push_back(i);
    }
    return t;
}

FloatWalker::FloatWalker(const FiniteSupportMeasure& mu) : d_(mu.dim()) {
    const FiniteSupportMeasure flt = mu.mode() == Mode::Float ? mu : mu.to_float();
    const auto& atoms = flt.atoms();
    mats_.resize(atoms.size() * static_cast<std::size_t>(d_) * d_);
    trans_.resize(atoms.size() * static_cast<std::size_t>(d_));
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        auto m = atoms[k].g.linear().to_double();
        std::copy(m.begin(), m.end(), mats_.begin() + static_cast<std::ptrdiff_t>(k * d_ * d_));
        const auto& b = atoms[k].g.translation_float();
        std::copy(b.begin(), b.end(), trans_.begin() + static_cast<std::ptrdiff_t>(k * d_));
    }
    cum_ = flt.cumulative();
}

std::size_t FloatWalker::step(std::vector<double>& x, RngStream& rng) const {
    const double u = rng.next_real53();
    std::size_t k = cum_.size() - 1;
    for (std::size_t i = 0; i + 1 < cum_.size(); ++i)
        if (u < cum_[i]) { k = i; break; }
    const double* m = mats_.data() + k * static_cast<std::size_t>(d_) * d_;
    const double* b = trans_.data() + k * static_cast<std::size_t>(d_);
    double tmp[8];
    std::vector<double> heap;
    double* out = tmp;
    if (d_ > 8) {
        heap.resize(static_cast<std::size_t>(d_));
        out = heap.data();
    }
    for (int i = 0; i < d_; ++i) {
        double acc = b[i];
        for (int j = 0; j < d_; ++j) acc += m[i * d_ + j] * x[static_cast<std::size_t>(j)];
        out[i] = wrap01(acc);
    }
    std::copy(out, out + d_, x.begin());
    return k;
}

void FloatWalker::apply_atom(std::size_t k, const std::vector<double>& x,
                             std::vector<double>& out) const {
    const double* m = mats_.data() + k * static_cast<std::size_t>(d_) * d_;
    const double* b = trans_.data() + k * static_cast<std::size_t>(d_);
    out.resize(static_cast<std::size_t>(d_));
    for (int i = 0; i < d_; ++i) {
        double acc = b[i];
        for (int j = 0; j < d_; ++j) acc += m[i * d_ + j] * x[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = wrap01(acc);
    }
}

}  // namespace torwalk
