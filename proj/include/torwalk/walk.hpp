#pragma once

#include <vector>

#include "torwalk/measure.hpp"
#include "torwalk/rng.hpp"

namespace torwalk {

// Seeded realization X_0..X_n together with the driving word g_1..g_n
// (stored as atom indices into the measure's support).
struct Trajectory {
    TorusPoint start;
    std::vector<TorusPoint> points;      // X_0..X_n
    std::vector<std::size_t> word;       // indices of g_1..g_n
};

// inverse-CDF draw over the atom order
std::size_t sample_index(const FiniteSupportMeasure& mu, RngStream& rng);
const GroupElement& sample(const FiniteSupportMeasure& mu, RngStream& rng);

Trajectory simulate_walk(const FiniteSupportMeasure& mu, const TorusPoint& x0, long n,
                         RngStream rng);

// Allocation-free float-mode walker for the Monte-Carlo heavy paths. Holds
// flattened double matrices and translations.
class FloatWalker {
public:
    explicit FloatWalker(const FiniteSupportMeasure& mu);

    int dim() const { return d_; }
    std::size_t support_size() const { return cum_.size(); }

    // one step in place; returns the chosen atom index
    std::size_t step(std::vector<double>& x, RngStream& rng) const;
    void apply_atom(std::size_t k, const std::vector<double>& x, std::vector<double>& out) const;

private:
    int d_;
    std::vector<double> mats_;    // support*d*d, row-major per atom
    std::vector<double> trans_;   // support*d
    std::vector<double> cum_;
};

}  // namespace torwalk
