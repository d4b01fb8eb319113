#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "torwalk/symbolic.hpp"

namespace torwalk {

enum class Mode { Exact, Float };

// Point of T^d = R^d/Z^d. Exact coordinates are canonical SymbolicScalars
// (rational part in [0,1)); float coordinates are doubles in [0,1).
class TorusPoint {
public:
    static TorusPoint exact(std::vector<SymbolicScalar> coords, BasisPtr basis);
    static TorusPoint exact_zero(int d, BasisPtr basis);
    static TorusPoint floating(std::vector<double> coords);

    Mode mode() const { return mode_; }
    int dim() const { return d_; }
    const BasisPtr& basis() const { return basis_; }
    const std::vector<SymbolicScalar>& exact_coords() const { return exact_; }
    const std::vector<double>& float_coords() const { return flt_; }

    // numeric coordinates in [0,1) regardless of mode
    std::vector<double> numeric_coords() const;

    bool operator==(const TorusPoint& o) const;
    std::string encode() const;

private:
    Mode mode_ = Mode::Float;
    int d_ = 0;
    std::vector<SymbolicScalar> exact_;
    std::vector<double> flt_;
    BasisPtr basis_;
};

// wrap a real coordinate into [0,1); values within 1e-15 of 1 snap to 0 to
// stabilize distance computations
inline double wrap01(double y) {
    y -= std::floor(y);
    if (y >= 1.0 || 1.0 - y < 1e-15) y = 0.0;
    return y;
}

// sup-norm circle metric on numeric coordinates
double dist_sup(std::span<const double> x, std::span<const double> y);
double dist_sup(const TorusPoint& x, const TorusPoint& y);

// Euclidean distance to 0 on the torus (fundamental domain [-1/2,1/2)^d)
double dist0_euclidean(std::span<const double> x);

// distance of a coordinate to the grid (1/q)Z, sup metric building block
double dist_to_grid(double u, int q);

}  // namespace torwalk
