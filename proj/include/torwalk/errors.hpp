#pragma once

#include <stdexcept>
#include <string>

namespace torwalk {

// Exact enumeration outgrew its configured cap. Carries the power that was
// being built when the cap was hit.
class CapacityError : public std::runtime_error {
public:
    CapacityError(const std::string& what, long reached_n)
        : std::runtime_error(what), reached_n_(reached_n) {}
    long reached_n() const { return reached_n_; }

private:
    long reached_n_;
};

// A symbolic coefficient outgrew the certified range of a generator's numeric
// evaluator. Never silently rounded.
class PrecisionLossError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Neumann iteration shows no decay (no mixing), e.g. mu = delta_{(I,0)}.
class DivergenceSentinel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace torwalk
