#pragma once

#include <stdexcept>
#include <string>

namespace anosov {

// Violated contract: bad arguments, invalid configuration, guarded limits.
// The CLI maps this to exit code 2.
class precondition_error : public std::invalid_argument {
public:
    explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure at runtime: Newton divergence, non-convergent unstable
// direction, non-hyperbolic monodromy. The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw precondition_error(what);
}

} // namespace anosov
