#include "rabinovich/state.hpp"

namespace rabinovich {

void require_finite(const StateVec& x, const char* what) {
    if (!x.finite()) throw DomainError(std::string(what) + ": non-finite component");
}

double max_abs_diff(const Mat3& a, const Mat3& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

}  // namespace rabinovich
