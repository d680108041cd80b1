#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace rabinovich {

/// Raised when an input lies outside an operation's domain (non-finite
/// state, invalid parameter, unsupported query).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised by integrators when the state stops being finite.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, long step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    long step() const noexcept { return step_; }

private:
    long step_;
};

/// Point (x1, x2, x3) of the phase space.
struct StateVec {
    std::array<double, 3> v{0.0, 0.0, 0.0};

    constexpr StateVec() = default;
    constexpr StateVec(double a, double b, double c) : v{a, b, c} {}

    constexpr double& operator[](std::size_t i) { return v[i]; }
    constexpr double operator[](std::size_t i) const { return v[i]; }

    constexpr double x1() const { return v[0]; }
    constexpr double x2() const { return v[1]; }
    constexpr double x3() const { return v[2]; }

    bool finite() const { return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]); }

    constexpr StateVec& operator+=(const StateVec& o) {
        for (std::size_t i = 0; i < 3; ++i) v[i] += o.v[i];
        return *this;
    }
    constexpr StateVec& operator-=(const StateVec& o) {
        for (std::size_t i = 0; i < 3; ++i) v[i] -= o.v[i];
        return *this;
    }
    constexpr StateVec& operator*=(double s) {
        for (auto& c : v) c *= s;
        return *this;
    }

    friend constexpr StateVec operator+(StateVec a, const StateVec& b) { return a += b; }
    friend constexpr StateVec operator-(StateVec a, const StateVec& b) { return a -= b; }
    friend constexpr StateVec operator*(StateVec a, double s) { return a *= s; }
    friend constexpr StateVec operator*(double s, StateVec a) { return a *= s; }
    friend constexpr StateVec operator-(StateVec a) { return a *= -1.0; }
    friend constexpr bool operator==(const StateVec&, const StateVec&) = default;
};

inline constexpr double dot(const StateVec& a, const StateVec& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const StateVec& a) { return std::sqrt(dot(a, a)); }

inline double sup_norm(const StateVec& a) {
    return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

/// Throws DomainError naming `what` if any component is NaN or infinite.
void require_finite(const StateVec& x, const char* what);

/// Dense 3x3 real matrix, row-major.
struct Mat3 {
    std::array<std::array<double, 3>, 3> a{};

    constexpr double& operator()(std::size_t i, std::size_t j) { return a[i][j]; }
    constexpr double operator()(std::size_t i, std::size_t j) const { return a[i][j]; }

    static constexpr Mat3 zero() { return Mat3{}; }
    static constexpr Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }

    constexpr Mat3 transpose() const {
        Mat3 t;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) t(i, j) = a[j][i];
        return t;
    }
    constexpr double trace() const { return a[0][0] + a[1][1] + a[2][2]; }
    constexpr double det() const {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    }
    bool finite() const {
        for (const auto& r : a)
            for (double x : r)
                if (!std::isfinite(x)) return false;
        return true;
    }

    constexpr Mat3& operator+=(const Mat3& o) {
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) a[i][j] += o.a[i][j];
        return *this;
    }
    constexpr Mat3& operator-=(const Mat3& o) {
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) a[i][j] -= o.a[i][j];
        return *this;
    }
    constexpr Mat3& operator*=(double s) {
        for (auto& r : a)
            for (auto& x : r) x *= s;
        return *this;
    }
    friend constexpr Mat3 operator+(Mat3 l, const Mat3& r) { return l += r; }
    friend constexpr Mat3 operator-(Mat3 l, const Mat3& r) { return l -= r; }
    friend constexpr Mat3 operator*(Mat3 l, double s) { return l *= s; }
    friend constexpr Mat3 operator*(double s, Mat3 l) { return l *= s; }
    friend constexpr bool operator==(const Mat3&, const Mat3&) = default;

    friend constexpr StateVec operator*(const Mat3& m, const StateVec& x) {
        StateVec y;
        for (std::size_t i = 0; i < 3; ++i)
            y[i] = m.a[i][0] * x[0] + m.a[i][1] * x[1] + m.a[i][2] * x[2];
        return y;
    }
    friend constexpr Mat3 operator*(const Mat3& l, const Mat3& r) {
        Mat3 p;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                for (std::size_t k = 0; k < 3; ++k) p.a[i][j] += l.a[i][k] * r.a[k][j];
        return p;
    }
};

/// Largest absolute entry of `a - b`.
double max_abs_diff(const Mat3& a, const Mat3& b);

/// Outer product u vᵀ.
constexpr Mat3 outer(const StateVec& u, const StateVec& v) {
    Mat3 m;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = u[i] * v[j];
    return m;
}

}  // namespace rabinovich
