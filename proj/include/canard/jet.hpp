#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace canard {

/// Truncated second-order Taylor number: value, gradient and Hessian of a
/// scalar quantity with respect to n independent variables. The Hessian is
/// stored as a packed lower triangle, so symmetry holds by construction.
class Jet2 {
public:
    Jet2() = default;

    static Jet2 constant(std::size_t n, double value) {
        Jet2 j;
        j.value_ = value;
        j.grad_.assign(n, 0.0);
        j.hess_.assign(n * (n + 1) / 2, 0.0);
        return j;
    }

    static Jet2 variable(std::size_t n, std::size_t index, double value) {
        Jet2 j = constant(n, value);
        j.grad_[index] = 1.0;
        return j;
    }

    std::size_t dim() const { return grad_.size(); }
    double value() const { return value_; }
    double grad(std::size_t i) const { return grad_[i]; }
    double hess(std::size_t i, std::size_t j) const {
        return hess_[pack(i, j)];
    }

    double& value() { return value_; }
    double& grad(std::size_t i) { return grad_[i]; }
    double& hess(std::size_t i, std::size_t j) { return hess_[pack(i, j)]; }

    Jet2 operator-() const {
        Jet2 r = *this;
        r.value_ = -r.value_;
        for (auto& g : r.grad_) g = -g;
        for (auto& h : r.hess_) h = -h;
        return r;
    }

    Jet2& operator+=(const Jet2& o) {
        check(o);
        value_ += o.value_;
        for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] += o.grad_[i];
        for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] += o.hess_[i];
        return *this;
    }
    Jet2& operator-=(const Jet2& o) {
        check(o);
        value_ -= o.value_;
        for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] -= o.grad_[i];
        for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] -= o.hess_[i];
        return *this;
    }
    Jet2& operator+=(double c) {
        value_ += c;
        return *this;
    }
    Jet2& operator-=(double c) {
        value_ -= c;
        return *this;
    }
    Jet2& operator*=(double c) {
        value_ *= c;
        for (auto& g : grad_) g *= c;
        for (auto& h : hess_) h *= c;
        return *this;
    }
    Jet2& operator/=(double c) { return *this *= 1.0 / c; }

    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator+(Jet2 a, double c) { return a += c; }
    friend Jet2 operator+(double c, Jet2 a) { return a += c; }
    friend Jet2 operator-(Jet2 a, double c) { return a -= c; }
    friend Jet2 operator-(double c, const Jet2& a) { return -a + c; }
    friend Jet2 operator*(Jet2 a, double c) { return a *= c; }
    friend Jet2 operator*(double c, Jet2 a) { return a *= c; }
    friend Jet2 operator/(Jet2 a, double c) { return a /= c; }
    friend Jet2 operator/(double c, const Jet2& a) {
        return reciprocal(a) * c;
    }

    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        a.check(b);
        const std::size_t n = a.dim();
        Jet2 r = constant(n, a.value_ * b.value_);
        for (std::size_t i = 0; i < n; ++i)
            r.grad_[i] = a.grad_[i] * b.value_ + a.value_ * b.grad_[i];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                r.hess_[pack(i, j)] =
                    a.hess_[pack(i, j)] * b.value_ +
                    a.value_ * b.hess_[pack(i, j)] +
                    a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i];
        return r;
    }

    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        return a * reciprocal(b);
    }

    friend Jet2 reciprocal(const Jet2& a) {
        if (a.value_ == 0.0)
            throw std::domain_error("Jet2: division by a zero-valued jet");
        const std::size_t n = a.dim();
        const double v = a.value_;
        const double iv = 1.0 / v;
        Jet2 r = constant(n, iv);
        for (std::size_t i = 0; i < n; ++i) r.grad_[i] = -a.grad_[i] * iv * iv;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                r.hess_[pack(i, j)] =
                    (-a.hess_[pack(i, j)] +
                     2.0 * a.grad_[i] * a.grad_[j] * iv) *
                    iv * iv;
        return r;
    }

    friend Jet2 abs(const Jet2& a) {
        if (a.value_ == 0.0)
            throw std::domain_error("Jet2: |x| is not differentiable at 0");
        return a.value_ > 0.0 ? a : -a;
    }

    friend Jet2 sqrt(const Jet2& a) {
        if (a.value_ <= 0.0)
            throw std::domain_error("Jet2: sqrt requires a positive value");
        const std::size_t n = a.dim();
        const double s = std::sqrt(a.value_);
        Jet2 r = constant(n, s);
        const double d1 = 0.5 / s;                    // d sqrt
        const double d2 = -0.25 / (s * a.value_);     // d2 sqrt
        for (std::size_t i = 0; i < n; ++i) r.grad_[i] = d1 * a.grad_[i];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                r.hess_[pack(i, j)] = d1 * a.hess_[pack(i, j)] +
                                      d2 * a.grad_[i] * a.grad_[j];
        return r;
    }

    friend Jet2 pow(const Jet2& a, int k) {
        if (k < 0) return reciprocal(pow(a, -k));
        Jet2 r = constant(a.dim(), 1.0);
        Jet2 base = a;
        int e = k;
        while (e > 0) {
            if (e & 1) r = r * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return r;
    }

private:
    static std::size_t pack(std::size_t i, std::size_t j) {
        if (j > i) std::swap(i, j);
        return i * (i + 1) / 2 + j;
    }
    void check(const Jet2& o) const {
        if (dim() != o.dim())
            throw std::invalid_argument("Jet2: dimension mismatch");
    }

    double value_ = 0.0;
    std::vector<double> grad_;
    std::vector<double> hess_;  // packed lower triangle
};

inline double value_of(double x) { return x; }
inline double value_of(const Jet2& x) { return x.value(); }

}  // namespace canard
