#pragma once

#include <variant>
#include <vector>

namespace cpwm {

// value and first two derivatives at a point
struct Jet {
    double v = 0, d1 = 0, d2 = 0;
    Jet& operator+=(const Jet& o) {
        v += o.v; d1 += o.d1; d2 += o.d2;
        return *this;
    }
};

struct Constant {
    double value = 0;
};

// left + (right-left)/2 * (1 + tanh(beta (x - center)))
struct TanhRamp {
    double left = 0, right = 0, beta = 1, center = 0;
};

// height * sech^2(width (x - center))
struct Eckart {
    double height = 0, width = 1, center = 0;
};

// height * exp(-alpha (x - center)^2)
struct Gaussian {
    double height = 0, alpha = 1, center = 0;
};

using Term = std::variant<Constant, TanhRamp, Eckart, Gaussian>;

// Sum of analytic terms. Every built-in potential is one of these.
class Curve {
public:
    Curve() = default;
    Curve(std::initializer_list<Term> terms) : terms_(terms) {}
    explicit Curve(std::vector<Term> terms) : terms_(std::move(terms)) {}

    double operator()(double x) const { return jet(x).v; }
    Jet jet(double x) const;

    double left_limit() const;
    double right_limit() const;

    // true if the curve is a constant (no terms, or only Constant terms)
    bool is_constant() const;
    bool is_zero() const;

    const std::vector<Term>& terms() const { return terms_; }
    Curve& add(Term t) {
        terms_.push_back(t);
        return *this;
    }

private:
    std::vector<Term> terms_;
};

Jet eval_term(const Term& t, double x);

}  // namespace cpwm
