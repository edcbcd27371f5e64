#include "cpwm/curve.hpp"

#include <cmath>

namespace cpwm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sech2(double u) {
    double c = std::cosh(u);
    return 1.0 / (c * c);
}

}  // namespace

Jet eval_term(const Term& term, double x) {
    return std::visit(
        overloaded{
            [](const Constant& c) { return Jet{c.value, 0, 0}; },
            [x](const TanhRamp& r) {
                double a = 0.5 * (r.right - r.left);
                double t = std::tanh(r.beta * (x - r.center));
                double s = 1 - t * t;
                return Jet{r.left + a * (1 + t), a * r.beta * s, -2 * a * r.beta * r.beta * t * s};
            },
            [x](const Eckart& e) {
                double u = e.width * (x - e.center);
                double s = sech2(u), t = std::tanh(u);
                double a = e.width;
                return Jet{e.height * s, -2 * a * e.height * s * t,
                           2 * a * a * e.height * s * (3 * t * t - 1)};
            },
            [x](const Gaussian& g) {
                double d = x - g.center;
                double v = g.height * std::exp(-g.alpha * d * d);
                return Jet{v, -2 * g.alpha * d * v, (4 * g.alpha * g.alpha * d * d - 2 * g.alpha) * v};
            },
        },
        term);
}

Jet Curve::jet(double x) const {
    Jet out;
    for (const auto& t : terms_) out += eval_term(t, x);
    return out;
}

static double limit(const std::vector<Term>& terms, bool right) {
    double s = 0;
    for (const auto& t : terms) {
        if (auto c = std::get_if<Constant>(&t)) s += c->value;
        else if (auto r = std::get_if<TanhRamp>(&t)) {
            bool up = r->beta > 0;
            s += (right == up) ? r->right : r->left;
        }
    }
    return s;
}

double Curve::left_limit() const { return limit(terms_, false); }
double Curve::right_limit() const { return limit(terms_, true); }

bool Curve::is_constant() const {
    for (const auto& t : terms_) {
        if (std::holds_alternative<Constant>(t)) continue;
        if (auto r = std::get_if<TanhRamp>(&t); r && r->left == r->right) continue;
        if (auto e = std::get_if<Eckart>(&t); e && e->height == 0) continue;
        if (auto g = std::get_if<Gaussian>(&t); g && g->height == 0) continue;
        return false;
    }
    return true;
}

bool Curve::is_zero() const { return is_constant() && left_limit() == 0; }

}  // namespace cpwm
