#include "cpwm/spline.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_interp.h>

#include <algorithm>
#include <stdexcept>

namespace cpwm {

namespace {
// GSL aborts on errors by default; we check return codes instead
const auto kGslHandler = gsl_set_error_handler_off();

// evaluation passes no accelerator, so one spline can be read from many threads
gsl_interp* gi(void* p) { return static_cast<gsl_interp*>(p); }
}  // namespace

NaturalSpline::~NaturalSpline() { release(); }

NaturalSpline::NaturalSpline(NaturalSpline&& o) noexcept
    : x_(std::move(o.x_)), y_(std::move(o.y_)), interp_(o.interp_) {
    o.interp_ = nullptr;
}

NaturalSpline& NaturalSpline::operator=(NaturalSpline&& o) noexcept {
    if (this != &o) {
        release();
        x_ = std::move(o.x_);
        y_ = std::move(o.y_);
        interp_ = o.interp_;
        o.interp_ = nullptr;
    }
    return *this;
}

void NaturalSpline::release() {
    if (interp_) gsl_interp_free(static_cast<gsl_interp*>(interp_));
    interp_ = nullptr;
}

void NaturalSpline::fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spline: size mismatch");
    if (x.size() < 3) throw std::invalid_argument("spline: need at least 3 nodes");
    if (!interp_ || x_.size() != x.size()) {
        release();
        interp_ = gsl_interp_alloc(gsl_interp_cspline, x.size());
    }
    x_.assign(x.begin(), x.end());
    y_.assign(y.begin(), y.end());
    int rc = gsl_interp_init(gi(interp_), x_.data(), y_.data(), x_.size());
    if (rc != GSL_SUCCESS) throw std::invalid_argument("spline: abscissae must be strictly increasing");
}

double NaturalSpline::operator()(double t) const {
    if (t <= x_.front()) return y_.front();
    if (t >= x_.back()) return y_.back();
    return gsl_interp_eval(gi(interp_), x_.data(), y_.data(), t, nullptr);
}

double NaturalSpline::derivative(double t) const {
    t = std::clamp(t, x_.front(), x_.back());
    return gsl_interp_eval_deriv(gi(interp_), x_.data(), y_.data(), t, nullptr);
}

double NaturalSpline::integral(double a, double b) const {
    double sign = 1;
    if (a > b) {
        std::swap(a, b);
        sign = -1;
    }
    a = std::clamp(a, x_.front(), x_.back());
    b = std::clamp(b, x_.front(), x_.back());
    if (a == b) return 0;
    return sign * gsl_interp_eval_integ(gi(interp_), x_.data(), y_.data(), a, b, nullptr);
}

}  // namespace cpwm
