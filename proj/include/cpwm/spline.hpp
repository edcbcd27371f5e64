#pragma once

#include <span>
#include <vector>

namespace cpwm {

// Natural cubic spline on strictly increasing abscissae (GSL cspline).
// Evaluation outside the node range returns the nearest end value.
class NaturalSpline {
public:
    NaturalSpline() = default;
    NaturalSpline(std::span<const double> x, std::span<const double> y) { fit(x, y); }
    ~NaturalSpline();
    NaturalSpline(const NaturalSpline&) = delete;
    NaturalSpline& operator=(const NaturalSpline&) = delete;
    NaturalSpline(NaturalSpline&& o) noexcept;
    NaturalSpline& operator=(NaturalSpline&& o) noexcept;

    // reuses the allocation when the size is unchanged
    void fit(std::span<const double> x, std::span<const double> y);

    double operator()(double t) const;
    double derivative(double t) const;
    // integral over [a, b] clipped to the node range
    double integral(double a, double b) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    std::size_t size() const { return x_.size(); }

private:
    void release();
    std::vector<double> x_, y_;
    void* interp_ = nullptr;  // gsl_interp
};

}  // namespace cpwm
