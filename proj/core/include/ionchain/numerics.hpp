#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace ionchain {

/// Neumaier-compensated accumulator. Summation order is fixed by the caller;
/// together they make energy/gradient sums reproducible bit-for-bit on a
/// given platform and accurate to ~1 ulp of the true sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

/// Ordinary least-squares line y = slope*x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two points");
    const double n = static_cast<double>(x.size());
    CompensatedSum sx, sy, sxx, sxy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
        sxx.add(x[i] * x[i]);
        sxy.add(x[i] * y[i]);
    }
    const double mx = sx.value() / n;
    const double my = sy.value() / n;
    const double var = sxx.value() / n - mx * mx;
    if (!(var > 0.0))
        throw std::invalid_argument("fit_line: degenerate abscissa");
    const double cov = sxy.value() / n - mx * my;
    LineFit f;
    f.slope = cov / var;
    f.intercept = my - f.slope * mx;
    CompensatedSum r2;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        r2.add(r * r);
    }
    f.residual_rms = std::sqrt(r2.value() / n);
    return f;
}

/// Median of a sample (averaged middle pair for even sizes).
inline double median(std::vector<double> v) {
    if (v.empty())
        throw std::invalid_argument("median: empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return (v.size() % 2 == 1) ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

/// Quantile with linear interpolation between order statistics, q in [0, 1].
inline double quantile(std::vector<double> v, double q) {
    if (v.empty())
        throw std::invalid_argument("quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("quantile: q outside [0, 1]");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size())
        return v.back();
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

inline double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace ionchain
