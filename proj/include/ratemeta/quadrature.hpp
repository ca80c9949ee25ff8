#ifndef RATEMETA_QUADRATURE_HPP
#define RATEMETA_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ratemeta {

/// Raised when an integral cannot be resolved to the requested tolerance,
/// or when the integrand returns a non-finite value.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    std::size_t max_subdivisions = 2000;

    void validate() const
    {
        if (!(abs_tol > 0.0) || !(rel_tol >= 0.0) || max_subdivisions < 1) {
            throw std::invalid_argument("QuadratureSpec: need abs_tol > 0, rel_tol >= 0, max_subdivisions >= 1");
        }
    }
};

/// Tighter settings used by the special-function kernels, whose results feed
/// further quadratures.
inline constexpr QuadratureSpec kKernelSpec{1e-14, 1e-12, 2000};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t subdivisions = 0;
};

namespace detail {

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk21(F& f, double a, double b)
{
    double err = 0.0;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    // The rule is applied on [-1, 1] and rescaled here: Boost 1.74 reports the
    // error of the unscaled sum for other intervals.
    auto checked = [&](double x) {
        const double at = mid + half * x;
        const double y = f(at);
        if (!std::isfinite(y)) {
            throw QuadratureError("integrand is not finite at x = " + std::to_string(at));
        }
        return y;
    };
    const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(checked, -1.0, 1.0, 0, 0.0, &err);
    return {a, b, half * v, half * err};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (G10/K21) integration over [a, b].
///
/// The interval with the largest error estimate is bisected until the summed
/// error estimate falls below max(abs_tol, rel_tol * |I|). Rule nodes never touch
/// the endpoints, so integrable power singularities at either end are allowed.
template <class F>
QuadratureResult integrate_detailed(F&& f, double a, double b, const QuadratureSpec& spec = {})
{
    spec.validate();
    if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("integrate: need finite a <= b");
    }
    if (a == b) {
        return {};
    }

    std::priority_queue<detail::Segment> heap;
    heap.push(detail::gk21(f, a, b));
    double total = heap.top().value;
    double error = heap.top().error;
    std::size_t subdivisions = 1;

    while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (subdivisions >= spec.max_subdivisions) {
            throw QuadratureError("integrate: no convergence after " + std::to_string(subdivisions) +
                                  " subdivisions (estimate " + std::to_string(total) + ", error " +
                                  std::to_string(error) + ")");
        }
        const detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw QuadratureError("integrate: interval collapsed below machine resolution near x = " +
                                  std::to_string(worst.a));
        }
        const detail::Segment left = detail::gk21(f, worst.a, mid);
        const detail::Segment right = detail::gk21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }

    // Re-sum to shed the drift of the running updates.
    total = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    return {total, error, subdivisions};
}

template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {})
{
    return integrate_detailed(std::forward<F>(f), a, b, spec).value;
}

/// Nodes and weights of a fixed composite rule.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Composite 8-point Gauss-Legendre rule with `panels` equal panels on [a, b].
inline QuadratureRule gauss_legendre_panels(double a, double b, std::size_t panels)
{
    using rule = boost::math::quadrature::gauss<double, 8>;
    if (panels == 0 || !(a < b)) {
        throw std::invalid_argument("gauss_legendre_panels: need panels > 0 and a < b");
    }
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    QuadratureRule out;
    out.nodes.reserve(8 * panels);
    out.weights.reserve(8 * panels);
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + width * static_cast<double>(p);
        const double mid = lo + 0.5 * width;
        const double half = 0.5 * width;
        for (std::size_t i = x.size(); i-- > 0;) {
            out.nodes.push_back(mid - half * x[i]);
            out.weights.push_back(half * w[i]);
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            out.nodes.push_back(mid + half * x[i]);
            out.weights.push_back(half * w[i]);
        }
    }
    return out;
}

} // namespace ratemeta

#endif
