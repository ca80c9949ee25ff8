#ifndef RATEMETA_SPECIAL_MATH_HPP
#define RATEMETA_SPECIAL_MATH_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "ratemeta/quadrature.hpp"

namespace ratemeta {

/// Moment matching produced a zero or negative variance.
class DegenerateFitError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Shape pair of a beta law on [0, 1].
struct BetaParams {
    double shape_a = 1.0;
    double shape_b = 1.0;

    double mean() const { return shape_a / (shape_a + shape_b); }
    double second_moment() const
    {
        const double s = shape_a + shape_b;
        return shape_a * (shape_a + 1.0) / (s * (s + 1.0));
    }
    bool operator==(const BetaParams&) const = default;
};

namespace detail {

inline void require_delta(double delta, const char* who)
{
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::domain_error(std::string(who) + ": delta = 2/alpha must lie in (0, 1), got " +
                                std::to_string(delta));
    }
}

inline void require_theta(double theta, const char* who)
{
    if (std::isnan(theta) || theta < 0.0) {
        throw std::domain_error(std::string(who) + ": theta must be >= 0");
    }
}

} // namespace detail

/// H(theta) = delta * theta^delta * int_0^theta (1 - (1+y)^-n) y^(-1-delta) dy.
///
/// 2F1([n, -delta]; 1 - delta; -theta) = 1 + H(theta) for every theta >= 0. The
/// integral is split at y = 1: below, y = y1 * s^(1/(1-delta)) turns the
/// n*y^-delta endpoint behaviour into a bounded integrand; above, y = e^w.
inline double hyp_H(int n, double delta, double theta, const QuadratureSpec& spec = kKernelSpec)
{
    if (n < 1) {
        throw std::domain_error("hyp_H: order n must be >= 1");
    }
    detail::require_delta(delta, "hyp_H");
    detail::require_theta(theta, "hyp_H");
    if (theta == 0.0) {
        return 0.0;
    }
    if (std::isinf(theta)) {
        return std::numeric_limits<double>::infinity();
    }

    const double dn = static_cast<double>(n);
    const auto phi = [dn](double y) { return -std::expm1(-dn * std::log1p(y)); };

    const double y1 = std::min(theta, 1.0);
    const double p = 1.0 / (1.0 - delta);
    // With p = 1/(1-delta) the Jacobian leaves y1 * phi(y) / y, bounded by n * y1.
    const double near = std::pow(y1, -delta) * p * integrate([&](double s) {
        const double y = y1 * std::pow(s, p);
        return y > 0.0 ? y1 * phi(y) / y : dn * y1;
    }, 0.0, 1.0, spec);

    double far = 0.0;
    if (theta > 1.0) {
        far = integrate([&](double w) { return phi(std::exp(w)) * std::exp(-delta * w); }, 0.0, std::log(theta), spec);
    }
    return delta * std::pow(theta, delta) * (near + far);
}

/// 2F1([1, delta]; 1 + delta; -theta) = delta * int_0^1 x^(delta-1) / (1 + theta x) dx.
inline double hyp_mu_term(double delta, double theta, const QuadratureSpec& spec = kKernelSpec)
{
    detail::require_delta(delta, "hyp_mu_term");
    detail::require_theta(theta, "hyp_mu_term");
    if (theta == 0.0) {
        return 1.0;
    }
    if (std::isinf(theta)) {
        return 0.0;
    }
    // x = s^(1/delta) gives int_0^1 ds / (1 + theta s^(1/delta)).
    const double inv = 1.0 / delta;
    const auto g = [&](double s) { return 1.0 / (1.0 + theta * std::pow(s, inv)); };
    if (theta <= 1.0) {
        return integrate(g, 0.0, 1.0, spec);
    }
    const double s0 = std::pow(theta, -delta);
    const double head = integrate(g, 0.0, s0, spec);
    const double tail = integrate([&](double w) { return std::exp(w) / (1.0 + theta * std::exp(w * inv)); },
                                  std::log(s0), 0.0, spec);
    return head + tail;
}

/// Gauss series sum_k (a)_k (b)_k / ((c)_k k!) z^k, |z| < 1.
inline double hyp_series(double a, double b, double c, double z)
{
    if (!(std::abs(z) < 1.0)) {
        throw std::domain_error("hyp_series: series diverges for |z| >= 1");
    }
    if (c <= 0.0 && c == std::floor(c)) {
        throw std::domain_error("hyp_series: c must not be a nonpositive integer");
    }
    constexpr double eps = 1e-17;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < 1000000; ++k) {
        const double kk = static_cast<double>(k);
        const double ratio = (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * z;
        term *= ratio;
        sum += term;
        if (term == 0.0) {
            return sum;
        }
        const double r = std::abs(ratio);
        if (r < 1.0 && std::abs(term) * r / (1.0 - r) <= eps * std::abs(sum)) {
            return sum;
        }
    }
    throw std::domain_error("hyp_series: no convergence");
}

namespace detail {

inline void require_shapes(double a, double b, const char* who)
{
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::domain_error(std::string(who) + ": beta shapes must be positive and finite");
    }
}

inline void require_unit(double p, const char* who)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error(std::string(who) + ": argument must lie in [0, 1]");
    }
}

} // namespace detail

/// Regularized upper incomplete beta: int_p^1 y^(a-1) (1-y)^(b-1) dy / B(a, b).
inline double reg_inc_beta_upper(double p, double a, double b)
{
    detail::require_shapes(a, b, "reg_inc_beta_upper");
    detail::require_unit(p, "reg_inc_beta_upper");
    return boost::math::ibetac(a, b, p);
}

inline double reg_inc_beta_lower(double p, double a, double b)
{
    detail::require_shapes(a, b, "reg_inc_beta_lower");
    detail::require_unit(p, "reg_inc_beta_lower");
    return boost::math::ibeta(a, b, p);
}

inline double reg_inc_beta_upper(double p, const BetaParams& shape)
{
    return reg_inc_beta_upper(p, shape.shape_a, shape.shape_b);
}

/// Beta law whose first two moments are (m1, m2).
inline BetaParams beta_moment_fit(double m1, double m2)
{
    if (!(m1 > 0.0 && m1 < 1.0) || !std::isfinite(m2)) {
        throw std::domain_error("beta_moment_fit: first moment must lie in (0, 1)");
    }
    const double variance = m2 - m1 * m1;
    if (!(variance > 0.0)) {
        throw DegenerateFitError("beta_moment_fit: variance m2 - m1^2 = " + std::to_string(variance) +
                                 " is not positive");
    }
    if (!(m2 < m1)) {
        throw std::domain_error("beta_moment_fit: m2 >= m1 is impossible on [0, 1]");
    }
    const double b = (m1 - m2) * (1.0 - m1) / variance;
    const double a = m1 * b / (1.0 - m1);
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DegenerateFitError("beta_moment_fit: fitted shapes are not positive and finite");
    }
    return {a, b};
}

/// int_0^upper g(y) f(y) dy where f is the Beta(shape) density and upper <= 1.
///
/// Endpoint singularities of the density (shape < 1) are removed by a power
/// substitution on the half of the interval that touches them.
template <class G>
double integrate_beta_weighted(G&& g, const BetaParams& shape, double upper = 1.0,
                               const QuadratureSpec& spec = QuadratureSpec{1e-12, 1e-10, 4000})
{
    detail::require_shapes(shape.shape_a, shape.shape_b, "integrate_beta_weighted");
    if (!(upper > 0.0)) {
        return 0.0;
    }
    upper = std::min(upper, 1.0);
    const double a = shape.shape_a;
    const double b = shape.shape_b;
    const double log_norm = -(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    const double split = std::min(0.5, upper);

    // [0, split]: y = split * s^(1/a) absorbs y^(a-1).
    const double lower_part = integrate([&](double s) {
        const double y = split * std::pow(s, 1.0 / a);
        return g(y) * std::exp(log_norm + (b - 1.0) * std::log1p(-y));
    }, 0.0, 1.0, spec) * std::pow(split, a) / a;

    if (upper <= split) {
        return lower_part;
    }
    double upper_part = 0.0;
    if (upper < 1.0) {
        upper_part = integrate([&](double y) {
            return g(y) * std::exp(log_norm + (a - 1.0) * std::log(y) + (b - 1.0) * std::log1p(-y));
        }, split, upper, spec);
    } else {
        // 1 - y = (1 - split) * s^(1/b) absorbs (1-y)^(b-1).
        const double width = 1.0 - split;
        upper_part = integrate([&](double s) {
            const double y = 1.0 - width * std::pow(s, 1.0 / b);
            return g(y) * std::exp(log_norm + (a - 1.0) * std::log(y));
        }, 0.0, 1.0, spec) * std::pow(width, b) / b;
    }
    return lower_part + upper_part;
}

} // namespace ratemeta

#endif
