#ifndef RATEMETA_MARK_LAW_HPP
#define RATEMETA_MARK_LAW_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iterator>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

// pchip.hpp in Boost 1.74 uses an unqualified isnan declared here.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/cubic_hermite.hpp>

#include "ratemeta/params.hpp"
#include "ratemeta/quadrature.hpp"
#include "ratemeta/special_math.hpp"

namespace ratemeta {

/// Law of the i.i.d. interferer packet-time marks of the independent thinning
/// model: the CDF F of a mark and the mean active fraction
/// omega(t) = E[min(1, mark / t)] = (1/t) int_0^t (1 - F(x)) dx.
///
/// Both are tabulated on a log-spaced grid over (0, horizon] and read back
/// through cubic Hermite interpolation in log t. Slopes of F come from finite
/// differences of the direct law; omega has the exact slope (1 - F) - omega.
/// F has a kink at t = mu, so the nearest grid node is moved onto mu and each
/// side gets its own interpolant with one-sided slopes there. Below the first
/// grid point F is extended linearly to F(0) = 0.
class ItmMarkLaw {
public:
    static constexpr std::size_t kDefaultGridPoints = 512;

    using CdfFunction = std::function<double(double)>;

    ItmMarkLaw(double mu, double horizon, CdfFunction cdf, std::size_t grid_points = kDefaultGridPoints,
               double first_point_fraction = 1e-4)
        : mu_(mu), horizon_(horizon), direct_(std::move(cdf))
    {
        if (!(horizon > 0.0) || grid_points < 4 || !(first_point_fraction > 0.0 && first_point_fraction < 1.0)) {
            throw std::invalid_argument("ItmMarkLaw: need horizon > 0, >= 4 grid points, fraction in (0,1)");
        }
        t_.resize(grid_points);
        const double lo = std::log(horizon * first_point_fraction);
        const double hi = std::log(horizon);
        for (std::size_t i = 0; i < grid_points; ++i) {
            t_[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1));
        }
        t_.back() = horizon;
        if (mu > t_.front() && mu < horizon) {
            const auto it = std::lower_bound(t_.begin(), t_.end(), mu);
            const auto nearest = (mu - *std::prev(it) < *it - mu) ? std::prev(it) : it;
            if (nearest != t_.begin() && std::next(nearest) != t_.end()) {
                *nearest = mu;
                split_ = static_cast<std::size_t>(nearest - t_.begin());
            }
        }

        cdf_.resize(grid_points);
        omega_.resize(grid_points);
        const QuadratureSpec spec{1e-13, 1e-10, 2000};
        double cumulative = integrate(direct_, 0.0, t_[0], spec);
        for (std::size_t i = 0; i < grid_points; ++i) {
            if (i > 0) {
                cumulative += integrate(direct_, t_[i - 1], t_[i], spec);
            }
            cdf_[i] = direct_(t_[i]);
            omega_[i] = std::clamp(1.0 - cumulative / t_[i], 0.0, 1.0);
        }
        build_interpolants();
    }

    /// Marks that never end within the horizon: eta = 1 and the CI limit.
    static ItmMarkLaw never_completes(double horizon)
    {
        return ItmMarkLaw(horizon, horizon, [](double) { return 0.0; }, 8);
    }

    double mu() const { return mu_; }
    double horizon() const { return horizon_; }
    const std::vector<double>& grid() const { return t_; }
    const std::vector<double>& cdf_grid() const { return cdf_; }
    const std::vector<double>& omega_grid() const { return omega_; }

    double cdf(double t) const
    {
        if (!(t > 0.0)) {
            return 0.0;
        }
        if (t <= t_.front()) {
            return cdf_.front() * t / t_.front();
        }
        if (t >= horizon_) {
            return t == horizon_ ? cdf_.back() : direct_(t);
        }
        return std::clamp(piece(cdf_interp_, t), 0.0, 1.0);
    }

    double omega(double t) const
    {
        if (!(t > 0.0)) {
            return 1.0;
        }
        if (t <= t_.front()) {
            return 1.0 - 0.5 * cdf_.front() * t / t_.front();
        }
        if (t >= horizon_) {
            return t == horizon_ ? omega_.back() : direct_omega(t);
        }
        return std::clamp(piece(omega_interp_, t), 0.0, 1.0);
    }

    /// Reference evaluations bypassing the tables.
    double direct_cdf(double t) const { return t > 0.0 ? direct_(t) : 0.0; }

    double direct_omega(double t) const
    {
        if (!(t > 0.0)) {
            return 1.0;
        }
        return 1.0 - integrate(direct_, 0.0, t, QuadratureSpec{1e-13, 1e-10, 4000}) / t;
    }

private:
    using Interp = boost::math::interpolators::cubic_hermite<std::vector<double>>;

    struct Pieces {
        std::shared_ptr<const Interp> left, right;
    };

    // the Hermite interpolant needs at least two nodes per piece
    bool split_usable() const { return split_ >= 1 && t_.size() - split_ >= 2; }

    // dF/d(log t) at log t = x, from the left (side < 0), the right (side > 0) or centred
    double log_slope(double x, int side) const
    {
        const double h = 1e-4;
        auto f = [&](double y) { return direct_(std::exp(y)); };
        if (side < 0) {
            return (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / (2.0 * h);
        }
        if (side > 0) {
            return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h);
        }
        return (f(x + h) - f(x - h)) / (2.0 * h);
    }

    Pieces make_pieces(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& left_slope,
                       const std::vector<double>& right_slope) const
    {
        auto make = [&](std::size_t lo, std::size_t hi, const std::vector<double>& slope) {
            const auto a = static_cast<std::ptrdiff_t>(lo);
            const auto b = static_cast<std::ptrdiff_t>(hi) + 1;
            return std::make_shared<const Interp>(std::vector<double>(x.begin() + a, x.begin() + b),
                                                  std::vector<double>(y.begin() + a, y.begin() + b),
                                                  std::vector<double>(slope.begin() + a, slope.begin() + b));
        };
        if (!split_usable()) {
            return {make(0, x.size() - 1, left_slope), nullptr};
        }
        return {make(0, split_, left_slope), make(split_, x.size() - 1, right_slope)};
    }

    double piece(const Pieces& p, double t) const
    {
        const double x = std::log(t);
        return (p.right && t > t_[split_]) ? (*p.right)(x) : (*p.left)(x);
    }

    void build_interpolants()
    {
        const std::size_t n = t_.size();
        std::vector<double> x(n);
        std::transform(t_.begin(), t_.end(), x.begin(), [](double t) { return std::log(t); });

        std::vector<double> dcdf(n);
        std::vector<double> domega(n);
        for (std::size_t i = 0; i < n; ++i) {
            const int side = (i + 1 == n) ? -1 : 0;
            dcdf[i] = log_slope(x[i], side);
            domega[i] = (1.0 - cdf_[i]) - omega_[i];
        }
        auto dcdf_right = dcdf;
        if (split_usable()) {
            dcdf[split_] = log_slope(x[split_], -1);
            dcdf_right[split_] = log_slope(x[split_], +1);
        }
        cdf_interp_ = make_pieces(x, cdf_, dcdf, dcdf_right);
        omega_interp_ = make_pieces(x, omega_, domega, domega);
    }

    double mu_;
    double horizon_;
    CdfFunction direct_;
    std::vector<double> t_;
    std::vector<double> cdf_;
    std::vector<double> omega_;
    std::size_t split_ = 0;
    Pieces cdf_interp_;
    Pieces omega_interp_;
};

/// Mean decode time used to truncate the mark threshold:
/// mu = int_0^N (1 - 2F1([1, delta]; 1 + delta; -theta_t)) dt.
inline double itm_mean_decode_time(const NetworkParams& params, const QuadratureSpec& spec = {})
{
    params.validate();
    const double delta = params.delta();
    return integrate([&](double t) { return 1.0 - hyp_mu_term(delta, theta_of_t(params.K, t)); }, 0.0, params.N,
                     spec);
}

/// Mark law of the independent thinning model:
/// F(t) = 1 / 2F1([1, -delta]; 1 - delta; -theta_t min(1, mu/t)) = 1 / (1 + H(theta_t min(1, mu/t))).
inline ItmMarkLaw itm_mark_law(const NetworkParams& params, std::size_t grid_points = ItmMarkLaw::kDefaultGridPoints)
{
    const double mu = itm_mean_decode_time(params);
    const double delta = params.delta();
    const double K = params.K;
    auto cdf = [mu, delta, K](double t) {
        if (!(t > 0.0)) {
            return 0.0;
        }
        const double arg = theta_of_t(K, t) * std::min(1.0, mu / t);
        return 1.0 / (1.0 + hyp_H(1, delta, arg));
    };
    return ItmMarkLaw(mu, params.N, cdf, grid_points);
}

} // namespace ratemeta

#endif
