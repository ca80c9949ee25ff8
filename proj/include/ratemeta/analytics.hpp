#ifndef RATEMETA_ANALYTICS_HPP
#define RATEMETA_ANALYTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "ratemeta/mark_law.hpp"
#include "ratemeta/params.hpp"
#include "ratemeta/quadrature.hpp"
#include "ratemeta/special_math.hpp"

namespace ratemeta {

enum class Provenance { EXACT, LOWER_BOUND };

/// n-th moment of a conditional probability (or of the mean packet time).
struct MomentSet {
    int order = 1;
    double value = 0.0;
    Provenance provenance = Provenance::EXACT;
};

/// J(a, b) = delta * int_0^1 [1 - 1/((1 + a y)(1 + b y))] y^(-1-delta) dy.
///
/// Split at y0 = min(1, 1/max(a, b)). Below y0 the substitution
/// y = y0 s^(1/(1-delta)) leaves a bounded integrand; above it y = e^w.
inline double hyp_J(double delta, double a, double b, const QuadratureSpec& spec = kKernelSpec)
{
    detail::require_delta(delta, "hyp_J");
    detail::require_theta(a, "hyp_J");
    detail::require_theta(b, "hyp_J");
    if (std::isinf(a) || std::isinf(b)) {
        return std::numeric_limits<double>::infinity();
    }
    const double m = std::max(a, b);
    if (m == 0.0) {
        return 0.0;
    }
    // phi(y) / y = a/(1+ay) + b/((1+ay)(1+by)): no cancellation near 0, no overflow for large a, b
    const auto phi_over_y = [a, b](double y) {
        const double ia = 1.0 / (1.0 + a * y);
        return a * ia + b * ia / (1.0 + b * y);
    };

    const double y0 = std::min(1.0, 1.0 / m);
    const double p = 1.0 / (1.0 - delta);
    double total = std::pow(y0, 1.0 - delta) * p *
                   integrate([&](double s) { return phi_over_y(y0 * std::pow(s, p)); }, 0.0, 1.0, spec);
    if (y0 < 1.0) {
        total += integrate([&](double w) {
            const double y = std::exp(w);
            return y * phi_over_y(y) * std::exp(-delta * w);
        }, std::log(y0), 0.0, spec);
    }
    return delta * total;
}

/// Evaluates conditional-coverage moments for one parameter set and
/// interference model. For TvI the mark law is computed once on construction.
class MomentModel {
public:
    MomentModel(const NetworkParams& params, InterferenceModel model) : params_(params), model_(model)
    {
        params_.validate();
        if (model_ == InterferenceModel::TVI_ITM) {
            law_.emplace(itm_mark_law(params_));
        }
    }

    MomentModel(const NetworkParams& params, ItmMarkLaw law)
        : params_(params), model_(InterferenceModel::TVI_ITM), law_(std::move(law))
    {
        params_.validate();
    }

    const NetworkParams& params() const { return params_; }
    InterferenceModel model() const { return model_; }
    const ItmMarkLaw* law() const { return law_ ? &*law_ : nullptr; }

    /// theta_t scaled by the mean interferer activity omega(t) (1 under CI).
    double effective_threshold(double t) const
    {
        const double theta = theta_of_t(params_.K, t);
        if (!law_) {
            return theta;
        }
        const double w = law_->omega(t);
        if (std::isinf(theta)) {
            return w > 0.0 ? theta : 0.0;
        }
        return w * theta;
    }

    MomentSet moment(int n, double t) const
    {
        if (n < 1) {
            throw std::domain_error("moment: order must be >= 1");
        }
        const double h = hyp_H(n, params_.delta(), effective_threshold(t));
        return {n, 1.0 / (1.0 + h), law_ ? Provenance::LOWER_BOUND : Provenance::EXACT};
    }

    /// Lower bound 1/(1 + J) on E[P_s(t) P_s(u)].
    double product_moment(double t, double u) const
    {
        return 1.0 / (1.0 + hyp_J(params_.delta(), effective_threshold(t), effective_threshold(u)));
    }

private:
    NetworkParams params_;
    InterferenceModel model_;
    std::optional<ItmMarkLaw> law_;
};

/// M_n = 1 / 2F1([n, -delta]; 1 - delta; -theta_t), exact under constant interference.
inline MomentSet moment_ci(int n, double t, const NetworkParams& params)
{
    params.validate();
    if (n < 1) {
        throw std::domain_error("moment_ci: order must be >= 1");
    }
    const double h = hyp_H(n, params.delta(), theta_of_t(params.K, t));
    return {n, 1.0 / (1.0 + h), Provenance::EXACT};
}

/// Lower bound on the n-th moment under the independent thinning model:
/// 1 / (1 + H(omega(t) theta_t)).
inline MomentSet moment_tvi(int n, double t, const NetworkParams& params, const ItmMarkLaw& law)
{
    return MomentModel(params, law).moment(n, t);
}

inline double product_moment(double t, double u, const NetworkParams& params, const ItmMarkLaw& law)
{
    return MomentModel(params, law).product_moment(t, u);
}

/// Beta approximation of the per-user coverage probability P_s(N).
inline BetaParams coverage_beta_fit(const MomentModel& m)
{
    const double N = m.params().N;
    return beta_moment_fit(m.moment(1, N).value, m.moment(2, N).value);
}

/// P(P_s(N) > p) under the beta approximation.
inline double ps_meta_ccdf(double p, const NetworkParams& params, InterferenceModel model)
{
    detail::require_unit(p, "ps_meta_ccdf");
    return reg_inc_beta_upper(p, coverage_beta_fit(MomentModel(params, model)));
}

/// First two moments of the mean packet time T_phi = E[T | Phi].
struct TphiMoments {
    double nu1 = 0.0;
    double nu2 = 0.0;
    Provenance provenance = Provenance::EXACT;
    std::size_t nodes_per_axis = 0;
    double refinement_change = 0.0; ///< |nu2(n) - nu2(n/2)| at the accepted grid

    double variance() const { return nu2 - nu1 * nu1; }
};

struct TphiOptions {
    std::size_t initial_panels = 8; ///< 8-point Gauss-Legendre panels per axis
    std::size_t max_panels = 128;
    double rel_tol = 1e-7; ///< on nu1 and nu2, relative to N and N^2
};

/// nu1 = N - int_0^N M1(t) dt,  nu2 = N (2 nu1 - N) + int int E[P_s(t) P_s(u)] dt du.
///
/// Both integrals use the same composite Gauss-Legendre rule so the variance
/// nu2 - nu1^2 is not polluted by mismatched discretisations. The tensor sum
/// exploits symmetry; panels double until nu1 and nu2 stabilise.
inline TphiMoments tphi_moments(const MomentModel& m, const TphiOptions& opt = {})
{
    const double N = m.params().N;
    auto evaluate = [&](std::size_t panels) {
        const QuadratureRule rule = gauss_legendre_panels(0.0, N, panels);
        const std::size_t n = rule.size();
        double first = 0.0;
        double second = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            first += rule.weights[i] * m.moment(1, rule.nodes[i]).value;
            for (std::size_t j = i; j < n; ++j) {
                const double q = m.product_moment(rule.nodes[i], rule.nodes[j]);
                second += (i == j ? 1.0 : 2.0) * rule.weights[i] * rule.weights[j] * q;
            }
        }
        const double nu1 = N - first;
        return std::pair{nu1, N * (2.0 * nu1 - N) + second};
    };

    std::size_t panels = opt.initial_panels;
    auto coarse = evaluate(panels);
    while (true) {
        if (2 * panels > opt.max_panels) {
            throw QuadratureError("tphi_moments: tensor grid did not stabilise");
        }
        panels *= 2;
        const auto fine = evaluate(panels);
        const double d1 = std::abs(fine.first - coarse.first);
        const double d2 = std::abs(fine.second - coarse.second);
        if (d1 <= opt.rel_tol * N && d2 <= opt.rel_tol * N * N) {
            TphiMoments out{fine.first, fine.second,
                            m.model() == InterferenceModel::CI ? Provenance::EXACT : Provenance::LOWER_BOUND,
                            8 * panels, d2};
            if (!(out.nu1 > 0.0 && out.nu1 <= N) || !(out.nu2 >= out.nu1 * out.nu1) || !(out.nu2 <= N * out.nu1)) {
                throw DegenerateFitError("tphi_moments: moments violate 0 < nu1 <= N, nu1^2 <= nu2 <= N nu1");
            }
            return out;
        }
        coarse = fine;
    }
}

inline TphiMoments tphi_moments(const NetworkParams& params, InterferenceModel model)
{
    return tphi_moments(MomentModel(params, model));
}

/// Per-user rate CCDF for rateless coding: P_s(N) and T_phi/N are each
/// beta-approximated and combined as
/// P(R_N > r) = int_0^1 Ibar(r N y / K; gamma, beta) f_{T/N}(y) dy,
/// with Ibar taken as 0 once its argument reaches 1.
class RatelessRateMeta {
public:
    explicit RatelessRateMeta(const MomentModel& m, const TphiOptions& opt = {})
        : K_(m.params().K), N_(m.params().N), coverage_(coverage_beta_fit(m)), tphi_(tphi_moments(m, opt)),
          time_(beta_moment_fit(tphi_.nu1 / N_, tphi_.nu2 / (N_ * N_)))
    {
    }

    RatelessRateMeta(const NetworkParams& params, InterferenceModel model)
        : RatelessRateMeta(MomentModel(params, model))
    {
    }

    const BetaParams& coverage_fit() const { return coverage_; }
    const BetaParams& time_fit() const { return time_; }
    const TphiMoments& tphi() const { return tphi_; }

    double ccdf(double r) const
    {
        if (std::isnan(r) || r < 0.0) {
            throw std::domain_error("rate ccdf: r must be >= 0");
        }
        if (r == 0.0) {
            return 1.0;
        }
        const double scale = r * N_ / K_;
        const double upper = std::min(1.0, 1.0 / scale);
        const double v = integrate_beta_weighted(
            [&](double y) { return reg_inc_beta_upper(std::min(1.0, scale * y), coverage_); }, time_, upper);
        return std::clamp(v, 0.0, 1.0);
    }

private:
    double K_;
    double N_;
    BetaParams coverage_;
    TphiMoments tphi_;
    BetaParams time_;
};

/// Fixed-rate coding with constant power: R_N = (K/N) P_s(N), CI moments.
class FixedRateMeta {
public:
    explicit FixedRateMeta(const NetworkParams& params)
        : K_(params.K), N_(params.N), coverage_(coverage_beta_fit(MomentModel(params, InterferenceModel::CI)))
    {
    }

    const BetaParams& coverage_fit() const { return coverage_; }

    double ccdf(double r) const
    {
        if (std::isnan(r) || r < 0.0) {
            throw std::domain_error("rate ccdf: r must be >= 0");
        }
        const double x = r * N_ / K_;
        return x >= 1.0 ? 0.0 : reg_inc_beta_upper(x, coverage_);
    }

private:
    double K_;
    double N_;
    BetaParams coverage_;
};

inline double rate_meta_ccdf_rateless(double r, const NetworkParams& params, InterferenceModel model)
{
    return RatelessRateMeta(params, model).ccdf(r);
}

inline double rate_meta_ccdf_fixed(double r, const NetworkParams& params)
{
    return FixedRateMeta(params).ccdf(r);
}

} // namespace ratemeta

#endif
