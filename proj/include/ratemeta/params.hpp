#ifndef RATEMETA_PARAMS_HPP
#define RATEMETA_PARAMS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ratemeta {

/// Physical and model constants of the single-tier downlink.
///
/// Transmit power rho cancels in the SIR and never changes a result; it is
/// kept so that configurations describe the whole model.
struct NetworkParams {
    double lambda = 1.0; ///< BS density (BS per unit area)
    double alpha = 4.0;  ///< path-loss exponent, > 2
    double K = 75.0;     ///< packet size in bits
    double N = 100.0;    ///< delay budget in channel uses
    double rho = 1.0;    ///< transmit power

    double delta() const { return 2.0 / alpha; }

    /// Scale of the Rayleigh law of the serving distance.
    double rayleigh_scale() const { return 1.0 / std::sqrt(2.0 * std::numbers::pi * lambda); }

    void validate() const
    {
        auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
        if (!positive(lambda)) {
            throw std::invalid_argument("lambda must be > 0 (BS density)");
        }
        if (!(alpha > 2.0) || !std::isfinite(alpha)) {
            throw std::invalid_argument("alpha must be > 2 so that delta = 2/alpha lies in (0, 1)");
        }
        if (!positive(K)) {
            throw std::invalid_argument("K must be > 0 (packet bits)");
        }
        if (!positive(N)) {
            throw std::invalid_argument("N must be > 0 (delay budget in channel uses)");
        }
        if (!positive(rho)) {
            throw std::invalid_argument("rho must be > 0 (transmit power)");
        }
    }

    bool operator==(const NetworkParams&) const = default;
};

enum class InterferenceModel { CI, TVI_ITM };

inline std::string_view to_string(InterferenceModel m)
{
    return m == InterferenceModel::CI ? "ci" : "tvi";
}

inline InterferenceModel parse_interference_model(std::string_view s)
{
    if (s == "ci") {
        return InterferenceModel::CI;
    }
    if (s == "tvi") {
        return InterferenceModel::TVI_ITM;
    }
    throw std::invalid_argument("unknown interference model '" + std::string(s) + "' (expected ci or tvi)");
}

/// SIR threshold 2^(K/t) - 1 needed to deliver K bits within t channel uses.
/// Overflows to +inf for very small t, which downstream code treats as "never".
inline double theta_of_t(double K, double t)
{
    if (!(t > 0.0)) {
        throw std::domain_error("theta_of_t: t must be > 0");
    }
    return std::expm1(std::numbers::ln2 * K / t);
}

} // namespace ratemeta

#endif
