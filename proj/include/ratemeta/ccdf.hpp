#ifndef RATEMETA_CCDF_HPP
#define RATEMETA_CCDF_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratemeta/params.hpp"

namespace ratemeta {

/// (master_seed, stream_id) identifies one random stream; realization i of a
/// run seeded with (m, s) uses stream (m, s + i).
struct RngSeed {
    std::uint64_t master_seed = 1;
    std::uint64_t stream_id = 0;

    bool operator==(const RngSeed&) const = default;
};

struct CurveMetadata {
    std::string label;
    std::string scheme;    ///< rateless | fixed | amc
    std::string model;     ///< ci | tvi
    std::string statistic; ///< ps | rate
    NetworkParams params;
    RngSeed seed;
    std::size_t degenerate = 0; ///< realizations whose rate hit the K-per-channel-use cap
    std::size_t resamples = 0;  ///< empty windows that were redrawn
};

/// Complementary CDF tabulated on an increasing axis. Empirical curves carry
/// Wilson 95% half-widths and their sample count; analytic curves carry
/// n_samples = 0 and zero half-widths.
struct CcdfCurve {
    std::vector<double> axis;
    std::vector<double> ccdf;
    std::vector<double> ci_halfwidth;
    std::size_t n_samples = 0;
    CurveMetadata meta;

    std::size_t size() const { return axis.size(); }

    void validate(double slack = 1e-9) const
    {
        if (axis.empty()) {
            throw std::invalid_argument("CcdfCurve: empty axis");
        }
        if (ccdf.size() != axis.size() || ci_halfwidth.size() != axis.size()) {
            throw std::invalid_argument("CcdfCurve: column lengths differ");
        }
        for (std::size_t i = 0; i < axis.size(); ++i) {
            if (!(ccdf[i] >= 0.0 && ccdf[i] <= 1.0) || !(ci_halfwidth[i] >= 0.0)) {
                throw std::invalid_argument("CcdfCurve: value outside [0, 1] at index " + std::to_string(i));
            }
            if (i > 0 && (!(axis[i] > axis[i - 1]) || ccdf[i] > ccdf[i - 1] + slack)) {
                throw std::invalid_argument("CcdfCurve: axis must increase and ccdf must not, index " +
                                            std::to_string(i));
            }
        }
    }
};

inline std::vector<double> linear_grid(double lo, double hi, std::size_t points)
{
    if (points < 1 || !(hi >= lo) || (points > 1 && !(hi > lo))) {
        throw std::invalid_argument("grid: need points >= 1 and min < max");
    }
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return g;
}

/// Wilson score half-width for a binomial proportion (z = 1.96 by default).
inline double wilson_halfwidth(double p_hat, std::size_t n, double z = 1.959963984540054)
{
    const double nn = static_cast<double>(n);
    const double z2 = z * z;
    return z / (1.0 + z2 / nn) * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn));
}

/// Fraction of samples strictly above each grid value.
inline CcdfCurve empirical_ccdf(std::span<const double> samples, std::span<const double> grid)
{
    if (samples.empty()) {
        throw std::invalid_argument("empirical_ccdf: no samples");
    }
    if (grid.empty()) {
        throw std::invalid_argument("empirical_ccdf: empty grid");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    CcdfCurve c;
    c.n_samples = sorted.size();
    c.axis.assign(grid.begin(), grid.end());
    for (double x : grid) {
        const auto above = static_cast<double>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x));
        const double p = above / static_cast<double>(sorted.size());
        c.ccdf.push_back(p);
        c.ci_halfwidth.push_back(wilson_halfwidth(p, sorted.size()));
    }
    return c;
}

template <class F>
CcdfCurve analytic_ccdf(F&& ccdf_at, std::span<const double> grid)
{
    if (grid.empty()) {
        throw std::invalid_argument("analytic_ccdf: empty grid");
    }
    CcdfCurve c;
    c.axis.assign(grid.begin(), grid.end());
    for (double x : grid) {
        c.ccdf.push_back(ccdf_at(x));
        c.ci_halfwidth.push_back(0.0);
    }
    return c;
}

/// max_i |a(x_i) - b(x_i)| over a shared axis.
inline double sup_distance(const CcdfCurve& a, const CcdfCurve& b)
{
    if (a.axis != b.axis) {
        throw std::invalid_argument("sup_distance: curves are tabulated on different axes");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a.ccdf[i] - b.ccdf[i]));
    }
    return d;
}

/// CCDF value at x by linear interpolation between grid points.
inline double ccdf_at(const CcdfCurve& c, double x)
{
    if (x <= c.axis.front()) {
        return c.ccdf.front();
    }
    if (x >= c.axis.back()) {
        return c.ccdf.back();
    }
    const auto it = std::upper_bound(c.axis.begin(), c.axis.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - c.axis.begin());
    const double w = (x - c.axis[i - 1]) / (c.axis[i] - c.axis[i - 1]);
    return (1.0 - w) * c.ccdf[i - 1] + w * c.ccdf[i];
}

} // namespace ratemeta

#endif
