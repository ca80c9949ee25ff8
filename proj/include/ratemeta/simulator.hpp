#ifndef RATEMETA_SIMULATOR_HPP
#define RATEMETA_SIMULATOR_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ratemeta/ccdf.hpp"
#include "ratemeta/mark_law.hpp"
#include "ratemeta/params.hpp"
#include "ratemeta/quadrature.hpp"

namespace ratemeta {

/// One network snapshot seen from a user at the origin: distance to the
/// serving (nearest) BS and ascending distances to all other BSs in the
/// sampling window. An infinite window_radius means the list is the whole
/// network and no far-field correction applies.
struct GeometryRealization {
    double serving_distance = 1.0;
    std::vector<double> interferer_distances;
    double window_radius = std::numeric_limits<double>::infinity();
    std::size_t resamples = 0;

    void validate() const
    {
        if (!(serving_distance > 0.0) || !std::isfinite(serving_distance)) {
            throw std::invalid_argument("GeometryRealization: serving distance must be finite and > 0");
        }
        double prev = serving_distance;
        for (double r : interferer_distances) {
            if (!(r >= prev)) {
                throw std::invalid_argument(
                    "GeometryRealization: interferer distances must be sorted and not below the serving distance");
            }
            prev = r;
        }
        if (!(window_radius >= prev)) {
            throw std::invalid_argument("GeometryRealization: window radius below a sampled distance");
        }
    }

    bool operator==(const GeometryRealization&) const = default;
};

enum class SchemeKind { RATELESS, FIXED_RATE, AMC };
enum class TimeGrid { CONTINUOUS, INTEGER };

inline std::string_view to_string(SchemeKind k)
{
    switch (k) {
    case SchemeKind::RATELESS:
        return "rateless";
    case SchemeKind::FIXED_RATE:
        return "fixed";
    case SchemeKind::AMC:
        return "amc";
    }
    return "?";
}

inline SchemeKind parse_scheme_kind(std::string_view s)
{
    if (s == "rateless") {
        return SchemeKind::RATELESS;
    }
    if (s == "fixed") {
        return SchemeKind::FIXED_RATE;
    }
    if (s == "amc") {
        return SchemeKind::AMC;
    }
    throw std::invalid_argument("unknown scheme '" + std::string(s) + "' (expected rateless, fixed or amc)");
}

struct SchemeConfig {
    SchemeKind kind = SchemeKind::RATELESS;
    int amc_levels = 4;
    TimeGrid time_grid = TimeGrid::CONTINUOUS;

    void validate() const
    {
        if (amc_levels < 1) {
            throw std::invalid_argument("amc_levels must be >= 1");
        }
    }

    /// Decode opportunity i (1-based) of the AMC ladder: i N / levels.
    double amc_time(int i, double N) const { return N * static_cast<double>(i) / static_cast<double>(amc_levels); }

    bool operator==(const SchemeConfig&) const = default;
};

struct SimulationOptions {
    double window_radius = 0.0;       ///< 0 selects 40 / sqrt(lambda)
    bool far_field_correction = true; ///< add the mean-field contribution of BSs beyond the window
    std::size_t t_panels = 32;        ///< 8-point Gauss-Legendre panels over [0, N] for T_phi
    std::size_t mark_panels = 16;     ///< graded panels per piece for the per-interferer mark expectation
    unsigned threads = 0;             ///< 0 selects hardware concurrency

    double radius(const NetworkParams& p) const
    {
        return window_radius > 0.0 ? window_radius : 40.0 / std::sqrt(p.lambda);
    }
};

namespace detail {

inline std::mt19937_64 make_engine(const RngSeed& seed, std::uint64_t substream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed.master_seed), static_cast<std::uint32_t>(seed.master_seed >> 32),
                      static_cast<std::uint32_t>(seed.stream_id), static_cast<std::uint32_t>(seed.stream_id >> 32),
                      static_cast<std::uint32_t>(substream), static_cast<std::uint32_t>(substream >> 32)};
    return std::mt19937_64(seq);
}

} // namespace detail

/// PPP of intensity lambda restricted to the disk of radius R around the user.
///
/// Squared distances of a planar PPP form a 1-D PPP of rate lambda*pi, so
/// points are generated outward by exponential spacings; this gives the
/// Poisson count and the uniform placement in one sorted pass. An empty
/// window is redrawn on the next substream.
inline GeometryRealization sample_geometry(const NetworkParams& params, double window_radius, const RngSeed& seed)
{
    params.validate();
    if (!(window_radius > 0.0) || !std::isfinite(window_radius)) {
        throw std::invalid_argument("sample_geometry: window radius must be finite and > 0");
    }
    const double rate = params.lambda * std::numbers::pi;
    const double r2_max = window_radius * window_radius;
    std::exponential_distribution<double> spacing(rate);

    GeometryRealization g;
    g.window_radius = window_radius;
    for (std::uint64_t sub = 0;; ++sub) {
        auto eng = detail::make_engine(seed, sub);
        double r2 = spacing(eng);
        if (r2 > r2_max) {
            ++g.resamples;
            continue;
        }
        g.serving_distance = std::sqrt(r2);
        g.interferer_distances.reserve(static_cast<std::size_t>(rate * r2_max * 1.1) + 16);
        while ((r2 += spacing(eng)) <= r2_max) {
            g.interferer_distances.push_back(std::sqrt(r2));
        }
        return g;
    }
}

/// Per-interferer factor E[1 / (1 + c eta)] for one decode time t.
///
/// Under CI eta = 1. Under the ITM eta = min(1, mark / t), and
/// E[1/(1 + c eta)] = 1/(1 + c) + int_0^1 c F(t v) / (1 + c v)^2 dv,
/// evaluated with a fixed Gauss-Legendre rule split at the kink v = mu/t of F.
/// The power series of log E in c, used for distant interferers, follows from
/// the mark moments m_j = E[eta^j].
class MarkKernel {
public:
    static constexpr int kSeriesOrder = 10;
    using Series = std::array<double, kSeriesOrder + 1>;

    /// eta = 1: the CI factor 1 / (1 + c).
    MarkKernel() : constant_(true)
    {
        ell_[0] = 0.0;
        for (int j = 1; j <= kSeriesOrder; ++j) {
            ell_[j] = (j % 2 == 0 ? 1.0 : -1.0) / j;
        }
    }

    /// Each smooth piece of F(t v) is covered by 8-point panels whose widths
    /// halve towards its lower end, `panels` of them in all, so the weight
    /// 1 / (1 + c v)^2 stays resolved for large c.
    MarkKernel(const ItmMarkLaw& law, double t, std::size_t panels = 16) : constant_(false)
    {
        if (!(t > 0.0)) {
            throw std::domain_error("MarkKernel: t must be > 0");
        }
        if (panels == 0) {
            throw std::invalid_argument("MarkKernel: need panels > 0");
        }
        const double kink = law.mu() / t;
        auto add_piece = [&](double lo, double hi) {
            double a = lo;
            for (std::size_t g = panels; g-- > 0;) {
                const double b = g == 0 ? hi : lo + std::ldexp(hi - lo, -static_cast<int>(g));
                const QuadratureRule r = gauss_legendre_panels(a, b, 1);
                for (std::size_t i = 0; i < r.size(); ++i) {
                    const double f = law.cdf(t * r.nodes[i]);
                    if (f > 0.0) {
                        v_.push_back(r.nodes[i]);
                        wf_.push_back(r.weights[i] * f);
                    }
                }
                a = b;
            }
        };
        if (kink > 0.0 && kink < 1.0) {
            add_piece(0.0, kink);
            add_piece(kink, 1.0);
        } else {
            add_piece(0.0, 1.0);
        }

        // m_j = 1 - int_0^1 j v^(j-1) F(t v) dv, then log-series by the power-series logarithm recurrence
        Series e{};
        e[0] = 1.0;
        for (int j = 1; j <= kSeriesOrder; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < v_.size(); ++i) {
                s += wf_[i] * j * std::pow(v_[i], j - 1);
            }
            e[j] = (j % 2 == 0 ? 1.0 : -1.0) * (1.0 - s);
        }
        ell_[0] = 0.0;
        for (int j = 1; j <= kSeriesOrder; ++j) {
            double acc = e[j];
            for (int i = 1; i < j; ++i) {
                acc -= static_cast<double>(i) / j * ell_[i] * e[j - i];
            }
            ell_[j] = acc;
        }
    }

    bool constant() const { return constant_; }

    /// Coefficients l_j of log E(c) = sum_j l_j c^j (l_0 = 0).
    const Series& log_series() const { return ell_; }

    double expectation(double c) const
    {
        if (std::isinf(c)) {
            return 0.0;
        }
        double e = 1.0 / (1.0 + c);
        if (!constant_) {
            for (std::size_t i = 0; i < v_.size(); ++i) {
                const double d = 1.0 + c * v_[i];
                e += c * wf_[i] / (d * d);
            }
        }
        return e;
    }

    double log_expectation(double c) const
    {
        return constant_ ? -std::log1p(c) : std::log(expectation(c));
    }

    /// sum_j l_j x^j, accurate for x well inside the unit disk.
    double log_series_at(double x) const
    {
        double s = 0.0;
        for (int j = kSeriesOrder; j >= 1; --j) {
            s = (s + ell_[j]) * x;
        }
        return s;
    }

private:
    bool constant_;
    std::vector<double> v_;
    std::vector<double> wf_;
    Series ell_{};
};

/// Conditional success probability P(SIR >= theta_t | Phi) for one geometry,
/// prod_k E[1 / (1 + theta_t (D/|X_k|)^alpha eta_k)].
///
/// Interferers with theta a_k below kSeriesCut enter through precomputed
/// suffix power sums of a_k = (D/|X_k|)^alpha and the log-series of the
/// kernel. For a finite window, BSs beyond it contribute their PPP average
/// 2 pi lambda int_R^inf log E(theta (D/r)^alpha) r dr.
class ConditionalCoverage {
public:
    static constexpr double kSeriesCut = 0.05;
    static constexpr double kLogFloor = -60.0;

    ConditionalCoverage(const GeometryRealization& g, const NetworkParams& params, bool far_field_correction = true)
        : alpha_(params.alpha), lambda_(params.lambda), K_(params.K), D_(g.serving_distance), R_(g.window_radius),
          tail_(far_field_correction && std::isfinite(g.window_radius))
    {
        g.validate();
        params.validate();
        const std::size_t n = g.interferer_distances.size();
        a_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            a_[k] = std::pow(D_ / g.interferer_distances[k], alpha_);
        }
        // scaled by a_k^-j so that theta^j never has to be formed on its own
        suffix_.assign((n + 1) * kOrder, 0.0);
        for (std::size_t k = n; k-- > 0;) {
            const double r = k + 1 < n ? a_[k + 1] / a_[k] : 0.0;
            double p = 1.0;
            for (int j = 0; j < kOrder; ++j) {
                p *= r;
                suffix_[k * kOrder + j] = 1.0 + p * suffix_[(k + 1) * kOrder + j];
            }
        }
    }

    std::size_t interferers() const { return a_.size(); }

    /// Coverage with the given per-interferer kernel at SIR threshold theta.
    double at_threshold(double theta, const MarkKernel& kernel) const
    {
        if (theta == 0.0) {
            return 1.0;
        }
        if (std::isinf(theta)) {
            return (a_.empty() && !tail_) ? 1.0 : 0.0;
        }
        const auto cut = std::partition_point(a_.begin(), a_.end(), [&](double a) { return theta * a >= kSeriesCut; });
        const std::size_t near = static_cast<std::size_t>(cut - a_.begin());
        double logp = 0.0;
        for (std::size_t k = 0; k < near; ++k) {
            logp += kernel.log_expectation(theta * a_[k]);
            if (logp < kLogFloor) {
                return 0.0;
            }
        }
        if (near < a_.size()) {
            const auto& ell = kernel.log_series();
            const double x = theta * a_[near];
            double pw = 1.0;
            for (int j = 1; j <= kOrder; ++j) {
                pw *= x;
                logp += ell[j] * pw * suffix_[near * kOrder + (j - 1)];
            }
        }
        if (logp < kLogFloor) {
            return 0.0;
        }
        if (tail_) {
            logp += far_field(theta, kernel);
        }
        return logp < kLogFloor ? 0.0 : std::exp(logp);
    }

    double at(double t, const MarkKernel& kernel) const { return at_threshold(theta_of_t(K_, t), kernel); }

    double ci(double t) const { return at(t, MarkKernel{}); }

    double itm(double t, const ItmMarkLaw& law) const { return at(t, MarkKernel(law, t)); }

private:
    static constexpr int kOrder = MarkKernel::kSeriesOrder;

    double far_field(double theta, const MarkKernel& kernel) const
    {
        const double x = theta * std::pow(D_ / R_, alpha_);
        const double scale = 2.0 * std::numbers::pi * lambda_ * R_ * R_;
        if (x < kSeriesCut) {
            // int_R^inf (theta D^alpha r^-alpha)^j r dr = R^2 x^j / (alpha j - 2)
            const auto& ell = kernel.log_series();
            double s = 0.0;
            double pw = 1.0;
            for (int j = 1; j <= kOrder; ++j) {
                pw *= x;
                s += ell[j] * pw / (alpha_ * j - 2.0);
            }
            return scale * s;
        }
        // r = R / s maps [R, inf) to (0, 1]
        return scale * integrate([&](double s) {
                   return s == 0.0 ? 0.0 : kernel.log_expectation(x * std::pow(s, alpha_)) / (s * s * s);
               }, 0.0, 1.0, QuadratureSpec{1e-12, 1e-9, 2000});
    }

    double alpha_;
    double lambda_;
    double K_;
    double D_;
    double R_;
    bool tail_;
    std::vector<double> a_;
    std::vector<double> suffix_; ///< suffix_[k*order + j-1] = sum_{i >= k} (a_i / a_k)^j
};

inline double conditional_ps_ci(const GeometryRealization& g, double t, const NetworkParams& params)
{
    if (!(t > 0.0)) {
        throw std::domain_error("conditional_ps_ci: t must be > 0");
    }
    return ConditionalCoverage(g, params).ci(t);
}

inline double conditional_ps_itm(const GeometryRealization& g, double t, const NetworkParams& params,
                                 const ItmMarkLaw& law)
{
    if (!(t > 0.0)) {
        throw std::domain_error("conditional_ps_itm: t must be > 0");
    }
    return ConditionalCoverage(g, params).itm(t, law);
}

/// T_phi = int_0^N (1 - P_s(t)) dt for the continuous grid, and
/// 1 + sum_{t=1}^{N-1} (1 - P_s(t)) for integer packet times.
template <class Ps>
double mean_packet_time(Ps&& ps, double N, TimeGrid grid, std::size_t panels = 32)
{
    if (grid == TimeGrid::INTEGER) {
        const auto last = static_cast<long>(std::floor(N));
        if (static_cast<double>(last) != N) {
            throw std::invalid_argument("integer time grid needs an integer N");
        }
        double T = 1.0;
        for (long t = 1; t < last; ++t) {
            T += 1.0 - ps(static_cast<double>(t));
        }
        return std::clamp(T, 0.0, N);
    }
    const QuadratureRule r = gauss_legendre_panels(0.0, N, panels);
    double T = N;
    for (std::size_t i = 0; i < r.size(); ++i) {
        T -= r.weights[i] * ps(r.nodes[i]);
    }
    return std::clamp(T, 0.0, N);
}

/// What one geometry contributes to an empirical meta-distribution.
struct GeometryOutcome {
    double ps_N = 0.0;
    double tphi = 0.0;
    double rate = 0.0;
    bool capped = false; ///< rate limited to K bits per channel use
    std::size_t resamples = 0;
};

/// Fixed settings for evaluating many geometries: decode-time nodes and their
/// mark kernels are prepared once.
class SimulationPlan {
public:
    SimulationPlan(const NetworkParams& params, InterferenceModel model, const SchemeConfig& scheme,
                   const SimulationOptions& opt = {}, std::shared_ptr<const ItmMarkLaw> law = nullptr)
        : params_(params), model_(model), scheme_(scheme), opt_(opt), law_(std::move(law))
    {
        params_.validate();
        scheme_.validate();
        if (opt_.t_panels == 0 || opt_.mark_panels == 0) {
            throw std::invalid_argument("SimulationOptions: panel counts must be >= 1");
        }
        if (model_ == InterferenceModel::TVI_ITM && !law_) {
            law_ = std::make_shared<const ItmMarkLaw>(itm_mark_law(params_));
        }
        if (model_ == InterferenceModel::CI) {
            law_.reset();
        }
        const double N = params_.N;
        at_N_ = kernel_for(N);
        if (scheme_.time_grid == TimeGrid::CONTINUOUS) {
            const QuadratureRule r = gauss_legendre_panels(0.0, N, opt_.t_panels);
            t_nodes_ = r.nodes;
            t_weights_ = r.weights;
        } else {
            if (std::floor(N) != N) {
                throw std::invalid_argument("integer time grid needs an integer N");
            }
            for (double t = 1.0; t < N; t += 1.0) {
                t_nodes_.push_back(t);
                t_weights_.push_back(1.0);
            }
        }
        for (double t : t_nodes_) {
            t_kernels_.push_back(kernel_for(t));
        }
        for (int i = 1; i < scheme_.amc_levels; ++i) {
            amc_kernels_.push_back(kernel_for(scheme_.amc_time(i, N)));
        }
    }

    const NetworkParams& params() const { return params_; }
    InterferenceModel model() const { return model_; }
    const SchemeConfig& scheme() const { return scheme_; }
    const SimulationOptions& options() const { return opt_; }
    const ItmMarkLaw* law() const { return law_.get(); }

    ConditionalCoverage coverage(const GeometryRealization& g) const
    {
        return ConditionalCoverage(g, params_, opt_.far_field_correction);
    }

    double ps_N(const ConditionalCoverage& c) const { return c.at(params_.N, at_N_); }

    double tphi(const ConditionalCoverage& c) const
    {
        double T = scheme_.time_grid == TimeGrid::CONTINUOUS ? params_.N : 1.0;
        for (std::size_t i = 0; i < t_nodes_.size(); ++i) {
            T -= t_weights_[i] * c.at(t_nodes_[i], t_kernels_[i]);
            if (scheme_.time_grid == TimeGrid::INTEGER) {
                T += 1.0;
            }
        }
        return std::clamp(T, 0.0, params_.N);
    }

    /// Packet time when decoding is attempted only at t_i = i N / L:
    /// t_1 + sum_{i=1}^{L-1} (t_{i+1} - t_i)(1 - P_s(t_i)).
    double tphi_amc(const ConditionalCoverage& c) const
    {
        const double N = params_.N;
        double T = scheme_.amc_time(1, N);
        for (int i = 1; i < scheme_.amc_levels; ++i) {
            const double step = scheme_.amc_time(i + 1, N) - scheme_.amc_time(i, N);
            T += step * (1.0 - c.at(scheme_.amc_time(i, N), amc_kernels_[static_cast<std::size_t>(i - 1)]));
        }
        return T;
    }

    GeometryOutcome evaluate(const GeometryRealization& g) const
    {
        const ConditionalCoverage c = coverage(g);
        GeometryOutcome out;
        out.resamples = g.resamples;
        out.ps_N = ps_N(c);
        const double K = params_.K;
        switch (scheme_.kind) {
        case SchemeKind::FIXED_RATE:
            out.tphi = params_.N;
            out.rate = K / params_.N * out.ps_N;
            break;
        case SchemeKind::AMC:
            out.tphi = tphi_amc(c);
            out.rate = K * out.ps_N / out.tphi;
            break;
        case SchemeKind::RATELESS:
            out.tphi = tphi(c);
            // below one channel use (e.g. no interferers) the rate is capped at K
            out.capped = out.tphi < 1.0;
            out.rate = K * out.ps_N / std::max(out.tphi, 1.0);
            break;
        }
        return out;
    }

private:
    MarkKernel kernel_for(double t) const { return law_ ? MarkKernel(*law_, t, opt_.mark_panels) : MarkKernel{}; }

    NetworkParams params_;
    InterferenceModel model_;
    SchemeConfig scheme_;
    SimulationOptions opt_;
    std::shared_ptr<const ItmMarkLaw> law_;
    MarkKernel at_N_;
    std::vector<double> t_nodes_;
    std::vector<double> t_weights_;
    std::vector<MarkKernel> t_kernels_;
    std::vector<MarkKernel> amc_kernels_;
};

inline double conditional_mean_T(const GeometryRealization& g, const NetworkParams& params, InterferenceModel model,
                                 std::shared_ptr<const ItmMarkLaw> law = nullptr,
                                 TimeGrid grid = TimeGrid::CONTINUOUS)
{
    SchemeConfig scheme;
    scheme.time_grid = grid;
    const SimulationPlan plan(params, model, scheme, {}, std::move(law));
    return plan.tphi(plan.coverage(g));
}

inline double conditional_rate(const GeometryRealization& g, const NetworkParams& params, const SchemeConfig& scheme,
                               InterferenceModel model, std::shared_ptr<const ItmMarkLaw> law = nullptr)
{
    return SimulationPlan(params, model, scheme, {}, std::move(law)).evaluate(g).rate;
}

/// Runs `work(i)` for i in [0, n) on up to `threads` workers. Results must be
/// written to slot i by the callee; the first exception is rethrown.
template <class Work>
void parallel_for(std::size_t n, unsigned threads, Work&& work)
{
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            work(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                    try {
                        work(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        next.store(n);
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

/// Geometry i uses stream (seed.master_seed, seed.stream_id + i), so the
/// output is independent of the thread count and completion order.
inline std::vector<GeometryOutcome> simulate(const SimulationPlan& plan, std::size_t n_real, const RngSeed& seed)
{
    std::vector<GeometryOutcome> out(n_real);
    const double R = plan.options().radius(plan.params());
    parallel_for(n_real, plan.options().threads, [&](std::size_t i) {
        const RngSeed s{seed.master_seed, seed.stream_id + i};
        out[i] = plan.evaluate(sample_geometry(plan.params(), R, s));
    });
    return out;
}

enum class Statistic { COVERAGE, RATE };

inline std::string_view to_string(Statistic s)
{
    return s == Statistic::COVERAGE ? "ps" : "rate";
}

inline Statistic parse_statistic(std::string_view s)
{
    if (s == "ps") {
        return Statistic::COVERAGE;
    }
    if (s == "rate") {
        return Statistic::RATE;
    }
    throw std::invalid_argument("unknown metric '" + std::string(s) + "' (expected ps or rate)");
}

inline std::vector<double> statistic_samples(std::span<const GeometryOutcome> outcomes, Statistic statistic)
{
    std::vector<double> samples;
    samples.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        samples.push_back(statistic == Statistic::COVERAGE ? o.ps_N : o.rate);
    }
    return samples;
}

inline CcdfCurve outcomes_to_ccdf(const SimulationPlan& plan, Statistic statistic,
                                  std::span<const GeometryOutcome> outcomes, std::span<const double> grid,
                                  const RngSeed& seed)
{
    CurveMetadata meta;
    for (const auto& o : outcomes) {
        meta.degenerate += o.capped ? 1 : 0;
        meta.resamples += o.resamples;
    }
    CcdfCurve c = empirical_ccdf(statistic_samples(outcomes, statistic), grid);
    meta.scheme = to_string(plan.scheme().kind);
    meta.model = to_string(plan.model());
    meta.statistic = to_string(statistic);
    meta.params = plan.params();
    meta.seed = seed;
    c.meta = std::move(meta);
    return c;
}

inline CcdfCurve empirical_meta_ccdf(const SimulationPlan& plan, Statistic statistic, std::size_t n_real,
                                     std::span<const double> grid, const RngSeed& seed)
{
    if (n_real < 100) {
        throw std::invalid_argument("empirical_meta_ccdf: need at least 100 realizations");
    }
    const auto outcomes = simulate(plan, n_real, seed);
    return outcomes_to_ccdf(plan, statistic, outcomes, grid, seed);
}

inline CcdfCurve empirical_meta_ccdf(const NetworkParams& params, const SchemeConfig& scheme, InterferenceModel model,
                                     std::size_t n_real, std::span<const double> grid, const RngSeed& seed,
                                     Statistic statistic = Statistic::RATE, const SimulationOptions& opt = {})
{
    return empirical_meta_ccdf(SimulationPlan(params, model, scheme, opt), statistic, n_real, grid, seed);
}

} // namespace ratemeta

#endif
