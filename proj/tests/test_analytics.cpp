#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include "ratemeta/analytics.hpp"

using namespace ratemeta;

namespace {

double H_closed(int n, double d, double th)
{
    if (th == 0.0 || std::isinf(th)) {
        return th;
    }
    const double x = th / (1.0 + th);
    return std::expm1(-n * std::log1p(th)) + n * std::pow(th, d) * boost::math::beta(1.0 - d, n + d, x);
}

double mu_closed(double d, double th)
{
    if (std::isinf(th)) {
        return 0.0;
    }
    return d * std::pow(th, -d) * boost::math::beta(d, 1.0 - d, th / (1.0 + th));
}

// Partial fractions: J(a, b) = (a H1(a) - b H1(b)) / (a - b).
double J_closed(double d, double a, double b)
{
    if (a == b) {
        return H_closed(2, d, a);
    }
    if (std::isinf(a) || std::isinf(b)) {
        return std::numeric_limits<double>::infinity();
    }
    return (a * H_closed(1, d, a) - b * H_closed(1, d, b)) / (a - b);
}

NetworkParams params(double alpha, double N)
{
    return NetworkParams{1.0, alpha, 75.0, N, 1.0};
}

} // namespace

TEST(Theta, Examples)
{
    EXPECT_DOUBLE_EQ(theta_of_t(75, 75), 1.0);
    EXPECT_DOUBLE_EQ(theta_of_t(75, 25), 7.0);
    EXPECT_NEAR(theta_of_t(75, 150), std::numbers::sqrt2 - 1.0, 1e-15);
    EXPECT_THROW(theta_of_t(75, 0.0), std::domain_error);
    EXPECT_THROW(theta_of_t(75, -1.0), std::domain_error);
    EXPECT_TRUE(std::isinf(theta_of_t(75, 0.01)));
}

TEST(Theta, StrictlyDecreasing)
{
    double prev = theta_of_t(75, 1.0);
    for (int t = 2; t <= 300; ++t) {
        const double th = theta_of_t(75, t);
        EXPECT_LT(th, prev);
        EXPECT_GT(th, 0.0);
        prev = th;
    }
}

TEST(NetworkParams, Validation)
{
    EXPECT_NO_THROW(params(3, 200).validate());
    EXPECT_THROW(params(2, 200).validate(), std::invalid_argument);
    EXPECT_THROW(params(3, 0).validate(), std::invalid_argument);
    EXPECT_THROW((NetworkParams{0.0, 3, 75, 100, 1}).validate(), std::invalid_argument);
    EXPECT_THROW((NetworkParams{1.0, 3, -75, 100, 1}).validate(), std::invalid_argument);
    EXPECT_THROW((NetworkParams{1.0, 3, 75, 100, 0}).validate(), std::invalid_argument);
    EXPECT_NEAR(params(4, 1).rayleigh_scale(), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
}

TEST(MarkLaw, MeanDecodeTimeAgainstFrozenAndIndependentQuadrature)
{
    const NetworkParams p = params(3, 200);
    const double mu = itm_mean_decode_time(p);
    EXPECT_NEAR(mu, 59.824467603827278, 1e-8);

    boost::math::quadrature::tanh_sinh<double> ts;
    const double d = p.delta();
    const double ref = ts.integrate([&](double t) { return 1.0 - mu_closed(d, theta_of_t(75, t)); }, 0.0, 200.0, 1e-12);
    EXPECT_NEAR(mu, ref, 1e-8);

    EXPECT_NEAR(itm_mean_decode_time(params(4, 100)), 41.419548213932701, 1e-8);
}

TEST(MarkLaw, MeanDecodeTimeNeverExceedsBudget)
{
    for (double alpha : {2.5, 3.0, 4.0, 6.0}) {
        for (double N : {10.0, 90.0, 400.0}) {
            const double mu = itm_mean_decode_time(params(alpha, N));
            EXPECT_GT(mu, 0.0);
            EXPECT_LE(mu, N);
        }
    }
}

TEST(MarkLaw, GridInvariants)
{
    const ItmMarkLaw law = itm_mark_law(params(4, 100));
    EXPECT_EQ(law.grid().size(), 512u);
    EXPECT_DOUBLE_EQ(law.grid().back(), 100.0);
    EXPECT_NEAR(law.omega_grid().front(), 1.0, 1e-3);
    for (std::size_t i = 1; i < law.grid().size(); ++i) {
        EXPECT_GE(law.cdf_grid()[i], law.cdf_grid()[i - 1]);
        EXPECT_LE(law.omega_grid()[i], law.omega_grid()[i - 1] + 1e-15);
        EXPECT_GE(law.omega_grid()[i], 0.0);
        EXPECT_LE(law.cdf_grid()[i], 1.0);
    }
    EXPECT_NEAR(law.omega(0.0), 1.0, 0.0);
}

TEST(MarkLaw, FrozenOmegaValues)
{
    const ItmMarkLaw law = itm_mark_law(params(4, 100));
    EXPECT_NEAR(law.omega(100.0), 0.55598901985755114, 1e-9);
    EXPECT_NEAR(law.direct_omega(50.0), 0.77583222630521449, 1e-9);
    EXPECT_NEAR(law.omega(50.0), 0.77583222630521449, 1e-6);
}

TEST(MarkLaw, InterpolationMatchesDirectEvaluation)
{
    const ItmMarkLaw law = itm_mark_law(params(3, 200));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 200.0);
    for (int i = 0; i < 20; ++i) {
        const double t = u(rng);
        EXPECT_NEAR(law.cdf(t), law.direct_cdf(t), 1e-6) << t;
        EXPECT_NEAR(law.omega(t), law.direct_omega(t), 1e-6) << t;
    }
}

TEST(MarkLaw, CdfApproachesOneAsRequirementVanishes)
{
    // F(t) = 1 / (1 + H(theta_t min(1, mu/t))) and the argument vanishes for large K/N ratios of t
    const NetworkParams p{1.0, 4.0, 1.0, 1000.0, 1.0};
    const ItmMarkLaw law = itm_mark_law(p);
    EXPECT_GT(law.cdf(1000.0), 0.99);
}

TEST(MomentCi, Examples)
{
    const NetworkParams p = params(4, 100);
    EXPECT_NEAR(moment_ci(1, 75.0, p).value, 1.0 / (1.0 + std::numbers::pi / 4), 1e-12);
    EXPECT_NEAR(moment_ci(1, 75.0, p).value, 0.560099, 1e-6);
    EXPECT_EQ(moment_ci(1, 75.0, p).provenance, Provenance::EXACT);
    EXPECT_NEAR(moment_ci(3, 1e9, p).value, 1.0, 1e-6);
    EXPECT_NEAR(moment_ci(2, 75.0, params(3, 200)).value, 0.24278742332119995, 1e-12);
    EXPECT_NEAR(moment_ci(2, 75.0, params(3, 200)).value, 1.0 / (1.0 + H_closed(2, 2.0 / 3.0, 1.0)), 1e-12);
    EXPECT_NEAR(moment_ci(1, 100.0, p).value, 0.63697492183894821, 1e-12);
    EXPECT_THROW(moment_ci(0, 75.0, p), std::domain_error);
}

TEST(MomentCi, DecreasingInOrderIncreasingInTime)
{
    const NetworkParams p = params(3, 200);
    for (double t = 10; t <= 200; t += 10) {
        const double m1 = moment_ci(1, t, p).value;
        const double m2 = moment_ci(2, t, p).value;
        EXPECT_GT(m1, m2);
        EXPECT_GT(m2, moment_ci(3, t, p).value);
        EXPECT_GT(m1, 0.0);
        EXPECT_LT(m1, 1.0);
        EXPECT_LT(m1, moment_ci(1, t + 5, p).value);
    }
}

TEST(MomentTvi, ReducesToCiWhenMarksNeverEnd)
{
    const NetworkParams p = params(4, 100);
    const ItmMarkLaw never = ItmMarkLaw::never_completes(100.0);
    for (double t : {10.0, 50.0, 100.0}) {
        EXPECT_NEAR(moment_tvi(2, t, p, never).value, moment_ci(2, t, p).value, 1e-14);
    }
}

TEST(MomentTvi, FrozenValueAndOrdering)
{
    const NetworkParams p = params(4, 100);
    const MomentModel m(p, InterferenceModel::TVI_ITM);
    EXPECT_NEAR(m.moment(1, 100.0).value, 0.74639070643011848, 1e-8);
    EXPECT_EQ(m.moment(1, 100.0).provenance, Provenance::LOWER_BOUND);
    // independent route: closed-form H at the directly evaluated omega
    const double w = m.law()->direct_omega(100.0);
    EXPECT_NEAR(m.moment(1, 100.0).value, 1.0 / (1.0 + H_closed(1, 0.5, w * theta_of_t(75, 100))), 1e-8);
    for (double t = 5; t <= 100; t += 5) {
        EXPECT_GE(m.moment(1, t).value, moment_ci(1, t, p).value);
        EXPECT_GE(m.moment(2, t).value, moment_ci(2, t, p).value);
    }
}

TEST(ProductMoment, DiagonalEqualsSecondOrderKernel)
{
    for (double d : {0.5, 2.0 / 3.0}) {
        for (double th : {0.2, 1.0, 5.0}) {
            EXPECT_NEAR(1.0 / (1.0 + hyp_J(d, th, th)), 1.0 / (1.0 + hyp_H(2, d, th)), 1e-8);
            EXPECT_NEAR(hyp_J(d, th, th), H_closed(2, d, th), 1e-10);
        }
    }
}

TEST(ProductMoment, PartialFractionOracle)
{
    for (double d : {0.4, 0.5, 2.0 / 3.0}) {
        for (double a : {1e-3, 0.3, 4.0, 250.0, 1e7}) {
            for (double b : {0.05, 2.0, 1e4}) {
                const double ref = J_closed(d, a, b);
                EXPECT_NEAR(hyp_J(d, a, b) / ref, 1.0, 1e-9) << d << " " << a << " " << b;
            }
        }
    }
}

TEST(ProductMoment, SymmetryAndLimits)
{
    const NetworkParams p = params(4, 100);
    const ItmMarkLaw law = itm_mark_law(p);
    EXPECT_EQ(product_moment(20.0, 70.0, p, law), product_moment(70.0, 20.0, p, law));
    EXPECT_EQ(hyp_J(0.5, 0.0, 0.0), 0.0);
    EXPECT_NEAR(1.0 / (1.0 + hyp_J(0.5, 1e-12, 1e-12)), 1.0, 1e-5);
    EXPECT_TRUE(std::isinf(hyp_J(0.5, std::numeric_limits<double>::infinity(), 1.0)));
    const double q = product_moment(30.0, 90.0, p, law);
    EXPECT_GT(q, 0.0);
    EXPECT_LE(q, 1.0);
}

TEST(CoverageMeta, EndpointsAndMonotonicity)
{
    for (auto model : {InterferenceModel::CI, InterferenceModel::TVI_ITM}) {
        const NetworkParams p = params(3, 200);
        EXPECT_NEAR(ps_meta_ccdf(0.0, p, model), 1.0, 0.0);
        EXPECT_NEAR(ps_meta_ccdf(1.0, p, model), 0.0, 0.0);
        const BetaParams fit = coverage_beta_fit(MomentModel(p, model));
        double prev = 1.0;
        for (int i = 0; i <= 100; ++i) {
            const double v = reg_inc_beta_upper(i / 100.0, fit);
            EXPECT_LE(v, prev);
            EXPECT_GE(v, 0.0);
            prev = v;
        }
    }
    EXPECT_THROW(ps_meta_ccdf(1.2, params(3, 200), InterferenceModel::CI), std::domain_error);
}

TEST(CoverageMeta, FitReproducesMoments)
{
    const MomentModel m(params(4, 90), InterferenceModel::CI);
    const BetaParams fit = coverage_beta_fit(m);
    EXPECT_NEAR(fit.mean(), m.moment(1, 90).value, 1e-9);
    EXPECT_NEAR(fit.second_moment(), m.moment(2, 90).value, 1e-9);
}

TEST(Tphi, BoundsAndIndependentOracle)
{
    const NetworkParams p = params(3, 200);
    const TphiMoments nu = tphi_moments(p, InterferenceModel::CI);
    EXPECT_GT(nu.nu1, 0.0);
    EXPECT_LE(nu.nu1, 200.0);
    EXPECT_GE(nu.nu2, nu.nu1 * nu.nu1);
    EXPECT_LE(nu.nu2, 200.0 * nu.nu1);
    EXPECT_EQ(nu.provenance, Provenance::EXACT);

    // Closed-form kernels under nested adaptive Gauss-Kronrod.
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double d = p.delta();
    const double m1 = GK::integrate([&](double t) { return 1.0 / (1.0 + H_closed(1, d, theta_of_t(75, t))); }, 0.0,
                                    200.0, 15, 1e-12);
    const double nu1 = 200.0 - m1;
    const double q = GK::integrate([&](double t) {
        const double a = theta_of_t(75, t);
        return GK::integrate([&](double u) { return 1.0 / (1.0 + J_closed(d, a, theta_of_t(75, u))); }, 0.0, 200.0,
                             15, 1e-10);
    }, 0.0, 200.0, 15, 1e-10);
    const double nu2 = 200.0 * (2.0 * nu1 - 200.0) + q;
    EXPECT_NEAR(nu.nu1, nu1, 1e-6 * 200);
    EXPECT_NEAR(nu.nu2, nu2, 1e-5 * 200 * 200);
}

TEST(Tphi, TviLowerBoundProvenance)
{
    const TphiMoments nu = tphi_moments(params(4, 100), InterferenceModel::TVI_ITM);
    EXPECT_EQ(nu.provenance, Provenance::LOWER_BOUND);
    EXPECT_GE(nu.variance(), 0.0);
    EXPECT_LE(nu.nu1, 100.0);
}

TEST(RateMeta, RatelessEndpointsAndMonotonicity)
{
    const RatelessRateMeta meta(params(3, 200), InterferenceModel::CI);
    EXPECT_EQ(meta.ccdf(0.0), 1.0);
    double prev = 1.0;
    for (int i = 0; i <= 200; ++i) {
        const double v = meta.ccdf(7.5 * i / 200.0);
        EXPECT_LE(v, prev + 1e-12);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        prev = v;
    }
    EXPECT_THROW(meta.ccdf(-1.0), std::domain_error);
}

TEST(RateMeta, FixedRateCeiling)
{
    const NetworkParams p = params(3, 200);
    const FixedRateMeta fixed(p);
    EXPECT_EQ(fixed.ccdf(0.0), 1.0);
    EXPECT_EQ(fixed.ccdf(75.0 / 200.0), 0.0);
    EXPECT_EQ(rate_meta_ccdf_fixed(0.5, p), 0.0);
    EXPECT_EQ(rate_meta_ccdf_fixed(100.0, p), 0.0);
    EXPECT_NEAR(fixed.ccdf(75.0 / 400.0), ps_meta_ccdf(0.5, p, InterferenceModel::CI), 1e-14);
}

TEST(RateMeta, RatelessDominatesFixedUnderCi)
{
    const NetworkParams p = params(3, 200);
    const RatelessRateMeta rateless(p, InterferenceModel::CI);
    const FixedRateMeta fixed(p);
    for (int i = 0; i <= 100; ++i) {
        const double r = 1.0 * i / 100.0;
        EXPECT_GE(rateless.ccdf(r) + 1e-9, fixed.ccdf(r)) << r;
    }
}

TEST(RateMeta, TimeFitReproducesTphiMoments)
{
    const RatelessRateMeta meta(params(4, 100), InterferenceModel::TVI_ITM);
    EXPECT_NEAR(meta.time_fit().mean(), meta.tphi().nu1 / 100.0, 1e-9);
    EXPECT_NEAR(meta.time_fit().second_moment(), meta.tphi().nu2 / 1e4, 1e-9);
}
