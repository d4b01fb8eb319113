#include <cmath>

#include "doctest.h"
#include "test_helpers.hpp"
#include "torwalk/limit_stats.hpp"

using namespace torwalk;
using namespace torwalk::testing;

TEST_SUITE_BEGIN("limit_theorems");

TEST_CASE("lln_check: constants, frozen walk, golden envelope") {
    FiniteSupportMeasure mu = golden_measure();
    std::vector<double> x0 = {0.0, 0.0};

    LlnResult c = lln_check(tf_constant(2, 2.5), mu, x0, 1000, RngStream(1, 1), 10);
    for (double v : c.series) CHECK(v == doctest::Approx(0.0));
    CHECK(c.envelope_max == doctest::Approx(0.0));

    // no mixing: S_n/n is the constant f(x0) - mean
    FiniteSupportMeasure diracI =
        FiniteSupportMeasure::dirac(GroupElement::identity(2, mu.basis()));
    TestFunction f = tf_re_ec({1, 0});
    std::vector<double> x1 = {0.25, 0.0};
    LlnResult frozen = lln_check(f, diracI, x1, 500, RngStream(2, 2), 5);
    const double expect = f(x1) - f.mean_ref;
    for (double v : frozen.series) CHECK(v == doctest::Approx(expect).epsilon(1e-12));

    LlnResult g = lln_check(f, mu, x0, 10000, RngStream(3, 3), 100);
    CHECK(g.envelope_max < 0.05);
}

TEST_CASE("sigma2_estimate: constants vanish, coboundary vanishes, cosine does not") {
    FiniteSupportMeasure mu = golden_measure();

    VarianceEstimate zc = sigma2_estimate(tf_constant(2, 1.5), mu, 10,
                                          IntegrationMode::McUniform, RngStream(4, 4), 2000);
    CHECK(std::abs(zc.sigma2_hat) <= 3.0 * zc.stderr_ + 1e-12);

    TestFunction cob = tf_coboundary_dist0(mu);
    VarianceEstimate zv =
        sigma2_estimate(cob, mu, 25, IntegrationMode::McUniform, RngStream(5, 5), 20000);
    CHECK(std::abs(zv.sigma2_hat) <= 3.0 * zv.stderr_);
    CHECK_FALSE(zv.negative_flag);

    VarianceEstimate pos = sigma2_estimate(tf_re_ec({1, 0}), mu, 25,
                                           IntegrationMode::McUniform, RngStream(6, 6), 20000);
    CHECK(pos.sigma2_hat > 3.0 * pos.stderr_);
}

TEST_CASE("sigma2_estimate grid mode matches mc mode") {
    FiniteSupportMeasure mu = golden_measure();
    TestFunction f = tf_re_ec({1, 0});
    VarianceEstimate a =
        sigma2_estimate(f, mu, 20, IntegrationMode::Grid, RngStream(7, 7), 16384);
    VarianceEstimate b =
        sigma2_estimate(f, mu, 20, IntegrationMode::McUniform, RngStream(8, 8), 16384);
    CHECK(std::abs(a.sigma2_hat - b.sigma2_hat) <=
          4.0 * std::hypot(a.stderr_, b.stderr_) + 0.02);
}

TEST_CASE("bounded_sum_check: telescoping identity and the sqrt2 bound") {
    FiniteSupportMeasure mu = golden_measure();
    std::vector<std::vector<double>> starts = {{0.0, 0.0}, {0.3, 0.8}, {0.5, 0.5}};
    BoundedSumResult r = bounded_sum_check(mu, starts, 1000, 300, RngStream(9, 9));
    CHECK(r.trajectories == 300);
    CHECK(r.max_residual <= 1e-10);
    CHECK(r.max_abs_sum <= std::numbers::sqrt2);

    BoundedSumResult r0 = bounded_sum_check(mu, starts, 0, 3, RngStream(9, 10));
    CHECK(r0.max_abs_sum == 0.0);  // S_0 = 0
    CHECK(r0.max_residual <= 1e-15);
}

TEST_CASE("nonconcentration: deterministic zero regimes and monotonicity") {
    FiniteSupportMeasure mu = golden_measure();
    TestFunction f = tf_re_ec({1, 0});
    std::vector<double> x0 = {0.0, 0.0};
    std::vector<long> ns = {20, 40};

    // eps with n eps ||f||_a > 2 n ||f||_inf: |S_n f| can never exceed it
    const double eps_dead = 2.2 * f.sup_bound / f.norm_alpha();
    auto curves = nonconcentration_curve(f, mu, x0, std::vector<double>{eps_dead}, ns, 2000,
                                         RngStream(10, 10), true);
    for (double p : curves[0].probs) CHECK(p == 0.0);

    // zero-variance configuration: |S_n f| <= sqrt2, so any fixed eps dies
    // once n eps ||f||_a > sqrt2
    TestFunction cob = tf_coboundary_dist0(mu);
    const double eps = 0.5;
    std::vector<long> ns2 = {8, 16, 32};
    auto curves2 = nonconcentration_curve(cob, mu, x0, std::vector<double>{eps}, ns2, 2000,
                                          RngStream(11, 11), true);
    for (std::size_t i = 0; i < ns2.size(); ++i) {
        if (static_cast<double>(ns2[i]) * eps * cob.norm_alpha() > std::numbers::sqrt2)
            CHECK(curves2[0].probs[i] == 0.0);
    }

    // shared samples make exceedance non-increasing in eps
    std::vector<double> eps_grid = {0.05, 0.1, 0.2};
    auto curves3 =
        nonconcentration_curve(f, mu, x0, eps_grid, ns, 4000, RngStream(12, 12), false);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        CHECK(curves3[1].probs[i] <= curves3[0].probs[i]);
        CHECK(curves3[2].probs[i] <= curves3[1].probs[i]);
    }
}

TEST_CASE("clt_sample: degenerate cases and variance stabilization") {
    FiniteSupportMeasure mu = golden_measure();
    std::vector<double> x0 = {0.0, 0.0};

    CltSamples zero = clt_sample(tf_constant(2, 0.7), mu, x0, 200, 50, RngStream(13, 13));
    for (double v : zero.final_value) CHECK(v == doctest::Approx(0.0));

    // zero-variance example: sample std of S_n/sqrt(n) <= 2 sqrt2 / sqrt(n)
    TestFunction cob = tf_coboundary_dist0(mu);
    CltSamples deg = clt_sample(cob, mu, x0, 10000, 2000, RngStream(14, 14));
    RunningStats st;
    for (double v : deg.final_value) st.add(v);
    CHECK(st.stddev() < 0.03);

    // scale coupling: variances at n and 4n within a [0.6, 1.6] factor
    TestFunction f = tf_re_ec({1, 0});
    CltSamples s1 = clt_sample(f, mu, x0, 500, 4000, RngStream(15, 15));
    CltSamples s4 = clt_sample(f, mu, x0, 2000, 4000, RngStream(16, 16));
    RunningStats v1, v4;
    for (double v : s1.final_value) v1.add(v);
    for (double v : s4.final_value) v4.add(v);
    const double ratio = v4.variance() / v1.variance();
    CHECK(ratio > 0.6);
    CHECK(ratio < 1.6);
}

TEST_CASE("gaussian oracle: final value matches the normal law") {
    CltSamples o = gaussian_walk_oracle(0.49, 400, 20000, RngStream(17, 17));
    const double sd = 0.7;
    const double ks =
        ks_statistic(o.final_value, [sd](double x) { return normal_cdf(x, 0.0, sd); });
    CHECK(ks < 0.015);
    RunningStats st;
    for (double v : o.running_max) st.add(v);
    CHECK(st.mean() > 0.0);  // running max of a centered walk is positive
}

TEST_CASE("asclt_average: constants, degenerate decay bound") {
    FiniteSupportMeasure mu = golden_measure();
    std::vector<double> x0 = {0.0, 0.0};
    auto square = [](double t) { return t * t; };

    AscltSeries c = asclt_average(tf_constant(2, 1.0), mu, x0, square, 2000, RngStream(18, 18),
                                  std::vector<long>{2000});
    CHECK(c.averages.back() == doctest::Approx(0.0));

    // zero-variance case: |S_k| <= sqrt2 gives A_n <= (pi^2/3)/ln n
    TestFunction cob = tf_coboundary_dist0(mu);
    AscltSeries d = asclt_average(cob, mu, x0, square, 100000, RngStream(19, 19),
                                  std::vector<long>{100000});
    CHECK(d.averages.back() <= (std::numbers::pi * std::numbers::pi / 3.0) /
                                   std::log(100000.0));
}

TEST_CASE("centered sums: S_0 = 0 and S_{k+1} - S_k = f(X_k) - mean along a trajectory") {
    FiniteSupportMeasure mu = golden_measure().to_float();
    TestFunction f = tf_re_ec({1, 0});
    Trajectory t = simulate_walk(mu, TorusPoint::floating({0.1, 0.9}), 200, RngStream(23, 5));
    double s = 0.0;
    std::vector<double> sums = {0.0};
    for (std::size_t k = 0; k + 1 < t.points.size(); ++k) {
        s += f(t.points[k].float_coords()) - f.mean_ref;
        sums.push_back(s);
    }
    for (std::size_t k = 0; k + 1 < sums.size(); ++k)
        CHECK(sums[k + 1] - sums[k] ==
              doctest::Approx(f(t.points[k].float_coords()) - f.mean_ref).epsilon(1e-15));
    CHECK(sums[0] == 0.0);
}

TEST_CASE("sigma2 estimate is identical across thread counts") {
    FiniteSupportMeasure mu = golden_measure();
    TestFunction f = tf_re_ec({1, 0});
    VarianceEstimate a =
        sigma2_estimate(f, mu, 10, IntegrationMode::McUniform, RngStream(24, 6), 2000, 1);
    VarianceEstimate b =
        sigma2_estimate(f, mu, 10, IntegrationMode::McUniform, RngStream(24, 6), 2000, 2);
    CHECK(a.sigma2_hat == b.sigma2_hat);
    CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("deterministic bound: |S_n f| <= 2 n ||f||_inf on every sample") {
    FiniteSupportMeasure mu = golden_measure();
    TestFunction f = tf_re_ec({1, 0});
    FloatWalker walker(mu);
    RngStream rng(20, 20);
    for (int rep = 0; rep < 50; ++rep) {
        RngStream stream = rng.derived(static_cast<std::uint64_t>(rep));
        std::vector<double> x = {0.0, 0.0};
        double s = 0.0;
        for (int k = 1; k <= 200; ++k) {
            s += f(x) - f.mean_ref;
            walker.step(x, stream);
            CHECK(std::abs(s) <= 2.0 * k * f.sup_bound + 1e-9);
        }
    }
}

TEST_SUITE_END();
