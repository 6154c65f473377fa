#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "meshfield/analytic.hpp"
#include "meshfield/fit.hpp"

using namespace meshfield;

TEST_CASE("one constraint, one centre: alpha = f for a Gaussian") {
    SampleSet s;
    s.dimension = 2;
    s.points = {Vec3(0.3, 0.7, 0)};
    s.scalar_values.emplace_back(0, 4.2);
    FitConfig cfg;
    cfg.kernel = Kernel(KernelFamily::Gaussian, 1.0);
    ScalarPotentialModel m = fit_mixed(s, cfg);
    REQUIRE(m.coefficients().size() == 1);
    CHECK(m.coefficients()[0] == doctest::Approx(4.2).epsilon(1e-9));
    CHECK(m.eval(s.points[0]) == doctest::Approx(4.2).epsilon(1e-9));
}

TEST_CASE("empty constraints are rejected") {
    SampleSet s;
    s.dimension = 2;
    s.points = {Vec3(0, 0, 0)};
    FitConfig cfg;
    CHECK_THROWS_AS(fit_mixed(s, cfg), InputError);
}

TEST_CASE("mixed fit of u1 on an irregular set") {
    AnalyticField u1 = make_analytic_field("u1");
    SampleSet s = testing::sample_mixed(u1, 500, 0.9, 0.2, 2024);
    FitConfig cfg;
    cfg.kernel = Kernel(KernelFamily::Gaussian, 1.0);
    cfg.epsilon = 1e-24;
    FitReport report;
    ScalarPotentialModel m = fit_mixed(s, cfg, &report);

    double linf = 0.0, angle_sum = 0.0;
    int angle_count = 0;
    for (const Vec3& p : testing::random_points(u1.domain, 2, 400, 77)) {
        linf = std::max(linf, std::abs(m.eval(p) - u1.potential_u(p)));
        Vec3 got = m.gradient(p), want = u1.gradient_u(p);
        if (want.norm() < 1e-3) continue;
        double c = std::clamp(got.dot(want) / (got.norm() * want.norm()), -1.0, 1.0);
        angle_sum += std::acos(c) * 180.0 / M_PI;
        ++angle_count;
    }
    CHECK(linf <= 1e-5);
    CHECK(angle_sum / angle_count <= 3.0);
}

TEST_CASE("vector-only fit keeps the gradient aligned") {
    AnalyticField u2 = make_analytic_field("u2");
    SampleSet s;
    s.dimension = 2;
    s.points = testing::random_points(u2.domain, 2, 400, 5);
    for (std::size_t i = 0; i < s.points.size(); ++i)
        s.vector_values.emplace_back(static_cast<int>(i), u2.gradient_u(s.points[i]));

    FitConfig cfg;
    cfg.kernel = Kernel(KernelFamily::Gaussian, 1.0);
    ScalarPotentialModel m = fit_mixed(s, cfg);
    double angle_sum = 0.0;
    int count = 0;
    for (const Vec3& p : s.points) {
        Vec3 got = m.gradient(p), want = u2.gradient_u(p);
        if (want.norm() < 1e-3) continue;
        double c = std::clamp(got.dot(want) / (got.norm() * want.norm()), -1.0, 1.0);
        angle_sum += std::acos(c) * 180.0 / M_PI;
        ++count;
    }
    CHECK(angle_sum / count <= 1.6);
}

TEST_CASE("componentwise interpolation") {
    SUBCASE("constant field reproduced exactly") {
        SampleSet s;
        s.dimension = 2;
        s.points = testing::random_points(Box{Vec3(-1, -1, 0), Vec3(1, 1, 0)}, 2, 40, 3);
        for (std::size_t i = 0; i < s.points.size(); ++i)
            s.vector_values.emplace_back(static_cast<int>(i), Vec3(1, 0, 0));
        FitConfig cfg;
        cfg.kernel = Kernel(KernelFamily::Gaussian, 1.0);
        cfg.epsilon = 1e-20;
        auto models = fit_componentwise(s, cfg);
        REQUIRE(models.size() == 2);
        for (const Vec3& p : s.points) {
            CHECK(models[0].eval(p) == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(std::abs(models[1].eval(p)) < 1e-10);
        }
    }

    SUBCASE("rigid rotation on a 15x15 grid interpolates to 1e-8") {
        AnalyticField rigid = make_analytic_field("rigid");
        SampleSet s = sample_field_grid(rigid, 15);
        FitConfig cfg;
        cfg.kernel = Kernel(KernelFamily::Cubic, 1.0);
        cfg.epsilon = 1e-10;
        auto models = fit_componentwise(s, cfg);
        double max_resid = 0.0;
        for (const auto& [idx, v] : s.vector_values) {
            Vec3 got(models[0].eval(s.points[idx]), models[1].eval(s.points[idx]), 0);
            max_resid = std::max(max_resid, (got - v).norm());
        }
        CHECK(max_resid <= 1e-8);
    }

    SUBCASE("interpolated rigid rotation recovers its curl") {
        // A smooth kernel keeps the interpolant's analytic curl at the
        // rigid-rotation value 2 in the interior.
        AnalyticField rigid = make_analytic_field("rigid");
        SampleSet s = sample_field_grid(rigid, 15);
        FitConfig cfg;
        cfg.kernel = Kernel(KernelFamily::Gaussian, 0.5);
        cfg.epsilon = 1e-10;
        auto models = fit_componentwise(s, cfg);
        for (const Vec3& p : testing::random_points(rigid.domain.padded(-0.2), 2, 50, 19)) {
            DivCurl dc = eval_field_divergence_curl(models, p);
            CHECK(dc.curl.z() == doctest::Approx(2.0).epsilon(1e-4));
        }
    }

    SUBCASE("divergence of an interpolated harmonic gradient is small") {
        AnalyticField u1 = make_analytic_field("u1");
        SampleSet s = sample_field_grid(u1, 15);
        FitConfig cfg;
        cfg.kernel = Kernel(KernelFamily::Gaussian, 1.0);
        cfg.epsilon = 1e-20;
        auto models = fit_componentwise(s, cfg);
        for (const Vec3& p : testing::random_points(u1.domain.padded(-0.2), 2, 50, 23)) {
            DivCurl dc = eval_field_divergence_curl(models, p);
            CHECK(std::abs(dc.divergence) < 1e-6);
        }
    }
}

TEST_CASE("energy bookkeeping") {
    AnalyticField u1 = make_analytic_field("u1");
    SampleSet s = testing::sample_mixed(u1, 120, 0.9, 0.2, 8);
    FitConfig cfg;
    cfg.kernel = Kernel(KernelFamily::Gaussian, 1.0);
    cfg.delta = 0.5;
    FitReport report;
    ScalarPotentialModel m = fit_mixed(s, cfg, &report);

    ResidualReport res = residual_report(m, s, cfg.delta);
    double energy = 0.0;
    for (double r : res.scalar_residuals) energy += r * r;
    for (double r : res.vector_residuals) energy += cfg.delta * r * r;
    CHECK(report.energy == doctest::Approx(energy).epsilon(1e-6));
    CHECK(res.energy == doctest::Approx(energy).epsilon(1e-10));

    SUBCASE("energy is non-increasing under nested centre sets") {
        std::vector<Vec3> all = s.constrained_points();
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t k : {all.size() / 4, all.size() / 2, all.size()}) {
            FitConfig nested = cfg;
            nested.epsilon = 1e-24;
            nested.centres.assign(all.begin(), all.begin() + k);
            FitReport rep;
            fit_mixed(s, nested, &rep);
            CHECK(rep.energy <= prev * (1.0 + 1e-9) + 1e-12);
            prev = rep.energy;
        }
    }
}

TEST_CASE("scale-mismatch warning") {
    SampleSet s;
    s.dimension = 2;
    s.points = testing::random_points(Box{Vec3(-1, -1, 0), Vec3(1, 1, 0)}, 2, 30, 4);
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        s.scalar_values.emplace_back(static_cast<int>(i), 1e5 * s.points[i].x());
        s.vector_values.emplace_back(static_cast<int>(i), Vec3(1e-3, 0, 0));
    }
    FitConfig cfg;
    cfg.kernel = Kernel(KernelFamily::Gaussian, 1.0);
    FitReport report;
    fit_mixed(s, cfg, &report);
    CHECK(!report.warnings.empty());
}

TEST_CASE("singular system without regularization raises with a condition estimate") {
    SampleSet s;
    s.dimension = 2;
    // Duplicate centres via explicit config make the Gram matrix singular.
    s.points = {Vec3(0, 0, 0), Vec3(1, 0, 0)};
    s.scalar_values.emplace_back(0, 1.0);
    s.scalar_values.emplace_back(1, 2.0);
    FitConfig cfg;
    cfg.kernel = Kernel(KernelFamily::Gaussian, 1.0);
    cfg.centres = {Vec3(0.5, 0, 0), Vec3(0.5, 0, 0)};
    cfg.epsilon = 0.0;
    CHECK_THROWS_AS(fit_mixed(s, cfg), NumericalError);
}
