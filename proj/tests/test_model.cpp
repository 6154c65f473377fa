#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>

#include "helpers.hpp"
#include "meshfield/analytic.hpp"
#include "meshfield/fit.hpp"
#include "meshfield/model.hpp"

using namespace meshfield;
using testing::fd_curl;
using testing::fd_gradient;
using testing::random_points;

TEST_CASE("trivial scalar models") {
    Kernel gauss(KernelFamily::Gaussian, 1.0);
    std::vector<Vec3> centres{Vec3(0, 0, 0), Vec3(1, 1, 0)};
    ScalarPotentialModel zero(gauss, 2, centres, Eigen::VectorXd::Zero(2));
    CHECK(zero.eval(Vec3(0.3, -0.8, 0)) == 0.0);
    CHECK(zero.gradient(Vec3(0.3, -0.8, 0)).norm() == 0.0);

    Eigen::VectorXd alpha(1);
    alpha << 2.5;
    ScalarPotentialModel one(gauss, 2, {Vec3(0.5, 0.5, 0)}, alpha);
    Vec3 p(1.0, 0.0, 0.0);
    double r2 = (p - Vec3(0.5, 0.5, 0)).squaredNorm();
    CHECK(one.eval(p) == doctest::Approx(2.5 * std::exp(-r2)));
}

TEST_CASE("model gradient and hessian match finite differences") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Vec3> centres = random_points(Box{Vec3(-1, -1, 0), Vec3(1, 1, 0)}, 2, 12, 4);
    Eigen::VectorXd alpha(12);
    for (int i = 0; i < 12; ++i) alpha[i] = dist(rng);
    ScalarPotentialModel m(Kernel(KernelFamily::Gaussian, 1.0), 2, centres, alpha);

    for (int trial = 0; trial < 30; ++trial) {
        Vec3 p(dist(rng), dist(rng), 0);
        Vec3 fd = fd_gradient([&](const Vec3& q) { return m.eval(q); }, p, 2);
        CHECK((m.gradient(p) - fd).norm() < 1e-5);
        double lap = m.hessian(p).trace();
        CHECK(m.laplacian(p) == doctest::Approx(lap).epsilon(1e-8));
    }
}

TEST_CASE("serialization round trip is bit-exact") {
    std::vector<Vec3> centres{Vec3(0.1, 0.2, 0.3), Vec3(-1.0 / 3.0, 2.0 / 7.0, 0.577)};
    Eigen::VectorXd alpha(2);
    alpha << 1.0 / 3.0, -2.718281828459045;
    ScalarPotentialModel m(Kernel(KernelFamily::Multiquadric, 1.5), 3, centres, alpha);

    std::string path = "model_roundtrip_test.json";
    m.save(path);
    ScalarPotentialModel back = ScalarPotentialModel::load(path);
    std::remove(path.c_str());
    REQUIRE(back.centres().size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(back.coefficients()[i] == m.coefficients()[i]);
        CHECK((back.centres()[i] - m.centres()[i]).norm() == 0.0);
    }
    CHECK(back.kernel().family() == m.kernel().family());
    CHECK(back.kernel().sigma() == m.kernel().sigma());
    CHECK(back.eval(Vec3(0.9, -0.4, 0.2)) == m.eval(Vec3(0.9, -0.4, 0.2)));
}

TEST_CASE("vector potential: curl via finite differences, divergence identity") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Vec3> centres = random_points(Box{Vec3(-1, -1, -1), Vec3(1, 1, 1)}, 3, 10, 6);
    Eigen::MatrixXd coeffs(3, 10);
    for (int i = 0; i < coeffs.size(); ++i) coeffs(i) = dist(rng);
    VectorPotentialModel w(Kernel(KernelFamily::Gaussian, 1.0), 3, centres, coeffs);

    ScalarPotentialModel wz2d(Kernel(KernelFamily::Gaussian, 1.0), 2, {}, Eigen::VectorXd());
    for (int trial = 0; trial < 50; ++trial) {
        Vec3 p(dist(rng), dist(rng), dist(rng));
        Vec3 fd = fd_curl([&](const Vec3& q) { return w.eval_potential(q); }, p);
        CHECK((w.curl(p) - fd).norm() < 1e-5);
        CHECK(std::abs(w.curl_divergence(p)) < 1e-10);
    }

    // 2D: a single stream potential with planar rotor.
    std::vector<Vec3> c2 = random_points(Box{Vec3(-1, -1, 0), Vec3(1, 1, 0)}, 2, 8, 8);
    Eigen::MatrixXd coeffs2(1, 8);
    for (int i = 0; i < 8; ++i) coeffs2(0, i) = dist(rng);
    VectorPotentialModel w2(Kernel(KernelFamily::Gaussian, 1.0), 2, c2, coeffs2);
    ScalarPotentialModel stream(Kernel(KernelFamily::Gaussian, 1.0), 2, c2,
                                coeffs2.row(0).transpose());
    for (int trial = 0; trial < 30; ++trial) {
        Vec3 p(dist(rng), dist(rng), 0);
        Vec3 g = stream.gradient(p);
        CHECK((w2.curl(p) - Vec3(g.y(), -g.x(), 0)).norm() < 1e-12);
        CHECK(std::abs(w2.curl_divergence(p)) < 1e-10);
    }
}

TEST_CASE("vector model serialization round trip") {
    std::vector<Vec3> centres{Vec3(0.25, -0.5, 0.125)};
    Eigen::MatrixXd coeffs(3, 1);
    coeffs << 0.1, -0.2, 0.3;
    VectorPotentialModel w(Kernel(KernelFamily::Gaussian, 0.7), 3, centres, coeffs);
    std::string path = "wmodel_roundtrip_test.json";
    w.save(path);
    VectorPotentialModel back = VectorPotentialModel::load(path);
    std::remove(path.c_str());
    CHECK((back.coefficients() - w.coefficients()).norm() == 0.0);
    Vec3 p(0.4, 0.1, -0.3);
    CHECK((back.curl(p) - w.curl(p)).norm() == 0.0);
}

TEST_CASE("analytic field registry") {
    AnalyticField u1 = make_analytic_field("u1");
    CHECK(u1.potential_u(Vec3(1, 1, 0)) == doctest::Approx(0.0));
    CHECK((u1.gradient_u(Vec3(1, 1, 0)) - Vec3(2, -2, 0)).norm() < 1e-14);

    // Every registered conservative potential differentiates to its gradient.
    for (const std::string& name : analytic_field_names()) {
        AnalyticField f = make_analytic_field(name);
        auto pts = random_points(f.domain, f.dimension, 40, 21);
        for (const Vec3& p : pts) {
            if (f.potential_u && f.gradient_u) {
                Vec3 fd = fd_gradient(f.potential_u, p, f.dimension);
                CHECK((f.gradient_u(p) - fd).norm() < 1e-5 * (1.0 + f.gradient_u(p).norm()));
            }
            if (f.potential_w && f.curl_w && f.dimension == 3) {
                Vec3 fd = fd_curl(f.potential_w, p);
                CHECK((f.curl_w(p) - fd).norm() < 1e-5 * (1.0 + f.curl_w(p).norm()));
            }
        }
        // Named critical points are zeros of the gradient.
        for (const Vec3& cp : f.critical_points) CHECK(f.gradient_u(cp).norm() < 1e-12);
    }

    AnalyticField fig8 = make_analytic_field("fig8");
    Vec3 p(1, 1, 1);
    CHECK((fig8.field(p) - (fig8.gradient_u(p) + fig8.curl_w(p))).norm() < 1e-14);

    AnalyticField sincos = make_analytic_field("sincos");
    bool has_pi_half = false;
    for (const Vec3& cp : sincos.critical_points)
        if ((cp - Vec3(M_PI / 2, 0, 0)).norm() < 1e-12) has_pi_half = true;
    CHECK(has_pi_half);

    CHECK_THROWS_AS(make_analytic_field("nope"), InputError);
}

TEST_CASE("fitted u1 model reproduces the potential at held-out points") {
    AnalyticField u1 = make_analytic_field("u1");
    SampleSet s = sample_field_grid(u1, 20);
    // Grid sampling emits vectors; add the scalar values to pin the constant.
    for (std::size_t i = 0; i < s.size(); ++i)
        s.scalar_values.emplace_back(static_cast<int>(i), u1.potential_u(s.points[i]));

    FitConfig cfg;
    cfg.kernel = Kernel(KernelFamily::Gaussian, 1.0);
    // Near-zero ridge: the flat-kernel least-squares optimum needs the small
    // singular directions that a 1e-10 ridge would filter out.
    cfg.epsilon = 1e-20;
    ScalarPotentialModel m = fit_mixed(s, cfg);

    for (const Vec3& p : random_points(u1.domain, 2, 100, 33))
        CHECK(std::abs(m.eval(p) - u1.potential_u(p)) < 1e-5);
}

TEST_CASE("fitted u2 gradient stays within the angle budget") {
    AnalyticField u2 = make_analytic_field("u2");
    SampleSet s = testing::sample_mixed(u2, 500, 0.9, 0.2, 12);
    FitConfig cfg;
    cfg.kernel = Kernel(KernelFamily::Gaussian, 1.0);
    ScalarPotentialModel m = fit_mixed(s, cfg);

    double angle_sum = 0.0;
    int count = 0;
    for (const Vec3& p : s.points) {
        Vec3 got = m.gradient(p), want = u2.gradient_u(p);
        if (want.norm() < 1e-6 || got.norm() < 1e-12) continue;
        double c = std::clamp(got.dot(want) / (got.norm() * want.norm()), -1.0, 1.0);
        angle_sum += std::acos(c) * 180.0 / M_PI;
        ++count;
    }
    CHECK(angle_sum / count < 2.4);
}
