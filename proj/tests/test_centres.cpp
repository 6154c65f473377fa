#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "meshfield/analytic.hpp"
#include "meshfield/centres.hpp"

using namespace meshfield;

namespace {

SampleSet gradient_grid(const std::string& field_name, int per_axis) {
    AnalyticField f = make_analytic_field(field_name);
    return sample_field_grid(f, per_axis);
}

}  // namespace

TEST_CASE("random selection is reproducible and the right size") {
    SampleSet s = gradient_grid("u1", 20);
    CentreSelection sel;
    sel.strategy = CentreStrategy::Random;
    sel.target_count = 50;
    sel.seed = 42;
    auto a = select_centres(s, sel);
    auto b = select_centres(s, sel);
    REQUIRE(a.size() == 50);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).norm() == 0.0);

    sel.seed = 43;
    auto c = select_centres(s, sel);
    bool same = true;
    for (std::size_t i = 0; i < a.size(); ++i)
        if ((a[i] - c[i]).norm() != 0.0) same = false;
    CHECK(!same);
}

TEST_CASE("importance selection concentrates where the field is strong") {
    // The bump gradient is strong near the origin and nearly zero far out.
    SampleSet s = gradient_grid("bump", 25);
    CentreSelection sel;
    sel.strategy = CentreStrategy::KernelImportance;
    sel.target_count = 168;
    auto centres = select_centres(s, sel);
    REQUIRE(centres.size() == 168);

    auto field_norm_at = [&](const Vec3& p) {
        for (const auto& [idx, v] : s.vector_values)
            if ((s.points[idx] - p).norm() == 0.0) return v.norm();
        return 0.0;
    };
    double mean_selected = 0.0;
    for (const Vec3& c : centres) mean_selected += field_norm_at(c);
    mean_selected /= centres.size();
    double mean_all = 0.0;
    for (const auto& [idx, v] : s.vector_values) mean_all += v.norm();
    mean_all /= s.vector_values.size();
    CHECK(mean_selected > mean_all);
}

TEST_CASE("point-subset strategies return sample points") {
    SampleSet s = gradient_grid("u1", 12);
    for (auto strategy :
         {CentreStrategy::KernelImportance, CentreStrategy::Uniform, CentreStrategy::Random}) {
        CentreSelection sel;
        sel.strategy = strategy;
        sel.target_count = 30;
        for (const Vec3& c : select_centres(s, sel)) {
            bool found = false;
            for (const Vec3& p : s.points)
                if ((p - c).norm() == 0.0) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("uniform selection yields distinct centres at the target count") {
    SampleSet s = gradient_grid("u1", 20);
    CentreSelection sel;
    sel.strategy = CentreStrategy::Uniform;
    sel.target_count = 49;
    auto centres = select_centres(s, sel);
    REQUIRE(centres.size() == 49);
    for (std::size_t i = 0; i < centres.size(); ++i)
        for (std::size_t j = i + 1; j < centres.size(); ++j)
            CHECK((centres[i] - centres[j]).norm() > 0.0);
}

TEST_CASE("k-means returns the requested number of means") {
    SampleSet s = gradient_grid("u1", 15);
    CentreSelection sel;
    sel.strategy = CentreStrategy::KMeans;
    sel.target_count = 16;
    sel.seed = 7;
    auto centres = select_centres(s, sel);
    CHECK(centres.size() == 16);
    Box box = s.bounding_box();
    for (const Vec3& c : centres) CHECK(box.contains(c, 2));
}

TEST_CASE("adaptive selection stops under the residual threshold") {
    SampleSet s = gradient_grid("u1", 16);
    CentreSelection sel;
    sel.strategy = CentreStrategy::AdaptiveResidual;
    sel.target_count = 128;
    sel.residual_threshold = 0.05;
    sel.fit_kernel = Kernel(KernelFamily::Gaussian, 1.0);
    auto centres = select_centres(s, sel);
    REQUIRE(!centres.empty());

    FitConfig cfg;
    cfg.kernel = sel.fit_kernel;
    cfg.centres = centres;
    FitReport report;
    fit_mixed(s, cfg, &report);
    CHECK(report.relative_residual < 0.05);
}

TEST_CASE("selection quality ranks importance above uniform on a localized field") {
    SampleSet s = gradient_grid("u3", 25);
    CentreSelection sel;
    sel.target_count = 48;
    sel.strategy = CentreStrategy::KernelImportance;
    auto importance = select_centres(s, sel);
    sel.strategy = CentreStrategy::Uniform;
    auto uniform = select_centres(s, sel);

    FitConfig cfg;
    cfg.kernel = Kernel(KernelFamily::Gaussian, 1.0);
    SelectionQuality q = selection_quality(s, importance, uniform, cfg);
    CHECK(q.metrics_a.nc >= q.metrics_b.nc - 1e-6);
    CHECK(q.metrics_a.nc > 0.9);
}

TEST_CASE("more centres, lower residual error") {
    SampleSet s = gradient_grid("u3", 32);
    FitConfig cfg;
    cfg.kernel = Kernel(KernelFamily::Gaussian, 1.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int k : {32, 64, 128}) {
        CentreSelection sel;
        sel.strategy = CentreStrategy::KernelImportance;
        sel.target_count = k;
        auto centres = select_centres(s, sel);
        SelectionQuality q = selection_quality(s, centres, centres, cfg);
        CHECK(q.metrics_a.nrmse < prev);
        prev = q.metrics_a.nrmse;
    }
}

TEST_CASE("invalid configurations are rejected") {
    SampleSet s = gradient_grid("u1", 6);
    CentreSelection sel;
    sel.target_count = 0;
    CHECK_THROWS_AS(select_centres(s, sel), ConfigError);
    SampleSet empty;
    sel.target_count = 4;
    CHECK_THROWS_AS(select_centres(empty, sel), InputError);
}
