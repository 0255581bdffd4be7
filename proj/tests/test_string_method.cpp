#include <doctest.h>

#include <cmath>

#include "qcland/analysis.hpp"
#include "qcland/model_zoo.hpp"
#include "qcland/string_method.hpp"
#include "test_support.hpp"

using namespace qcland;

TEST_SUITE("string") {
  TEST_CASE("straight initialization") {
    const ControlField a = test::random_field(1, 64, 8.0, 1);
    const ControlField b = test::random_field(1, 64, 8.0, 2);

    const StringState two = init_straight(a, b, 1);
    REQUIRE(two.images.size() == 2);
    CHECK(l2_distance(two.images.front(), a) == 0.0);
    CHECK(l2_distance(two.images.back(), b) == 0.0);

    const StringState state = init_straight(a, b, 10);
    REQUIRE(state.images.size() == 11);
    for (std::size_t i = 1; i < state.images.size(); ++i) {
      CHECK(l2_distance(state.images[i - 1], state.images[i]) ==
            doctest::Approx(l2_distance(a, b) / 10).epsilon(1e-12));
    }

    // Midpoint of a string from E to -E is the zero field.
    ControlField minus_a(Eigen::ArrayXXd(-a.samples()), a.duration());
    const StringState sym = init_straight(a, minus_a, 2);
    CHECK(l2_norm(sym.images[1]) <= 1e-14);

    const ControlField other_grid = test::random_field(1, 32, 8.0, 3);
    CHECK_THROWS_AS(init_straight(a, other_grid, 4), std::invalid_argument);
  }

  TEST_CASE("central angle of the major arc") {
    // (2 pi - theta) / (2 sin(theta / 2)) = R
    CHECK(arc_central_angle(5.0) == doctest::Approx(1.0917).epsilon(1e-3));
    CHECK(arc_central_angle(10.0) == doctest::Approx(0.5785).epsilon(1e-3));
    CHECK_THROWS_AS(arc_central_angle(1.0), std::invalid_argument);
    CHECK_THROWS_AS(arc_central_angle(0.5), std::invalid_argument);
  }

  TEST_CASE("arc initialization reproduces the requested ratio") {
    const ControlField a = test::random_field(1, 128, 16.0, 4);
    const ControlField b = test::random_field(1, 128, 16.0, 5);
    for (const double target : {5.0, 10.0}) {
      const StringState arc = init_arc(a, b, target, 77, 32);
      REQUIRE(arc.images.size() == 33);
      CHECK(l2_distance(arc.images.front(), a) == 0.0);
      CHECK(l2_distance(arc.images.back(), b) == 0.0);
      const PathMetrics metrics = ratio_R(arc.images);
      CHECK(metrics.ratio == doctest::Approx(target).epsilon(0.02));
    }
    CHECK_THROWS_AS(init_arc(a, b, 0.9, 1, 32), std::invalid_argument);
    CHECK_THROWS_AS(init_arc(a, a, 5.0, 1, 32), std::invalid_argument);
  }

  TEST_CASE("redistribution equalizes spacing and preserves geometry") {
    // A deliberately uneven polyline through random waypoints.
    const ControlField a = test::random_field(1, 64, 8.0, 6);
    const ControlField b = test::random_field(1, 64, 8.0, 7);
    std::vector<ControlField> images;
    const double positions[7] = {0.0, 0.02, 0.05, 0.3, 0.55, 0.95, 1.0};
    for (const double alpha : positions) {
      ControlField f = lerp(a, b, alpha);
      if (alpha > 0.0 && alpha < 1.0) {
        f.samples() += 0.2 * test::random_field(1, 64, 8.0, 80 + int(alpha * 100)).samples();
      }
      images.push_back(std::move(f));
    }
    const ControlField first = images.front(), last = images.back();
    const double before = ratio_R(images).path_length;

    redistribute_equal_arclength(images);

    const double after = ratio_R(images).path_length;
    CHECK(std::abs(after - before) / before <= 0.01);
    CHECK((images.front().samples() == first.samples()).all());
    CHECK((images.back().samples() == last.samples()).all());

    double lo = 1e300, hi = 0.0, sum = 0.0;
    for (std::size_t i = 1; i < images.size(); ++i) {
      const double chord = l2_distance(images[i - 1], images[i]);
      lo = std::min(lo, chord);
      hi = std::max(hi, chord);
      sum += chord;
    }
    CHECK((hi - lo) / (sum / (images.size() - 1)) <= 0.01);
  }

  TEST_CASE("identical endpoints converge with no work") {
    const Preset p = load_preset("fourlevel");
    const ControlField e = test::climbed_optimum(p, p.stl, 601);
    StringState state = init_straight(e, e, 8);
    state = relax(p.system, p.stl, std::move(state), {});
    CHECK(state.status == StringStatus::Converged);
    CHECK(state.iterations == 0);
  }

  TEST_CASE("endpoints below the top fail fast") {
    const Preset p = load_preset("fourlevel");
    const ControlField low_a = test::random_field(1, p.grid_points, p.duration, 8, 0.1);
    const ControlField low_b = test::random_field(1, p.grid_points, p.duration, 9, 0.1);
    StringState state = init_straight(low_a, low_b, 5);
    state = relax(p.system, p.stl, std::move(state), {});
    CHECK(state.status == StringStatus::Failed);
    CHECK(state.failure_reason == "endpoint below top manifold");
  }

  TEST_CASE("string relaxation connects two optima through the top manifold") {
    const Preset p = load_preset("fourlevel");
    const ControlField a = test::climbed_optimum(p, p.stl, 602);
    const ControlField b = test::climbed_optimum(p, p.stl, 603);
    StringState state = init_straight(a, b, 20);
    const int n_initial = state.n_segments();

    state = relax(p.system, p.stl, std::move(state), {});
    REQUIRE(state.status == StringStatus::Converged);
    CHECK(state.n_segments() >= n_initial);  // insertion only ever adds images
    CHECK((state.images.front().samples() == a.samples()).all());
    CHECK((state.images.back().samples() == b.samples()).all());
    for (const double j : state.j_values) CHECK(j >= 1.0 - 1e-3);

    // Densely resampled segments stay near the top (paper-style certificate).
    for (std::size_t i = 0; i + 1 < state.images.size(); ++i) {
      for (int m = 1; m <= 10; ++m) {
        const double alpha = m / 11.0;
        const double j = evaluate_value(
            p.system, p.stl, lerp(state.images[i], state.images[i + 1], alpha));
        CHECK(j >= 0.998);
      }
    }

    const PathMetrics metrics = ratio_R(state.images);
    CHECK(metrics.ratio >= 1.0);
    CHECK(metrics.ratio <= 3.5);
  }
}
