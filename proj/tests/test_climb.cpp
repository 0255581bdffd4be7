#include <doctest.h>

#include <cmath>

#include "qcland/climb.hpp"
#include "qcland/model_zoo.hpp"
#include "qcland/propagation.hpp"
#include "test_support.hpp"

using namespace qcland;

namespace {

// Cheap landscape for plumbing tests: the uncontrollable two-level system
// with J = sin^2(phi), phi = sum E dt. A constant field with phi = pi/2 is a
// global maximum.
struct TinySetup {
  QuantumSystem system = uncontrollable_two_level();
  Objective stl = [] {
    Eigen::VectorXcd i_state = Eigen::VectorXcd::Zero(2), f_state = Eigen::VectorXcd::Zero(2);
    i_state(0) = 1.0;
    f_state(1) = 1.0;
    return Objective::state_transfer(i_state, f_state);
  }();
};

}  // namespace

TEST_SUITE("climb") {
  TEST_CASE("initial fields hit the requested fluence exactly") {
    InitialFieldSpec spec;
    spec.rng_seed = 3;
    const ControlField f = sample_initial_field(spec, 50.0, 500, 1);
    CHECK(fluence(f) == doctest::Approx(1.0).epsilon(1e-12));

    spec.target_fluence = 7.5;
    const ControlField g = sample_initial_field(spec, 50.0, 500, 2);
    CHECK(fluence(g) == doctest::Approx(7.5).epsilon(1e-12));
  }

  TEST_CASE("same seed reproduces the same field") {
    InitialFieldSpec spec;
    spec.rng_seed = 11;
    const ControlField a = sample_initial_field(spec, 50.0, 500, 1);
    const ControlField b = sample_initial_field(spec, 50.0, 500, 1);
    CHECK((a.samples() == b.samples()).all());
    spec.rng_seed = 12;
    const ControlField c = sample_initial_field(spec, 50.0, 500, 1);
    CHECK(l2_distance(a, c) > 0.0);
  }

  TEST_CASE("log-uniform fluence mode stays within its range") {
    InitialFieldSpec spec;
    spec.log10_fluence_range = std::make_pair(-2.0, 2.0);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      spec.rng_seed = seed;
      const double f = fluence(sample_initial_field(spec, 50.0, 200, 1));
      CHECK(f >= 0.01 - 1e-12);
      CHECK(f <= 100.0 + 1e-10);
    }
  }

  TEST_CASE("a field already on the top returns immediately") {
    const TinySetup tiny;
    const double t_total = 10.0;
    const ControlField at_top(
        Eigen::ArrayXXd::Constant(1, 50, std::numbers::pi / (2.0 * t_total)), t_total);
    const ClimbReport rep = climb(tiny.system, tiny.stl, at_top, {});
    CHECK(rep.converged);
    CHECK(rep.steps == 0);
    CHECK(rep.gradient_evals == 0);
    CHECK(rep.s_reached == 0.0);
    CHECK(l2_distance(rep.field, at_top) == 0.0);
  }

  TEST_CASE("climbing the fourlevel landscapes from random seeds") {
    const Preset p = load_preset("fourlevel");
    for (const auto& [name, obj] :
         {std::pair{"stl", &p.stl}, {"ocl", &p.ocl}, {"utl", &p.utl}}) {
      CAPTURE(name);
      InitialFieldSpec spec = p.field_spec;
      spec.rng_seed = 400 + static_cast<std::uint64_t>(name[0]);
      const ControlField start =
          sample_initial_field(spec, p.duration, p.grid_points, 1);
      const ClimbReport rep = climb(p.system, *obj, start, {});
      CHECK(rep.converged);
      CHECK(rep.final_j() >= 0.999);
      // Trap-free landscape: no converged climb stalls at the saddle height.
      CHECK(!(rep.final_j() >= 0.4 && rep.final_j() <= 0.6));
      // Monotone ascent up to integrator slack.
      for (std::size_t i = 1; i < rep.j_history.size(); ++i) {
        CHECK(rep.j_history[i].second >= rep.j_history[i - 1].second - 1e-9);
      }
    }
  }

  TEST_CASE("identical seeds give bitwise identical climbs") {
    const Preset p = load_preset("fourlevel");
    InitialFieldSpec spec = p.field_spec;
    spec.rng_seed = 1234;
    const ControlField start = sample_initial_field(spec, p.duration, p.grid_points, 1);
    const ClimbReport a = climb(p.system, p.stl, start, {});
    const ClimbReport b = climb(p.system, p.stl, start, {});
    CHECK(a.converged == b.converged);
    CHECK(a.steps == b.steps);
    CHECK(a.s_reached == b.s_reached);
    CHECK((a.field.samples() == b.field.samples()).all());
  }

  TEST_CASE("budget exhaustion reports failure") {
    const Preset p = load_preset("fourlevel");
    InitialFieldSpec spec = p.field_spec;
    spec.rng_seed = 5;
    const ControlField start = sample_initial_field(spec, p.duration, p.grid_points, 1);
    ClimbParams params;
    params.max_gradient_evals = 12;  // two steps at most
    const ClimbReport rep = climb(p.system, p.stl, start, params);
    CHECK_FALSE(rep.converged);
    CHECK(rep.gradient_evals <= 12);
  }

  TEST_CASE("pairwise distances") {
    const ControlField a = test::random_field(1, 64, 8.0, 1);
    const ControlField b = test::random_field(1, 64, 8.0, 2);
    const ControlField c = test::random_field(1, 64, 8.0, 3);

    const auto identical = pairwise_distances({a, a});
    REQUIRE(identical.size() == 1);
    CHECK(identical[0] == 0.0);

    const auto three = pairwise_distances({a, b, c});
    REQUIRE(three.size() == 3);  // n(n-1)/2
    CHECK(three[0] == doctest::Approx(l2_distance(a, b)));
    CHECK(three[1] == doctest::Approx(l2_distance(a, c)));
    CHECK(three[2] == doctest::Approx(l2_distance(b, c)));

    CHECK_THROWS_AS(pairwise_distances({a}), std::invalid_argument);
    const ControlField other_grid = test::random_field(1, 32, 8.0, 4);
    CHECK_THROWS_AS(pairwise_distances({a, other_grid}), std::invalid_argument);
  }

  TEST_CASE("climb rejects bad tolerance") {
    const TinySetup tiny;
    const ControlField f = test::random_field(1, 50, 10.0, 9);
    ClimbParams params;
    params.epsilon = 0.7;
    CHECK_THROWS_AS(climb(tiny.system, tiny.stl, f, params), std::invalid_argument);
  }
}
