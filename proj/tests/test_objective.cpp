#include <doctest.h>

#include <cmath>
#include <complex>

#include "qcland/model_zoo.hpp"
#include "qcland/objective.hpp"
#include "test_support.hpp"

using namespace qcland;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd permutation_swap(int n, int a, int b) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  u(a, a) = u(b, b) = cd(0, 0);
  u(a, b) = u(b, a) = cd(1, 0);
  return u;
}

}  // namespace

TEST_SUITE("objective") {
  TEST_CASE("perfect gate fidelity is exactly one") {
    const Preset p = load_preset("fourlevel");
    CHECK(objective_value(p.utl, p.utl.target()) == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("orthogonal state transfer at identity is zero") {
    const Preset p = load_preset("fourlevel");
    CHECK(objective_value(p.stl, Eigen::MatrixXcd::Identity(4, 4)) ==
          doctest::Approx(0.0).epsilon(1e-15));
  }

  TEST_CASE("full population transfer gives one on the observable landscape") {
    const Preset p = load_preset("fourlevel");
    // Swap 1<->3 and 2<->4 moves both populated levels onto the observable.
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
    u(2, 0) = u(0, 2) = u(3, 1) = u(1, 3) = cd(1, 0);
    CHECK(objective_value(p.ocl, u) == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("gate fidelity equals the Frobenius-distance form") {
    const Preset p = load_preset("fourlevel");
    const Eigen::MatrixXcd& w = p.utl.target();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Eigen::MatrixXcd u = test::random_unitary(4, 1000 + seed);
      const double via_trace = objective_value(p.utl, u);
      const double via_frobenius = 1.0 - (w - u).squaredNorm() / (4.0 * 4);
      CHECK(via_trace == doctest::Approx(via_frobenius).epsilon(1e-12));
    }
  }

  TEST_CASE("saddle witnesses sit at exactly one half") {
    const Preset p = load_preset("fourlevel");
    // Exchange exactly one of the two populated levels with an observable one.
    CHECK(objective_value(p.ocl, permutation_swap(4, 0, 2)) == 0.5);
    // A block-phase rotation of the target makes the trace exactly imaginary.
    Eigen::VectorXcd phases(4);
    phases << cd(0, 1), cd(0, 1), cd(0, -1), cd(0, -1);
    const Eigen::MatrixXcd u = p.utl.target() * phases.asDiagonal();
    CHECK(objective_value(p.utl, u) == 0.5);
  }

  TEST_CASE("values stay within the unit interval on random unitaries") {
    const Preset p = load_preset("fourlevel");
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Eigen::MatrixXcd u = test::random_unitary(4, 2000 + seed);
      for (const Objective* obj : {&p.stl, &p.ocl, &p.utl}) {
        const double j = objective_value(*obj, u);
        CHECK(j >= -1e-12);
        CHECK(j <= 1.0 + 1e-12);
      }
    }
  }

  TEST_CASE("state-transfer value is gauge invariant") {
    const Preset p = load_preset("fourlevel");
    const Eigen::MatrixXcd u = test::random_unitary(4, 77);
    Eigen::VectorXcd i_state = Eigen::VectorXcd::Zero(4), f_state = Eigen::VectorXcd::Zero(4);
    i_state(0) = cd(1, 0);
    f_state(3) = cd(1, 0);
    const double base = objective_value(Objective::state_transfer(i_state, f_state), u);
    const cd phase = std::exp(cd(0, 1.234));
    const double phased_i =
        objective_value(Objective::state_transfer(phase * i_state, f_state), u);
    const double phased_f =
        objective_value(Objective::state_transfer(i_state, phase * f_state), u);
    CHECK(base == doctest::Approx(phased_i).epsilon(1e-14));
    CHECK(base == doctest::Approx(phased_f).epsilon(1e-14));

    // The observable landscape ignores a global phase of U(T).
    const double ocl_base = objective_value(p.ocl, u);
    const double ocl_phased = objective_value(p.ocl, Eigen::MatrixXcd(phase * u));
    CHECK(ocl_base == doctest::Approx(ocl_phased).epsilon(1e-14));
  }

  TEST_CASE("gradient vanishes at landscape maxima") {
    const Preset p = load_preset("fourlevel");
    const ControlField f = test::random_field(1, 120, 12.0, 5, 0.4);
    const PropagationResult prop = propagate(p.system, f);

    // Gate landscape whose target is the reached unitary: exact critical point.
    const Objective at_top = Objective::unitary_gate(prop.u_final());
    const GradientField g = objective_gradient(at_top, prop, f.dt());
    CHECK(g.values.abs().maxCoeff() <= 1e-12);

    // State transfer with |f> = U(T)|i>: J = 1 and the gradient vanishes.
    Eigen::VectorXcd i_state = Eigen::VectorXcd::Zero(4);
    i_state(0) = cd(1, 0);
    Eigen::VectorXcd f_state = prop.u_final() * i_state;
    f_state /= f_state.norm();
    const Objective stl_top = Objective::state_transfer(i_state, f_state);
    CHECK(objective_value(stl_top, prop) == doctest::Approx(1.0).epsilon(1e-12));
    const GradientField g2 = objective_gradient(stl_top, prop, f.dt());
    CHECK(l2_norm(g2.values, f.dt()) <= 1e-6 * l2_norm(f));
  }

  TEST_CASE("analytic gradient matches finite differences on the fourlevel system") {
    const Preset p = load_preset("fourlevel");
    const int len = 250;  // acceptance re-runs this at the full paper grid
    InitialFieldSpec spec = p.field_spec;
    spec.rng_seed = 99;
    const ControlField f = sample_initial_field(spec, p.duration, len, 1);
    for (const Objective* obj : {&p.stl, &p.ocl, &p.utl}) {
      const Evaluation ev = evaluate(p.system, *obj, f);
      const Eigen::ArrayXXd fd = test::finite_difference_gradient(p.system, *obj, f, 1e-5);
      CHECK(test::cosine_similarity(ev.gradient.values, fd) >= 0.999);
    }
  }

  TEST_CASE("fast finite-difference oracle agrees with the naive one") {
    const Preset p = load_preset("fourlevel");
    InitialFieldSpec spec = p.field_spec;
    spec.rng_seed = 314;
    const ControlField f = sample_initial_field(spec, p.duration, 120, 1);
    for (const Objective* obj : {&p.stl, &p.ocl, &p.utl}) {
      const Eigen::ArrayXXd naive = test::finite_difference_gradient(p.system, *obj, f, 1e-5);
      const Eigen::ArrayXXd fast = test::fast_finite_difference_gradient(p.system, *obj, f, 1e-5);
      CHECK((naive - fast).abs().maxCoeff() <= 1e-9);
    }
  }

  TEST_CASE("analytic gradient matches finite differences with multiple controls") {
    const Preset p = load_preset("two_spin");
    const int len = 60;
    InitialFieldSpec spec = p.field_spec;
    spec.rng_seed = 7;
    const ControlField f =
        sample_initial_field(spec, p.duration, len, p.system.n_controls());
    for (const Objective* obj : {&p.stl, &p.ocl, &p.utl}) {
      const Evaluation ev = evaluate(p.system, *obj, f);
      const Eigen::ArrayXXd fd = test::finite_difference_gradient(p.system, *obj, f, 1e-5);
      CHECK(test::cosine_similarity(ev.gradient.values, fd) >= 0.999);
    }
  }

  TEST_CASE("construction validates inputs") {
    Eigen::VectorXcd unnormalized = Eigen::VectorXcd::Zero(4);
    unnormalized(0) = cd(2, 0);
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(4);
    e0(0) = cd(1, 0);
    CHECK_THROWS_AS(Objective::state_transfer(unnormalized, e0), std::invalid_argument);

    Eigen::MatrixXcd not_density = Eigen::MatrixXcd::Identity(4, 4);  // trace 4
    CHECK_THROWS_AS(Objective::observable(not_density, Eigen::MatrixXcd::Identity(4, 4)),
                    std::invalid_argument);
    Eigen::MatrixXcd negative = Eigen::MatrixXcd::Zero(2, 2);
    negative(0, 0) = cd(2, 0);
    negative(1, 1) = cd(-1, 0);
    CHECK_THROWS_AS(Objective::observable(negative, Eigen::MatrixXcd::Identity(2, 2)),
                    std::invalid_argument);

    CHECK_THROWS_AS(Objective::unitary_gate(2.0 * Eigen::MatrixXcd::Identity(3, 3)),
                    std::invalid_argument);

    const Preset p = load_preset("fourlevel");
    CHECK_THROWS_AS(objective_value(p.stl, Eigen::MatrixXcd::Identity(5, 5)),
                    std::invalid_argument);
  }
}
