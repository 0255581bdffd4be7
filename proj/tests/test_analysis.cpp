#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qcland/analysis.hpp"
#include "test_support.hpp"

using namespace qcland;

TEST_SUITE("analysis") {
  TEST_CASE("collinear path has ratio one") {
    const ControlField a = test::random_field(1, 64, 8.0, 1);
    const ControlField b = test::random_field(1, 64, 8.0, 2);
    const std::vector<ControlField> path{a, lerp(a, b, 0.4), b};
    const PathMetrics m = ratio_R(path);
    CHECK(m.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.path_length == doctest::Approx(m.endpoint_distance).epsilon(1e-12));
  }

  TEST_CASE("semicircle polyline approaches pi/2") {
    // Sample a semicircle in the plane spanned by two orthogonal fields.
    const int n = 200;
    const double t_total = 8.0;
    Eigen::ArrayXXd ex = Eigen::ArrayXXd::Zero(1, 64), ey = Eigen::ArrayXXd::Zero(1, 64);
    ex(0, 0) = 1.0;
    ey(0, 1) = 1.0;
    std::vector<ControlField> path;
    for (int i = 0; i <= n; ++i) {
      const double phi = std::numbers::pi * i / n;
      path.push_back(ControlField(std::cos(phi) * ex + std::sin(phi) * ey, t_total));
    }
    CHECK(ratio_R(path).ratio == doctest::Approx(std::numbers::pi / 2).epsilon(0.01));
  }

  TEST_CASE("identical endpoints flag a degenerate ratio") {
    const ControlField a = test::random_field(1, 64, 8.0, 3);
    const ControlField b = test::random_field(1, 64, 8.0, 4);
    const PathMetrics m = ratio_R({a, b, a});
    CHECK(m.degenerate_endpoints);
    CHECK(m.ratio == 1.0);
    CHECK(m.path_length > 0.0);
  }

  TEST_CASE("ratio properties: bound, refinement, translation and scaling") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      std::vector<ControlField> path;
      for (int i = 0; i < 5; ++i) {
        path.push_back(test::random_field(1, 40, 4.0, 100 + 10 * seed + i));
      }
      const PathMetrics base = ratio_R(path);
      CHECK(base.ratio >= 1.0 - 1e-12);

      // Splitting a segment never changes the chord-sum length.
      std::vector<ControlField> refined = path;
      refined.insert(refined.begin() + 2, lerp(path[1], path[2], 0.37));
      const PathMetrics fine = ratio_R(refined);
      CHECK(fine.path_length == doctest::Approx(base.path_length).epsilon(1e-12));
      CHECK(fine.ratio == doctest::Approx(base.ratio).epsilon(1e-12));

      // R is invariant under common translation and nonzero scaling.
      const Eigen::ArrayXXd shift = test::random_field(1, 40, 4.0, 999).samples();
      std::vector<ControlField> moved, scaled;
      for (const auto& f : path) {
        moved.push_back(ControlField(f.samples() + shift, f.duration()));
        scaled.push_back(ControlField(-2.5 * f.samples(), f.duration()));
      }
      CHECK(ratio_R(moved).ratio == doctest::Approx(base.ratio).epsilon(1e-10));
      CHECK(ratio_R(scaled).ratio == doctest::Approx(base.ratio).epsilon(1e-10));
    }
  }

  TEST_CASE("pca on planar data captures everything in two components") {
    const ControlField origin = test::random_field(1, 50, 5.0, 5);
    const Eigen::ArrayXXd u = test::random_field(1, 50, 5.0, 6).samples();
    const Eigen::ArrayXXd v = test::random_field(1, 50, 5.0, 7).samples();
    std::vector<ControlField> fields;
    auto engine = make_engine(8);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int i = 0; i < 12; ++i) {
      fields.push_back(ControlField(
          origin.samples() + coeff(engine) * u + coeff(engine) * v, origin.duration()));
    }
    const PcaProjection pca = pca_project(fields, origin);
    CHECK(pca.explained_percent[0] + pca.explained_percent[1] ==
          doctest::Approx(100.0).epsilon(1e-9));
    CHECK(pca.explained_percent[2] <= 1e-9);
    CHECK(pca.explained_percent[0] >= pca.explained_percent[1]);
  }

  TEST_CASE("pca basis is orthonormal with ordered percentages") {
    std::vector<ControlField> fields;
    for (int i = 0; i < 15; ++i) fields.push_back(test::random_field(2, 30, 6.0, 300 + i));
    const ControlField reference = fields.back();
    const PcaProjection pca = pca_project(fields, reference);
    for (int m = 0; m < 3; ++m) {
      for (int n = 0; n < 3; ++n) {
        const double expected = (m == n) ? 1.0 : 0.0;
        CHECK(std::abs(l2_inner(pca.basis[m], pca.basis[n]) - expected) <= 1e-10);
      }
    }
    CHECK(pca.explained_percent[0] >= pca.explained_percent[1]);
    CHECK(pca.explained_percent[1] >= pca.explained_percent[2]);
    double sum = 0.0;
    for (const double p : pca.explained_percent) {
      CHECK(p >= 0.0);
      CHECK(p <= 100.0 + 1e-9);
      sum += p;
    }
    CHECK(sum <= 100.0 + 1e-9);
  }

  TEST_CASE("pca truncation loses exactly the unexplained variance") {
    std::vector<ControlField> fields;
    for (int i = 0; i < 10; ++i) fields.push_back(test::random_field(1, 40, 4.0, 400 + i));
    const ControlField reference = test::random_field(1, 40, 4.0, 499);
    const PcaProjection pca = pca_project(fields, reference);
    const double dt = reference.dt();

    // Independent oracle: eigendecomposition of the Gram matrix gives the
    // full spectrum; the top three eigenvalues must match the captured share.
    const auto n = static_cast<Eigen::Index>(fields.size());
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::ArrayXXd di = fields[i].samples() - reference.samples();
        const Eigen::ArrayXXd dj = fields[j].samples() - reference.samples();
        gram(i, j) = l2_inner(di, dj, dt);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const Eigen::VectorXd lambda = es.eigenvalues().reverse();
    const double total = lambda.sum();
    CHECK(total == doctest::Approx(pca.total_variance).epsilon(1e-10));
    for (int k = 0; k < 3; ++k) {
      CHECK(pca.explained_percent[k] ==
            doctest::Approx(100.0 * lambda(k) / total).epsilon(1e-8));
    }

    // Reconstruction error equals the unexplained share of the variance.
    double residual = 0.0;
    for (const auto& f : fields) {
      Eigen::ArrayXXd diff = f.samples() - reference.samples();
      for (int k = 0; k < 3; ++k) {
        const double c = l2_inner(pca.basis[k].samples(), diff, dt);
        diff -= c * pca.basis[k].samples();
      }
      residual += diff.square().sum() * dt;
    }
    const double unexplained =
        100.0 - pca.explained_percent[0] - pca.explained_percent[1] - pca.explained_percent[2];
    CHECK(residual ==
          doctest::Approx(pca.total_variance * unexplained / 100.0).epsilon(1e-8));
  }

  TEST_CASE("projected distances never exceed full-space distances") {
    std::vector<ControlField> fields;
    for (int i = 0; i < 8; ++i) fields.push_back(test::random_field(1, 30, 3.0, 500 + i));
    const PcaProjection pca = pca_project(fields, fields.back());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      for (std::size_t j = i + 1; j < fields.size(); ++j) {
        const double full = l2_distance(fields[i], fields[j]);
        const double projected =
            (pca.coordinates.row(static_cast<Eigen::Index>(i)) -
             pca.coordinates.row(static_cast<Eigen::Index>(j)))
                .norm();
        CHECK(projected <= full + 1e-10);
      }
    }
  }

  TEST_CASE("pca rejects degenerate input") {
    const ControlField a = test::random_field(1, 30, 3.0, 600);
    CHECK_THROWS_AS(pca_project({a, a, a}, a), std::invalid_argument);       // too few
    CHECK_THROWS_AS(pca_project({a, a, a, a}, a), std::invalid_argument);    // identical
  }

  TEST_CASE("distance profile between identical paths vanishes") {
    std::vector<ControlField> path;
    for (int i = 0; i < 6; ++i) path.push_back(test::random_field(1, 30, 3.0, 700 + i));
    const PathDistanceProfile profile = path_distance(path, path);
    CHECK(profile.mean == doctest::Approx(0.0).epsilon(1e-14));
    for (const double d : profile.d) CHECK(d <= 1e-12);
  }

  TEST_CASE("distance profile is pinned at shared endpoints") {
    const ControlField a = test::random_field(1, 30, 3.0, 800);
    const ControlField b = test::random_field(1, 30, 3.0, 801);
    std::vector<ControlField> straight{a, lerp(a, b, 0.5), b};
    std::vector<ControlField> detour{a, lerp(a, b, 0.3), b};
    detour[1].samples() += 0.5 * test::random_field(1, 30, 3.0, 802).samples();
    const PathDistanceProfile profile = path_distance(straight, detour);
    CHECK(profile.d.front() <= 1e-10);
    CHECK(profile.d.back() <= 1e-10);
    CHECK(profile.mean > 0.0);
    CHECK(profile.s.size() == 101);
  }

  TEST_CASE("distance profile rejects mismatched endpoints") {
    const ControlField a = test::random_field(1, 30, 3.0, 900);
    const ControlField b = test::random_field(1, 30, 3.0, 901);
    const ControlField c = test::random_field(1, 30, 3.0, 902);
    std::vector<ControlField> one{a, lerp(a, b, 0.5), b};
    std::vector<ControlField> other{a, lerp(a, c, 0.5), c};
    CHECK_THROWS_AS(path_distance(one, other), std::invalid_argument);
  }
}
