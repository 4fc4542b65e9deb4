#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "relio/registration/registration.hpp"
#include "test_util.hpp"

using namespace relio;
using namespace relio::testutil;

TEST_CASE("plane correspondence: exact hit and rejection radius") {
  // Dense plane z = 0 as target.
  std::vector<Point> planars;
  for (double x = -2; x <= 2; x += 0.2) {
    for (double y = -2; y <= 2; y += 0.2) {
      Point p;
      p.position = Eigen::Vector3d(x, y, 0);
      planars.push_back(p);
    }
  }
  const auto target = RegistrationTarget::fromFeatureSet(makeFeatureSet({}, planars));
  RegistrationConfig cfg;

  Point on_plane;
  on_plane.position = Eigen::Vector3d(0.1, 0.1, 0.0);
  auto matches = findCorrespondences(makeFeatureSet({}, {on_plane}), target, {}, cfg);
  REQUIRE(matches.size() == 1);
  CHECK_FALSE(matches[0].is_edge);
  const double resid = std::abs(matches[0].plane.normal.dot(on_plane.position - matches[0].plane.point));
  CHECK(resid < 1e-12);

  Point far_away;
  far_away.position = Eigen::Vector3d(0, 0, 2.0 * cfg.match_radius);
  matches = findCorrespondences(makeFeatureSet({}, {far_away}), target, {}, cfg);
  CHECK(matches.empty());
}

TEST_CASE("plane fit on noisy samples matches least-squares oracle") {
  CounterRng rng(17);
  const int trials = 50;
  for (int trial = 0; trial < trials; ++trial) {
    // Well-spread support: jittered corners plus center, z-noise sigma 0.01.
    std::vector<Point> planars;
    std::vector<Eigen::Vector3d> raw;
    const double corners[5][2] = {{-0.5, -0.5}, {-0.5, 0.5}, {0.5, -0.5}, {0.5, 0.5}, {0, 0}};
    for (const auto& c : corners) {
      Point p;
      p.position = Eigen::Vector3d(c[0] + rng.nextUniform(-0.1, 0.1),
                                   c[1] + rng.nextUniform(-0.1, 0.1), rng.nextGaussian() * 0.01);
      planars.push_back(p);
      raw.push_back(p.position);
    }
    const auto target = RegistrationTarget::fromFeatureSet(makeFeatureSet({}, planars));
    Point query;
    query.position = Eigen::Vector3d(0, 0, 0);
    RegistrationConfig cfg;
    const auto matches = findCorrespondences(makeFeatureSet({}, {query}), target, {}, cfg);
    REQUIRE(matches.size() == 1);

    // Independent least-squares oracle: z = a x + b y + c.
    Eigen::Matrix3d AtA = Eigen::Matrix3d::Zero();
    Eigen::Vector3d Atz = Eigen::Vector3d::Zero();
    for (const auto& p : raw) {
      const Eigen::Vector3d row(p.x(), p.y(), 1.0);
      AtA += row * row.transpose();
      Atz += row * p.z();
    }
    const Eigen::Vector3d abc = AtA.ldlt().solve(Atz);
    const Eigen::Vector3d oracle_normal = Eigen::Vector3d(-abc.x(), -abc.y(), 1.0).normalized();

    Eigen::Vector3d fit = matches[0].plane.normal;
    if (fit.dot(oracle_normal) < 0) fit = -fit;
    const double angle_to_oracle = std::acos(std::clamp(fit.dot(oracle_normal), -1.0, 1.0));
    const double angle_to_true = std::acos(std::clamp(std::abs(fit.z()), 0.0, 1.0));
    CHECK(angle_to_oracle < 0.5 * M_PI / 180.0);
    CHECK(angle_to_true < 2.0 * M_PI / 180.0);
  }
}

TEST_CASE("assess_degeneracy trivial and diagonal cases") {
  using Mat6 = Eigen::Matrix<double, 6, 6>;
  const auto healthy = assessDegeneracy(Mat6::Identity() * 1000.0, 100.0, 100.0);
  CHECK_FALSE(healthy.degenerate_translation);
  CHECK_FALSE(healthy.degenerate_rotation);

  Mat6 H = Mat6::Identity() * 500.0;
  H(0, 0) = 10.0;
  const auto report = assessDegeneracy(H, 100.0, 100.0);
  CHECK(report.degenerate_translation);
  CHECK_FALSE(report.degenerate_rotation);
  CHECK(report.eig_translation(0) == doctest::Approx(10.0));
  CHECK(std::abs(report.eigvec_translation.col(0).dot(Eigen::Vector3d::UnitX())) ==
        doctest::Approx(1.0));

  Mat6 asym = Mat6::Identity();
  asym(0, 5) = 1.0;
  CHECK_THROWS_AS(assessDegeneracy(asym, 1.0, 1.0), ContractViolationError);
}

TEST_CASE("block eigenvalues match characteristic-polynomial oracle") {
  CounterRng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Matrix3d T = randomSpd(rng);
    const Eigen::Matrix3d R = randomSpd(rng);
    Eigen::Matrix<double, 6, 6> H = Eigen::Matrix<double, 6, 6>::Zero();
    H.topLeftCorner<3, 3>() = T;
    H.bottomRightCorner<3, 3>() = R;
    const auto report = assessDegeneracy(H, 0.0, 0.0);
    const Eigen::Vector3d oracle_t = charPolyEigenvalues(T);
    const Eigen::Vector3d oracle_r = charPolyEigenvalues(R);
    for (int i = 0; i < 3; ++i) {
      CHECK(report.eig_translation(i) ==
            doctest::Approx(oracle_t(i)).epsilon(1e-9).scale(std::abs(oracle_t(2)) + 1.0));
      CHECK(report.eig_rotation(i) ==
            doctest::Approx(oracle_r(i)).epsilon(1e-9).scale(std::abs(oracle_r(2)) + 1.0));
    }
  }
}

TEST_CASE("identical clouds register to identity quickly") {
  const FeatureSet room = boxRoomFeatures();
  const auto target = RegistrationTarget::fromFeatureSet(room);
  RegistrationConfig cfg;
  const auto result = registerFeatures(room, target, {}, cfg);
  CHECK(result.converged);
  CHECK(result.iterations <= 2);
  CHECK(result.transform.translation().norm() < 1e-3);
  CHECK(result.transform.rotationAngle() < 1e-4);
  CHECK_FALSE(result.degeneracy.degenerate_translation);
  CHECK_FALSE(result.degeneracy.degenerate_rotation);

  // Hessian symmetric PSD.
  CHECK((result.hessian - result.hessian.transpose()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(result.degeneracy.eig_translation(0) >= -1e-9);
  CHECK(result.degeneracy.eig_rotation(0) >= -1e-9);
}

TEST_CASE("known offset recovered on box room") {
  const FeatureSet room = boxRoomFeatures();
  const auto target = RegistrationTarget::fromFeatureSet(room);
  RegistrationConfig cfg;

  const RigidTransform offset = RigidTransform::fromAxisAngle(
      Eigen::Vector3d::UnitZ(), 2.0 * M_PI / 180.0, Eigen::Vector3d(0.1, 0.05, 0.0));
  const FeatureSet moved = transformFeatures(room, offset);
  const auto result = registerFeatures(moved, target, {}, cfg);
  CHECK(result.converged);
  const RigidTransform err = result.transform * offset;  // expect inverse(offset)
  CHECK(err.translation().norm() < 1e-3);
  CHECK(err.rotationAngle() < 0.05 * M_PI / 180.0);
}

TEST_CASE("random offsets recovered within tolerance (acceptance-5 core)") {
  const FeatureSet room = boxRoomFeatures();
  const auto target = RegistrationTarget::fromFeatureSet(room);
  RegistrationConfig cfg;
  CounterRng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector3d axis(rng.nextGaussian(), rng.nextGaussian(), rng.nextGaussian());
    const RigidTransform offset = RigidTransform::fromAxisAngle(
        axis.normalized(), rng.nextUniform(-0.05, 0.05),
        Eigen::Vector3d(rng.nextUniform(-0.2, 0.2), rng.nextUniform(-0.2, 0.2),
                        rng.nextUniform(-0.2, 0.2)));
    const auto result = registerFeatures(transformFeatures(room, offset), target, {}, cfg);
    const RigidTransform err = result.transform * offset;
    CHECK(err.translation().norm() < 1e-3);
    CHECK(err.rotationAngle() < 0.05 * M_PI / 180.0);
  }
}

TEST_CASE("pure plane scene degenerates in translation") {
  std::vector<Point> planars;
  for (double x = -5; x <= 5; x += 0.25) {
    for (double y = -5; y <= 5; y += 0.25) {
      Point p;
      p.position = Eigen::Vector3d(x, y, 0);
      planars.push_back(p);
    }
  }
  const FeatureSet plane = makeFeatureSet({}, planars);
  const auto target = RegistrationTarget::fromFeatureSet(plane);
  RegistrationConfig cfg;
  const auto result = registerFeatures(plane, target, {}, cfg);
  const auto& eig = result.degeneracy.eig_translation;
  CHECK(eig(0) < 1e-6);
  CHECK(eig(1) < 1e-6);
  CHECK(eig(2) > 100.0);
  CHECK(result.degeneracy.degenerate_translation);
}

TEST_CASE("tunnel scene: one weak translation direction along the axis") {
  const FeatureSet tunnel = tunnelFeatures();
  const auto target = RegistrationTarget::fromFeatureSet(tunnel);
  RegistrationConfig cfg;
  const auto result = registerFeatures(tunnel, target, {}, cfg);
  const auto& rep = result.degeneracy;
  CHECK(rep.degenerate_translation);
  // Exactly one eigenvalue below threshold.
  int below = 0;
  for (int i = 0; i < 3; ++i) {
    if (rep.eig_translation(i) < rep.threshold_translation) ++below;
  }
  CHECK(below == 1);
  const double axis_alignment = std::abs(rep.eigvec_translation.col(0).dot(Eigen::Vector3d::UnitX()));
  CHECK(axis_alignment > std::cos(5.0 * M_PI / 180.0));
  CHECK_FALSE(rep.degenerate_rotation);
}

TEST_CASE("duplicated constraints double every eigenvalue") {
  const FeatureSet room = boxRoomFeatures();
  const auto target = RegistrationTarget::fromFeatureSet(room);
  RegistrationConfig cfg;
  cfg.max_iterations = 1;

  FeatureSet doubled = room;
  doubled.edges.points.insert(doubled.edges.points.end(), room.edges.points.begin(),
                              room.edges.points.end());
  doubled.planars.points.insert(doubled.planars.points.end(), room.planars.points.begin(),
                                room.planars.points.end());

  const auto base = registerFeatures(room, target, {}, cfg);
  const auto twice = registerFeatures(doubled, target, {}, cfg);
  const auto rep1 = assessDegeneracy(base.hessian, 120.0, 150.0);
  const auto rep2 = assessDegeneracy(twice.hessian, 240.0, 300.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(rep2.eig_translation(i) ==
          doctest::Approx(2.0 * rep1.eig_translation(i)).epsilon(1e-9));
    CHECK(rep2.eig_rotation(i) == doctest::Approx(2.0 * rep1.eig_rotation(i)).epsilon(1e-9));
  }
  CHECK(rep1.degenerate_translation == rep2.degenerate_translation);
  CHECK(rep1.degenerate_rotation == rep2.degenerate_rotation);
}

TEST_CASE("insufficient correspondences raise with fully degenerate report") {
  const FeatureSet room = boxRoomFeatures();
  RegistrationTarget empty_target;  // no points at all
  RegistrationConfig cfg;
  try {
    registerFeatures(room, empty_target, {}, cfg);
    FAIL("expected InsufficientConstraintsError");
  } catch (const InsufficientConstraintsError& e) {
    CHECK(e.report.degenerate_translation);
    CHECK(e.report.degenerate_rotation);
  }
}

TEST_CASE("parallel correspondence search equals serial reference") {
  const FeatureSet room = boxRoomFeatures();
  const auto target = RegistrationTarget::fromFeatureSet(room);
  RegistrationConfig cfg;
  const RigidTransform guess = RigidTransform::fromTranslation(0.05, -0.02, 0.01);
  const auto par = findCorrespondences(room, target, guess, cfg);
  const auto ser = serial_ref::findCorrespondences(room, target, guess, cfg);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].source == ser[i].source);
    CHECK(par[i].is_edge == ser[i].is_edge);
    CHECK(par[i].weight == ser[i].weight);
  }
}
