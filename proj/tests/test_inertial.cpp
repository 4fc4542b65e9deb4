#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "relio/core/rng.hpp"
#include "relio/inertial/inertial.hpp"

using namespace relio;

namespace {

Eigen::Quaterniond expQuat(const Eigen::Vector3d& w) {
  const double a = w.norm();
  if (a < 1e-14) return Eigen::Quaterniond::Identity();
  return Eigen::Quaterniond(Eigen::AngleAxisd(a, w / a));
}

/// Band-limited random signal: sum of a few sinusoids per axis.
struct SmoothSignal {
  Eigen::Vector3d amp[3];
  Eigen::Vector3d freq[3];
  Eigen::Vector3d phase[3];

  static SmoothSignal random(CounterRng& rng, double amplitude) {
    SmoothSignal s;
    for (int h = 0; h < 3; ++h) {
      for (int axis = 0; axis < 3; ++axis) {
        s.amp[h][axis] = rng.nextUniform(-amplitude, amplitude);
        s.freq[h][axis] = rng.nextUniform(0.2, 1.5);  // walking-gait band
        s.phase[h][axis] = rng.nextUniform(0, 2 * M_PI);
      }
    }
    return s;
  }

  Eigen::Vector3d at(double t) const {
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    for (int h = 0; h < 3; ++h) {
      for (int axis = 0; axis < 3; ++axis) {
        v[axis] += amp[h][axis] * std::sin(2 * M_PI * freq[h][axis] * t + phase[h][axis]);
      }
    }
    return v;
  }
};

std::vector<ImuSample> sampleStream(const SmoothSignal& gyro, const SmoothSignal& accel,
                                    double duration, double rate) {
  std::vector<ImuSample> samples;
  const int n = static_cast<int>(duration * rate) + 1;
  for (int i = 0; i < n; ++i) {
    const double t = i / rate;
    ImuSample s;
    s.stamp = Timestamp::fromSeconds(t);
    s.gyro = gyro.at(t);
    s.accel = accel.at(t);
    samples.push_back(s);
  }
  return samples;
}

/// Brute-force fine-step integrator over the linearly interpolated samples.
/// Independent of the production midpoint scheme.
PreintegratedDelta bruteForceIntegrate(const std::vector<ImuSample>& samples, double fine_rate) {
  PreintegratedDelta d;
  const double t0 = samples.front().stamp.seconds();
  const double t1 = samples.back().stamp.seconds();
  const double h = 1.0 / fine_rate;

  auto interp = [&](double t, auto&& get) {
    if (t <= t0) return get(samples.front());
    if (t >= t1) return get(samples.back());
    std::size_t k = 0;
    while (k + 2 < samples.size() && samples[k + 1].stamp.seconds() <= t) ++k;
    const double ta = samples[k].stamp.seconds();
    const double tb = samples[k + 1].stamp.seconds();
    const double alpha = (t - ta) / (tb - ta);
    return ((1 - alpha) * get(samples[k]) + alpha * get(samples[k + 1])).eval();
  };
  auto gyroAt = [&](double t) { return interp(t, [](const ImuSample& s) { return s.gyro; }); };
  auto accelAt = [&](double t) { return interp(t, [](const ImuSample& s) { return s.accel; }); };

  Eigen::Quaterniond R = Eigen::Quaterniond::Identity();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  double t = t0;
  while (t < t1 - 1e-12) {
    const double step = std::min(h, t1 - t);
    const double tm = t + step / 2;
    const Eigen::Matrix3d R_mid = (R * expQuat(gyroAt(tm) * (step / 2))).toRotationMatrix();
    const Eigen::Vector3d a = accelAt(tm);
    p += v * step + 0.5 * (R_mid * a) * step * step;
    v += R_mid * a * step;
    R = (R * expQuat(gyroAt(tm) * step)).normalized();
    t += step;
  }
  d.rotation = R;
  d.velocity = v;
  d.position = p;
  d.dt_total = t1 - t0;
  return d;
}

std::vector<ImuSample> stationarySamples(double duration, double rate = 400.0,
                                         const Eigen::Vector3d& accel = {0, 0, kGravityMagnitude},
                                         const Eigen::Vector3d& gyro = Eigen::Vector3d::Zero()) {
  std::vector<ImuSample> samples;
  const int n = static_cast<int>(duration * rate) + 1;
  for (int i = 0; i < n; ++i) {
    ImuSample s;
    s.stamp = Timestamp::fromSeconds(i / rate);
    s.accel = accel;
    s.gyro = gyro;
    samples.push_back(s);
  }
  return samples;
}

}  // namespace

TEST_CASE("constant acceleration integrates to expected delta") {
  auto samples = stationarySamples(1.0, 400.0, Eigen::Vector3d(1, 0, 0));
  const auto delta = preintegrate(samples, ImuBias{});
  CHECK(delta.velocity.isApprox(Eigen::Vector3d(1, 0, 0), 1e-6));
  CHECK(delta.position.isApprox(Eigen::Vector3d(0.5, 0, 0), 1e-6));
  CHECK(delta.dt_total == doctest::Approx(1.0));
}

TEST_CASE("constant rate integrates to expected rotation") {
  auto samples = stationarySamples(1.0, 400.0, Eigen::Vector3d::Zero(),
                                   Eigen::Vector3d(0, 0, M_PI / 2));
  const auto delta = preintegrate(samples, ImuBias{});
  const Eigen::Quaterniond expected = expQuat(Eigen::Vector3d(0, 0, M_PI / 2));
  CHECK(delta.rotation.angularDistance(expected) < 1e-6);
}

TEST_CASE("non-monotone stamps rejected") {
  auto samples = stationarySamples(0.1);
  std::swap(samples[3].stamp, samples[4].stamp);
  CHECK_THROWS_AS(preintegrate(samples, ImuBias{}), OrderingError);
  CHECK_THROWS_AS(preintegrate(std::span<const ImuSample>(samples.data(), 1), ImuBias{}),
                  OrderingError);
}

TEST_CASE("deltas match 10 kHz brute-force integrator (acceptance-4 core)") {
  CounterRng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const auto gyro = SmoothSignal::random(rng, 0.3);
    const auto accel = SmoothSignal::random(rng, 1.5);
    const auto samples = sampleStream(gyro, accel, 0.5, 400.0);
    const auto delta = preintegrate(samples, ImuBias{});
    const auto oracle = bruteForceIntegrate(samples, 10000.0);

    const double rot_err = delta.rotation.angularDistance(oracle.rotation);
    const double vel_err = (delta.velocity - oracle.velocity).norm();
    const double pos_err = (delta.position - oracle.position).norm();
    CHECK(rot_err <= 1e-6 * (1.0 + 2.0 * std::acos(std::abs(oracle.rotation.w()))));
    CHECK(vel_err <= 1e-6 * (1.0 + oracle.velocity.norm()));
    CHECK(pos_err <= 1e-6 * (1.0 + oracle.position.norm()));
  }
}

TEST_CASE("bias is subtracted before integration") {
  ImuBias bias;
  bias.accel = Eigen::Vector3d(0.5, 0, 0);
  bias.gyro = Eigen::Vector3d(0, 0, 0.1);
  auto samples = stationarySamples(1.0, 400.0, Eigen::Vector3d(0.5, 0, 0),
                                   Eigen::Vector3d(0, 0, 0.1));
  const auto delta = preintegrate(samples, bias);
  CHECK(delta.velocity.norm() < 1e-12);
  CHECK(delta.rotation.angularDistance(Eigen::Quaterniond::Identity()) < 1e-12);
}

TEST_CASE("covariance symmetric PSD and growing") {
  CounterRng rng(7);
  const auto gyro = SmoothSignal::random(rng, 0.5);
  const auto accel = SmoothSignal::random(rng, 2.0);
  const auto samples = sampleStream(gyro, accel, 0.2, 400.0);

  double prev_trace = 0.0;
  for (std::size_t n = 2; n <= samples.size(); n += 8) {
    const auto delta = preintegrate(std::span<const ImuSample>(samples.data(), n), ImuBias{});
    const auto& S = delta.covariance;
    CHECK((S - S.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 9, 9>> eig(S);
    CHECK(eig.eigenvalues()(0) >= -1e-15);
    CHECK(S.trace() >= prev_trace);
    prev_trace = S.trace();
  }
}

TEST_CASE("delta independent of assumed initial state by construction") {
  // The integrator never sees an absolute state; two calls over the same
  // samples with different downstream uses must agree bit for bit.
  const auto samples = stationarySamples(0.3, 400.0, Eigen::Vector3d(0.1, 0.2, 9.9),
                                         Eigen::Vector3d(0.05, 0, 0.02));
  const auto d1 = preintegrate(samples, ImuBias{});
  const auto d2 = preintegrate(samples, ImuBias{});
  CHECK(d1.position == d2.position);
  CHECK(d1.velocity == d2.velocity);
  CHECK(d1.rotation.coeffs() == d2.rotation.coeffs());
}

TEST_CASE("predict_relative_pose") {
  const Eigen::Vector3d gravity(0, 0, -kGravityMagnitude);

  SUBCASE("stationary level state") {
    const auto samples = stationarySamples(0.5);
    const auto delta = preintegrate(samples, ImuBias{});
    const auto rel = predictRelativePose(delta, Eigen::Quaterniond::Identity(),
                                         Eigen::Vector3d::Zero(), gravity);
    CHECK(rel.translation().norm() < 1e-9);
    CHECK(rel.rotationAngle() < 1e-9);
  }

  SUBCASE("coasting at initial velocity") {
    const auto samples = stationarySamples(0.1);
    const auto delta = preintegrate(samples, ImuBias{});
    const auto rel = predictRelativePose(delta, Eigen::Quaterniond::Identity(),
                                         Eigen::Vector3d(1, 0, 0), gravity);
    CHECK(rel.translation().isApprox(Eigen::Vector3d(0.1, 0, 0), 1e-9));
  }
}

TEST_CASE("detect_static") {
  CounterRng rng(3);
  auto quiet = stationarySamples(0.6);
  for (auto& s : quiet) {
    s.accel += Eigen::Vector3d(rng.nextGaussian(), rng.nextGaussian(), rng.nextGaussian()) * 0.01;
    s.gyro += Eigen::Vector3d(rng.nextGaussian(), rng.nextGaussian(), rng.nextGaussian()) * 0.002;
  }
  CHECK(detectStatic(quiet));

  SUBCASE("gyro burst flips the verdict") {
    auto burst = quiet;
    burst[burst.size() / 2].gyro += Eigen::Vector3d(0.5, 0, 0);
    CHECK_FALSE(detectStatic(burst));
  }

  SUBCASE("short window rejected") {
    const auto brief = stationarySamples(0.3);
    CHECK_THROWS_AS(detectStatic(brief), InsufficientWindowError);
  }

  SUBCASE("monotone: adding a violating sample can only flip true to false") {
    auto extended = quiet;
    ImuSample bad;
    bad.stamp = extended.back().stamp + 2500000;
    bad.accel = Eigen::Vector3d(0, 0, 9.81);
    bad.gyro = Eigen::Vector3d(0.5, 0, 0);
    extended.push_back(bad);
    CHECK_FALSE(detectStatic(extended));
  }
}

TEST_CASE("roll_pitch_from_gravity closed-form conventions") {
  const auto level = rollPitchFromGravity({0, 0, kGravityMagnitude});
  CHECK(level.roll == doctest::Approx(0.0));
  CHECK(level.pitch == doctest::Approx(0.0));

  const double g = kGravityMagnitude;
  const auto rolled = rollPitchFromGravity({0, g * std::sin(M_PI / 6), g * std::cos(M_PI / 6)});
  CHECK(rolled.roll == doctest::Approx(M_PI / 6).epsilon(1e-9));
  CHECK(rolled.pitch == doctest::Approx(0.0));

  const auto pitched = rollPitchFromGravity({-g * std::sin(M_PI / 12), 0, g * std::cos(M_PI / 12)});
  CHECK(pitched.pitch == doctest::Approx(M_PI / 12).epsilon(1e-9));
  CHECK(pitched.roll == doctest::Approx(0.0));

  CHECK_THROWS_AS(rollPitchFromGravity({0, 0, 5.0}), NotStaticError);
}
