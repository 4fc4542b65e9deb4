#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace relio {

/// Integer nanoseconds since sequence start. Exact ordering, no float drift.
struct Timestamp {
  std::int64_t ns{0};

  constexpr Timestamp() = default;
  constexpr explicit Timestamp(std::int64_t nanoseconds) : ns(nanoseconds) {}

  static Timestamp fromSeconds(double s) {
    return Timestamp(static_cast<std::int64_t>(std::llround(s * 1e9)));
  }
  double seconds() const { return static_cast<double>(ns) * 1e-9; }

  friend constexpr bool operator==(Timestamp a, Timestamp b) { return a.ns == b.ns; }
  friend constexpr bool operator!=(Timestamp a, Timestamp b) { return a.ns != b.ns; }
  friend constexpr bool operator<(Timestamp a, Timestamp b) { return a.ns < b.ns; }
  friend constexpr bool operator<=(Timestamp a, Timestamp b) { return a.ns <= b.ns; }
  friend constexpr bool operator>(Timestamp a, Timestamp b) { return a.ns > b.ns; }
  friend constexpr bool operator>=(Timestamp a, Timestamp b) { return a.ns >= b.ns; }
  friend constexpr Timestamp operator+(Timestamp a, std::int64_t d) { return Timestamp(a.ns + d); }
  friend constexpr std::int64_t operator-(Timestamp a, Timestamp b) { return a.ns - b.ns; }
};

class InterpolationRangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SE(3) transform stored as unit quaternion + translation.
/// Composition applies the right operand first: (a * b) x == a(b(x)).
class RigidTransform {
 public:
  RigidTransform() : q_(Eigen::Quaterniond::Identity()), t_(Eigen::Vector3d::Zero()) {}
  RigidTransform(const Eigen::Quaterniond& q, const Eigen::Vector3d& t) : q_(q.normalized()), t_(t) {}

  static RigidTransform Identity() { return RigidTransform(); }
  static RigidTransform fromTranslation(double x, double y, double z) {
    return RigidTransform(Eigen::Quaterniond::Identity(), Eigen::Vector3d(x, y, z));
  }
  static RigidTransform fromAxisAngle(const Eigen::Vector3d& axis, double angle,
                                      const Eigen::Vector3d& t = Eigen::Vector3d::Zero()) {
    return RigidTransform(Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis.normalized())), t);
  }
  /// Exponential chart used by the optimizers: [translation; axis-angle].
  static RigidTransform fromTwist(const Eigen::Matrix<double, 6, 1>& xi) {
    const Eigen::Vector3d omega = xi.tail<3>();
    const double angle = omega.norm();
    Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
    if (angle > 1e-14) {
      q = Eigen::Quaterniond(Eigen::AngleAxisd(angle, omega / angle));
    }
    return RigidTransform(q, xi.head<3>());
  }

  const Eigen::Quaterniond& rotation() const { return q_; }
  const Eigen::Vector3d& translation() const { return t_; }
  Eigen::Matrix3d rotationMatrix() const { return q_.toRotationMatrix(); }

  RigidTransform inverse() const {
    const Eigen::Quaterniond qi = q_.conjugate();
    return RigidTransform(qi, qi * (-t_));
  }

  RigidTransform operator*(const RigidTransform& rhs) const {
    return RigidTransform(q_ * rhs.q_, q_ * rhs.t_ + t_);
  }

  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return q_ * p + t_; }

  /// Rotation angle in [0, pi].
  double rotationAngle() const {
    const double w = std::min(1.0, std::abs(q_.w()));
    return 2.0 * std::acos(w);
  }

  Eigen::Vector3d axisAngle() const {
    const Eigen::AngleAxisd aa(q_);
    return aa.angle() * aa.axis();
  }

  bool isApprox(const RigidTransform& other, double tol = 1e-9) const {
    return (t_ - other.t_).norm() <= tol && q_.angularDistance(other.q_) <= tol;
  }

 private:
  Eigen::Quaterniond q_;
  Eigen::Vector3d t_;
};

inline Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

/// Translation lerp + rotation slerp; alpha in [0, 1] reproduces the endpoints.
inline RigidTransform interpolate(const RigidTransform& a, const RigidTransform& b, double alpha) {
  if (alpha <= 0.0) return a;
  if (alpha >= 1.0) return b;
  return RigidTransform(a.rotation().slerp(alpha, b.rotation()),
                        (1.0 - alpha) * a.translation() + alpha * b.translation());
}

enum class PoseSource : std::uint8_t { External, Vtio, Lo, Lm, ImuPrior };

enum class InvalidReason : std::uint8_t {
  None,
  OutOfBounds,
  MissingData,
  Degenerate,
  NotConverged,
  Stale,
};

inline const char* toString(PoseSource s) {
  switch (s) {
    case PoseSource::External: return "external";
    case PoseSource::Vtio: return "vtio";
    case PoseSource::Lo: return "lo";
    case PoseSource::Lm: return "lm";
    case PoseSource::ImuPrior: return "imu_prior";
  }
  return "?";
}

inline const char* toString(InvalidReason r) {
  switch (r) {
    case InvalidReason::None: return "none";
    case InvalidReason::OutOfBounds: return "out_of_bounds";
    case InvalidReason::MissingData: return "missing_data";
    case InvalidReason::Degenerate: return "degenerate";
    case InvalidReason::NotConverged: return "not_converged";
    case InvalidReason::Stale: return "stale";
  }
  return "?";
}

struct PoseEstimate {
  RigidTransform transform;
  Timestamp stamp;
  PoseSource source{PoseSource::ImuPrior};
  int external_rank{-1};  // meaningful only when source == External
  bool valid{true};
  InvalidReason reason{InvalidReason::None};
};

/// Interpolates between two timestamped poses at t in [a.stamp, b.stamp].
inline RigidTransform interpolatePose(const PoseEstimate& a, const PoseEstimate& b, Timestamp t) {
  if (a.stamp >= b.stamp) {
    throw InterpolationRangeError("interpolatePose: a.stamp must precede b.stamp");
  }
  if (t < a.stamp || t > b.stamp) {
    throw InterpolationRangeError("interpolatePose: query outside [a.stamp, b.stamp]");
  }
  if (t == a.stamp) return a.transform;
  if (t == b.stamp) return b.transform;
  const double alpha = static_cast<double>(t - a.stamp) / static_cast<double>(b.stamp - a.stamp);
  return interpolate(a.transform, b.transform, alpha);
}

struct Point {
  Eigen::Vector3d position{Eigen::Vector3d::Zero()};
  float intensity{0.0f};
  std::uint16_t ring{0};
  double time_offset{0.0};  // seconds within the sweep
};

struct PointCloud {
  std::vector<Point> points;
  Timestamp stamp;
  std::string frame;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

struct VoxelIndex {
  std::int64_t i{0};
  std::int64_t j{0};
  std::int64_t k{0};

  friend bool operator==(const VoxelIndex& a, const VoxelIndex& b) {
    return a.i == b.i && a.j == b.j && a.k == b.k;
  }
  friend bool operator<(const VoxelIndex& a, const VoxelIndex& b) {
    if (a.i != b.i) return a.i < b.i;
    if (a.j != b.j) return a.j < b.j;
    return a.k < b.k;
  }
};

struct VoxelIndexHash {
  std::size_t operator()(const VoxelIndex& v) const {
    // FNV-style mix of the three packed coordinates.
    std::uint64_t h = 14695981039346656037ull;
    for (std::int64_t c : {v.i, v.j, v.k}) {
      h ^= static_cast<std::uint64_t>(c);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Floor convention: boundary points belong to the cell whose lower corner they match.
inline VoxelIndex voxelIndexOf(const Eigen::Vector3d& p, double size) {
  if (!p.allFinite()) {
    throw InvalidPointError("voxelIndexOf: non-finite coordinate");
  }
  return VoxelIndex{static_cast<std::int64_t>(std::floor(p.x() / size)),
                    static_cast<std::int64_t>(std::floor(p.y() / size)),
                    static_cast<std::int64_t>(std::floor(p.z() / size))};
}

}  // namespace relio
