#include "relio/sim/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace relio {

CubicSpline1d::CubicSpline1d(std::vector<double> knots, std::vector<double> values)
    : s_(std::move(knots)), y_(std::move(values)) {
  const std::size_t n = s_.size();
  if (n != y_.size() || n < 2) {
    throw std::invalid_argument("CubicSpline1d: need matching knots/values, >= 2");
  }
  m_.assign(n, 0.0);
  if (n == 2) return;

  // Tridiagonal solve for natural boundary conditions (m_0 = m_{n-1} = 0).
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = s_[i] - s_[i - 1];
    const double h1 = s_[i + 1] - s_[i];
    a[i] = h0 / 6.0;
    b[i] = (h0 + h1) / 3.0;
    c[i] = h1 / 6.0;
    d[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (d[i] - c[i] * (i + 2 < n ? m_[i + 1] : 0.0)) / b[i];
    if (i == 1) break;
  }
}

std::size_t CubicSpline1d::segmentOf(double s) const {
  std::size_t lo = 0, hi = s_.size() - 1;
  if (s <= s_.front()) return 0;
  if (s >= s_.back()) return s_.size() - 2;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (s_[mid] <= s) lo = mid;
    else hi = mid;
  }
  return lo;
}

double CubicSpline1d::value(double s) const {
  const std::size_t i = segmentOf(s);
  const double h = s_[i + 1] - s_[i];
  const double u = s_[i + 1] - s, v = s - s_[i];
  return (m_[i] * u * u * u + m_[i + 1] * v * v * v) / (6.0 * h) +
         (y_[i] / h - m_[i] * h / 6.0) * u + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * v;
}

double CubicSpline1d::derivative(double s) const {
  const std::size_t i = segmentOf(s);
  const double h = s_[i + 1] - s_[i];
  const double u = s_[i + 1] - s, v = s - s_[i];
  return (-m_[i] * u * u + m_[i + 1] * v * v) / (2.0 * h) + (y_[i + 1] - y_[i]) / h -
         (m_[i + 1] - m_[i]) * h / 6.0;
}

double CubicSpline1d::secondDerivative(double s) const {
  const std::size_t i = segmentOf(s);
  const double h = s_[i + 1] - s_[i];
  return (m_[i] * (s_[i + 1] - s) + m_[i + 1] * (s - s_[i])) / h;
}

namespace {

// Quintic smoothstep: zero first and second derivatives at both ends.
double warp(double tau) { return tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau)); }
double warpD(double tau) { return tau * tau * (30.0 + tau * (-60.0 + 30.0 * tau)); }
double warpDD(double tau) { return tau * (60.0 + tau * (-180.0 + 120.0 * tau)); }

}  // namespace

TrajectorySample SplineTrajectory::at(double t) const {
  if (segments_.empty()) return {};
  const Segment* seg = &segments_.back();
  for (const Segment& s : segments_) {
    if (t < s.t1) {
      seg = &s;
      break;
    }
  }
  TrajectorySample out;
  if (seg->hold || t <= seg->t0) {
    const Waypoint& w = seg->hold ? seg->hold_pose : Waypoint{
        {seg->x.value(0), seg->y.value(0), seg->z.value(0)}, seg->yaw.value(0)};
    out.pose = RigidTransform(Eigen::Quaterniond(Eigen::AngleAxisd(w.yaw, Eigen::Vector3d::UnitZ())),
                              w.position);
    return out;
  }
  const double T = seg->t1 - seg->t0;
  const double tau = std::clamp((t - seg->t0) / T, 0.0, 1.0);
  const double s = warp(tau);
  const double sd = warpD(tau) / T;
  const double sdd = warpDD(tau) / (T * T);

  const Eigen::Vector3d p(seg->x.value(s), seg->y.value(s), seg->z.value(s));
  const Eigen::Vector3d dp(seg->x.derivative(s), seg->y.derivative(s), seg->z.derivative(s));
  const Eigen::Vector3d ddp(seg->x.secondDerivative(s), seg->y.secondDerivative(s),
                            seg->z.secondDerivative(s));
  const double yaw = seg->yaw.value(s);
  const double dyaw = seg->yaw.derivative(s);

  out.pose = RigidTransform(Eigen::Quaterniond(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ())), p);
  out.velocity = dp * sd;
  out.acceleration = ddp * sd * sd + dp * sdd;
  out.angular_velocity = Eigen::Vector3d(0, 0, dyaw * sd);
  return out;
}

std::vector<std::pair<double, double>> SplineTrajectory::standstills() const {
  std::vector<std::pair<double, double>> out;
  for (const Segment& s : segments_) {
    if (s.hold) out.emplace_back(s.t0, s.t1);
  }
  return out;
}

TrajectoryBuilder::TrajectoryBuilder(const Eigen::Vector3d& start_position, double start_yaw,
                                     double start_time)
    : cursor_{start_position, start_yaw}, time_(start_time) {}

TrajectoryBuilder& TrajectoryBuilder::hold(double duration) {
  SplineTrajectory::Segment seg;
  seg.t0 = time_;
  seg.t1 = time_ + duration;
  seg.hold = true;
  seg.hold_pose = cursor_;
  segments_.push_back(std::move(seg));
  time_ += duration;
  return *this;
}

TrajectoryBuilder& TrajectoryBuilder::moveThrough(const std::vector<Waypoint>& waypoints,
                                                  double duration) {
  if (waypoints.empty()) throw std::invalid_argument("moveThrough: empty waypoint list");
  std::vector<Waypoint> pts;
  pts.push_back(cursor_);
  pts.insert(pts.end(), waypoints.begin(), waypoints.end());

  // Chord-length parameterization keeps speed roughly even along the path.
  std::vector<double> knots(pts.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    total += std::max(1e-6, (pts[i].position - pts[i - 1].position).norm());
    knots[i] = total;
  }
  for (double& k : knots) k /= total;

  std::vector<double> xs, ys, zs, yaws;
  double prev_yaw = pts.front().yaw;
  for (const Waypoint& w : pts) {
    xs.push_back(w.position.x());
    ys.push_back(w.position.y());
    zs.push_back(w.position.z());
    // Unwrap so the spline never takes the long way around.
    double yaw = w.yaw;
    while (yaw - prev_yaw > M_PI) yaw -= 2 * M_PI;
    while (yaw - prev_yaw < -M_PI) yaw += 2 * M_PI;
    yaws.push_back(yaw);
    prev_yaw = yaw;
  }

  SplineTrajectory::Segment seg;
  seg.t0 = time_;
  seg.t1 = time_ + duration;
  seg.hold = false;
  seg.x = CubicSpline1d(knots, xs);
  seg.y = CubicSpline1d(knots, ys);
  seg.z = CubicSpline1d(knots, zs);
  seg.yaw = CubicSpline1d(knots, yaws);
  segments_.push_back(std::move(seg));
  time_ += duration;
  cursor_ = Waypoint{pts.back().position, yaws.back()};
  return *this;
}

std::shared_ptr<SplineTrajectory> TrajectoryBuilder::build() {
  auto traj = std::make_shared<SplineTrajectory>();
  traj->segments_ = std::move(segments_);
  return traj;
}

}  // namespace relio
