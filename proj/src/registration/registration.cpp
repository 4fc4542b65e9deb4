#include "relio/registration/registration.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "relio/core/parallel.hpp"

namespace relio {

RegistrationTarget RegistrationTarget::fromFeatureSet(const FeatureSet& features) {
  RegistrationTarget target;
  std::vector<Eigen::Vector3d> edges;
  edges.reserve(features.edges.size());
  target.edge_rings.reserve(features.edges.size());
  for (const Point& p : features.edges.points) {
    edges.push_back(p.position);
    target.edge_rings.push_back(p.ring);
  }
  std::vector<Eigen::Vector3d> planars;
  planars.reserve(features.planars.size());
  for (const Point& p : features.planars.points) planars.push_back(p.position);
  target.edge_tree.build(std::move(edges));
  target.planar_tree.build(std::move(planars));
  target.edge_model = EdgeMatchModel::TwoPointDistinctRings;
  return target;
}

RegistrationTarget RegistrationTarget::fromPoints(std::vector<Eigen::Vector3d> points) {
  RegistrationTarget target;
  target.edge_tree.build(points);
  target.planar_tree.build(std::move(points));
  target.edge_model = EdgeMatchModel::PrincipalDirection;
  return target;
}

namespace {

struct NeighborhoodStats {
  Eigen::Vector3d centroid;
  Eigen::Matrix3d covariance;
};

NeighborhoodStats fitNeighborhood(const KdTree& tree, const std::vector<KdTree::Neighbor>& nn) {
  NeighborhoodStats s;
  s.centroid.setZero();
  for (const auto& n : nn) s.centroid += tree.points()[n.index];
  s.centroid /= static_cast<double>(nn.size());
  s.covariance.setZero();
  for (const auto& n : nn) {
    const Eigen::Vector3d d = tree.points()[n.index] - s.centroid;
    s.covariance += d * d.transpose();
  }
  s.covariance /= static_cast<double>(nn.size());
  return s;
}

std::optional<Correspondence> matchEdge(const Eigen::Vector3d& source,
                                        const Eigen::Vector3d& warped,
                                        const RegistrationTarget& target,
                                        const RegistrationConfig& cfg) {
  Correspondence c;
  c.source = source;
  c.is_edge = true;
  if (target.edge_model == EdgeMatchModel::TwoPointDistinctRings) {
    const auto nn = target.edge_tree.knn(warped, 6, cfg.match_radius);
    if (nn.empty()) return std::nullopt;
    const std::uint32_t j1 = nn.front().index;
    const std::uint16_t ring1 = target.edge_rings[j1];
    std::uint32_t j2 = KdTree::kNoMatch;
    for (std::size_t i = 1; i < nn.size(); ++i) {
      if (target.edge_rings[nn[i].index] != ring1) {
        j2 = nn[i].index;
        break;
      }
    }
    if (j2 == KdTree::kNoMatch) return std::nullopt;
    const Eigen::Vector3d q1 = target.edge_tree.points()[j1];
    const Eigen::Vector3d q2 = target.edge_tree.points()[j2];
    const Eigen::Vector3d d = q2 - q1;
    if (d.norm() < 1e-9) return std::nullopt;
    c.line = LineModel{q1, d.normalized()};
  } else {
    const auto nn = target.edge_tree.knn(warped, 5, cfg.match_radius);
    if (nn.size() < 5) return std::nullopt;
    const NeighborhoodStats s = fitNeighborhood(target.edge_tree, nn);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(s.covariance);
    // Line-like neighborhood: dominant direction must stand out.
    if (eig.eigenvalues()(2) < cfg.colinearity_ratio * eig.eigenvalues()(1)) return std::nullopt;
    c.line = LineModel{s.centroid, eig.eigenvectors().col(2).normalized()};
  }
  return c;
}

std::optional<Correspondence> matchPlanar(const Eigen::Vector3d& source,
                                          const Eigen::Vector3d& warped,
                                          const RegistrationTarget& target,
                                          const RegistrationConfig& cfg) {
  const auto nn = target.planar_tree.knn(warped, 5, cfg.match_radius);
  if (nn.size() < 5) return std::nullopt;
  const NeighborhoodStats s = fitNeighborhood(target.planar_tree, nn);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(s.covariance);
  const Eigen::Vector3d normal = eig.eigenvectors().col(0).normalized();
  // Fit residual: every supporting point must lie close to the plane.
  for (const auto& n : nn) {
    const double dist = std::abs(normal.dot(target.planar_tree.points()[n.index] - s.centroid));
    if (dist > cfg.planarity_threshold) return std::nullopt;
  }
  Correspondence c;
  c.source = source;
  c.is_edge = false;
  c.plane = PlaneModel{s.centroid, normal};
  return c;
}

double huberWeight(double residual, double scale) {
  const double a = std::abs(residual);
  return a <= scale ? 1.0 : scale / a;
}

double pointResidualNorm(const Correspondence& c, const Eigen::Vector3d& warped) {
  if (c.is_edge) {
    const Eigen::Vector3d e = warped - c.line.point;
    return (e - c.line.direction * c.line.direction.dot(e)).norm();
  }
  return std::abs(c.plane.normal.dot(warped - c.plane.point));
}

template <bool Parallel>
std::vector<Correspondence> findCorrespondencesImpl(const FeatureSet& features,
                                                    const RegistrationTarget& target,
                                                    const RigidTransform& guess,
                                                    const RegistrationConfig& cfg) {
  const std::size_t n_edges = features.edges.size();
  const std::size_t n_total = n_edges + features.planars.size();
  std::vector<std::optional<Correspondence>> slots(n_total);

  auto matchOne = [&](std::size_t i) {
    if (i < n_edges) {
      const Eigen::Vector3d& p = features.edges.points[i].position;
      slots[i] = matchEdge(p, guess * p, target, cfg);
    } else {
      const Eigen::Vector3d& p = features.planars.points[i - n_edges].position;
      slots[i] = matchPlanar(p, guess * p, target, cfg);
    }
    if (slots[i]) {
      const double r = pointResidualNorm(*slots[i], guess * slots[i]->source);
      slots[i]->weight = huberWeight(r, cfg.huber_scale);
    }
  };

  if constexpr (Parallel) {
    parallelFor(n_total, matchOne);
  } else {
    for (std::size_t i = 0; i < n_total; ++i) matchOne(i);
  }

  std::vector<Correspondence> out;
  out.reserve(n_total);
  for (auto& slot : slots) {
    if (slot) out.push_back(std::move(*slot));
  }
  return out;
}

}  // namespace

std::vector<Correspondence> findCorrespondences(const FeatureSet& features,
                                                const RegistrationTarget& target,
                                                const RigidTransform& guess,
                                                const RegistrationConfig& cfg) {
  return findCorrespondencesImpl<true>(features, target, guess, cfg);
}

namespace serial_ref {
std::vector<Correspondence> findCorrespondences(const FeatureSet& features,
                                                const RegistrationTarget& target,
                                                const RigidTransform& guess,
                                                const RegistrationConfig& cfg) {
  const bool was = Parallelism::enabledFlag();
  Parallelism::setEnabled(false);
  auto out = findCorrespondencesImpl<false>(features, target, guess, cfg);
  Parallelism::setEnabled(was);
  return out;
}
}  // namespace serial_ref

DegeneracyReport assessDegeneracy(const Eigen::Matrix<double, 6, 6>& hessian,
                                  double threshold_translation, double threshold_rotation) {
  const double asym = (hessian - hessian.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-6) {
    throw ContractViolationError("assessDegeneracy: hessian asymmetric beyond 1e-6");
  }
  DegeneracyReport report;
  report.threshold_translation = threshold_translation;
  report.threshold_rotation = threshold_rotation;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig_t(hessian.topLeftCorner<3, 3>());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig_r(hessian.bottomRightCorner<3, 3>());
  report.eig_translation = eig_t.eigenvalues();
  report.eig_rotation = eig_r.eigenvalues();
  report.eigvec_translation = eig_t.eigenvectors();
  report.eigvec_rotation = eig_r.eigenvectors();
  report.degenerate_translation = report.eig_translation(0) < threshold_translation;
  report.degenerate_rotation = report.eig_rotation(0) < threshold_rotation;
  return report;
}

RegistrationResult registerFeatures(const FeatureSet& features, const RegistrationTarget& target,
                                    const RigidTransform& initial_guess,
                                    const RegistrationConfig& cfg) {
  RegistrationResult result;
  result.transform = initial_guess;

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    result.iterations = iter + 1;
    const std::vector<Correspondence> matches =
        findCorrespondences(features, target, result.transform, cfg);

    if (matches.size() < cfg.min_correspondences) {
      throw InsufficientConstraintsError(
          "registerFeatures: " + std::to_string(matches.size()) + " correspondences, need " +
              std::to_string(cfg.min_correspondences),
          DegeneracyReport::fullyDegenerate(cfg.effectiveThresholdTranslation(matches.size()),
                                            cfg.effectiveThresholdRotation(matches.size())));
    }

    // Per-correspondence contributions are computed in parallel into slots and
    // reduced serially in index order, keeping the normal equations bit-stable.
    const std::size_t m = matches.size();
    std::vector<Eigen::Matrix<double, 6, 6>> h_parts(m);
    std::vector<Eigen::Matrix<double, 6, 1>> g_parts(m);
    std::vector<double> sq_residuals(m);
    const Eigen::Matrix3d R = result.transform.rotationMatrix();
    const Eigen::Vector3d t = result.transform.translation();

    parallelFor(m, [&](std::size_t i) {
      const Correspondence& c = matches[i];
      const Eigen::Vector3d warped = R * c.source + t;
      Eigen::Matrix<double, 6, 6> H = Eigen::Matrix<double, 6, 6>::Zero();
      Eigen::Matrix<double, 6, 1> g = Eigen::Matrix<double, 6, 1>::Zero();
      double r2 = 0.0;
      if (c.is_edge) {
        // 3-vector residual projected onto the plane orthogonal to the line.
        const Eigen::Matrix3d P =
            Eigen::Matrix3d::Identity() - c.line.direction * c.line.direction.transpose();
        const Eigen::Vector3d r = P * (warped - c.line.point);
        Eigen::Matrix<double, 3, 6> J;
        J.leftCols<3>() = P * R;
        J.rightCols<3>() = -P * R * skew(c.source);
        const double w = huberWeight(r.norm(), cfg.huber_scale);
        H = w * J.transpose() * J;
        g = w * J.transpose() * r;
        r2 = r.squaredNorm();
      } else {
        const double r = c.plane.normal.dot(warped - c.plane.point);
        Eigen::Matrix<double, 1, 6> J;
        const Eigen::Vector3d n_src = R.transpose() * c.plane.normal;
        J.leftCols<3>() = n_src.transpose();
        J.rightCols<3>() = (c.source.cross(n_src)).transpose();
        const double w = huberWeight(std::abs(r), cfg.huber_scale);
        H = w * J.transpose() * J;
        g = w * J.transpose() * r;
        r2 = r * r;
      }
      h_parts[i] = H;
      g_parts[i] = g;
      sq_residuals[i] = r2;
    });

    Eigen::Matrix<double, 6, 6> H = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> g = Eigen::Matrix<double, 6, 1>::Zero();
    double sum_r2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      H += h_parts[i];
      g += g_parts[i];
      sum_r2 += sq_residuals[i];
    }
    H = (0.5 * (H + H.transpose())).eval();

    result.hessian = H;
    result.correspondence_count = m;
    result.residual_rms = std::sqrt(sum_r2 / static_cast<double>(m));
    result.degeneracy = assessDegeneracy(H, cfg.effectiveThresholdTranslation(m),
                                         cfg.effectiveThresholdRotation(m));

    const double lambda = cfg.damping_factor * H.trace() / 6.0;
    const Eigen::Matrix<double, 6, 6> damped =
        H + lambda * Eigen::Matrix<double, 6, 6>::Identity();
    const Eigen::Matrix<double, 6, 1> delta = damped.ldlt().solve(-g);
    if (!delta.allFinite()) {
      result.converged = false;
      break;
    }
    result.transform = result.transform * RigidTransform::fromTwist(delta);
    if (delta.head<3>().norm() < cfg.convergence_translation &&
        delta.tail<3>().norm() < cfg.convergence_rotation) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace relio
