#pragma once

#include <Eigen/Core>

#include <memory>
#include <optional>
#include <vector>

#include "relio/core/kdtree.hpp"
#include "relio/features/features.hpp"

namespace relio {

/// Eigen-analysis of the 3x3 translation and rotation blocks of the
/// approximate Hessian, checked independently because of their differing
/// scales. Eigenvalues ascending; eigenvector columns match.
struct DegeneracyReport {
  Eigen::Vector3d eig_translation{Eigen::Vector3d::Zero()};
  Eigen::Vector3d eig_rotation{Eigen::Vector3d::Zero()};
  Eigen::Matrix3d eigvec_translation{Eigen::Matrix3d::Identity()};
  Eigen::Matrix3d eigvec_rotation{Eigen::Matrix3d::Identity()};
  bool degenerate_translation{true};
  bool degenerate_rotation{true};
  double threshold_translation{0.0};
  double threshold_rotation{0.0};

  bool degenerate() const { return degenerate_translation || degenerate_rotation; }

  static DegeneracyReport fullyDegenerate(double thr_t, double thr_r) {
    DegeneracyReport r;
    r.threshold_translation = thr_t;
    r.threshold_rotation = thr_r;
    return r;
  }
};

struct LineModel {
  Eigen::Vector3d point;
  Eigen::Vector3d direction;  // unit
};

struct PlaneModel {
  Eigen::Vector3d point;
  Eigen::Vector3d normal;  // unit
};

struct Correspondence {
  Eigen::Vector3d source;  // sensor-frame feature position
  bool is_edge{false};
  LineModel line{};
  PlaneModel plane{};
  double weight{1.0};  // robust weight in (0, 1]
};

struct RegistrationResult {
  RigidTransform transform;
  Eigen::Matrix<double, 6, 6> hessian{Eigen::Matrix<double, 6, 6>::Zero()};
  double residual_rms{0.0};
  int iterations{0};
  bool converged{false};
  std::size_t correspondence_count{0};
  DegeneracyReport degeneracy;
};

class ContractViolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by registerFeatures when matching yields too few constraints.
class InsufficientConstraintsError : public std::runtime_error {
 public:
  InsufficientConstraintsError(const std::string& what, DegeneracyReport rep)
      : std::runtime_error(what), report(std::move(rep)) {}
  DegeneracyReport report;
};

enum class EdgeMatchModel {
  TwoPointDistinctRings,  // scan-to-scan: line through 2 nearest edges on distinct rings
  PrincipalDirection,     // scan-to-submap: principal direction of the 5 nearest points
};

/// Nearest-neighbor structure the source features are registered against.
struct RegistrationTarget {
  KdTree edge_tree;
  KdTree planar_tree;
  std::vector<std::uint16_t> edge_rings;  // ring of each edge_tree point
  EdgeMatchModel edge_model{EdgeMatchModel::TwoPointDistinctRings};

  bool empty() const { return edge_tree.empty() && planar_tree.empty(); }

  static RegistrationTarget fromFeatureSet(const FeatureSet& features);
  static RegistrationTarget fromPoints(std::vector<Eigen::Vector3d> points);
};

struct RegistrationConfig {
  int max_iterations{30};
  double convergence_translation{1e-5};  // m
  double convergence_rotation{1e-5};     // rad
  double match_radius{1.0};              // m
  double planarity_threshold{0.2};       // max point-to-plane fit residual, m
  double colinearity_ratio{3.0};         // principal/second eigenvalue minimum
  double huber_scale{0.1};               // m
  double damping_factor{1e-4};           // lambda = factor * trace / 6
  std::size_t min_correspondences{10};
  double threshold_translation{120.0};   // degeneracy thresholds (normalized cost units)
  double threshold_rotation{150.0};
  bool scale_thresholds_with_count{true};
  double reference_count{1200.0};  // correspondence count the thresholds are calibrated at

  double effectiveThresholdTranslation(std::size_t count) const {
    return scale_thresholds_with_count
               ? threshold_translation * static_cast<double>(count) / reference_count
               : threshold_translation;
  }
  double effectiveThresholdRotation(std::size_t count) const {
    return scale_thresholds_with_count
               ? threshold_rotation * static_cast<double>(count) / reference_count
               : threshold_rotation;
  }
};

/// Matches each source feature, mapped through guess, to a line or plane model
/// fitted to its target neighborhood. Output order follows source index
/// (edges first), so the result is deterministic under parallel search.
std::vector<Correspondence> findCorrespondences(const FeatureSet& features,
                                                const RegistrationTarget& target,
                                                const RigidTransform& guess,
                                                const RegistrationConfig& cfg);

namespace serial_ref {
std::vector<Correspondence> findCorrespondences(const FeatureSet& features,
                                                const RegistrationTarget& target,
                                                const RigidTransform& guess,
                                                const RegistrationConfig& cfg);
}

/// Splits a symmetric 6x6 Hessian (state order [translation, rotation]) into
/// its diagonal blocks and eigen-decomposes each. Throws ContractViolationError
/// if the input is asymmetric beyond 1e-6.
DegeneracyReport assessDegeneracy(const Eigen::Matrix<double, 6, 6>& hessian,
                                  double threshold_translation, double threshold_rotation);

/// Damped Gauss-Newton over the 6-DoF body-frame perturbation, with
/// re-matching and a degeneracy report refreshed every iteration.
RegistrationResult registerFeatures(const FeatureSet& features, const RegistrationTarget& target,
                                    const RigidTransform& initial_guess,
                                    const RegistrationConfig& cfg);

}  // namespace relio
