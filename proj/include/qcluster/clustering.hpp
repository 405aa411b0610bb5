#pragma once

// Points in the plane, Euclidean distances, the intra-cluster cost
// W = sum over same-cluster pairs of d(i, j), and an exhaustive classical
// oracle for certifying annealing results.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcluster/qutrit_algebra.hpp"

namespace qcluster {

/// Raised when an instance exceeds an enumeration or simulation size guard.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& p, const Point& q);

/// Ordered list of at least two points with optional display labels.
class PointSet {
 public:
  explicit PointSet(std::vector<Point> points, std::vector<std::string> labels = {});

  std::size_t size() const { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point> points() const { return points_; }
  /// Display label; falls back to "(x, y)".
  std::string label(std::size_t i) const;
  bool has_labels() const { return !labels_.empty(); }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<Point> points_;
  std::vector<std::string> labels_;
};

/// Symmetric matrix of pairwise distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// Row-major n x n values; validated for symmetry, zero diagonal and
  /// non-negativity.
  DistanceMatrix(std::size_t n, std::vector<double> values);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  double max() const;
  /// T = sum_{i<j} d(i, j).
  double total_pair_sum() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

DistanceMatrix distance_matrix(const PointSet& ps);

/// Assignment of points to cluster labels in [0, K). Equality compares the
/// induced set partitions, so relabelled assignments are equal.
class Partition {
 public:
  Partition() = default;
  Partition(std::vector<int> assignment, int clusters);

  int clusters() const { return k_; }
  std::size_t size() const { return assignment_.size(); }
  std::span<const int> assignment() const { return assignment_; }
  int label(std::size_t point) const { return assignment_[point]; }

  /// Labels renumbered in order of first appearance; identical for all
  /// assignments inducing the same set partition.
  std::vector<int> canonical() const;
  /// Non-empty blocks in canonical order, each listing point indices.
  std::vector<std::vector<int>> blocks() const;
  /// e.g. "{0,1,4}{2,3}{5}".
  std::string to_string() const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.canonical() == b.canonical();
  }
  /// Orders by canonical form so partitions can key ordered containers.
  friend bool operator<(const Partition& a, const Partition& b) {
    return a.canonical() < b.canonical();
  }

 private:
  std::vector<int> assignment_;
  int k_ = 0;
};

/// W = sum over unordered same-cluster pairs of d(i, j).
double cost(const DistanceMatrix& dm, const Partition& p);

/// Labels held fixed during enumeration (point index -> label).
using FixedLabels = std::map<int, int>;

/// Walks all K^(free points) label assignments honoring `fixed`, odometer
/// style with the last free point varying fastest.
///
///   AssignmentEnumerator e(n, k);
///   while (e.next()) use(e.current());
class AssignmentEnumerator {
 public:
  AssignmentEnumerator(int n_points, int clusters, FixedLabels fixed = {});

  bool next();
  const Partition& current() const { return current_; }
  /// Total number of assignments the enumeration yields.
  std::size_t count() const;

 private:
  int n_;
  int k_;
  std::vector<int> free_;
  std::vector<int> labels_;
  Partition current_;
  bool started_ = false;
  bool done_ = false;
};

struct OracleResult {
  double min_cost = 0.0;
  /// Distinct set partitions attaining the minimum, sorted by canonical form.
  std::vector<Partition> argmin_partitions;
  /// Basis indices attaining the minimum (oracle_diag_min only).
  std::vector<std::size_t> argmin_basis_states;

  bool contains(const Partition& p) const;
};

inline constexpr int kMaxOraclePoints = 12;

/// Values within this relative distance of the minimum count as degenerate.
inline constexpr double kDegeneracyTolerance = 1e-9;

/// Exact minimum of `cost` over every assignment. Throws SizeLimitError when
/// n_points > kMaxOraclePoints and std::invalid_argument for bad labels.
OracleResult oracle_min(const DistanceMatrix& dm, int clusters, const FixedLabels& fixed = {});

/// Minimum diagonal entry and all basis indices attaining it.
OracleResult oracle_diag_min(const DiagonalHamiltonian& h);

}  // namespace qcluster
