#pragma once

// Problem Hamiltonians for qutrit clustering. Every problem and penalty term
// is diagonal in the computational basis, so each builder returns a
// DiagonalHamiltonian. The transverse-field driver h * sum_i S^x_i is kept in
// structured form and applied matrix-free.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcluster/clustering.hpp"
#include "qcluster/qutrit_algebra.hpp"

namespace qcluster {

enum class EncodingMethod {
  onehot_k3,          // one qutrit per point, projection = cluster
  onehot_k3_pinned,   // point 0 fixed to projection 1, n - 1 qutrits
  onehot_k2_penalty,  // projection -1 penalized, two clusters
  onehot_multispin,   // a block of qutrits per point, block state = cluster
  kmeanspp,           // centroids pinned to fixed block states
};

std::string_view to_string(EncodingMethod m);
/// Accepts "one-hot-K3", "one-hot-K3-pinned", "one-hot-K2-penalty",
/// "one-hot-multispin", "kmeanspp". Throws std::invalid_argument otherwise.
EncodingMethod parse_method(std::string_view name);

/// Projections of one point's block, site order.
using BlockState = std::vector<int>;

/// ceil(log3 K), at least 1.
int spins_per_point_for(int clusters);

/// All 3^spins block states in cluster-numbering order: lexicographic in the
/// ternary digits, i.e. |1,1>, |1,0>, |1,-1>, |0,1>, |0,0>, ..., |-1,-1>.
std::vector<BlockState> block_states(int spins);

struct EncodingScheme {
  EncodingMethod method = EncodingMethod::onehot_k3_pinned;
  int clusters = 3;
  int spins_per_point = 1;
  /// Block state of each centroid (kmeanspp only), one per cluster.
  std::vector<BlockState> centroid_states;
  /// Penalty constant a or b; the builders default to 2 * max distance.
  std::optional<double> penalty;
  /// Fix point 0 to projection 1 (onehot_k2_penalty only).
  bool pinned = true;

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;

  /// Qutrits needed for `n_points` data points (centroids excluded for kmeanspp).
  int register_size(int n_points) const;

  static EncodingScheme onehot_k3();
  static EncodingScheme onehot_k3_pinned();
  static EncodingScheme k2_penalty(bool pinned);
  static EncodingScheme multispin(int clusters);
  static EncodingScheme kmeanspp(std::vector<BlockState> centroid_states);
  /// k-means++ scheme whose centroids take the first K block states in
  /// cluster-numbering order.
  static EncodingScheme kmeanspp_default(int clusters);
};

/// Distances d[c][j] between centroid c and the j-th non-centroid point.
class CentroidDistances {
 public:
  CentroidDistances(std::size_t centroids, std::size_t free_points, std::vector<double> values);

  std::size_t centroids() const { return c_; }
  std::size_t free_points() const { return f_; }
  double operator()(std::size_t c, std::size_t j) const { return d_[c * f_ + j]; }
  double max() const;

 private:
  std::size_t c_;
  std::size_t f_;
  std::vector<double> d_;
};

/// Indices of the points that are not centroids, ascending.
std::vector<int> free_point_indices(std::size_t n_points, std::span<const int> centroid_points);

/// Rows follow `centroid_points`, columns follow free_point_indices().
/// Throws std::invalid_argument for duplicate or out-of-range centroids.
CentroidDistances centroid_distances(const DistanceMatrix& dm, std::span<const int> centroid_points);

/// Sum over unordered pairs of d(i, j) * (+1 if m_i = m_j else -1).
DiagonalHamiltonian build_onehot_k3(const DistanceMatrix& dm);

/// Point 0 fixed to projection 1; qutrit j-1 carries point j.
DiagonalHamiltonian build_onehot_k3_pinned(const DistanceMatrix& dm);

/// Pair terms plus 2 d(i, j) ([m_i = -1] + [m_j = -1]) per pair.
DiagonalHamiltonian build_k2_penalty(const DistanceMatrix& dm, bool pinned);

/// Each point owns a block of spins_per_point_for(K) qutrits. Pair term is
/// +d when both blocks hold the same allowed state (rank < K), -d otherwise.
/// Throws std::invalid_argument for K < 2.
DiagonalHamiltonian build_onehot_multispin(const DistanceMatrix& dm, int clusters);

/// Adds `a` for every point whose block state has rank >= K. Throws
/// std::invalid_argument for a <= 0 or K < 2.
DiagonalHamiltonian build_penalty_onehot(int n_points, int clusters, double a);

/// sum_c sum_j d[c][j] (2 [block j = centroid state c] - 1) over the free points.
DiagonalHamiltonian build_kmeanspp(const CentroidDistances& dcp, const EncodingScheme& scheme);

/// Adds `b` for every free point whose block state is none of the centroid
/// states. Throws std::invalid_argument for b <= 0.
DiagonalHamiltonian build_penalty_kmeanspp(int n_free_points, const EncodingScheme& scheme, double b);

/// Penalty constant used when none is given: twice the largest distance.
inline double default_penalty(double max_distance) { return 2.0 * max_distance; }

/// Full problem Hamiltonian (including penalties) for `scheme`. For kmeanspp
/// the register holds only the non-centroid points.
DiagonalHamiltonian build_problem_hamiltonian(const DistanceMatrix& dm, const EncodingScheme& scheme,
                                              std::span<const int> centroid_points = {});

/// h * sum_i S^x_i on n qutrits, applied without forming the matrix.
class DriverHamiltonian {
 public:
  /// Throws std::invalid_argument unless h > 0 and n >= 1.
  DriverHamiltonian(int n_qutrits, double field);

  int qutrits() const { return n_; }
  double field() const { return h_; }
  std::size_t dimension() const { return dim_; }
  /// Lowest eigenvalue, -n h.
  double ground_energy() const { return -n_ * h_; }

  /// out += scale * H0 * in.
  void apply_add(std::span<const Complex> in, std::span<Complex> out, double scale = 1.0) const;

 private:
  int n_;
  double h_;
  std::size_t dim_;
};

DriverHamiltonian build_driver(int n_qutrits, double field);

}  // namespace qcluster
