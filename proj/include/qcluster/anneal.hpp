#pragma once

// Adiabatic evolution under H(s) = (1 - s) H0 + s Hf, s = l / M, advanced as
// the stepped product prod_{l=0..M} exp(-i dt H(l / M)) applied to the H0
// ground state, and readout of the final amplitudes as cluster partitions.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qcluster/clustering.hpp"
#include "qcluster/hamiltonian.hpp"

namespace qcluster {

enum class StepMode {
  exact,  // exp(-i dt H(s)) to ~1e-15 via Chebyshev expansion
  split,  // Strang splitting: diagonal half-steps around site-local driver rotations
};

struct AnnealConfig {
  int steps = 2000;   // M
  double dt = 0.1;
  double field = 8.0;  // h
  StepMode mode = StepMode::exact;

  /// Throws std::invalid_argument unless M >= 1, dt > 0 and h > 0.
  void validate() const;
  double total_time() const { return steps * dt; }
};

/// Complex amplitudes over the 3^n basis of n qutrits.
class StateVector {
 public:
  StateVector() = default;
  StateVector(int n_qutrits, std::vector<Complex> amplitudes);

  int qutrits() const { return n_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;
  std::vector<double> probabilities() const;
  /// |<this|other>|^2.
  double fidelity(const StateVector& other) const;

 private:
  int n_ = 0;
  std::vector<Complex> amps_;
};

/// Product of the lowest S^x eigenvector (1, -sqrt 2, 1) / 2 on every site.
/// Throws std::invalid_argument for h <= 0.
StateVector initial_state(int n_qutrits, double field);

/// H(s) = (1 - s) H0 + s Hf as a matrix-free operator. Holds references to
/// both terms, which must outlive it.
class InstantaneousHamiltonian {
 public:
  /// Throws std::invalid_argument if the register sizes differ.
  InstantaneousHamiltonian(double s, const DiagonalHamiltonian& hf, const DriverHamiltonian& drv);

  double schedule() const { return s_; }
  std::size_t dimension() const { return hf_->dimension(); }
  const DiagonalHamiltonian& problem() const { return *hf_; }
  const DriverHamiltonian& driver() const { return *drv_; }

  /// out = H(s) in.
  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  /// Interval containing the spectrum (Weyl bounds of the two terms).
  std::pair<double, double> spectral_bounds() const;

 private:
  double s_;
  const DiagonalHamiltonian* hf_;
  const DriverHamiltonian* drv_;
};

InstantaneousHamiltonian instantaneous_hamiltonian(double s, const DiagonalHamiltonian& hf,
                                                   const DriverHamiltonian& drv);

/// Applies exp(-i dt H(s)) in place, reusing scratch buffers across calls.
class Propagator {
 public:
  explicit Propagator(StepMode mode = StepMode::exact) : mode_(mode) {}

  void advance(StateVector& state, const InstantaneousHamiltonian& h, double dt);
  /// Chebyshev terms (exact) or Strang substeps (split) used by the last advance.
  int last_terms() const { return last_terms_; }

 private:
  void advance_exact(StateVector& state, const InstantaneousHamiltonian& h, double dt);
  void advance_split(StateVector& state, const InstantaneousHamiltonian& h, double dt);
  void split_substep(StateVector& state, const InstantaneousHamiltonian& h, double dt);

  StepMode mode_;
  std::vector<Complex> prev_, curr_, next_, acc_;
  std::vector<double> coeffs_;
  int last_terms_ = 0;
};

StateVector step(const StateVector& state, double s, const DiagonalHamiltonian& hf,
                 const DriverHamiltonian& drv, double dt, StepMode mode = StepMode::exact);

/// Runs the M + 1 factor product from initial_state(n, h).
StateVector anneal(const AnnealConfig& cfg, const DiagonalHamiltonian& hf);

/// Maps basis states of a register to cluster partitions for one encoding.
class Decoder {
 public:
  /// `centroid_points` is required for kmeanspp and must be empty otherwise.
  Decoder(EncodingScheme scheme, int n_points, std::vector<int> centroid_points = {});

  int qutrits() const { return n_qutrits_; }
  int points() const { return n_points_; }
  const EncodingScheme& scheme() const { return scheme_; }

  /// Partition encoded by a basis state, or nullopt if the state uses a
  /// penalized (forbidden) projection or block state.
  std::optional<Partition> partition_of(std::size_t linear) const;

 private:
  EncodingScheme scheme_;
  int n_points_;
  int n_qutrits_;
  std::vector<int> centroids_;
  std::vector<int> free_;
  std::vector<int> rank_to_cluster_;  // kmeanspp: block rank -> centroid, -1 if forbidden
};

struct PartitionProbability {
  Partition partition;
  double probability = 0.0;
};

inline constexpr int kInvalidPartition = -1;

struct ReadoutReport {
  std::vector<double> basis_probabilities;
  /// Index into `partitions` for each basis state, or kInvalidPartition.
  std::vector<int> basis_partition;
  /// Distinct set partitions, by descending probability.
  std::vector<PartitionProbability> partitions;
  double invalid_probability = 0.0;
  std::optional<Partition> top_partition;
  double top_probability = 0.0;

  double probability_of(const Partition& p) const;
};

ReadoutReport decode(const StateVector& state, const Decoder& decoder);

}  // namespace qcluster
