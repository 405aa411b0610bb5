#include "qcluster/anneal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qcluster {

namespace {

constexpr double kChebyshevCutoff = 1e-16;
constexpr int kMaxChebyshevTerms = 100000;
// Largest dt * (spectral width) per Strang substep.
constexpr double kSplitPhaseSpan = 1.0;

void require_dimension(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw std::invalid_argument(std::string(what) + ": dimension " + std::to_string(got) +
                                " does not match " + std::to_string(want));
}

}  // namespace

void AnnealConfig::validate() const {
  if (steps < 1) throw std::invalid_argument("anneal: step count M must be at least 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("anneal: dt must be positive");
  if (!(field > 0.0) || !std::isfinite(field))
    throw std::invalid_argument("anneal: driver field h must be positive");
}

StateVector::StateVector(int n_qutrits, std::vector<Complex> amplitudes)
    : n_(n_qutrits), amps_(std::move(amplitudes)) {
  require_dimension(amps_.size(), pow3(n_qutrits), "StateVector");
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

double StateVector::fidelity(const StateVector& other) const {
  require_dimension(other.dimension(), dimension(), "fidelity");
  Complex overlap{};
  for (std::size_t i = 0; i < amps_.size(); ++i) overlap += std::conj(amps_[i]) * other.amps_[i];
  return std::norm(overlap);
}

StateVector initial_state(int n_qutrits, double field) {
  if (!(field > 0.0)) throw std::invalid_argument("initial_state: field h must be positive");
  const std::array<double, 3> site{0.5, -1.0 / std::sqrt(2.0), 0.5};
  const std::size_t dim = pow3(n_qutrits);
  std::vector<Complex> amps(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double a = 1.0;
    std::size_t rest = i;
    for (int k = 0; k < n_qutrits; ++k) {
      a *= site[rest % 3];
      rest /= 3;
    }
    amps[i] = a;
  }
  return StateVector(n_qutrits, std::move(amps));
}

InstantaneousHamiltonian::InstantaneousHamiltonian(double s, const DiagonalHamiltonian& hf,
                                                   const DriverHamiltonian& drv)
    : s_(s), hf_(&hf), drv_(&drv) {
  if (hf.qutrits() != drv.qutrits())
    throw std::invalid_argument("H(s): problem Hamiltonian has " + std::to_string(hf.qutrits()) +
                                " qutrits, driver has " + std::to_string(drv.qutrits()));
}

void InstantaneousHamiltonian::apply(std::span<const Complex> in, std::span<Complex> out) const {
  require_dimension(in.size(), dimension(), "H(s) input");
  require_dimension(out.size(), dimension(), "H(s) output");
  const auto d = hf_->values();
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = s_ * d[i] * in[i];
  if (s_ != 1.0) drv_->apply_add(in, out, 1.0 - s_);
}

std::pair<double, double> InstantaneousHamiltonian::spectral_bounds() const {
  const double drive = (1.0 - s_) * drv_->qutrits() * drv_->field();
  const double a = s_ * hf_->min();
  const double b = s_ * hf_->max();
  return {std::min(a, b) - std::abs(drive), std::max(a, b) + std::abs(drive)};
}

InstantaneousHamiltonian instantaneous_hamiltonian(double s, const DiagonalHamiltonian& hf,
                                                   const DriverHamiltonian& drv) {
  return InstantaneousHamiltonian(s, hf, drv);
}

void Propagator::advance(StateVector& state, const InstantaneousHamiltonian& h, double dt) {
  require_dimension(state.dimension(), h.dimension(), "step");
  if (dt == 0.0) return;
  if (mode_ == StepMode::split)
    advance_split(state, h, dt);
  else
    advance_exact(state, h, dt);
}

// exp(-i dt H) = exp(-i dt c) sum_k a_k T_k((H - c) / r) with
// a_0 = J_0(dt r), a_k = 2 (-i)^k J_k(dt r), spectrum inside c +- r.
void Propagator::advance_exact(StateVector& state, const InstantaneousHamiltonian& h, double dt) {
  const auto [lo, hi] = h.spectral_bounds();
  const double center = 0.5 * (lo + hi);
  const double radius = 0.5 * (hi - lo) * (1.0 + 1e-12) + 1e-300;
  const double tau = dt * radius;
  auto psi = state.amplitudes();
  const std::size_t dim = psi.size();

  coeffs_.clear();
  for (int k = 0; k < kMaxChebyshevTerms; ++k) {
    const double j = std::cyl_bessel_j(static_cast<double>(k), tau);
    coeffs_.push_back(k == 0 ? j : 2.0 * j);
    if (k > tau && std::abs(j) < kChebyshevCutoff) break;
  }
  last_terms_ = static_cast<int>(coeffs_.size());

  prev_.assign(psi.begin(), psi.end());
  curr_.resize(dim);
  next_.resize(dim);
  acc_.resize(dim);

  // (-i)^k cycles through 1, -i, -1, i.
  static constexpr std::array<Complex, 4> phase{Complex{1, 0}, Complex{0, -1}, Complex{-1, 0}, Complex{0, 1}};
  const auto normalized = [&](std::span<const Complex> in, std::span<Complex> out) {
    h.apply(in, out);
    for (std::size_t i = 0; i < dim; ++i) out[i] = (out[i] - center * in[i]) / radius;
  };

  for (std::size_t i = 0; i < dim; ++i) acc_[i] = coeffs_[0] * prev_[i];
  if (coeffs_.size() > 1) {
    normalized(prev_, curr_);
    const Complex c1 = coeffs_[1] * phase[1];
    for (std::size_t i = 0; i < dim; ++i) acc_[i] += c1 * curr_[i];
  }
  for (std::size_t k = 2; k < coeffs_.size(); ++k) {
    normalized(curr_, next_);
    const Complex ck = coeffs_[k] * phase[k % 4];
    for (std::size_t i = 0; i < dim; ++i) {
      next_[i] = 2.0 * next_[i] - prev_[i];
      acc_[i] += ck * next_[i];
    }
    std::swap(prev_, curr_);
    std::swap(curr_, next_);
  }
  const Complex global = std::exp(Complex{0.0, -dt * center});
  for (std::size_t i = 0; i < dim; ++i) psi[i] = global * acc_[i];
}

void Propagator::advance_split(StateVector& state, const InstantaneousHamiltonian& h, double dt) {
  const auto [lo, hi] = h.spectral_bounds();
  const double phase_span = dt * (hi - lo);
  const int substeps = std::max(1, static_cast<int>(std::ceil(phase_span / kSplitPhaseSpan)));
  last_terms_ = substeps;
  for (int k = 0; k < substeps; ++k) split_substep(state, h, dt / substeps);
}

void Propagator::split_substep(StateVector& state, const InstantaneousHamiltonian& h, double dt) {
  const double s = h.schedule();
  const auto diag = h.problem().values();
  auto psi = state.amplitudes();
  const auto half_diagonal = [&] {
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::exp(Complex{0.0, -0.5 * dt * s * diag[i]});
  };
  half_diagonal();

  // exp(-i t S^x) = 1 - i sin(t) S^x + (cos(t) - 1) (S^x)^2 on each site.
  const double theta = dt * (1.0 - s) * h.driver().field();
  if (theta != 0.0) {
    const double r = 1.0 / std::sqrt(2.0);
    const Complex sx = Complex{0.0, -std::sin(theta)} * r;
    const double c = std::cos(theta) - 1.0;
    const Complex u00 = 1.0 + 0.5 * c, u02 = 0.5 * c, u11 = 1.0 + c;
    const std::size_t dim = psi.size();
    std::size_t stride = 1;
    for (int site = 0; site < h.driver().qutrits(); ++site) {
      const std::size_t block = 3 * stride;
      for (std::size_t base = 0; base < dim; base += block) {
        for (std::size_t k = 0; k < stride; ++k) {
          Complex& a0 = psi[base + k];
          Complex& a1 = psi[base + k + stride];
          Complex& a2 = psi[base + k + 2 * stride];
          const Complex b0 = u00 * a0 + sx * a1 + u02 * a2;
          const Complex b1 = sx * (a0 + a2) + u11 * a1;
          const Complex b2 = u02 * a0 + sx * a1 + u00 * a2;
          a0 = b0;
          a1 = b1;
          a2 = b2;
        }
      }
      stride = block;
    }
  }
  half_diagonal();
}

StateVector step(const StateVector& state, double s, const DiagonalHamiltonian& hf,
                 const DriverHamiltonian& drv, double dt, StepMode mode) {
  StateVector out = state;
  Propagator prop(mode);
  prop.advance(out, instantaneous_hamiltonian(s, hf, drv), dt);
  return out;
}

StateVector anneal(const AnnealConfig& cfg, const DiagonalHamiltonian& hf) {
  cfg.validate();
  const auto drv = build_driver(hf.qutrits(), cfg.field);
  StateVector psi = initial_state(hf.qutrits(), cfg.field);
  Propagator prop(cfg.mode);
  for (int l = 0; l <= cfg.steps; ++l) {
    const double s = static_cast<double>(l) / cfg.steps;
    prop.advance(psi, instantaneous_hamiltonian(s, hf, drv), cfg.dt);
  }
  return psi;
}

Decoder::Decoder(EncodingScheme scheme, int n_points, std::vector<int> centroid_points)
    : scheme_(std::move(scheme)), n_points_(n_points), centroids_(std::move(centroid_points)) {
  scheme_.validate();
  if (n_points < 2) throw std::invalid_argument("Decoder: need at least 2 points");
  n_qutrits_ = scheme_.register_size(n_points);
  if (n_qutrits_ < 1) throw std::invalid_argument("Decoder: encoding leaves no qutrits to decode");
  if (scheme_.method == EncodingMethod::kmeanspp) {
    if (centroids_.size() != static_cast<std::size_t>(scheme_.clusters))
      throw std::invalid_argument("Decoder: kmeanspp needs exactly K centroid indices");
    for (int c : centroids_)
      if (c < 0 || c >= n_points) throw std::invalid_argument("Decoder: centroid index out of range");
    free_ = free_point_indices(static_cast<std::size_t>(n_points), centroids_);
    if (free_.size() + centroids_.size() != static_cast<std::size_t>(n_points))
      throw std::invalid_argument("Decoder: duplicate centroid indices");
    rank_to_cluster_.assign(pow3(scheme_.spins_per_point), -1);
    for (std::size_t c = 0; c < scheme_.centroid_states.size(); ++c)
      rank_to_cluster_[basis_index(scheme_.centroid_states[c]).linear] = static_cast<int>(c);
  } else if (!centroids_.empty()) {
    throw std::invalid_argument("Decoder: centroids are only valid for kmeanspp");
  }
}

std::optional<Partition> Decoder::partition_of(std::size_t linear) const {
  const int k = scheme_.clusters;
  std::vector<int> labels(static_cast<std::size_t>(n_points_));
  switch (scheme_.method) {
    case EncodingMethod::onehot_k3:
    case EncodingMethod::onehot_k3_pinned:
    case EncodingMethod::onehot_k2_penalty: {
      const bool pinned = scheme_.method == EncodingMethod::onehot_k3_pinned ||
                          (scheme_.method == EncodingMethod::onehot_k2_penalty && scheme_.pinned);
      const int offset = pinned ? 1 : 0;
      if (pinned) labels[0] = digit_of(1);
      for (int site = n_qutrits_ - 1; site >= 0; --site) {
        const int digit = static_cast<int>(linear % 3);
        linear /= 3;
        if (digit >= k) return std::nullopt;  // projection -1 under the K = 2 penalty
        labels[static_cast<std::size_t>(site + offset)] = digit;
      }
      break;
    }
    case EncodingMethod::onehot_multispin: {
      const std::size_t span = pow3(scheme_.spins_per_point);
      for (int p = n_points_ - 1; p >= 0; --p) {
        const int rank = static_cast<int>(linear % span);
        linear /= span;
        if (rank >= k) return std::nullopt;
        labels[static_cast<std::size_t>(p)] = rank;
      }
      break;
    }
    case EncodingMethod::kmeanspp: {
      const std::size_t span = pow3(scheme_.spins_per_point);
      for (std::size_t c = 0; c < centroids_.size(); ++c)
        labels[static_cast<std::size_t>(centroids_[c])] = static_cast<int>(c);
      for (auto j = static_cast<int>(free_.size()) - 1; j >= 0; --j) {
        const int cluster = rank_to_cluster_[linear % span];
        linear /= span;
        if (cluster < 0) return std::nullopt;
        labels[static_cast<std::size_t>(free_[static_cast<std::size_t>(j)])] = cluster;
      }
      break;
    }
  }
  return Partition(std::move(labels), k);
}

double ReadoutReport::probability_of(const Partition& p) const {
  for (const auto& pp : partitions)
    if (pp.partition == p) return pp.probability;
  return 0.0;
}

ReadoutReport decode(const StateVector& state, const Decoder& decoder) {
  require_dimension(state.dimension(), pow3(decoder.qutrits()), "decode");
  ReadoutReport r;
  r.basis_probabilities = state.probabilities();
  r.basis_partition.assign(state.dimension(), kInvalidPartition);

  std::map<Partition, double> totals;
  std::vector<std::optional<Partition>> decoded(state.dimension());
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    decoded[i] = decoder.partition_of(i);
    if (decoded[i])
      totals[*decoded[i]] += r.basis_probabilities[i];
    else
      r.invalid_probability += r.basis_probabilities[i];
  }
  for (const auto& [p, prob] : totals) r.partitions.push_back({p, prob});
  // Stable sort keeps canonical order among equal probabilities.
  std::stable_sort(r.partitions.begin(), r.partitions.end(),
                   [](const auto& a, const auto& b) { return a.probability > b.probability; });

  std::map<Partition, int> id;
  for (std::size_t k = 0; k < r.partitions.size(); ++k) id[r.partitions[k].partition] = static_cast<int>(k);
  for (std::size_t i = 0; i < decoded.size(); ++i)
    if (decoded[i]) r.basis_partition[i] = id.at(*decoded[i]);

  if (!r.partitions.empty()) {
    r.top_partition = r.partitions.front().partition;
    r.top_probability = r.partitions.front().probability;
  }
  return r;
}

}  // namespace qcluster
