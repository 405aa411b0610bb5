#include "qcluster/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qcluster {

namespace {

// Projection of every point for basis state `linear`; with `pinned`, point 0
// is held at projection 1 and point j lives on qutrit j - 1.
void point_projections(std::size_t linear, int n_qutrits, bool pinned, std::vector<int>& out) {
  const int offset = pinned ? 1 : 0;
  out.resize(static_cast<std::size_t>(n_qutrits + offset));
  if (pinned) out[0] = 1;
  for (int site = n_qutrits - 1; site >= 0; --site) {
    out[static_cast<std::size_t>(site + offset)] = 1 - static_cast<int>(linear % 3);
    linear /= 3;
  }
}

// Rank of each point's block state in cluster-numbering order.
void block_ranks(std::size_t linear, int n_points, int spins, std::vector<int>& out) {
  out.resize(static_cast<std::size_t>(n_points));
  const auto span = static_cast<std::size_t>(pow3(spins));
  for (int p = n_points - 1; p >= 0; --p) {
    out[static_cast<std::size_t>(p)] = static_cast<int>(linear % span);
    linear /= span;
  }
}

int checked_register(int n_qutrits) {
  if (n_qutrits < 1) throw std::invalid_argument("register must hold at least one qutrit");
  if (n_qutrits > kMaxQutrits)
    throw SizeLimitError("register of " + std::to_string(n_qutrits) + " qutrits exceeds the limit of " +
                         std::to_string(kMaxQutrits));
  return n_qutrits;
}

template <typename Fn>
DiagonalHamiltonian tabulate(int n_qutrits, Fn&& energy) {
  std::vector<double> diag(pow3(checked_register(n_qutrits)));
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = energy(i);
  return DiagonalHamiltonian(n_qutrits, std::move(diag));
}

double pair_sum(const DistanceMatrix& dm, std::span<const int> m) {
  double e = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) e += m[i] == m[j] ? dm(i, j) : -dm(i, j);
  return e;
}

int block_rank(const BlockState& s) {
  return static_cast<int>(basis_index(s).linear);
}

}  // namespace

std::string_view to_string(EncodingMethod m) {
  switch (m) {
    case EncodingMethod::onehot_k3: return "one-hot-K3";
    case EncodingMethod::onehot_k3_pinned: return "one-hot-K3-pinned";
    case EncodingMethod::onehot_k2_penalty: return "one-hot-K2-penalty";
    case EncodingMethod::onehot_multispin: return "one-hot-multispin";
    case EncodingMethod::kmeanspp: return "kmeanspp";
  }
  return "unknown";
}

EncodingMethod parse_method(std::string_view name) {
  for (auto m : {EncodingMethod::onehot_k3, EncodingMethod::onehot_k3_pinned,
                 EncodingMethod::onehot_k2_penalty, EncodingMethod::onehot_multispin,
                 EncodingMethod::kmeanspp})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown encoding method '" + std::string(name) + "'");
}

int spins_per_point_for(int clusters) {
  if (clusters < 1) throw std::invalid_argument("cluster count must be positive");
  int spins = 1;
  std::size_t states = 3;
  while (states < static_cast<std::size_t>(clusters)) {
    states *= 3;
    ++spins;
  }
  return spins;
}

std::vector<BlockState> block_states(int spins) {
  std::vector<BlockState> out;
  const std::size_t n = pow3(spins);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(basis_digits(i, spins));
  return out;
}

void EncodingScheme::validate() const {
  if (clusters < 2) throw std::invalid_argument("encoding: cluster count K must be at least 2");
  if (penalty && !(*penalty > 0.0))
    throw std::invalid_argument("encoding: penalty constant must be positive");
  if (method != EncodingMethod::kmeanspp && !centroid_states.empty())
    throw std::invalid_argument("encoding: centroid states are only valid for kmeanspp");
  switch (method) {
    case EncodingMethod::onehot_k3:
    case EncodingMethod::onehot_k3_pinned:
      if (clusters != 3) throw std::invalid_argument("encoding: one-hot-K3 requires K = 3");
      if (spins_per_point != 1) throw std::invalid_argument("encoding: one-hot-K3 uses one qutrit per point");
      return;
    case EncodingMethod::onehot_k2_penalty:
      if (clusters != 2) throw std::invalid_argument("encoding: one-hot-K2-penalty requires K = 2");
      if (spins_per_point != 1) throw std::invalid_argument("encoding: one-hot-K2 uses one qutrit per point");
      return;
    case EncodingMethod::onehot_multispin:
      if (spins_per_point != spins_per_point_for(clusters))
        throw std::invalid_argument("encoding: spins per point must be ceil(log3 K)");
      return;
    case EncodingMethod::kmeanspp: {
      if (spins_per_point != spins_per_point_for(clusters))
        throw std::invalid_argument("encoding: spins per point must be ceil(log3 K)");
      if (centroid_states.size() != static_cast<std::size_t>(clusters))
        throw std::invalid_argument("encoding: kmeanspp needs exactly K centroid states");
      std::set<BlockState> seen;
      for (const auto& s : centroid_states) {
        if (static_cast<int>(s.size()) != spins_per_point)
          throw std::invalid_argument("encoding: centroid state length differs from spins per point");
        for (int m : s) digit_of(m);
        if (!seen.insert(s).second) throw std::invalid_argument("encoding: duplicate centroid states");
      }
      return;
    }
  }
}

int EncodingScheme::register_size(int n_points) const {
  switch (method) {
    case EncodingMethod::onehot_k3: return n_points;
    case EncodingMethod::onehot_k3_pinned: return n_points - 1;
    case EncodingMethod::onehot_k2_penalty: return pinned ? n_points - 1 : n_points;
    case EncodingMethod::onehot_multispin: return n_points * spins_per_point;
    case EncodingMethod::kmeanspp: return (n_points - clusters) * spins_per_point;
  }
  return n_points;
}

EncodingScheme EncodingScheme::onehot_k3() {
  return {EncodingMethod::onehot_k3, 3, 1, {}, std::nullopt, false};
}

EncodingScheme EncodingScheme::onehot_k3_pinned() {
  return {EncodingMethod::onehot_k3_pinned, 3, 1, {}, std::nullopt, true};
}

EncodingScheme EncodingScheme::k2_penalty(bool pinned) {
  return {EncodingMethod::onehot_k2_penalty, 2, 1, {}, std::nullopt, pinned};
}

EncodingScheme EncodingScheme::multispin(int clusters) {
  return {EncodingMethod::onehot_multispin, clusters, spins_per_point_for(clusters), {}, std::nullopt, false};
}

EncodingScheme EncodingScheme::kmeanspp(std::vector<BlockState> centroid_states) {
  const int k = static_cast<int>(centroid_states.size());
  const int spins = centroid_states.empty() ? 1 : static_cast<int>(centroid_states.front().size());
  EncodingScheme s{EncodingMethod::kmeanspp, k, spins, std::move(centroid_states), std::nullopt, false};
  s.validate();
  return s;
}

EncodingScheme EncodingScheme::kmeanspp_default(int clusters) {
  auto states = block_states(spins_per_point_for(clusters));
  states.resize(static_cast<std::size_t>(clusters));
  return kmeanspp(std::move(states));
}

CentroidDistances::CentroidDistances(std::size_t centroids, std::size_t free_points,
                                     std::vector<double> values)
    : c_(centroids), f_(free_points), d_(std::move(values)) {
  if (d_.size() != c_ * f_) throw std::invalid_argument("CentroidDistances: expected K * free values");
}

double CentroidDistances::max() const {
  return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end());
}

std::vector<int> free_point_indices(std::size_t n_points, std::span<const int> centroid_points) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(n_points); ++i)
    if (std::find(centroid_points.begin(), centroid_points.end(), i) == centroid_points.end())
      out.push_back(i);
  return out;
}

CentroidDistances centroid_distances(const DistanceMatrix& dm, std::span<const int> centroid_points) {
  std::set<int> seen;
  for (int c : centroid_points) {
    if (c < 0 || c >= static_cast<int>(dm.size()))
      throw std::invalid_argument("centroid index " + std::to_string(c) + " out of range");
    if (!seen.insert(c).second) throw std::invalid_argument("duplicate centroid index " + std::to_string(c));
  }
  const auto free = free_point_indices(dm.size(), centroid_points);
  std::vector<double> values;
  values.reserve(centroid_points.size() * free.size());
  for (int c : centroid_points)
    for (int j : free) values.push_back(dm(static_cast<std::size_t>(c), static_cast<std::size_t>(j)));
  return CentroidDistances(centroid_points.size(), free.size(), std::move(values));
}

DiagonalHamiltonian build_onehot_k3(const DistanceMatrix& dm) {
  const int n = static_cast<int>(dm.size());
  std::vector<int> m;
  return tabulate(n, [&](std::size_t i) {
    point_projections(i, n, false, m);
    return pair_sum(dm, m);
  });
}

DiagonalHamiltonian build_onehot_k3_pinned(const DistanceMatrix& dm) {
  if (dm.size() < 2) throw std::invalid_argument("build_onehot_k3_pinned: need at least 2 points");
  const int n = static_cast<int>(dm.size()) - 1;
  std::vector<int> m;
  // With m_0 = 1 the pair terms (0, j) are d(0, j) (2 [m_j = 1] - 1).
  return tabulate(n, [&](std::size_t i) {
    point_projections(i, n, true, m);
    return pair_sum(dm, m);
  });
}

DiagonalHamiltonian build_k2_penalty(const DistanceMatrix& dm, bool pinned) {
  const int n = static_cast<int>(dm.size()) - (pinned ? 1 : 0);
  std::vector<int> m;
  return tabulate(n, [&](std::size_t idx) {
    point_projections(idx, n, pinned, m);
    double e = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        const double d = dm(i, j);
        e += m[i] == m[j] ? d : -d;
        e += 2.0 * d * ((m[i] == -1 ? 1.0 : 0.0) + (m[j] == -1 ? 1.0 : 0.0));
      }
    return e;
  });
}

DiagonalHamiltonian build_onehot_multispin(const DistanceMatrix& dm, int clusters) {
  if (clusters < 2) throw std::invalid_argument("build_onehot_multispin: K must be at least 2");
  const int spins = spins_per_point_for(clusters);
  const int n_points = static_cast<int>(dm.size());
  std::vector<int> rank;
  return tabulate(n_points * spins, [&](std::size_t idx) {
    block_ranks(idx, n_points, spins, rank);
    double e = 0.0;
    for (std::size_t i = 0; i < rank.size(); ++i)
      for (std::size_t j = i + 1; j < rank.size(); ++j) {
        const bool same = rank[i] == rank[j] && rank[i] < clusters;
        e += same ? dm(i, j) : -dm(i, j);
      }
    return e;
  });
}

DiagonalHamiltonian build_penalty_onehot(int n_points, int clusters, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("build_penalty_onehot: penalty a must be positive");
  if (clusters < 2) throw std::invalid_argument("build_penalty_onehot: K must be at least 2");
  const int spins = spins_per_point_for(clusters);
  std::vector<int> rank;
  return tabulate(n_points * spins, [&](std::size_t idx) {
    block_ranks(idx, n_points, spins, rank);
    double e = 0.0;
    for (int r : rank)
      if (r >= clusters) e += a;
    return e;
  });
}

DiagonalHamiltonian build_kmeanspp(const CentroidDistances& dcp, const EncodingScheme& scheme) {
  if (scheme.method != EncodingMethod::kmeanspp)
    throw std::invalid_argument("build_kmeanspp: scheme is not kmeanspp");
  scheme.validate();
  if (dcp.centroids() != scheme.centroid_states.size())
    throw std::invalid_argument("build_kmeanspp: centroid count differs from centroid states");
  const int spins = scheme.spins_per_point;
  const int n_free = static_cast<int>(dcp.free_points());
  std::vector<int> centroid_rank;
  for (const auto& s : scheme.centroid_states) centroid_rank.push_back(block_rank(s));
  std::vector<int> rank;
  return tabulate(n_free * spins, [&](std::size_t idx) {
    block_ranks(idx, n_free, spins, rank);
    double e = 0.0;
    for (std::size_t c = 0; c < dcp.centroids(); ++c)
      for (std::size_t j = 0; j < dcp.free_points(); ++j)
        e += rank[j] == centroid_rank[c] ? dcp(c, j) : -dcp(c, j);
    return e;
  });
}

DiagonalHamiltonian build_penalty_kmeanspp(int n_free_points, const EncodingScheme& scheme, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("build_penalty_kmeanspp: penalty b must be positive");
  scheme.validate();
  const int spins = scheme.spins_per_point;
  std::vector<bool> allowed(pow3(spins), false);
  for (const auto& s : scheme.centroid_states) allowed[static_cast<std::size_t>(block_rank(s))] = true;
  std::vector<int> rank;
  return tabulate(n_free_points * spins, [&](std::size_t idx) {
    block_ranks(idx, n_free_points, spins, rank);
    double e = 0.0;
    for (int r : rank)
      if (!allowed[static_cast<std::size_t>(r)]) e += b;
    return e;
  });
}

DiagonalHamiltonian build_problem_hamiltonian(const DistanceMatrix& dm, const EncodingScheme& scheme,
                                              std::span<const int> centroid_points) {
  scheme.validate();
  checked_register(scheme.register_size(static_cast<int>(dm.size())));
  switch (scheme.method) {
    case EncodingMethod::onehot_k3:
      return build_onehot_k3(dm);
    case EncodingMethod::onehot_k3_pinned:
      return build_onehot_k3_pinned(dm);
    case EncodingMethod::onehot_k2_penalty:
      return build_k2_penalty(dm, scheme.pinned);
    case EncodingMethod::onehot_multispin: {
      auto h = build_onehot_multispin(dm, scheme.clusters);
      if (pow3(scheme.spins_per_point) > static_cast<std::size_t>(scheme.clusters))
        h += build_penalty_onehot(static_cast<int>(dm.size()), scheme.clusters,
                                  scheme.penalty.value_or(default_penalty(dm.max())));
      return h;
    }
    case EncodingMethod::kmeanspp: {
      if (centroid_points.size() != static_cast<std::size_t>(scheme.clusters))
        throw std::invalid_argument("kmeanspp: need exactly K centroid indices");
      const auto dcp = centroid_distances(dm, centroid_points);
      auto h = build_kmeanspp(dcp, scheme);
      if (pow3(scheme.spins_per_point) > static_cast<std::size_t>(scheme.clusters))
        h += build_penalty_kmeanspp(static_cast<int>(dcp.free_points()), scheme,
                                    scheme.penalty.value_or(default_penalty(dcp.max())));
      return h;
    }
  }
  throw std::invalid_argument("unknown encoding method");
}

DriverHamiltonian::DriverHamiltonian(int n_qutrits, double field) : n_(n_qutrits), h_(field) {
  if (n_qutrits < 1) throw std::invalid_argument("DriverHamiltonian: need at least one qutrit");
  if (!(field > 0.0)) throw std::invalid_argument("DriverHamiltonian: field h must be positive");
  dim_ = pow3(n_qutrits);
}

void DriverHamiltonian::apply_add(std::span<const Complex> in, std::span<Complex> out,
                                  double scale) const {
  if (in.size() != dim_ || out.size() != dim_)
    throw std::invalid_argument("DriverHamiltonian: vector length does not match 3^n");
  const double c = scale * h_ / std::sqrt(2.0);
  // S^x couples digit 1 to digits 0 and 2 at each site.
  std::size_t stride = 1;
  for (int site = 0; site < n_; ++site) {
    const std::size_t block = 3 * stride;
    for (std::size_t base = 0; base < dim_; base += block) {
      for (std::size_t k = 0; k < stride; ++k) {
        const std::size_t i0 = base + k;
        const std::size_t i1 = i0 + stride;
        const std::size_t i2 = i1 + stride;
        out[i0] += c * in[i1];
        out[i1] += c * (in[i0] + in[i2]);
        out[i2] += c * in[i1];
      }
    }
    stride = block;
  }
}

DriverHamiltonian build_driver(int n_qutrits, double field) {
  return DriverHamiltonian(n_qutrits, field);
}

}  // namespace qcluster
