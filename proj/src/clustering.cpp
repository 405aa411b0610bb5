#include "qcluster/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace qcluster {

namespace {

double tie_tolerance(double reference) {
  return kDegeneracyTolerance * std::max(1.0, std::abs(reference));
}

}  // namespace

double distance(const Point& p, const Point& q) {
  return std::hypot(p.x - q.x, p.y - q.y);
}

PointSet::PointSet(std::vector<Point> points, std::vector<std::string> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.size() < 2) throw std::invalid_argument("PointSet: need at least 2 points");
  if (!labels_.empty() && labels_.size() != points_.size())
    throw std::invalid_argument("PointSet: label count does not match point count");
  for (const auto& p : points_)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("PointSet: non-finite coordinate");
}

std::string PointSet::label(std::size_t i) const {
  if (!labels_.empty() && !labels_[i].empty()) return labels_[i];
  std::ostringstream os;
  os << '(' << points_[i].x << ", " << points_[i].y << ')';
  return os.str();
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> values)
    : n_(n), d_(std::move(values)) {
  if (d_.size() != n * n) throw std::invalid_argument("DistanceMatrix: expected n*n values");
  for (std::size_t i = 0; i < n; ++i) {
    if ((*this)(i, i) != 0.0) throw std::invalid_argument("DistanceMatrix: non-zero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = (*this)(i, j);
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("DistanceMatrix: entries must be finite and non-negative");
      if (v != (*this)(j, i)) throw std::invalid_argument("DistanceMatrix: not symmetric");
    }
  }
}

double DistanceMatrix::max() const {
  return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end());
}

double DistanceMatrix::total_pair_sum() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) t += (*this)(i, j);
  return t;
}

DistanceMatrix distance_matrix(const PointSet& ps) {
  const std::size_t n = ps.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = distance(ps[i], ps[j]);
  return DistanceMatrix(n, std::move(d));
}

Partition::Partition(std::vector<int> assignment, int clusters)
    : assignment_(std::move(assignment)), k_(clusters) {
  if (k_ < 1) throw std::invalid_argument("Partition: cluster count must be positive");
  for (int l : assignment_)
    if (l < 0 || l >= k_)
      throw std::invalid_argument("Partition: label " + std::to_string(l) + " outside [0, " +
                                  std::to_string(k_) + ")");
}

std::vector<int> Partition::canonical() const {
  std::vector<int> relabel(static_cast<std::size_t>(k_), -1);
  std::vector<int> out(assignment_.size());
  int next = 0;
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    int& r = relabel[static_cast<std::size_t>(assignment_[i])];
    if (r < 0) r = next++;
    out[i] = r;
  }
  return out;
}

std::vector<std::vector<int>> Partition::blocks() const {
  const auto c = canonical();
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto b = static_cast<std::size_t>(c[i]);
    if (b >= out.size()) out.resize(b + 1);
    out[b].push_back(static_cast<int>(i));
  }
  return out;
}

std::string Partition::to_string() const {
  std::ostringstream os;
  for (const auto& block : blocks()) {
    os << '{';
    for (std::size_t i = 0; i < block.size(); ++i) os << (i ? "," : "") << block[i];
    os << '}';
  }
  return os.str();
}

double cost(const DistanceMatrix& dm, const Partition& p) {
  if (p.size() != dm.size())
    throw std::invalid_argument("cost: partition covers " + std::to_string(p.size()) +
                                " points, distance matrix has " + std::to_string(dm.size()));
  double w = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p.label(i) == p.label(j)) w += dm(i, j);
  return w;
}

AssignmentEnumerator::AssignmentEnumerator(int n_points, int clusters, FixedLabels fixed)
    : n_(n_points), k_(clusters) {
  if (n_points < 1) throw std::invalid_argument("AssignmentEnumerator: need at least one point");
  if (clusters < 1) throw std::invalid_argument("AssignmentEnumerator: need at least one cluster");
  labels_.assign(static_cast<std::size_t>(n_), 0);
  for (const auto& [point, label] : fixed) {
    if (point < 0 || point >= n_)
      throw std::invalid_argument("AssignmentEnumerator: fixed point index out of range");
    if (label < 0 || label >= k_)
      throw std::invalid_argument("AssignmentEnumerator: fixed label outside [0, K)");
    labels_[static_cast<std::size_t>(point)] = label;
  }
  for (int i = 0; i < n_; ++i)
    if (!fixed.contains(i)) free_.push_back(i);
}

bool AssignmentEnumerator::next() {
  if (done_) return false;
  if (!started_) {
    started_ = true;
  } else {
    auto it = free_.rbegin();
    for (; it != free_.rend(); ++it) {
      int& l = labels_[static_cast<std::size_t>(*it)];
      if (++l < k_) break;
      l = 0;
    }
    if (it == free_.rend()) {
      done_ = true;
      return false;
    }
  }
  current_ = Partition(labels_, k_);
  return true;
}

std::size_t AssignmentEnumerator::count() const {
  std::size_t c = 1;
  for (std::size_t i = 0; i < free_.size(); ++i) c *= static_cast<std::size_t>(k_);
  return c;
}

bool OracleResult::contains(const Partition& p) const {
  return std::find(argmin_partitions.begin(), argmin_partitions.end(), p) !=
         argmin_partitions.end();
}

OracleResult oracle_min(const DistanceMatrix& dm, int clusters, const FixedLabels& fixed) {
  const auto n = static_cast<int>(dm.size());
  if (n > kMaxOraclePoints)
    throw SizeLimitError("oracle_min: " + std::to_string(n) + " points exceed the enumeration limit of " +
                         std::to_string(kMaxOraclePoints));
  AssignmentEnumerator e(n, clusters, fixed);
  std::vector<std::pair<double, Partition>> scored;
  double best = std::numeric_limits<double>::infinity();
  while (e.next()) {
    const double c = cost(dm, e.current());
    if (c <= best + tie_tolerance(best)) {
      best = std::min(best, c);
      scored.emplace_back(c, e.current());
    }
  }
  OracleResult r;
  r.min_cost = best;
  std::set<Partition> unique;
  for (const auto& [c, p] : scored)
    if (c <= best + tie_tolerance(best)) unique.insert(p);
  r.argmin_partitions.assign(unique.begin(), unique.end());
  return r;
}

OracleResult oracle_diag_min(const DiagonalHamiltonian& h) {
  OracleResult r;
  r.min_cost = h.min();
  const double tol = tie_tolerance(r.min_cost);
  const auto values = h.values();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] <= r.min_cost + tol) r.argmin_basis_states.push_back(i);
  return r;
}

}  // namespace qcluster
