#include "qcluster/qutrit_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qcluster {

namespace {

template <typename T>
Mat3<T> identity3() {
  Mat3<T> out{};
  for (int i = 0; i < 3; ++i) out[i][i] = T(1);
  return out;
}

template <typename T>
Mat3<T> operator*(const Mat3<T>& a, const Mat3<T>& b) {
  Mat3<T> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

template <typename T>
Mat3<T> operator+(const Mat3<T>& a, const Mat3<T>& b) {
  Mat3<T> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = a[i][j] + b[i][j];
  return out;
}

template <typename T>
Mat3<T> operator-(const Mat3<T>& a, const Mat3<T>& b) {
  Mat3<T> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = a[i][j] - b[i][j];
  return out;
}

template <typename T>
Mat3<T> scaled(const Mat3<T>& a, T factor) {
  Mat3<T> out = a;
  for (auto& row : out)
    for (auto& v : row) v *= factor;
  return out;
}

Mat3<double> real_sz() {
  Mat3<double> sz{};
  sz[0][0] = 1.0;
  sz[2][2] = -1.0;
  return sz;
}

}  // namespace

SpinMatrix spin_operator(SpinAxis axis) {
  SpinMatrix s{};
  if (axis == SpinAxis::z) {
    s[0][0] = 1.0;
    s[2][2] = -1.0;
    return s;
  }
  const double r = 1.0 / std::sqrt(2.0);
  s[0][1] = s[1][0] = s[1][2] = s[2][1] = r;
  return s;
}

Projector3 projector(int m) {
  const auto sz = real_sz();
  const auto one = identity3<double>();
  Projector3 p;
  p.m = m;
  switch (m) {
    case 1:  // S^z (1 + S^z) / 2
      p.entries = scaled(sz * (one + sz), 0.5);
      break;
    case 0:  // 1 - (S^z)^2
      p.entries = one - sz * sz;
      break;
    case -1:  // -S^z (1 - S^z) / 2
      p.entries = scaled(sz * (one - sz), -0.5);
      break;
    default:
      throw std::invalid_argument("projector: spin projection must be 1, 0 or -1, got " +
                                  std::to_string(m));
  }
  return p;
}

int digit_of(int projection) {
  if (projection < -1 || projection > 1)
    throw std::invalid_argument("spin projection must be 1, 0 or -1, got " +
                                std::to_string(projection));
  return 1 - projection;
}

int projection_of(int digit) {
  if (digit < 0 || digit > 2)
    throw std::invalid_argument("ternary digit must be 0, 1 or 2, got " + std::to_string(digit));
  return 1 - digit;
}

std::size_t pow3(int n) {
  if (n < 0) throw std::invalid_argument("pow3: negative exponent");
  std::size_t out = 1;
  for (int i = 0; i < n; ++i) {
    if (out > std::numeric_limits<std::size_t>::max() / 3)
      throw std::overflow_error("pow3: 3^" + std::to_string(n) + " overflows");
    out *= 3;
  }
  return out;
}

BasisIndex basis_index(std::span<const int> projections) {
  BasisIndex b;
  b.projections.assign(projections.begin(), projections.end());
  for (int m : projections) b.linear = b.linear * 3 + static_cast<std::size_t>(digit_of(m));
  return b;
}

std::vector<int> basis_digits(std::size_t linear, int n_qutrits) {
  std::vector<int> out(static_cast<std::size_t>(n_qutrits));
  for (int site = n_qutrits - 1; site >= 0; --site) {
    out[static_cast<std::size_t>(site)] = projection_of(static_cast<int>(linear % 3));
    linear /= 3;
  }
  if (linear != 0) throw std::out_of_range("basis_digits: index exceeds 3^n");
  return out;
}

DiagonalHamiltonian::DiagonalHamiltonian(int n_qutrits)
    : n_(n_qutrits), diag_(pow3(n_qutrits), 0.0) {}

DiagonalHamiltonian::DiagonalHamiltonian(int n_qutrits, std::vector<double> diagonal)
    : n_(n_qutrits), diag_(std::move(diagonal)) {
  if (diag_.size() != pow3(n_qutrits))
    throw std::invalid_argument("DiagonalHamiltonian: length " + std::to_string(diag_.size()) +
                                " is not 3^" + std::to_string(n_qutrits));
  for (double v : diag_)
    if (!std::isfinite(v)) throw std::invalid_argument("DiagonalHamiltonian: non-finite entry");
}

double DiagonalHamiltonian::min() const {
  return diag_.empty() ? 0.0 : *std::min_element(diag_.begin(), diag_.end());
}

double DiagonalHamiltonian::max() const {
  return diag_.empty() ? 0.0 : *std::max_element(diag_.begin(), diag_.end());
}

DiagonalHamiltonian& DiagonalHamiltonian::operator+=(const DiagonalHamiltonian& other) {
  if (other.n_ != n_)
    throw std::invalid_argument("DiagonalHamiltonian: register size mismatch in sum");
  for (std::size_t i = 0; i < diag_.size(); ++i) diag_[i] += other.diag_[i];
  return *this;
}

DiagonalHamiltonian group_projector_diagonal(SiteBlock block, std::span<const int> state,
                                             int n_qutrits) {
  if (block.size < 1 || block.first < 0 || block.first + block.size > n_qutrits)
    throw std::invalid_argument("group_projector_diagonal: block outside register");
  if (static_cast<int>(state.size()) != block.size)
    throw std::invalid_argument("group_projector_diagonal: state has " +
                                std::to_string(state.size()) + " projections, block has " +
                                std::to_string(block.size) + " sites");
  const std::size_t target = basis_index(state).linear;
  // Index arithmetic: block value = (linear / 3^(sites after block)) mod 3^size.
  const std::size_t below = pow3(n_qutrits - block.first - block.size);
  const std::size_t span = pow3(block.size);
  std::vector<double> diag(pow3(n_qutrits));
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = ((i / below) % span == target) ? 1.0 : 0.0;
  return DiagonalHamiltonian(n_qutrits, std::move(diag));
}

}  // namespace qcluster
