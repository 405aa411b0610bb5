#pragma once

// Spin-1 (qutrit) operators, projectors and n-qutrit basis indexing.
//
// Basis convention used throughout the library: single-site states are
// ordered (|1>, |0>, |-1>) and carry ternary digits (0, 1, 2). A register
// state |m_0, m_1, ..., m_{n-1}> has linear index sum_i digit(m_i) 3^(n-1-i),
// so site 0 is the most significant digit and |1,1,...,1> is index 0.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qcluster {

using Complex = std::complex<double>;

template <typename T>
using Mat3 = std::array<std::array<T, 3>, 3>;

/// Largest register the simulator accepts (3^7 = 2187 amplitudes).
inline constexpr int kMaxQutrits = 7;

enum class SpinAxis { x, z };

/// 3x3 spin-1 matrix in the (|1>, |0>, |-1>) basis.
using SpinMatrix = Mat3<Complex>;

SpinMatrix spin_operator(SpinAxis axis);

/// Projector |m><m| evaluated as a polynomial in S^z.
struct Projector3 {
  int m = 1;
  Mat3<double> entries{};
};

/// Throws std::invalid_argument unless m is one of 1, 0, -1.
Projector3 projector(int m);

/// m = 1, 0, -1  ->  digit 0, 1, 2. Throws std::invalid_argument otherwise.
int digit_of(int projection);
/// Inverse of digit_of.
int projection_of(int digit);

/// 3^n as an index type. Throws std::invalid_argument for negative n and
/// std::overflow_error if the result does not fit.
std::size_t pow3(int n);

/// A computational basis state of an n-qutrit register.
struct BasisIndex {
  std::vector<int> projections;  // m_i in {1, 0, -1}, site 0 first
  std::size_t linear = 0;
};

BasisIndex basis_index(std::span<const int> projections);

/// Projections of the basis state with the given linear index.
std::vector<int> basis_digits(std::size_t linear, int n_qutrits);

/// Ternary digit of `site` inside `linear` for an n-qutrit register.
inline int site_digit(std::size_t linear, int site, int n_qutrits) {
  for (int k = n_qutrits - 1; k > site; --k) linear /= 3;
  return static_cast<int>(linear % 3);
}

/// Real diagonal operator on an n-qutrit register, length 3^n.
class DiagonalHamiltonian {
 public:
  DiagonalHamiltonian() = default;
  /// Zero operator on n qutrits.
  explicit DiagonalHamiltonian(int n_qutrits);
  /// Throws std::invalid_argument on length mismatch or non-finite entries.
  DiagonalHamiltonian(int n_qutrits, std::vector<double> diagonal);

  int qutrits() const { return n_; }
  std::size_t dimension() const { return diag_.size(); }
  std::span<const double> values() const { return diag_; }
  double operator[](std::size_t i) const { return diag_[i]; }

  double min() const;
  double max() const;

  DiagonalHamiltonian& operator+=(const DiagonalHamiltonian& other);
  friend DiagonalHamiltonian operator+(DiagonalHamiltonian lhs,
                                       const DiagonalHamiltonian& rhs) {
    lhs += rhs;
    return lhs;
  }

 private:
  int n_ = 0;
  std::vector<double> diag_;
};

/// Contiguous run of qutrits that together encode one data point.
struct SiteBlock {
  int first = 0;
  int size = 1;
};

/// Diagonal of |state><state| on `block`, identity elsewhere. The result is a
/// 0/1 vector with exactly 3^(n - block.size) ones.
DiagonalHamiltonian group_projector_diagonal(SiteBlock block,
                                             std::span<const int> state,
                                             int n_qutrits);

}  // namespace qcluster
