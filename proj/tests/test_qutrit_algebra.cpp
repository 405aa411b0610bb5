#include <cmath>
#include <vector>

#include "doctest.h"
#include "qcluster/qutrit_algebra.hpp"

using namespace qcluster;

namespace {

// det(A - lambda I) for a real symmetric 3x3, by cofactor expansion.
double char_poly(const SpinMatrix& a, double lambda) {
  double m[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = a[i][j].real() - (i == j ? lambda : 0.0);
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3<double> mul(const Mat3<double>& a, const Mat3<double>& b) {
  Mat3<double> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

}  // namespace

TEST_CASE("spin operators in the (|1>, |0>, |-1>) basis") {
  const auto sz = spin_operator(SpinAxis::z);
  const auto sx = spin_operator(SpinAxis::x);
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double want_z = i == j ? 1.0 - i : 0.0;
      CHECK(sz[i][j] == Complex(want_z, 0.0));
      const bool adjacent = std::abs(i - j) == 1;
      CHECK(sx[i][j] == Complex(adjacent ? r : 0.0, 0.0));
      CHECK(sx[i][j] == std::conj(sx[j][i]));
      CHECK(sz[i][j] == std::conj(sz[j][i]));
    }

  SUBCASE("S^x has eigenvalues -1, 0, 1") {
    for (double lambda : {-1.0, 0.0, 1.0}) CHECK(char_poly(sx, lambda) == doctest::Approx(0.0).epsilon(1e-15));
    // The cubic has leading coefficient -1, so these three roots are all of them.
    CHECK(char_poly(sx, 2.0) == doctest::Approx(-6.0));
  }
}

TEST_CASE("projectors from the S^z polynomials match the canonical diagonals exactly") {
  const int ms[] = {1, 0, -1};
  Mat3<double> sum{};
  for (int a = 0; a < 3; ++a) {
    const auto p = projector(ms[a]);
    CHECK(p.m == ms[a]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(p.entries[i][j] == (i == j && i == a ? 1.0 : 0.0));
        sum[i][j] += p.entries[i][j];
      }
    for (int b = 0; b < 3; ++b) {
      const auto prod = mul(p.entries, projector(ms[b]).entries);
      const auto want = a == b ? p.entries : Mat3<double>{};
      CHECK(prod == want);
    }
    double trace = 0.0;
    for (int i = 0; i < 3; ++i) trace += p.entries[i][i];
    CHECK(trace == 1.0);
  }
  CHECK(sum == Mat3<double>{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
  CHECK_THROWS_AS(projector(2), std::invalid_argument);
  CHECK_THROWS_AS(projector(-2), std::invalid_argument);
}

TEST_CASE("basis indexing") {
  const std::vector<int> a{1, 1}, b{-1, -1}, c{1, 0, -1};
  CHECK(basis_index(a).linear == 0);
  CHECK(basis_index(b).linear == 8);
  CHECK(basis_index(c).linear == 5);
  CHECK(basis_index(c).projections == c);
  CHECK_THROWS_AS(basis_index(std::vector<int>{1, 3}), std::invalid_argument);
  CHECK(site_digit(5, 0, 3) == 0);
  CHECK(site_digit(5, 1, 3) == 1);
  CHECK(site_digit(5, 2, 3) == 2);

  SUBCASE("round trip for every index up to 7 qutrits") {
    for (int n = 1; n <= kMaxQutrits; ++n)
      for (std::size_t i = 0; i < pow3(n); ++i) {
        const auto digits = basis_digits(i, n);
        REQUIRE(basis_index(digits).linear == i);
      }
  }
  CHECK_THROWS_AS(basis_digits(9, 2), std::out_of_range);
  CHECK_THROWS_AS(pow3(-1), std::invalid_argument);
  CHECK_THROWS_AS(pow3(64), std::overflow_error);
}

TEST_CASE("group projector diagonals") {
  SUBCASE("single site block is P(1) x I") {
    const std::vector<int> state{1};
    const auto d = group_projector_diagonal({0, 1}, state, 2);
    for (std::size_t i = 0; i < 9; ++i) CHECK(d[i] == (i < 3 ? 1.0 : 0.0));
  }
  SUBCASE("two-site block is rank one") {
    const std::vector<int> state{1, 0};
    const auto d = group_projector_diagonal({0, 2}, state, 2);
    for (std::size_t i = 0; i < 9; ++i) CHECK(d[i] == (i == 1 ? 1.0 : 0.0));
  }
  SUBCASE("trace and resolution of identity on a block") {
    const int n = 5;
    for (const SiteBlock block : {SiteBlock{0, 1}, SiteBlock{1, 2}, SiteBlock{3, 2}, SiteBlock{2, 3}}) {
      DiagonalHamiltonian total(n);
      for (std::size_t s = 0; s < pow3(block.size); ++s) {
        const auto state = basis_digits(s, block.size);
        const auto d = group_projector_diagonal(block, state, n);
        double trace = 0.0;
        for (double v : d.values()) trace += v;
        CHECK(trace == static_cast<double>(pow3(n - block.size)));
        total += d;
      }
      for (double v : total.values()) CHECK(v == 1.0);
    }
  }
  SUBCASE("block state read from the right sites") {
    // Sites 1-2 of 3 in |0,-1>: indices with digits (*, 1, 2).
    const std::vector<int> state{0, -1};
    const auto d = group_projector_diagonal({1, 2}, state, 3);
    for (std::size_t i = 0; i < 27; ++i)
      CHECK(d[i] == (site_digit(i, 1, 3) == 1 && site_digit(i, 2, 3) == 2 ? 1.0 : 0.0));
  }
  const std::vector<int> wrong{1, 0, 1};
  CHECK_THROWS_AS(group_projector_diagonal({0, 2}, wrong, 3), std::invalid_argument);
  CHECK_THROWS_AS(group_projector_diagonal({2, 2}, std::vector<int>{1, 1}, 3), std::invalid_argument);
}

TEST_CASE("DiagonalHamiltonian validates its shape") {
  CHECK_THROWS_AS(DiagonalHamiltonian(2, std::vector<double>(8)), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalHamiltonian(1, std::vector<double>{0.0, NAN, 1.0}), std::invalid_argument);
  DiagonalHamiltonian a(1, {1.0, -2.0, 3.0});
  CHECK(a.min() == -2.0);
  CHECK(a.max() == 3.0);
  CHECK_THROWS_AS(a += DiagonalHamiltonian(2), std::invalid_argument);
}
