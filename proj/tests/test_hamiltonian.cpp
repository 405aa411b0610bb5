#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "qcluster/hamiltonian.hpp"

using namespace qcluster;

namespace {

const PointSet kFig1({{4, -2}, {-7, 7}, {6, -9}, {-6, 8}, {-2, -6}, {-9, 5}});
const PointSet kFig2({{6, 6}, {-6, 5}, {-3, 9}, {4, -10}, {-7, 4}, {-5, 1}});
const PointSet kFig3({{8, -1}, {-2, -6}, {1, 6}, {4, -4}, {3, 8}, {9, -4}, {-5, 8}, {-6, -8}, {3, -10}});
const PointSet kFig4({{-9, 10}, {1, 9}, {-8, -3}, {-2, -9}, {4, -2}, {8, -8}, {10, -5}});

PointSet random_points(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
  return PointSet(std::move(pts));
}

// Cluster label = ternary digit of each qutrit, optionally with point 0 pinned to digit 0.
Partition onehot_partition(std::size_t index, int n_qutrits, bool pinned, int k = 3) {
  std::vector<int> labels;
  if (pinned) labels.push_back(0);
  for (int m : basis_digits(index, n_qutrits)) labels.push_back(digit_of(m));
  return Partition(labels, k);
}

std::vector<std::size_t> argmin(const DiagonalHamiltonian& h) {
  return oracle_diag_min(h).argmin_basis_states;
}

}  // namespace

TEST_CASE("block state numbering") {
  const auto two = block_states(2);
  REQUIRE(two.size() == 9);
  CHECK(two[0] == BlockState{1, 1});
  CHECK(two[1] == BlockState{1, 0});
  CHECK(two[2] == BlockState{1, -1});
  CHECK(two[3] == BlockState{0, 1});
  CHECK(two[4] == BlockState{0, 0});
  CHECK(two[8] == BlockState{-1, -1});
  CHECK(spins_per_point_for(2) == 1);
  CHECK(spins_per_point_for(3) == 1);
  CHECK(spins_per_point_for(4) == 2);
  CHECK(spins_per_point_for(9) == 2);
  CHECK(spins_per_point_for(10) == 3);
}

TEST_CASE("encoding scheme validation") {
  CHECK_NOTHROW(EncodingScheme::multispin(4).validate());
  CHECK(EncodingScheme::multispin(4).register_size(3) == 6);
  CHECK(EncodingScheme::onehot_k3_pinned().register_size(6) == 5);
  CHECK(EncodingScheme::k2_penalty(false).register_size(6) == 6);
  CHECK(EncodingScheme::kmeanspp({{1, 1}, {1, 0}, {1, -1}, {0, 1}}).register_size(7) == 6);
  CHECK_THROWS_AS(EncodingScheme::kmeanspp({{1}, {0}, {1}}), std::invalid_argument);
  CHECK_THROWS_AS(EncodingScheme::kmeanspp({{1}, {0, 1}, {-1}}), std::invalid_argument);
  CHECK_THROWS_AS(EncodingScheme::kmeanspp({{1, 1}, {1, 0}, {1, -1}}), std::invalid_argument);
  auto bad = EncodingScheme::onehot_k3();
  bad.centroid_states = {{1}, {0}, {-1}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  auto spins = EncodingScheme::multispin(4);
  spins.spins_per_point = 3;
  CHECK_THROWS_AS(spins.validate(), std::invalid_argument);
  CHECK(parse_method("kmeanspp") == EncodingMethod::kmeanspp);
  CHECK(to_string(EncodingMethod::onehot_k2_penalty) == "one-hot-K2-penalty");
  CHECK_THROWS_AS(parse_method("k-means"), std::invalid_argument);
}

TEST_CASE("one-hot K = 3 Hamiltonian") {
  const auto two = distance_matrix(PointSet({{0, 0}, {3, 4}}));
  const auto h2 = build_onehot_k3(two);
  CHECK(h2.dimension() == 9);
  CHECK(h2[basis_index(std::vector<int>{1, 1}).linear] == 5.0);
  CHECK(h2[basis_index(std::vector<int>{1, 0}).linear] == -5.0);

  SUBCASE("ground energy is 2 W* - T on random instances") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
      const auto dm = distance_matrix(random_points(rng, 2 + trial % 5));
      const auto h = build_onehot_k3(dm);
      CHECK(h.min() == doctest::Approx(2.0 * oracle_min(dm, 3).min_cost - dm.total_pair_sum()).epsilon(1e-12));
    }
  }

  SUBCASE("global relabelling of projections permutes the diagonal") {
    const auto dm = distance_matrix(kFig1);
    const auto h = build_onehot_k3(dm);
    std::array<int, 3> perm{0, 1, 2};
    auto sorted = std::vector<double>(h.values().begin(), h.values().end());
    std::sort(sorted.begin(), sorted.end());
    do {
      for (std::size_t i = 0; i < h.dimension(); ++i) {
        auto digits = basis_digits(i, 6);
        for (int& m : digits) m = projection_of(perm[static_cast<std::size_t>(digit_of(m))]);
        REQUIRE(h[basis_index(digits).linear] == doctest::Approx(h[i]).epsilon(1e-13));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(sorted.front() == h.min());
  }

  SUBCASE("sixfold degenerate ground state for the fig1 instance") {
    const auto h = build_onehot_k3(distance_matrix(kFig1));
    const auto idx = argmin(h);
    CHECK(idx.size() == 6);
    for (auto i : idx) CHECK(onehot_partition(i, 6, false) == Partition({0, 1, 2, 1, 0, 1}, 3));
  }
}

TEST_CASE("pinned one-hot Hamiltonian") {
  const auto two = distance_matrix(PointSet({{0, 0}, {3, 4}}));
  const auto h2 = build_onehot_k3_pinned(two);
  REQUIRE(h2.qutrits() == 1);
  CHECK(h2[0] == 5.0);
  CHECK(h2[1] == -5.0);
  CHECK(h2[2] == -5.0);

  const auto dm = distance_matrix(kFig1);
  const auto pinned = build_onehot_k3_pinned(dm);
  CHECK(pinned.qutrits() == 5);
  const auto idx = argmin(pinned);
  CHECK(idx.size() == 2);
  for (auto i : idx) CHECK(onehot_partition(i, 5, true) == Partition({0, 1, 2, 1, 0, 1}, 3));

  SUBCASE("equals the m_0 = 1 slice of the unpinned Hamiltonian") {
    std::mt19937_64 rng(7);
    for (int n = 2; n <= 6; ++n) {
      const auto d = distance_matrix(random_points(rng, n));
      const auto full = build_onehot_k3(d);
      const auto slice = build_onehot_k3_pinned(d);
      // Site 0 is most significant, so digit 0 at site 0 is the first 3^(n-1) entries.
      for (std::size_t i = 0; i < slice.dimension(); ++i)
        REQUIRE(slice[i] == doctest::Approx(full[i]).epsilon(1e-13));
      double slice_min = full[0];
      for (std::size_t i = 0; i < slice.dimension(); ++i) slice_min = std::min(slice_min, full[i]);
      CHECK(slice.min() == doctest::Approx(slice_min));
    }
  }
}

TEST_CASE("K = 2 penalty Hamiltonian") {
  const auto two = distance_matrix(PointSet({{0, 0}, {3, 4}}));
  const auto h = build_k2_penalty(two, false);
  CHECK(h[basis_index(std::vector<int>{-1, -1}).linear] == 25.0);
  CHECK(h[basis_index(std::vector<int>{1, 0}).linear] == -5.0);
  CHECK(h[basis_index(std::vector<int>{1, -1}).linear] == -5.0 + 10.0);
  CHECK(h[basis_index(std::vector<int>{0, 0}).linear] == 5.0);

  const auto dm = distance_matrix(kFig2);
  const auto oracle = oracle_min(dm, 2);
  REQUIRE(oracle.argmin_partitions.size() == 1);
  for (bool pinned : {true, false}) {
    CAPTURE(pinned);
    const auto hk = build_k2_penalty(dm, pinned);
    const int n = pinned ? 5 : 6;
    CHECK(hk.qutrits() == n);
    for (auto i : argmin(hk)) {
      for (int m : basis_digits(i, n)) CHECK(m != -1);
      CHECK(onehot_partition(i, n, pinned, 3) == oracle.argmin_partitions[0]);
    }
    CHECK(hk.min() == doctest::Approx(2.0 * oracle.min_cost - dm.total_pair_sum()));
  }
}

TEST_CASE("multi-spin one-hot Hamiltonian") {
  const auto two = distance_matrix(PointSet({{0, 0}, {3, 4}}));
  const auto h9 = build_onehot_multispin(two, 9);
  REQUIRE(h9.qutrits() == 4);
  CHECK(h9[4 * 9 + 4] == 5.0);  // both blocks in |0,0>
  CHECK(h9[0 * 9 + 1] == -5.0);
  CHECK_THROWS_AS(build_onehot_multispin(two, 1), std::invalid_argument);

  SUBCASE("K = 3 reduces to the single-qutrit encoding") {
    const auto dm = distance_matrix(kFig1);
    const auto a = build_onehot_multispin(dm, 3);
    const auto b = build_onehot_k3(dm);
    REQUIRE(a.dimension() == b.dimension());
    for (std::size_t i = 0; i < a.dimension(); ++i) CHECK(a[i] == b[i]);
  }
  SUBCASE("forbidden states never pair up") {
    const auto h4 = build_onehot_multispin(two, 4);
    CHECK(h4[4 * 9 + 4] == -5.0);  // rank 4 >= K
    CHECK(h4[3 * 9 + 3] == 5.0);
  }
}

TEST_CASE("one-hot penalty") {
  const auto one = build_penalty_onehot(1, 4, 2.5);
  CHECK(one[4] == 2.5);
  CHECK(one[3] == 0.0);
  const auto two = build_penalty_onehot(2, 4, 2.5);
  CHECK(two[4 * 9 + 8] == 5.0);
  CHECK(two[0] == 0.0);
  CHECK_THROWS_AS(build_penalty_onehot(2, 4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_penalty_onehot(2, 4, -1.0), std::invalid_argument);

  SUBCASE("penalty 2 max d keeps forbidden states out of the ground state") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 2 + trial % 2;
      const auto dm = distance_matrix(random_points(rng, n));
      const auto h = build_onehot_multispin(dm, 4) + build_penalty_onehot(n, 4, default_penalty(dm.max()));
      for (auto i : argmin(h))
        for (int p = 0; p < n; ++p) {
          const auto block = static_cast<int>((i / pow3(2 * (n - 1 - p))) % 9);
          CHECK(block < 4);
        }
    }
  }
}

TEST_CASE("k-means++ Hamiltonian") {
  SUBCASE("free point equidistant from three centroids") {
    const CentroidDistances dcp(3, 1, {2.0, 2.0, 2.0});
    const auto h = build_kmeanspp(dcp, EncodingScheme::kmeanspp({{1}, {0}, {-1}}));
    CHECK(h[0] == -2.0);
    CHECK(h[1] == -2.0);
    CHECK(h[2] == -2.0);
  }

  SUBCASE("fig3 instance") {
    const auto dm = distance_matrix(kFig3);
    const std::vector<int> centroids{0, 1, 2};
    const auto h = build_kmeanspp(centroid_distances(dm, centroids), EncodingScheme::kmeanspp({{1}, {0}, {-1}}));
    CHECK(h.qutrits() == 6);
    const auto idx = argmin(h);
    REQUIRE(idx.size() == 1);
    // Free points 3..8 -> centroids 0, 2, 0, 2, 1, 1.
    std::vector<int> want{1, -1, 1, -1, 0, 0};
    CHECK(basis_digits(idx[0], 6) == want);
  }

  SUBCASE("fig4 instance with penalty") {
    const auto dm = distance_matrix(kFig4);
    const std::vector<int> centroids{0, 1, 2, 4};
    const auto scheme = EncodingScheme::kmeanspp({{1, 1}, {1, 0}, {1, -1}, {0, 1}});
    const auto dcp = centroid_distances(dm, centroids);
    CHECK(free_point_indices(7, centroids) == std::vector<int>{3, 5, 6});
    const auto h = build_kmeanspp(dcp, scheme) + build_penalty_kmeanspp(3, scheme, default_penalty(dcp.max()));
    const auto idx = argmin(h);
    REQUIRE(idx.size() == 1);
    // (-2,-9) -> |1,-1>, (8,-8) and (10,-5) -> |0,1>.
    CHECK(basis_digits(idx[0], 6) == std::vector<int>{1, -1, 0, 1, 0, 1});
    CHECK(build_problem_hamiltonian(dm, scheme, centroids).values().size() == h.dimension());
    for (std::size_t i = 0; i < h.dimension(); ++i)
      CHECK(build_problem_hamiltonian(dm, scheme, centroids)[i] == h[i]);
  }

  SUBCASE("argmin equals brute-force nearest-centroid-linkage assignment") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 10; ++trial) {
      const int k = trial % 2 ? 3 : 4;
      const int n = k + 2;
      const auto dm = distance_matrix(random_points(rng, n));
      std::vector<int> centroids(static_cast<std::size_t>(k));
      for (int c = 0; c < k; ++c) centroids[static_cast<std::size_t>(c)] = c;
      const auto dcp = centroid_distances(dm, centroids);
      const auto scheme = EncodingScheme::kmeanspp_default(k);
      auto h = build_kmeanspp(dcp, scheme);
      if (k == 4) h += build_penalty_kmeanspp(2, scheme, default_penalty(dcp.max()));
      // Enumerate centroid choices for the two free points directly.
      double best = 1e300;
      std::pair<int, int> best_choice;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
          const double linkage = dcp(static_cast<std::size_t>(a), 0) + dcp(static_cast<std::size_t>(b), 1);
          if (linkage < best) best = linkage, best_choice = {a, b};
        }
      const auto idx = argmin(h);
      REQUIRE(idx.size() == 1);
      const std::size_t span = pow3(scheme.spins_per_point);
      CHECK(basis_index(scheme.centroid_states[static_cast<std::size_t>(best_choice.first)]).linear == idx[0] / span);
      CHECK(basis_index(scheme.centroid_states[static_cast<std::size_t>(best_choice.second)]).linear == idx[0] % span);
    }
  }

  const auto scheme = EncodingScheme::kmeanspp({{1, 1}, {1, 0}, {1, -1}, {0, 1}});
  const auto p = build_penalty_kmeanspp(3, scheme, 4.0);
  CHECK(p[basis_index(std::vector<int>{0, 0, 1, 1, 1, 1}).linear] == 4.0);
  CHECK(p[basis_index(std::vector<int>{1, -1, 1, 1, 1, 1}).linear] == 0.0);
  CHECK(p[basis_index(std::vector<int>{0, 0, -1, 0, -1, -1}).linear] == 12.0);
  CHECK_THROWS_AS(build_penalty_kmeanspp(3, scheme, 0.0), std::invalid_argument);
  const std::vector<int> dup{0, 0, 1};
  CHECK_THROWS_AS(centroid_distances(distance_matrix(kFig3), dup), std::invalid_argument);
  auto bad = scheme;
  bad.centroid_states[3] = {1, 1};
  CHECK_THROWS_AS(build_kmeanspp(CentroidDistances(4, 1, {1, 2, 3, 4}), bad), std::invalid_argument);
}

TEST_CASE("builders reject registers beyond the size guard") {
  std::vector<Point> pts;
  for (int i = 0; i < 9; ++i) pts.push_back({double(i), double(i * i)});
  CHECK_THROWS_AS(build_onehot_k3(distance_matrix(PointSet(pts))), SizeLimitError);
  CHECK_THROWS_AS(build_problem_hamiltonian(distance_matrix(PointSet(pts)), EncodingScheme::multispin(4)),
                  SizeLimitError);
}

TEST_CASE("transverse-field driver") {
  const double h = 1.7;
  CHECK_THROWS_AS(build_driver(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_driver(2, -1.0), std::invalid_argument);

  SUBCASE("single site ground state") {
    const auto drv = build_driver(1, h);
    const std::vector<Complex> v{0.5, -1.0 / std::sqrt(2.0), 0.5};
    std::vector<Complex> out(3);
    drv.apply_add(v, out);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(out[static_cast<std::size_t>(i)] + h * v[static_cast<std::size_t>(i)]) < 1e-15);
    CHECK(drv.ground_energy() == -h);
  }

  SUBCASE("dense diagonalization of three sites") {
    const auto drv = build_driver(3, h);
    Eigen::MatrixXd dense(27, 27);
    for (std::size_t j = 0; j < 27; ++j) {
      std::vector<Complex> e(27), col(27);
      e[j] = 1.0;
      drv.apply_add(e, col);
      for (std::size_t i = 0; i < 27; ++i) {
        CHECK(col[i].imag() == 0.0);
        dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i].real();
      }
    }
    CHECK((dense - dense.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
    CHECK(eig.eigenvalues()(0) == doctest::Approx(-3.0 * h).epsilon(1e-12));
    CHECK(eig.eigenvalues()(1) > -3.0 * h + 0.5 * h);  // unique ground state
  }

  SUBCASE("all-|0> state maps to neighbours") {
    const auto drv = build_driver(2, h);
    std::vector<Complex> in(9), out(9);
    in[4] = 1.0;  // |0,0>
    drv.apply_add(in, out);
    const double c = h / std::sqrt(2.0);
    for (std::size_t i = 0; i < 9; ++i) {
      const bool neighbour = i == 1 || i == 3 || i == 5 || i == 7;
      CHECK(std::abs(out[i] - Complex(neighbour ? c : 0.0)) < 1e-15);
    }
  }
}
