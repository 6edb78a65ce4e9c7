#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "plcomp/distributions.hpp"
#include "plcomp/rng.hpp"

using namespace plcomp;

namespace {

void check_close(std::span<const double> got, const std::vector<double>& want, double tol = 1e-15) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(tol));
}

SkillDistribution make(DistributionKind kind, std::size_t d, double alpha = 1.0, std::size_t m = 1,
                       Ordering ord = Ordering::identity()) {
  return SkillDistribution::make({kind, d, alpha, m, ord});
}

}  // namespace

TEST_SUITE("distributions") {
  TEST_CASE("zipf weights: small cases") {
    check_close(zipf_weights(1, 2.0), {1.0});
    check_close(zipf_weights(2, 1.0), {2.0 / 3.0, 1.0 / 3.0});
    check_close(zipf_weights(3, 2.0), {36.0 / 49.0, 9.0 / 49.0, 4.0 / 49.0});
  }

  TEST_CASE("zipf weights match the naive oracle and are normalized") {
    for (std::size_t d : {5u, 50u, 1000u})
      for (double a : {0.25, 1.0, 1.5, 3.0}) {
        const auto p = zipf_weights(d, a);
        const auto q = oracle::naive_zipf(d, a);
        for (std::size_t i = 0; i < d; ++i) CHECK(p[i] == doctest::Approx(q[i]).epsilon(1e-12));
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::is_sorted(p.rbegin(), p.rend()));
      }
  }

  TEST_CASE("zipf weights reject bad arguments") {
    CHECK_THROWS_AS(zipf_weights(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(zipf_weights(3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(zipf_weights(3, -1.0), std::invalid_argument);
  }

  TEST_CASE("uniform weights") {
    check_close(uniform_weights(1), {1.0});
    check_close(uniform_weights(4), {0.25, 0.25, 0.25, 0.25});
    for (double v : uniform_weights(120)) CHECK(v == doctest::Approx(1.0 / 120));
    CHECK_THROWS_AS(uniform_weights(0), std::invalid_argument);
  }

  TEST_CASE("binned zipf") {
    check_close(binned_zipf_weights(4, 2, 1.0), {1.0 / 3, 1.0 / 3, 1.0 / 6, 1.0 / 6});
    check_close(binned_zipf_weights(3, 3, 2.0), {36.0 / 49.0, 9.0 / 49.0, 4.0 / 49.0});

    const auto p = binned_zipf_weights(120, 5, 1.5);
    double h = 0.0;
    for (int i = 1; i <= 5; ++i) h += std::pow(i, -1.5);
    CHECK(std::accumulate(p.begin(), p.begin() + 24, 0.0) == doctest::Approx(1.0 / h).epsilon(1e-13));
    for (int b = 0; b < 5; ++b) {
      const double total = std::accumulate(p.begin() + 24 * b, p.begin() + 24 * (b + 1), 0.0);
      CHECK(total == doctest::Approx(std::pow(b + 1, -1.5) / h).epsilon(1e-13));
    }

    CHECK_THROWS_AS(binned_zipf_weights(4, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(binned_zipf_weights(4, 5, 1.0), std::invalid_argument);
  }

  TEST_CASE("binned zipf with m = d equals zipf") {
    for (std::size_t d : {7u, 120u}) {
      const auto a = binned_zipf_weights(d, d, 1.5);
      const auto b = zipf_weights(d, 1.5);
      for (std::size_t i = 0; i < d; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));
    }
  }

  TEST_CASE("group sizes put the remainder first") {
    CHECK(contiguous_group_sizes(7, 5) == std::vector<std::size_t>{2, 2, 1, 1, 1});
    CHECK(contiguous_group_sizes(120, 5) == std::vector<std::size_t>(5, 24));
  }

  TEST_CASE("orderings") {
    const auto w = zipf_weights(2, 1.0);
    const auto id = apply_ordering(w, Ordering::identity().permutation(2));
    CHECK(id.weight(0) == doctest::Approx(2.0 / 3));
    const auto rev = apply_ordering(w, Ordering::reversed().permutation(2));
    CHECK(rev.weight(1) == doctest::Approx(2.0 / 3));
    CHECK(rev.weight(0) == doctest::Approx(1.0 / 3));

    const auto a = Ordering::random(17).permutation(100);
    CHECK(a == Ordering::random(17).permutation(100));
    CHECK(a != Ordering::random(18).permutation(100));
    CHECK(is_permutation_of_iota(a));

    const std::vector<std::size_t> bad{0, 0};
    CHECK_THROWS_AS(apply_ordering(w, bad), std::invalid_argument);
    const std::vector<std::size_t> out_of_range{0, 2};
    CHECK_THROWS_AS(apply_ordering(w, out_of_range), std::invalid_argument);
  }

  TEST_CASE("skill distribution bookkeeping") {
    const auto dist = make(DistributionKind::Zipf, 50, 1.5, 50, Ordering::random(3));
    for (std::size_t r = 0; r < 50; ++r) {
      CHECK(dist.rank_of_skill(dist.skill_at_rank(r)) == r);
      CHECK(dist.weight(dist.skill_at_rank(r)) == dist.rank_weights()[r]);
    }
    const auto p = zipf_weights(50, 1.5);
    double l2 = 0.0;
    for (double v : p) l2 += v * v;
    CHECK(dist.l2_norm() == doctest::Approx(std::sqrt(l2)));
    CHECK(dist.min_weight() == doctest::Approx(p.back()));
    CHECK(dist.max_weight() == doctest::Approx(p.front()));
  }

  TEST_CASE("sampler: single skill") {
    const auto dist = make(DistributionKind::Uniform, 1);
    Rng rng(1);
    for (int i = 0; i < 100; ++i) CHECK(dist.sample(rng) == 0);
  }

  TEST_CASE("sampler: uniform d=10 frequencies within 0.1 +- 0.002") {
    const auto dist = make(DistributionKind::Uniform, 10);
    Rng rng(2);
    std::vector<std::uint64_t> counts(10, 0);
    const std::uint64_t n = 1'000'000;
    for (std::uint64_t i = 0; i < n; ++i) ++counts[dist.sample(rng)];
    for (auto c : counts) CHECK(std::abs(static_cast<double>(c) / n - 0.1) <= 0.002);
  }

  TEST_CASE("sampler: zipf head frequency within 5 sigma") {
    const auto dist = make(DistributionKind::Zipf, 50, 1.0);
    Rng rng(3);
    const std::uint64_t n = 1'000'000;
    std::vector<std::uint64_t> counts(50, 0);
    for (std::uint64_t i = 0; i < n; ++i) ++counts[dist.sample(rng)];
    const double p1 = dist.weight(0);
    CHECK(std::abs(static_cast<double>(counts[0]) / n - p1) <= 5 * std::sqrt(p1 / n));
    for (std::size_t j = 0; j < 50; ++j) CHECK(oracle::within_binomial_band(counts[j], n, dist.weight(j)));
  }

  TEST_CASE("sampler respects a shuffled ordering") {
    const auto dist = make(DistributionKind::Zipf, 20, 1.5, 20, Ordering::random(99));
    Rng rng(4);
    const std::uint64_t n = 200'000;
    std::vector<std::uint64_t> counts(20, 0);
    for (std::uint64_t i = 0; i < n; ++i) ++counts[dist.sample(rng)];
    for (std::size_t j = 0; j < 20; ++j) CHECK(oracle::within_binomial_band(counts[j], n, dist.weight(j)));
  }

  TEST_CASE("rank bins") {
    RankBins five(5);
    for (std::size_t b = 0; b < 5; ++b) CHECK(five.size(b) == 1);
    RankBins big(120);
    for (std::size_t b = 0; b < 5; ++b) CHECK(big.size(b) == 24);
    RankBins seven(7);
    std::vector<std::size_t> sizes;
    for (std::size_t b = 0; b < 5; ++b) sizes.push_back(seven.size(b));
    CHECK(sizes == std::vector<std::size_t>{2, 2, 1, 1, 1});
    CHECK(seven.bin_of_rank(0) == 0);
    CHECK(seven.bin_of_rank(3) == 1);
    CHECK(seven.bin_of_rank(6) == 4);
    CHECK_THROWS_AS(RankBins(3, 5), std::invalid_argument);
  }
}

TEST_SUITE("rng") {
  TEST_CASE("streams are reproducible and roles are independent") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.engine()() == b.engine()());
    CHECK(derive_seed(1, "init", 0) == derive_seed(1, "init", 0));
    CHECK(derive_seed(1, "init", 0) != derive_seed(1, "init", 1));
    CHECK(derive_seed(1, "init", 0) != derive_seed(1, "data", 0));
    CHECK(derive_seed(1, "init", 0) != derive_seed(2, "init", 0));
  }

  TEST_CASE("below is in range and roughly uniform") {
    Rng rng(5);
    std::vector<std::uint64_t> counts(7, 0);
    const std::uint64_t n = 70'000;
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto v = rng.below(7);
      REQUIRE(v < 7);
      ++counts[v];
    }
    for (auto c : counts) CHECK(oracle::within_binomial_band(c, n, 1.0 / 7));
    CHECK(rng.below(1) == 0);
  }

  TEST_CASE("uniform01 lies in [0, 1)") {
    Rng rng(6);
    for (int i = 0; i < 10000; ++i) {
      const double u = rng.uniform01();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }
}
