#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "plcomp/composition.hpp"
#include "plcomp/population.hpp"

using namespace plcomp;

namespace {

std::vector<double> random_simplex(std::size_t d, Rng& rng) {
  std::vector<double> p(d);
  double s = 0.0;
  for (auto& v : p) s += (v = 0.05 + rng.uniform01());
  for (auto& v : p) v /= s;
  return p;
}

std::vector<double> random_signs(std::size_t d, Rng& rng) {
  std::vector<double> s(d);
  for (auto& v : s) v = rng.coin() ? 1.0 : -1.0;
  return s;
}

// Largest |eigenvalue| of a symmetric matrix by Jacobi rotations.
double spectral_radius(std::vector<double> a, std::size_t n) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
  }
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(a[i * n + i]));
  return r;
}

}  // namespace

TEST_SUITE("population") {
  TEST_CASE("A and B") {
    const std::vector<double> ws{1.0, 1.0}, p{2.0 / 3, 1.0 / 3};
    CHECK(overlap_A(ws, ws, p) == doctest::Approx(1.0));
    CHECK(overlap_A(std::vector<double>{0.0, 0.0}, ws, p) == 0.0);
    CHECK(overlap_A(std::vector<double>{1.0, 0.0}, ws, p) == doctest::Approx(2.0 / 3));
    CHECK(norm_B(std::vector<double>{1.0, -1.0}, p) == doctest::Approx(1.0));
    CHECK(norm_B(std::vector<double>{0.0, 0.0}, p) == 0.0);
    CHECK(norm_B(std::vector<double>{1.0, 0.0}, p) == doctest::Approx(2.0 / 3));
  }

  TEST_CASE("population loss and gradient: worked examples") {
    const std::vector<double> ws{1.0, 1.0}, p{2.0 / 3, 1.0 / 3}, w{1.0, 0.0};
    CHECK(population_loss(ws, ws, p, 3) == doctest::Approx(0.0));
    CHECK(population_loss(std::vector<double>{0.0, 0.0}, ws, p, 3) == doctest::Approx(0.5));
    CHECK(population_loss(w, ws, p, 2) == doctest::Approx(5.0 / 18));
    const auto g = population_gradient(w, ws, p, 2);
    CHECK(g[0] == doctest::Approx(0.0));
    CHECK(g[1] == doctest::Approx(-4.0 / 9));
    for (double v : population_gradient(ws, ws, p, 4)) CHECK(v == 0.0);
    for (double v : population_gradient(std::vector<double>{0.0, 0.0}, ws, p, 2)) CHECK(v == 0.0);
    CHECK_THROWS_AS(population_loss(w, std::vector<double>{1.0, 0.5}, p, 2), std::invalid_argument);
  }

  TEST_CASE("default horizon") {
    // rate = 0.01 * 2 * 0.1 * 0.5^2 = 5e-4, so T = ceil(12000 ln(0.5 / 1e-8)).
    CHECK(default_horizon(0.01, 2, 0.1, 0.5, 0.5, 1e-8, 1'000'000) ==
          static_cast<std::uint64_t>(std::ceil(12000.0 * std::log(5e7))));
    CHECK(default_horizon(0.01, 2, 0.1, -0.5, 0.5, 1e-8, 1'000'000) ==
          default_horizon(0.01, 2, 0.1, 0.5, 0.5, 1e-8, 1'000'000));
    CHECK(default_horizon(0.01, 2, 0.1, 0.5, 0.5, 1e-8, 1000) == 1000);
    CHECK(default_horizon(0.01, 2, 0.1, 0.0, 0.5, 1e-8, 777) == 777);
    CHECK(default_horizon(0.01, 2, 0.1, 0.5, 1e-9, 1e-8, 777) == 1);
    CHECK_THROWS_AS(default_horizon(0.0, 2, 0.1, 0.5, 0.5, 1e-8, 10), std::invalid_argument);
  }

  TEST_CASE("loss keeps relative precision next to both minimizers") {
    // d = 1: L = 0.5 ((1 + e)^k - 1)^2 with w = +-(1 + e) and w* = 1.
    const std::vector<double> ws{1.0}, p{1.0};
    for (double e : {1e-9, -3e-8, 2e-6}) {
      const double exact = 0.5 * std::pow(std::expm1(4.0 * std::log1p(e)), 2.0);
      for (double s : {1.0, -1.0}) {
        const std::vector<double> w{s * (1.0 + e)};
        CHECK(population_loss(w, ws, p, 4) == doctest::Approx(exact).epsilon(1e-6));
        // dL/dw = k w^{k-1} ((w)^k - 1) for d = 1.
        const double g = 4.0 * std::pow(w[0], 3.0) * std::expm1(4.0 * std::log1p(e));
        CHECK(population_gradient(w, ws, p, 4)[0] == doctest::Approx(g).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("closed forms match brute-force enumeration") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t d = 1 + rng.below(5), k = 1 + rng.below(4);
      const auto p = random_simplex(d, rng);
      const auto ws = random_signs(d, rng);
      std::vector<double> w(d);
      for (auto& v : w) v = rng.normal(0.0, 1.0);
      const auto e = oracle::brute_population(w, ws, p, k);
      CHECK(population_loss(w, ws, p, k) == doctest::Approx(e.loss).epsilon(1e-10).scale(1.0));
      const auto g = population_gradient(w, ws, p, k);
      for (std::size_t j = 0; j < d; ++j) CHECK(std::abs(g[j] - e.grad[j]) <= 1e-10 * (1 + std::abs(e.grad[j])));
    }
  }

  TEST_CASE("gradient matches finite differences of the closed-form loss") {
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t d = 2 + rng.below(8), k = 1 + rng.below(6);
      const auto p = random_simplex(d, rng);
      const auto ws = random_signs(d, rng);
      std::vector<double> w(d);
      for (auto& v : w) v = rng.normal(0.0, 0.7);
      const auto g = population_gradient(w, ws, p, k);
      const auto fd = oracle::finite_difference(
          [&](const std::vector<double>& x) { return population_loss(x, ws, p, k); }, w, 1e-6);
      for (std::size_t j = 0; j < d; ++j) CHECK(g[j] == doctest::Approx(fd[j]).epsilon(1e-6).scale(1.0));
    }
  }

  TEST_CASE("hessian matches finite differences of the gradient") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t d = 2 + rng.below(5), k = 2 + rng.below(4);
      const auto p = random_simplex(d, rng);
      const auto ws = random_signs(d, rng);
      std::vector<double> w(d);
      for (auto& v : w) v = rng.normal(0.0, 0.7);
      const auto H = population_hessian(w, ws, p, k);
      for (std::size_t i = 0; i < d; ++i) {
        const auto col = oracle::finite_difference(
            [&](const std::vector<double>& x) { return population_gradient(x, ws, p, k)[i]; }, w, 1e-6);
        for (std::size_t j = 0; j < d; ++j) CHECK(H[i * d + j] == doctest::Approx(col[j]).epsilon(1e-5).scale(1.0));
      }
    }
  }

  TEST_CASE("hessian bound: uniform d=4, k=2 at w*") {
    const std::vector<double> ws(4, 1.0), p(4, 0.25);
    const auto b = hessian_opnorm_bound(ws, ws, p, 2);
    CHECK(b.explicit_bound == doctest::Approx(3.5));
    const auto H = population_hessian(ws, ws, p, 2);
    CHECK(spectral_radius(H, 4) <= b.explicit_bound + 1e-12);
    CHECK(b.universal_bound == doctest::Approx(12 * 0.5));
  }

  TEST_CASE("hessian bound dominates the exact operator norm in the stable region") {
    Rng rng(14);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t d = 2 + rng.below(6), k = 2 + rng.below(4);
      const auto p = random_simplex(d, rng);
      const auto ws = random_signs(d, rng);
      std::vector<double> w(d);
      for (std::size_t j = 0; j < d; ++j) w[j] = ws[j] * (0.2 + 0.9 * rng.uniform01());
      const auto b = hessian_opnorm_bound(w, ws, p, k);
      if (!b.in_stable_region) continue;
      CHECK(spectral_radius(population_hessian(w, ws, p, k), d) <= b.explicit_bound * (1 + 1e-9));
    }
  }

  TEST_CASE("hessian bound scaling in p") {
    // A is held fixed by halving w while p doubles. The universal bound and the
    // p_max term are linear in p; the ||p||^2 term is quadratic.
    const std::vector<double> ws(3, 1.0), p{0.5, 0.3, 0.2}, w{0.9, 0.8, 1.0};
    std::vector<double> p2(p), w2(w);
    for (auto& v : p2) v *= 2;
    for (auto& v : w2) v /= 2;
    for (std::size_t k : {2u, 3u, 4u}) {
      const auto a = hessian_opnorm_bound(w, ws, p, k);
      const auto b = hessian_opnorm_bound(w2, ws, p2, k);
      CHECK(b.universal_bound == doctest::Approx(2 * a.universal_bound));
      const double A = overlap_A(w, ws, p), kk = static_cast<double>(k);
      const double first = 2 * kk * (2 * kk - 1) * 0.5 * std::pow(A, kk - 1);
      const double second = kk * (kk - 1) * (0.25 + 0.09 + 0.04) * std::pow(A, kk - 2);
      CHECK(a.explicit_bound == doctest::Approx(first + second));
      CHECK(b.explicit_bound == doctest::Approx(2 * first + 4 * second));
    }
  }

  TEST_CASE("universal bound at k = 2 is 12 ||p||") {
    const std::vector<double> ws(3, 1.0), p{0.5, 0.3, 0.2}, w{0.9, 0.8, 1.0};
    CHECK(hessian_opnorm_bound(w, ws, p, 2).universal_bound == doctest::Approx(12 * std::sqrt(0.38)));
  }

  TEST_CASE("hessian bound at A = 0 is degenerate for k >= 3") {
    const std::vector<double> ws{1.0, -1.0}, p{0.5, 0.5}, w{0.3, 0.3};
    const auto b = hessian_opnorm_bound(w, ws, p, 3);
    CHECK(b.degenerate);
    CHECK(b.explicit_bound == doctest::Approx(b.universal_bound));
  }

  TEST_CASE("trajectory fixed points") {
    const std::vector<double> ws{1.0, -1.0, 1.0}, p{0.5, 0.3, 0.2};
    TrajectoryOptions opt;
    opt.max_steps = 50;
    const auto at_min = population_gd_trajectory(ws, ws, p, 4, 0.01, opt);
    for (const auto& r : at_min.records) CHECK(r.loss == 0.0);
    CHECK(at_min.final_w == ws);
    const std::vector<double> zero(3, 0.0);
    const auto at_saddle = population_gd_trajectory(zero, ws, p, 4, 0.01, opt);
    for (const auto& r : at_saddle.records) CHECK(r.loss == 0.5);
    CHECK(at_saddle.records.front().step == 0);
    CHECK(at_saddle.records.back().step == 50);
    CHECK(at_saddle.records.size() == 51);
  }

  TEST_CASE("trajectory logging cadence and stop loss") {
    const std::vector<double> ws{1.0, 1.0}, p{0.6, 0.4}, w0{0.8, 0.9};
    TrajectoryOptions opt;
    opt.max_steps = 1000;
    opt.log_every = 100;
    const auto log = population_gd_trajectory(w0, ws, p, 2, 0.1, opt);
    CHECK(log.records.size() == 11);
    for (std::size_t i = 1; i < log.records.size(); ++i) CHECK(log.records[i].step > log.records[i - 1].step);
    opt.stop_loss = 1e-6;
    const auto stopped = population_gd_trajectory(w0, ws, p, 2, 0.1, opt);
    CHECK(stopped.records.back().loss <= 1e-6);
    CHECK(stopped.steps_run < 1000);
  }

  TEST_CASE("trajectory divergence is recorded") {
    const std::vector<double> ws{1.0, 1.0}, p{0.5, 0.5}, w0{3.0, 3.0};
    TrajectoryOptions opt;
    opt.max_steps = 1000;
    const auto log = population_gd_trajectory(w0, ws, p, 6, 10.0, opt);
    REQUIRE(log.diverged_at.has_value());
    CHECK(*log.diverged_at >= 1);
  }

  TEST_CASE("pl ratio edge cases") {
    CHECK(std::isnan(pl_ratio(0.0, 0.0, 1.0, 0.1, 4)));
    CHECK(std::isnan(pl_ratio(1e-30, 1e-15, 1.0, 0.1, 4)));
    CHECK(pl_ratio(2.0, 1.0, 1.0, 0.5, 2) == doctest::Approx(1.0));
  }
}
