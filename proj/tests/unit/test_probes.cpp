#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "plcomp/composition.hpp"
#include "plcomp/population.hpp"
#include "plcomp/probes.hpp"

using namespace plcomp;

TEST_SUITE("probes") {
  TEST_CASE("pl check: near w* holds, at w* is skipped") {
    const auto dist = SkillDistribution::make({DistributionKind::Zipf, 10, 1.0, 10, {}});
    Rng rng(1);
    const auto ws = HiddenSkillVector::rademacher(10, rng);
    std::vector<double> w(ws.values().begin(), ws.values().end());
    for (auto& v : w) v += 1e-3 * rng.normal(0.0, 1.0);
    std::vector<StepRecord> recs{make_step_record(0, w, ws.values(), dist.weights(), 4),
                                 make_step_record(1, ws.values(), ws.values(), dist.weights(), 4)};
    const auto pl = check_pl_inequality(recs, dist.min_weight(), 4);
    CHECK(pl.evaluated == 1);
    CHECK(pl.skipped == 1);
    CHECK(pl.min_ratio >= 1.0);
    CHECK(pl.passed);
  }

  TEST_CASE("stationary points") {
    const auto dist = SkillDistribution::make({DistributionKind::Zipf, 10, 1.0, 10, {}});
    Rng rng(2);
    const auto ws = HiddenSkillVector::rademacher(10, rng);
    const auto rep = check_stationary_points(ws, dist.weights(), 4, 1000, rng);
    CHECK(rep.grad_norm_origin == 0.0);
    CHECK(rep.grad_norm_plus <= 1e-12);
    CHECK(rep.grad_norm_minus <= 1e-12);
    CHECK(rep.num_probes == 1000);
    CHECK(rep.min_probe_grad_norm > 0.0);
    CHECK(rep.passed);
  }

  TEST_CASE("stationary points: odd k leaves -w* out") {
    const auto dist = SkillDistribution::make({DistributionKind::Uniform, 6, 0.0, 6, {}});
    Rng rng(4);
    const auto ws = HiddenSkillVector::rademacher(6, rng);
    const auto rep = check_stationary_points(ws, dist.weights(), 3, 200, rng);
    // At -w*: k p_j (B^2 (-w*_j) - A^2 w*_j) = -2k p_j w*_j, norm 2k ||p||.
    CHECK(rep.grad_norm_minus == doctest::Approx(2.0 * 3.0 * std::sqrt(6.0) / 6.0));
    CHECK(rep.grad_norm_plus <= 1e-12);
    CHECK(rep.passed);
  }

  TEST_CASE("init concentration: single coordinate has std r") {
    Rng rng(3);
    const std::vector<double> p{1.0};
    const auto rep = check_init_concentration(1, 0.1, p, 20000, rng);
    // Median of |N(0, r^2)| is 0.6745 r.
    CHECK(rep.median_abs_a == doctest::Approx(0.6745 * 0.1).epsilon(0.05));
  }

  TEST_CASE("init concentration: uniform vs zipf scale") {
    const std::size_t d = 10000;
    Rng rng(4);
    const auto unif = uniform_weights(d);
    const auto u = check_init_concentration(d, 0.1, unif, 2000, rng);
    CHECK(u.median_abs_a == doctest::Approx(0.6745 * 0.1 / 100).epsilon(0.1));
    const auto z = zipf_weights(d, 1.5);
    double l2 = 0.0;
    for (double v : z) l2 += v * v;
    const auto zr = check_init_concentration(d, 0.1, z, 2000, rng);
    CHECK(zr.median_abs_a == doctest::Approx(0.6745 * 0.1 * std::sqrt(l2)).epsilon(0.1));
    CHECK(zr.a_bracket_fraction >= 0.99);
    CHECK(zr.passed);
  }

  TEST_CASE("gradient noise: zero at w*, shrinks like 1/sqrt(B)") {
    const auto dist = SkillDistribution::make({DistributionKind::Zipf, 20, 1.5, 20, {}});
    Rng rng(5);
    const auto ws = HiddenSkillVector::rademacher(20, rng);
    const auto at_min = estimate_gradient_noise(ws.values(), ws, dist, 4, 8, 100, rng);
    CHECK(at_min.mean_noise_norm == 0.0);

    std::vector<double> w(20);
    for (std::size_t j = 0; j < 20; ++j) w[j] = 0.7 * ws[j] + 0.1 * rng.normal(0.0, 1.0);
    const auto small = estimate_gradient_noise(w, ws, dist, 4, 16, 2000, rng);
    const auto big = estimate_gradient_noise(w, ws, dist, 4, 32, 2000, rng);
    CHECK(small.mean_noise_norm / big.mean_noise_norm == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));
  }

  TEST_CASE("csq packing") {
    CsqPackingConfig tiny;
    tiny.d = 4;
    tiny.epsilon = 1.0;
    tiny.num_vectors = 10;
    const auto t = csq_packing(tiny);
    CHECK(t.max_overlap <= 1.0);
    CHECK(t.passed);

    CHECK(std::pow(0.1, 4) == doctest::Approx(1e-4));
    const double bound = hoeffding_overlap_bound(400, 100, 0.001);
    CHECK(bound == doctest::Approx(std::sqrt(2 * std::log(2 * 1e4 / 0.001) / 400)));
    CHECK(bound == doctest::Approx(0.31).epsilon(0.02));

    CsqPackingConfig cfg;
    cfg.seed = 7;
    const auto rep = csq_packing(cfg);
    CHECK(rep.max_overlap <= bound);
    CHECK(rep.max_correlation == doctest::Approx(std::pow(rep.max_overlap, 4)));
    CHECK(csq_packing(cfg).max_overlap == rep.max_overlap);
  }

  TEST_CASE("separation: d = 1 has no hardness, both arms coincide") {
    SeparationConfig cfg;
    cfg.d = 1;
    cfg.num_seeds = 3;
    cfg.sample_budgets = {800};
    cfg.max_samples = 200'000;
    const auto res = separation_experiment(cfg);
    REQUIRE(res.median_success_budget.has_value());
    // With one skill both arms see the same distribution and the same data.
    CHECK(res.median_uniform_loss_at_success_budget < 0.1);
    for (std::size_t i = 0; i < res.zipf_curve.size(); ++i)
      CHECK(res.zipf_curve[i].median_population_loss == res.uniform_curve[i].median_population_loss);
  }
}
