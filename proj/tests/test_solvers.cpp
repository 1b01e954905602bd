#include <algorithm>
#include <cmath>
#include <functional>

#include "doctest.h"
#include "stars/errors.hpp"
#include "stars/oracle.hpp"
#include "stars/problems.hpp"
#include "stars/solvers.hpp"
#include "stars/theory.hpp"

using stars::NoiseKind;
using stars::NoiseModel;
using stars::SolverConfig;
using stars::SolverKind;
using stars::Vector;

namespace {

SolverConfig iterations(SolverKind kind, std::int64_t n) {
  SolverConfig c;
  c.kind = kind;
  c.iteration_limit = n;
  return c;
}

SolverConfig budget(SolverKind kind, std::int64_t evals) {
  SolverConfig c;
  c.kind = kind;
  c.eval_budget = evals;
  return c;
}

bool same(const stars::Trajectory& a, const stars::Trajectory& b) {
  if (a.records.size() != b.records.size()) return false;
  for (size_t i = 0; i < a.records.size(); ++i) {
    const auto& x = a.records[i];
    const auto& y = b.records[i];
    if (x.k != y.k || x.nevals != y.nevals || x.f_true != y.f_true || x.acc != y.acc) return false;
  }
  return a.final_x == b.final_x;
}

}  // namespace

TEST_CASE("solver names round-trip") {
  for (SolverKind k : stars::kAllSolvers) CHECK(stars::parse_solver_kind(stars::to_string(k)) == k);
  CHECK_THROWS_AS(stars::parse_solver_kind("nelder-mead"), stars::InvalidArgument);
}

TEST_CASE("config validation") {
  SolverConfig c;
  CHECK_THROWS_AS(stars::validate(c), stars::ConfigRejected);
  c.eval_budget = -1;
  CHECK_THROWS_AS(stars::validate(c), stars::ConfigRejected);
  c.eval_budget = 10;
  CHECK_NOTHROW(stars::validate(c));
  c.record_every = 0;
  CHECK_THROWS_AS(stars::validate(c), stars::ConfigRejected);
}

TEST_CASE("STARS init fixes h and mu in additive mode") {
  const auto p = stars::f1_make(8);
  stars::StarsSolver s(p, NoiseKind::Additive, 1e-3, 4, 1e-12, stars::RngStream(0, 0));
  CHECK(s.h() == 1.0 / 192);
  CHECK(s.mu_star() == doctest::Approx(6.1790e-3).epsilon(1e-4));
  stars::NoisyOracle o(p, {NoiseKind::Additive, 1e-3}, stars::RngStream(0, 0));
  s.init(o);
  CHECK(o.eval_count() == 1);
  s.step(o, 2);
  CHECK(s.last_mu() == s.mu_star());
  s.step(o, 2);
  CHECK(s.last_mu() == s.mu_star());
  CHECK(o.eval_count() == 5);
}

TEST_CASE("STARS multiplicative mode varies mu") {
  const auto p = stars::f1_make(8);
  stars::StarsSolver s(p, NoiseKind::Multiplicative, 1e-3, 4, 1e-12, stars::RngStream(0, 0));
  CHECK(s.c4() == doctest::Approx(7.3481e-3).epsilon(1e-4));
  stars::NoisyOracle o(p, {NoiseKind::Multiplicative, 1e-3}, stars::RngStream(0, 0));
  s.init(o);
  s.step(o, 3);
  // f(x0) = 0, so the first smoothing step sits on the floor.
  CHECK(s.last_mu() == 1e-12);
  const double first = s.last_mu();
  s.step(o, 3);
  CHECK(s.last_mu() != first);
  CHECK(o.eval_count() == 7);
}

TEST_CASE("STARS rejects inadmissible noise levels") {
  const auto p = stars::f1_make(8);
  CHECK_THROWS_AS(stars::StarsSolver(p, NoiseKind::Additive, 0.0, 4, 1e-12, stars::RngStream(0, 0)),
                  stars::ConfigRejected);
  CHECK_THROWS_AS(stars::StarsSolver(p, NoiseKind::Multiplicative, 0.6, 4, 1e-12, stars::RngStream(0, 0)),
                  stars::ConfigRejected);
}

TEST_CASE("forward-difference step by hand on the 1-d sphere") {
  // With u = 1: s = ((1 + mu)^2 - 1) / mu = 2 + mu, x' = 1 - h s.
  const double mu = 1e-6;
  const double h = 1.0 / 20;
  CHECK((std::pow(1 + mu, 2) - 1) / mu == doctest::Approx(2.000001).epsilon(1e-9));
  CHECK(1 - h * (std::pow(1 + mu, 2) - 1) / mu == doctest::Approx(0.9).epsilon(1e-5));

  const auto p = stars::sphere_make(1);
  stars::FixedStepSolver s(SolverKind::RG, p, h, mu, stars::RngStream(4, 0, stars::Lane::Directions));
  stars::RngStream replay(4, 0, stars::Lane::Directions);
  const double u = stars::gaussian_vector(replay, 1)[0];
  stars::NoisyOracle o(p, {NoiseKind::Additive, 0.0}, stars::RngStream(4, 0));
  s.step(o, 2);
  const double expect = 1 - h * (std::pow(1 + mu * u, 2) - 1) / mu * u;
  CHECK(s.state().x[0] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(p.eval(s.state().x) < p.eval(p.x0));
}

TEST_CASE("evaluation accounting matches the closed forms") {
  const auto f1 = stars::f1_make(8);
  const std::int64_t N = 137;
  SUBCASE("STARS additive: 2N + 1") {
    const auto t = stars::run(iterations(SolverKind::Stars, N), f1, {NoiseKind::Additive, 1e-3}, 1);
    CHECK(t.iterations == N);
    CHECK(t.evaluations == 2 * N + 1);
  }
  SUBCASE("STARS multiplicative: 3N + 1") {
    const auto t = stars::run(iterations(SolverKind::Stars, N), f1, {NoiseKind::Multiplicative, 1e-3}, 1);
    CHECK(t.evaluations == 3 * N + 1);
  }
  SUBCASE("RG, SS, RSGF, ES: 2N") {
    for (SolverKind k : {SolverKind::RG, SolverKind::SS, SolverKind::RSGF, SolverKind::ES}) {
      const auto t = stars::run(iterations(k, N), f1, {NoiseKind::Additive, 1e-3}, 1);
      CHECK(t.evaluations == 2 * N);
    }
  }
  SUBCASE("RP: sum of probes") {
    const auto t = stars::run(iterations(SolverKind::RP, N), f1, {NoiseKind::Additive, 1e-3}, 1);
    const auto per = stars::golden_section_probe_count(10.0, 0.0025);
    CHECK(per == 20);
    CHECK(t.evaluations == per * N);
  }
}

TEST_CASE("manual stepping: oracle counter equals the per-step cost sum") {
  const auto f1 = stars::f1_make(8);
  for (SolverKind k : stars::kAllSolvers) {
    for (NoiseKind nk : {NoiseKind::Additive, NoiseKind::Multiplicative}) {
      const NoiseModel noise{nk, 1e-3};
      auto cfg = iterations(k, 50);
      auto solver = stars::make_solver(cfg, f1, noise, 3, 0);
      stars::NoisyOracle o(f1, noise, stars::RngStream(3, 0));
      solver->init(o);
      std::int64_t expected = solver->init_cost();
      CHECK(o.eval_count() == expected);
      for (int i = 0; i < 50; ++i) {
        solver->step(o, solver->step_cost());
        expected += solver->step_cost();
        REQUIRE(o.eval_count() == expected);
      }
    }
  }
}

TEST_CASE("budget handling") {
  const auto f1 = stars::f1_make(8);
  SUBCASE("budget 0 leaves only the initial record") {
    for (SolverKind k : stars::kAllSolvers) {
      const auto t = stars::run(budget(k, 0), f1, {NoiseKind::Additive, 1e-3}, 1);
      REQUIRE(t.records.size() == 1);
      CHECK(t.records[0].k == 0);
      CHECK(t.records[0].nevals == 0);
      CHECK(t.records[0].acc == doctest::Approx(4.0 / 9));
    }
  }
  SUBCASE("STARS additive, 2001 evaluations, 1000 iterations") {
    const auto t = stars::run(budget(SolverKind::Stars, 2001), f1, {NoiseKind::Additive, 1e-3}, 1);
    CHECK(t.iterations == 1000);
    CHECK(t.evaluations == 2001);
  }
  SUBCASE("the tighter of the two limits binds") {
    auto c = budget(SolverKind::RG, 1000);
    c.iteration_limit = 10;
    CHECK(stars::run(c, f1, {NoiseKind::Additive, 1e-3}, 1).iterations == 10);
    c.iteration_limit = 10000;
    CHECK(stars::run(c, f1, {NoiseKind::Additive, 1e-3}, 1).iterations == 500);
  }
  SUBCASE("RP never exceeds its budget and uses the remainder") {
    const auto t = stars::run(budget(SolverKind::RP, 1005), f1, {NoiseKind::Additive, 1e-3}, 1);
    CHECK(t.evaluations == 1005);
    CHECK(t.iterations == 51);
  }
}

TEST_CASE("trajectory invariants") {
  const auto f1 = stars::f1_make(8);
  for (SolverKind k : stars::kAllSolvers) {
    const auto t = stars::run(iterations(k, 200), f1, {NoiseKind::Multiplicative, 1e-2}, 5);
    REQUIRE(t.records.size() == 201);
    for (size_t i = 0; i < t.records.size(); ++i) {
      const auto& r = t.records[i];
      CHECK(r.k == static_cast<std::int64_t>(i));
      CHECK(r.acc == r.f_true - f1.f_star);
      if (i > 0) CHECK(r.nevals > t.records[i - 1].nevals);
    }
    CHECK(t.records.back().nevals == t.evaluations);
  }
}

TEST_CASE("record_every thins records but keeps the ends") {
  const auto f1 = stars::f1_make(8);
  auto c = iterations(SolverKind::Stars, 95);
  c.record_every = 10;
  const auto t = stars::run(c, f1, {NoiseKind::Additive, 1e-3}, 1);
  CHECK(t.records.front().k == 0);
  CHECK(t.records.back().k == 95);
  CHECK(t.records.size() == 11);
}

TEST_CASE("same seed gives bitwise-identical trajectories; other seeds differ") {
  const auto f1 = stars::f1_make(8);
  for (SolverKind k : stars::kAllSolvers) {
    const auto a = stars::run(budget(k, 600), f1, {NoiseKind::Additive, 1e-3}, 9, 2);
    const auto b = stars::run(budget(k, 600), f1, {NoiseKind::Additive, 1e-3}, 9, 2);
    const auto c = stars::run(budget(k, 600), f1, {NoiseKind::Additive, 1e-3}, 9, 3);
    CHECK(same(a, b));
    CHECK_FALSE(same(a, c));
  }
}

TEST_CASE("RG smoothing step") {
  CHECK(stars::rg_mu(0x1.0p-16, 4, 8) == doctest::Approx(1.91815e-4).epsilon(1e-5));
  CHECK(stars::rg_mu(0.1, 4, 8) == doctest::Approx(1.5528e-2).epsilon(1e-4));
  CHECK(stars::rg_mu(0.4, 4, 8) == doctest::Approx(2 * stars::rg_mu(0.1, 4, 8)).epsilon(1e-15));
}

TEST_CASE("SS step sizes") {
  CHECK(stars::ss_h(std::sqrt(3.0), 8, 9999, 5) == doctest::Approx(std::sqrt(3.0) / 6000).epsilon(1e-14));
  CHECK(stars::ss_h(std::sqrt(3.0), 8, 9999, 5) == doctest::Approx(2.8868e-4).epsilon(1e-4));
  CHECK(stars::ss_mu(0.1, 5, 8) == doctest::Approx(3.5355e-3).epsilon(1e-4));
  CHECK(stars::ss_h(1, 8, 399, 5) == doctest::Approx(2 * stars::ss_h(1, 8, 1599, 5)).epsilon(1e-14));
}

TEST_CASE("RSGF gamma") {
  CHECK(stars::rsgf_gamma(4, 1e-3, 1, 8, 10000) == doctest::Approx(1.0 / 192).epsilon(1e-12));
  CHECK(stars::rsgf_diameter(1, 4, 0.25) == doctest::Approx(std::sqrt(0.5)));
  CHECK(stars::rsgf_diameter(1, 4, std::nullopt) == 1.0);
  CHECK(stars::rsgf_diameter(0, 4, 3.0) == doctest::Approx(std::sqrt(3.0)));
  CHECK(stars::rsgf_diameter(0, 4, std::nullopt) == 1.0);
  for (double s : {1e-6, 1e-3, 1.0, 100.0})
    for (std::int64_t N : {1, 100, 100000})
      CHECK(stars::rsgf_gamma(4, s, 0.0, 8, N, 3.0) <= stars::theory::step_length(4, 8) * (1 + 1e-15));
  // A large noise level makes the second branch bind.
  const double g = stars::rsgf_gamma(4, 100, 0.0, 8, 10000, 3.0);
  CHECK(g == doctest::Approx(std::sqrt(3.0) / (100 * 100) / std::sqrt(12.0)).epsilon(1e-12));
}

TEST_CASE("RSGF estimation does not touch the trial oracle") {
  const auto f1 = stars::f1_make(8);
  const auto t = stars::run(iterations(SolverKind::RSGF, 10), f1, {NoiseKind::Additive, 1e-3}, 1);
  CHECK(t.evaluations == 20);
}

TEST_CASE("golden-section search") {
  SUBCASE("probe count for span 10 and accuracy 0.0025") {
    CHECK(stars::golden_section_probe_count(10, 0.0025) == 20);
    int calls = 0;
    const auto r = stars::golden_section([&](double t) { ++calls; return (t - 1.3) * (t - 1.3); },
                                         10, 0.0025, 1000);
    CHECK(r.completed);
    CHECK(r.probes == 20);
    CHECK(calls == 20);
    CHECK(std::abs(r.t - 1.3) <= 0.0025);
  }
  SUBCASE("runs out of probes and returns the best seen") {
    const auto r = stars::golden_section([](double t) { return std::abs(t - 4.0); }, 10, 0.0025, 5);
    CHECK_FALSE(r.completed);
    CHECK(r.probes == 5);
  }
}

TEST_CASE("RP on the 1-d sphere lands on the minimizer") {
  const auto p = stars::sphere_make(1);
  auto p2 = p;
  p2.x0 = Vector::Constant(1, 2.0);
  stars::RandomPursuitSolver rp(p2, 0.0025, 10, stars::RngStream(1, 0, stars::Lane::Directions));
  stars::NoisyOracle o(p2, {NoiseKind::Additive, 0.0}, stars::RngStream(1, 0));
  rp.step(o, rp.step_cost());
  CHECK(std::abs(rp.state().x[0]) <= 0.0025);
  CHECK(std::abs(rp.last_t() * rp.last_direction()[0] + 2.0) <= 0.0025);
}

TEST_CASE("RP: u and -u give the same next iterate without noise") {
  const auto p = stars::sphere_make(1);
  auto start = p;
  start.x0 = Vector::Constant(1, 2.0);
  const auto line = [&](double u) {
    return stars::golden_section([&](double t) { return start.eval(start.x0 + Vector::Constant(1, t * u)); },
                                 10, 0.0025, 100);
  };
  const auto a = line(1.0);
  const auto b = line(-1.0);
  CHECK(a.t == doctest::Approx(-b.t).epsilon(1e-12));
  CHECK(2.0 + a.t == doctest::Approx(2.0 - b.t).epsilon(1e-9));
}

TEST_CASE("RP step leaves the gradient orthogonal to the search direction") {
  const auto p = stars::f1_make(8);
  stars::RandomPursuitSolver rp(p, 0.0025, 10, stars::RngStream(2, 0, stars::Lane::Directions));
  stars::NoisyOracle o(p, {NoiseKind::Additive, 0.0}, stars::RngStream(2, 0));
  for (int i = 0; i < 20; ++i) {
    rp.step(o, rp.step_cost());
    const Vector& u = rp.last_direction();
    // Bracket half-width times the curvature along u bounds the residual slope.
    const double tol = 0.0025 * p.L1 * u.squaredNorm();
    CHECK(std::abs(p.grad(rp.state().x).dot(u)) <= tol);
  }
}

TEST_CASE("ES constants and acceptance") {
  SolverConfig c;
  CHECK(0.1 * c.es.c_s == doctest::Approx(0.13956).epsilon(1e-12));
  CHECK(0.1 * c.es.c_f == doctest::Approx(0.08840).epsilon(1e-12));
  CHECK(c.es.p == 0.27);
  CHECK(stars::EvolutionStrategySolver::accepts(1.0, 1.0));
  CHECK(stars::EvolutionStrategySolver::accepts(0.5, 1.0));
  CHECK_FALSE(stars::EvolutionStrategySolver::accepts(1.5, 1.0));
}

TEST_CASE("ES acceptance depends only on the order of the compared values") {
  const std::function<double(double)> transforms[] = {
      [](double v) { return std::exp(v); },
      [](double v) { return 3 * v - 7; },
      [](double v) { return std::atan(v); },
      [](double v) { return v * v * v; },
  };
  stars::RngStream rng(12, 0);
  for (int i = 0; i < 1000; ++i) {
    const double a = 4 * rng.uniform01() - 2;
    const double b = i % 10 == 0 ? a : 4 * rng.uniform01() - 2;
    for (const auto& g : transforms) {
      CHECK(stars::EvolutionStrategySolver::accepts(g(a), g(b)) ==
            stars::EvolutionStrategySolver::accepts(a, b));
    }
  }
}

TEST_CASE("ES step size follows accept/reject") {
  const auto p = stars::sphere_make(8);
  stars::EsParams params;
  params.sigma0 = 0.1;
  stars::EvolutionStrategySolver es(p, params, stars::RngStream(3, 0, stars::Lane::Directions));
  stars::NoisyOracle o(p, {NoiseKind::Additive, 0.0}, stars::RngStream(3, 0));
  double prev_acc = p.eval(es.state().x);
  for (int i = 0; i < 500; ++i) {
    const double sigma = es.state().es_sigma;
    const Vector before = es.state().x;
    es.step(o, 2);
    const bool moved = es.state().x != before;
    CHECK(es.state().es_sigma == doctest::Approx(sigma * (moved ? 1.3956 : 0.8840)).epsilon(1e-15));
    const double acc = p.eval(es.state().x);
    CHECK(acc <= prev_acc);
    prev_acc = acc;
  }
}

TEST_CASE("every solver solves the noiseless sphere") {
  const auto p = stars::sphere_make(8);
  for (SolverKind k : stars::kAllSolvers) {
    auto c = budget(k, 100000);
    // STARS needs a positive assumed noise level to set its smoothing step.
    c.stars.sigma = 1e-8;
    const auto t = stars::run(c, p, {NoiseKind::Additive, 0.0}, 1);
    CHECK_MESSAGE(t.records.back().acc <= 1e-3, stars::to_string(k), " acc ", t.records.back().acc);
  }
}

TEST_CASE("STARS decreases f1 accuracy in expectation") {
  const auto f1 = stars::f1_make(8);
  double early = 0.0;
  double late = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto t = stars::run(budget(SolverKind::Stars, 20000), f1, {NoiseKind::Additive, 1e-3}, 0, s);
    const auto at = [&](std::int64_t e) {
      const auto it = std::find_if(t.records.rbegin(), t.records.rend(),
                                   [&](const auto& r) { return r.nevals <= e; });
      return it->acc;
    };
    early += at(1000);
    late += at(20000);
  }
  CHECK(late < early);
}

TEST_CASE("a non-finite gradient surrogate aborts the trial with a reason") {
  // A relative noise level near its limit with a huge start makes the
  // forward difference overflow.
  auto p = stars::sphere_make(2);
  p.x0 = Vector::Constant(2, 1e200);
  const auto t = stars::run(iterations(SolverKind::Stars, 50), p, {NoiseKind::Multiplicative, 0.5}, 1);
  CHECK(t.aborted);
  CHECK_FALSE(t.abort_reason.empty());
  CHECK(t.records.size() >= 1);
}
