#include <cmath>

#include <doctest.h>
#include <omp.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "iqa/annealer.hpp"
#include "iqa/spectra.hpp"

using namespace iqa;

TEST_CASE("schedule is linear and clamps at the ends") {
  const Schedule s(200.0);
  CHECK(s.lambda_at(0.0) == 0.0);
  CHECK(s.lambda_at(50.0) == 0.25);
  CHECK(s.lambda_at(200.0) == 1.0);
  CHECK_THROWS_AS(Schedule(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Schedule(-3.0), std::invalid_argument);
}

TEST_CASE("integrator step count respects the time step and the sample grid") {
  const Schedule s(1234.5);
  const auto cfg = IntegratorConfig::for_schedule(s, 10.0, 201);
  CHECK(cfg.steps >= 12345);
  CHECK(cfg.steps % 200 == 0);
  CHECK(s.total_time() / cfg.steps <= kMaxTimeStep);
  CHECK_NOTHROW(cfg.validate(s));
  IntegratorConfig coarse{100, 101};
  CHECK_THROWS_AS(coarse.validate(s), std::invalid_argument);
  IntegratorConfig ragged{20001, 201};
  CHECK_THROWS_AS(ragged.validate(Schedule(2000.0)), std::invalid_argument);
}

TEST_CASE("frozen generator matches the matrix exponential") {
  for (int l : {2, 4}) {
    const FourierMatrix f{BasisDescriptor(8, l)};
    const double lam = 0.3;
    const Eigen::MatrixXd k = commutator_matrix(lam, f).entries;
    Eigen::VectorXd h0 = kitaev_couplings(0.8, f.basis()).h();
    h0 /= h0.norm();
    for (double t : {1.0, 10.0, 100.0}) {
      const Eigen::MatrixXd k_t = k * t;
      const Eigen::VectorXd exact = k_t.exp() * h0;
      const auto steps = static_cast<std::int64_t>(std::ceil(t / 0.005));
      const Eigen::VectorXd rk4 = propagate_frozen(f, lam, h0, t, steps);
      CHECK((rk4 - exact).norm() < 1e-8);
    }
  }
}

TEST_CASE("annealing conserves the coupling norm") {
  for (int l : {3, 10}) {
    const auto tr = anneal(AnnealParams{20, l, 10.0, 51}, 2000.0);
    CHECK(tr.meta.max_norm_drift < kNormDriftTolerance);
    for (const auto& s : tr.samples) CHECK(std::abs(s.h.norm() - 1.0) < kNormDriftTolerance);
  }
}

TEST_CASE("trajectory samples sit on the uniform lambda grid") {
  const auto tr = anneal(AnnealParams{10, 2, 10.0, 11}, 100.0);
  REQUIRE(tr.samples.size() == 11);
  for (std::size_t i = 0; i < 11; ++i) {
    CHECK(tr.samples[i].lambda == doctest::Approx(i / 10.0).epsilon(1e-15));
    CHECK(tr.samples[i].t == doctest::Approx(10.0 * i).epsilon(1e-13));
  }
  CHECK(tr.index_of_lambda(0.3) == 3u);
  CHECK_FALSE(tr.index_of_lambda(0.35).has_value());
  CHECK(tr.samples.front().h == default_start(tr.basis).h());
}

TEST_CASE("full-basis flow keeps every per-momentum field magnitude") {
  const int n = 24;
  const auto tr = anneal(AnnealParams{n, n / 2, 10.0, 21}, 500.0);
  const auto initial = sorted_magnitudes(field_of(tr.couplings(0)));
  for (std::size_t i = 1; i < tr.samples.size(); ++i) {
    const auto m = sorted_magnitudes(field_of(tr.couplings(i)));
    for (std::size_t q = 0; q < m.size(); ++q) CHECK(std::abs(m[q] - initial[q]) < 1e-6);
  }
}

TEST_CASE("flow is linear in the initial couplings") {
  const BasisDescriptor b(14, 4);
  const Schedule s(300.0);
  const auto cfg = IntegratorConfig::for_schedule(s, 10.0, 7);
  const CouplingVector a(b, Eigen::VectorXd::LinSpaced(b.size(), 0.5, -1.0));
  const CouplingVector c(b, Eigen::VectorXd::LinSpaced(b.size(), -0.2, 0.9));
  const CouplingVector mix(b, 2.0 * a.h() - 0.5 * c.h());
  const auto ta = anneal(a, s, cfg), tc = anneal(c, s, cfg), tm = anneal(mix, s, cfg);
  for (std::size_t i = 0; i < tm.samples.size(); ++i) {
    const Eigen::VectorXd lin = 2.0 * ta.samples[i].h - 0.5 * tc.samples[i].h;
    CHECK((tm.samples[i].h - lin).norm() < 1e-12 * lin.norm());
  }
}

TEST_CASE("slow anneals track the target ground state") {
  const auto tr = anneal(AnnealParams{12, 6, 10.0, 11}, 4000.0);
  for (const auto& s : tr.samples) {
    CHECK(fidelity(CouplingVector(tr.basis, s.h), s.lambda).fidelity > 0.999);
  }
}

TEST_CASE("batched runs are bit-identical to serial runs in input order") {
  const std::vector<RunSpec> runs = {
      {{12, 2, 10.0, 5}, 100.0}, {{16, 8, 10.0, 5}, 60.0}, {{10, 5, 20.0, 9}, 80.0}};
  const auto serial = reference::anneal_batch_serial(runs);
  for (int threads : {1, 3}) {
    const auto par = anneal_batch(runs, threads);
    REQUIRE(par.size() == serial.size());
    for (std::size_t r = 0; r < par.size(); ++r) {
      CHECK(par[r].meta.n_sites == runs[r].params.n_sites);
      for (std::size_t i = 0; i < par[r].samples.size(); ++i) {
        CHECK(par[r].samples[i].h == serial[r].samples[i].h);
      }
    }
  }
}

TEST_CASE("pair runs share the sample grid") {
  const auto [a, b] = anneal_pair(AnnealParams{10, 3, 10.0, 21}, 50.0);
  CHECK(a.schedule.total_time() == 50.0);
  CHECK(b.schedule.total_time() == 100.0);
  CHECK(a.lambdas() == b.lambdas());
}

TEST_CASE("batch errors propagate to the caller") {
  const std::vector<RunSpec> runs = {{{12, 2, 10.0, 5}, 100.0}, {{12, 9, 10.0, 5}, 100.0}};
  CHECK_THROWS_AS(anneal_batch(runs), std::invalid_argument);
}

TEST_CASE("integration error reports step and drift") {
  const IntegrationError e(42, 3e-5);
  CHECK(e.step() == 42);
  CHECK(e.drift() == 3e-5);
  CHECK(std::string(e.what()).find("42") != std::string::npos);
}
