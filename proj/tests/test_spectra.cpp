#include <algorithm>
#include <cmath>

#include <doctest.h>
#include <omp.h>

#include "iqa/oracle.hpp"
#include "iqa/spectra.hpp"

using namespace iqa;

TEST_CASE("Kitaev couplings produce the field -2 eps (vx, 0, vz)") {
  for (int n : {6, 20}) {
    const BasisDescriptor b(n, 3);
    for (double lam : {0.0, 0.3, 0.5, 1.0}) {
      const auto field = field_of(kitaev_couplings(lam, b));
      for (std::size_t q = 0; q < field.grid.size(); ++q) {
        const auto t = target_bloch(lam, field.grid.ks[q]);
        CHECK(field.w[q].x() == doctest::Approx(-2 * t.eps * t.vx).epsilon(1e-12));
        CHECK(std::abs(field.w[q].y()) < 1e-13);
        CHECK(field.w[q].z() == doctest::Approx(-2 * t.eps * t.vz).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("ground energy of the Kitaev couplings matches exact diagonalization") {
  for (int n : {4, 6, 8}) {
    for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const auto h = kitaev_couplings(lam, BasisDescriptor(n, 1));
      const double dense = oracle::ground_energy(oracle::kitaev_hamiltonian(lam, n));
      CHECK(energy(h) == doctest::Approx(dense).epsilon(1e-12));
      double sum = 0;
      for (double k : momentum_grid(n).ks) sum += target_bloch(lam, k).eps;
      CHECK(energy(h) == doctest::Approx(-2 * sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("fidelity of the exact parent Hamiltonian is one") {
  for (double lam : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const auto r = fidelity(kitaev_couplings(lam, BasisDescriptor(30, 4)), lam);
    CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.degenerate_modes.empty());
    CHECK(r.per_k.size() == 15);
  }
}

TEST_CASE("fidelity matches the dense ground-state overlap") {
  for (int n : {4, 6, 8}) {
    const BasisDescriptor b(n, n / 2);
    Eigen::VectorXd raw(b.size());
    for (Eigen::Index i = 0; i < raw.size(); ++i) raw[i] = std::cos(1.3 * i + 0.2);
    const CouplingVector h(b, raw);
    for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      CHECK(std::abs(fidelity(h, lam).fidelity - oracle::dense_ground_overlap(h, lam)) < 1e-10);
      const auto wrong = kitaev_couplings(1.0 - lam, b);
      CHECK(std::abs(fidelity(wrong, lam).fidelity - oracle::dense_ground_overlap(wrong, lam)) <
            1e-10);
    }
  }
}

TEST_CASE("fidelity is scale invariant and lies in [0, 1]") {
  const BasisDescriptor b(12, 3);
  Eigen::VectorXd raw = Eigen::VectorXd::LinSpaced(b.size(), -1.0, 1.5);
  const CouplingVector h(b, raw);
  const double f = fidelity(h, 0.6).fidelity;
  CHECK(f >= 0.0);
  CHECK(f <= 1.0);
  CHECK(fidelity(h.scaled(7.5), 0.6).fidelity == doctest::Approx(f).epsilon(1e-14));
}

TEST_CASE("zero field gives degenerate modes worth one half each") {
  const BasisDescriptor b(10, 2);
  const CouplingVector zero(b, Eigen::VectorXd::Zero(b.size()));
  const auto r = fidelity(zero, 0.4);
  CHECK(r.degenerate_modes.size() == 5);
  CHECK(r.fidelity == doctest::Approx(std::pow(0.5, 5)));
}

TEST_CASE("a single vanishing mode is flagged degenerate") {
  // N = 4: w_x(k) = h_1X sin k + h_2X sin(2k)/sqrt2, which vanishes at
  // k = 3pi/4 when h_1X = h_2X.
  const BasisDescriptor b(4, 2);
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(b.size());
  raw[*b.index_of(1, Axis::X)] = 1.0;
  raw[*b.index_of(2, Axis::X)] = 1.0;
  const CouplingVector h(b, raw);
  const auto field = field_of(h);
  CHECK(field.w[0].x() == doctest::Approx(std::sqrt(2.0)));
  const auto g = ground_state_bloch(field, default_degeneracy_tol(field));
  REQUIRE(g.degenerate.size() == 1);
  CHECK(g.degenerate[0] == 1);
  const auto r = fidelity(h, 1.0);
  CHECK(r.degenerate_modes.size() == 1);
  CHECK(r.per_k[1] == 0.5);
}

TEST_CASE("parallel field is bit-identical to the serial one") {
  const BasisDescriptor b(60, 30);
  const FourierMatrix f(b);
  const CouplingVector h(b, Eigen::VectorXd::LinSpaced(b.size(), -2.0, 1.0));
  const auto serial = reference::field_of_serial(h, f);
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    const auto par = field_of(h, f);
    for (std::size_t q = 0; q < serial.w.size(); ++q) CHECK(par.w[q] == serial.w[q]);
  }
  omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("sorted magnitudes are ascending field norms") {
  const auto field = field_of(kitaev_couplings(0.5, BasisDescriptor(8, 1)));
  const auto m = sorted_magnitudes(field);
  CHECK(std::is_sorted(m.begin(), m.end()));
  CHECK(m.front() == doctest::Approx(2 * std::sqrt(1 + std::cos(7 * M_PI / 8))));
}
