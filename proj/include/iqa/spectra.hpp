#pragma once

// Pseudospin field of a coupling vector, its ground state, and fidelity
// against the target path.

#include <vector>

#include <Eigen/Dense>

#include "iqa/commutator.hpp"
#include "iqa/model.hpp"

namespace iqa {

/// H = sum_k w_k . sigma_k over the positive momenta.
struct BlochField {
  MomentumGrid grid;
  std::vector<Eigen::Vector3d> w;
};

/// w = F^T h, i.e. w_k^alpha = sum_i h_i scale_i (2/sqrt(N)) f_alpha(m_i k).
BlochField field_of(const CouplingVector& h);
BlochField field_of(const CouplingVector& h, const FourierMatrix& fourier);

namespace reference {
BlochField field_of_serial(const CouplingVector& h, const FourierMatrix& fourier);
}

struct GroundStateBloch {
  std::vector<Eigen::Vector3d> directions;  // unit vectors; zero for degenerate modes
  std::vector<std::size_t> degenerate;      // grid indices with |w_k| < tol
};

/// Default tie-break threshold: 1e-12 * max_k |w_k|, floored at 1e-300.
double default_degeneracy_tol(const BlochField& field);

/// n_k = -w_k / |w_k|.
GroundStateBloch ground_state_bloch(const BlochField& field, double tol);

struct FidelityReport {
  double lambda = 0.0;
  int l = 0;
  double fidelity = 0.0;
  std::vector<double> per_k;
  std::vector<double> degenerate_modes;  // momenta k
};

/// Product over k of (1 + n_k . m_k)/2 with m_k the target Bloch vector.
/// Degenerate modes contribute 1/2.
FidelityReport fidelity(const CouplingVector& h, double lambda);
FidelityReport fidelity(const CouplingVector& h, double lambda, const FourierMatrix& fourier);

/// Ground energy -sum_k |w_k|.
double energy(const CouplingVector& h);
double energy(const BlochField& field);

/// Sorted per-mode magnitudes |w_k|; invariant under the full-basis flow.
std::vector<double> sorted_magnitudes(const BlochField& field);

}  // namespace iqa
