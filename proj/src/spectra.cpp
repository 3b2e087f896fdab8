#include "iqa/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iqa {

namespace {

void check_fourier(const CouplingVector& h, const FourierMatrix& fourier) {
  if (!(h.basis() == fourier.basis())) {
    throw std::invalid_argument("coupling vector and Fourier matrix use different bases");
  }
}

inline Eigen::Vector3d mode_field(const CouplingVector& h, const FourierMatrix& f,
                                  Eigen::Index q) {
  Eigen::Vector3d w = Eigen::Vector3d::Zero();
  const auto& basis = h.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    w[static_cast<Eigen::Index>(basis[i].axis)] +=
        f.coefficients()(static_cast<Eigen::Index>(i), q) * h[i];
  }
  return w;
}

}  // namespace

BlochField field_of(const CouplingVector& h, const FourierMatrix& fourier) {
  check_fourier(h, fourier);
  BlochField out{fourier.grid(), std::vector<Eigen::Vector3d>(fourier.grid().size())};
  const auto nk = static_cast<Eigen::Index>(out.w.size());
#pragma omp parallel for schedule(static)
  for (Eigen::Index q = 0; q < nk; ++q) out.w[static_cast<std::size_t>(q)] = mode_field(h, fourier, q);
  return out;
}

BlochField field_of(const CouplingVector& h) { return field_of(h, FourierMatrix(h.basis())); }

namespace reference {

BlochField field_of_serial(const CouplingVector& h, const FourierMatrix& fourier) {
  check_fourier(h, fourier);
  BlochField out{fourier.grid(), std::vector<Eigen::Vector3d>(fourier.grid().size())};
  for (std::size_t q = 0; q < out.w.size(); ++q) {
    out.w[q] = mode_field(h, fourier, static_cast<Eigen::Index>(q));
  }
  return out;
}

}  // namespace reference

double default_degeneracy_tol(const BlochField& field) {
  double wmax = 0.0;
  for (const auto& w : field.w) wmax = std::max(wmax, w.norm());
  return std::max(1e-12 * wmax, 1e-300);
}

GroundStateBloch ground_state_bloch(const BlochField& field, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("degeneracy tolerance must be positive");
  GroundStateBloch gs;
  gs.directions.reserve(field.w.size());
  for (std::size_t q = 0; q < field.w.size(); ++q) {
    const double n = field.w[q].norm();
    if (n < tol) {
      gs.directions.push_back(Eigen::Vector3d::Zero());
      gs.degenerate.push_back(q);
    } else {
      gs.directions.push_back(-field.w[q] / n);
    }
  }
  return gs;
}

FidelityReport fidelity(const CouplingVector& h, double lambda, const FourierMatrix& fourier) {
  check_lambda(lambda);
  const BlochField field = field_of(h, fourier);
  const GroundStateBloch gs = ground_state_bloch(field, default_degeneracy_tol(field));

  FidelityReport rep;
  rep.lambda = lambda;
  rep.l = h.basis().max_range();
  rep.per_k.resize(field.w.size());
  std::vector<bool> degenerate(field.w.size(), false);
  for (std::size_t q : gs.degenerate) {
    degenerate[q] = true;
    rep.degenerate_modes.push_back(field.grid.ks[q]);
  }
  rep.fidelity = 1.0;
  for (std::size_t q = 0; q < field.w.size(); ++q) {
    double f = 0.5;
    if (!degenerate[q]) {
      const TargetBloch m = target_bloch(lambda, field.grid.ks[q]);
      const Eigen::Vector3d& n = gs.directions[q];
      f = std::clamp(0.5 * (1.0 + n.x() * m.vx + n.z() * m.vz), 0.0, 1.0);
    }
    rep.per_k[q] = f;
    rep.fidelity *= f;
  }
  return rep;
}

FidelityReport fidelity(const CouplingVector& h, double lambda) {
  return fidelity(h, lambda, FourierMatrix(h.basis()));
}

double energy(const BlochField& field) {
  double e = 0.0;
  for (const auto& w : field.w) e -= w.norm();
  return e;
}

double energy(const CouplingVector& h) { return energy(field_of(h)); }

std::vector<double> sorted_magnitudes(const BlochField& field) {
  std::vector<double> out;
  out.reserve(field.w.size());
  for (const auto& w : field.w) out.push_back(w.norm());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace iqa
