#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "movwave/expr.hpp"
#include "movwave/parallel.hpp"
#include "movwave/trajectory.hpp"
#include "movwave/transform.hpp"

namespace movwave::hyperbolic {

using transform::Coeff1D;
using transform::CoefficientField1D;

struct GalerkinMatrices {
  double t = 0.0;
  MatX stiffness;  // <B w_l', w_k'>
  MatX drift;      // <a w_l', w_k>
  MatX transport;  // <b w_l', w_k>
  VecX load;       // <g, w_k>
};

class GalerkinSystem {
 public:
  GalerkinSystem(SpectralBasis basis, CoefficientField1D coeffs, int panels, Exec exec);

  GalerkinMatrices at(double t) const;
  GalerkinMatrices at(double t, Exec exec) const;
  // Coefficients <fn, w_k> by the system quadrature.
  VecX project(const std::function<double(double)>& fn) const;

  const SpectralBasis& basis() const { return basis_; }
  const CoefficientField1D& coefficients() const { return coeffs_; }
  int modes() const { return basis_.modes(); }
  int panels() const { return panels_; }
  int quadrature_nodes() const { return static_cast<int>(nodes_.size()); }

 private:
  SpectralBasis basis_;
  CoefficientField1D coeffs_;
  int panels_;
  Exec exec_;
  std::vector<double> nodes_, weights_;
  MatX values_, derivatives_;  // Q x m
};

// Quadrature panels doubled until matrix entries change by less than 1e-10.
GalerkinSystem assemble(const SpectralBasis& basis, const CoefficientField1D& coeffs, Exec exec = Exec::Parallel);

// RK4 for d'' = g + 2 Bb d' - (Bm + Am) d.
Trajectory integrate(const GalerkinSystem& system, const VecX& d0, const VecX& d1, double dt, double horizon);

struct InitialData1D {
  std::function<double(double)> v0;
  std::function<double(double)> v1;
};

// Method-of-lines operator on a uniform grid with Dirichlet ends.
class FdOperator {
 public:
  FdOperator(const CoefficientField1D& coeffs, int cells, Exec exec = Exec::Parallel);

  int cells() const { return cells_; }
  double h() const { return h_; }
  const std::vector<double>& nodes() const { return nodes_; }

  void acceleration(double t, const VecX& v, const VecX& vt, VecX& acc) const;
  void step(double t, double dt, VecX& v, VecX& vt) const;
  // 0.9 h / sqrt(max B) at time t.
  double stable_dt(double t) const;

 private:
  const std::vector<Coeff1D>& coefficients_at(double t) const;

  CoefficientField1D coeffs_;
  int cells_;
  double h_;
  Exec exec_;
  std::vector<double> nodes_, points_;  // points_ interleaves nodes and midpoints
  mutable std::vector<std::pair<double, std::vector<Coeff1D>>> cache_;
};

Trajectory solve_fd(const CoefficientField1D& coeffs, int cells, const InitialData1D& data, double dt,
                    double horizon, Exec exec = Exec::Parallel);

struct CylinderOptions {
  int cells = 400;
  double dt = 1e-3;
};

struct CylinderResult {
  Trajectory trajectory;  // physical frame, grid spanning the frozen domain
  std::vector<double> partition_times;
  std::vector<double> energy_before;  // discrete energy at each partition end, before restart
  std::vector<double> energy_after;   // after the zero-extended restart
  std::vector<double> work;           // cumulative work of f at partition ends
  double initial_energy = 0.0;
};

// Frozen-domain time discretization on a nondecreasing 1D family.
CylinderResult solve_cylinder(const geometry::MotionFamily& fam, const Expr& u0, const Expr& u1,
                              const SpaceTimeField& f, int partitions, const CylinderOptions& options = {},
                              Exec exec = Exec::Parallel);

// Discrete energy 1/2 sum h vt^2 + 1/2 sum ((v_{i+1} - v_i)/h)^2 h on a uniform grid.
double grid_energy(const VecX& v, const VecX& vt, double h);

struct Probe {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

std::vector<Probe> basis_probes(const SpectralBasis& basis, int count = 8);

// Max over interior stored times and probes of the strong-weak residual.
double weak_residual(const Trajectory& traj, const CoefficientField1D& coeffs, const std::vector<Probe>& probes,
                     Exec exec = Exec::Parallel);

}  // namespace movwave::hyperbolic
