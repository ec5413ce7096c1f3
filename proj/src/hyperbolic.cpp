#include "movwave/hyperbolic.hpp"

#include <algorithm>
#include <cmath>

#include "movwave/error.hpp"
#include "movwave/quadrature.hpp"

namespace movwave::hyperbolic {

namespace {

constexpr double kBlowUp = 1e12;

int step_count(double horizon, double dt) {
  if (!(dt > 0.0) || !(horizon > 0.0)) throw Error(Errc::InvalidArgument, "dt and horizon must be positive");
  return std::max(1, static_cast<int>(std::ceil(horizon / dt - 1e-9)));
}

void check_state(const VecX& a, const VecX& b, double t) {
  if (!a.allFinite() || !b.allFinite() || a.cwiseAbs().maxCoeff() > kBlowUp || b.cwiseAbs().maxCoeff() > kBlowUp)
    throw Error(Errc::BlowUp, "state exceeded 1e12 at t=" + std::to_string(t));
}

}  // namespace

// ---------------------------------------------------------------- Galerkin

GalerkinSystem::GalerkinSystem(SpectralBasis basis, CoefficientField1D coeffs, int panels, Exec exec)
    : basis_(basis), coeffs_(std::move(coeffs)), panels_(panels), exec_(exec) {
  const QuadratureRule rule = composite_gauss(basis_.lo(), basis_.lo() + basis_.length(), panels, 8);
  nodes_ = rule.nodes;
  weights_ = rule.weights;
  const auto q = static_cast<Eigen::Index>(nodes_.size());
  const int m = basis_.modes();
  values_.resize(q, m);
  derivatives_.resize(q, m);
  for (Eigen::Index i = 0; i < q; ++i)
    for (int k = 0; k < m; ++k) {
      values_(i, k) = basis_.value(k + 1, nodes_[static_cast<std::size_t>(i)]);
      derivatives_(i, k) = basis_.derivative(k + 1, nodes_[static_cast<std::size_t>(i)]);
    }
}

GalerkinMatrices GalerkinSystem::at(double t) const { return at(t, exec_); }

GalerkinMatrices GalerkinSystem::at(double t, Exec exec) const {
  std::vector<Coeff1D> c(nodes_.size());
  coeffs_.sample(t, nodes_, c, exec);
  const auto q = static_cast<Eigen::Index>(nodes_.size());
  VecX wb(q), wa(q), wt(q), wg(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    const auto& ci = c[static_cast<std::size_t>(i)];
    const double w = weights_[static_cast<std::size_t>(i)];
    wb(i) = w * ci.B;
    wa(i) = w * ci.a;
    wt(i) = w * ci.b;
    wg(i) = w * ci.g;
  }
  GalerkinMatrices g;
  g.t = t;
  const int m = basis_.modes();
  g.stiffness = derivatives_.transpose() * (wb.asDiagonal() * derivatives_);
  g.drift = wa.isZero(0.0) ? MatX::Zero(m, m) : MatX(values_.transpose() * (wa.asDiagonal() * derivatives_));
  g.transport = wt.isZero(0.0) ? MatX::Zero(m, m) : MatX(values_.transpose() * (wt.asDiagonal() * derivatives_));
  g.load = values_.transpose() * wg;
  return g;
}

VecX GalerkinSystem::project(const std::function<double(double)>& fn) const {
  VecX w(static_cast<Eigen::Index>(nodes_.size()));
  for (std::size_t i = 0; i < nodes_.size(); ++i) w(static_cast<Eigen::Index>(i)) = weights_[i] * fn(nodes_[i]);
  return values_.transpose() * w;
}

GalerkinSystem assemble(const SpectralBasis& basis, const CoefficientField1D& coeffs, Exec exec) {
  auto max_diff = [](const GalerkinMatrices& a, const GalerkinMatrices& b) {
    double d = (a.stiffness - b.stiffness).cwiseAbs().maxCoeff();
    d = std::max(d, (a.drift - b.drift).cwiseAbs().maxCoeff());
    d = std::max(d, (a.transport - b.transport).cwiseAbs().maxCoeff());
    return std::max(d, (a.load - b.load).cwiseAbs().maxCoeff());
  };
  const double T = coeffs.horizon();
  int panels = std::max(4, basis.modes() / 2);
  for (;; panels *= 2) {
    const GalerkinSystem coarse(basis, coeffs, panels, exec), fine(basis, coeffs, 2 * panels, exec);
    double diff = 0.0;
    for (double t : {0.0, T}) {
      const GalerkinMatrices a = coarse.at(t), b = fine.at(t);
      if (!a.stiffness.allFinite() || !a.drift.allFinite() || !a.load.allFinite())
        throw Error(Errc::QuadratureFailure, "non-finite Galerkin entries");
      diff = std::max(diff, max_diff(a, b));
    }
    if (diff < 1e-10) return coarse;
    if (panels >= 4096) throw Error(Errc::QuadratureFailure, "Galerkin quadrature did not converge");
  }
}

Trajectory integrate(const GalerkinSystem& system, const VecX& d0, const VecX& d1, double dt, double horizon) {
  const int steps = step_count(horizon, dt);
  const double h = horizon / steps;
  Trajectory traj;
  traj.representation = Trajectory::Representation::Modal;
  traj.frame = Trajectory::Frame::Reference;
  traj.lo = system.basis().lo();
  traj.length = system.basis().length();
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.values.reserve(static_cast<std::size_t>(steps) + 1);
  traj.velocities.reserve(static_cast<std::size_t>(steps) + 1);

  auto accel = [](const GalerkinMatrices& m, const VecX& d, const VecX& dd) -> VecX {
    return m.load + 2.0 * (m.transport * dd) - (m.stiffness + m.drift) * d;
  };
  VecX d = d0, dd = d1;
  traj.times.push_back(0.0);
  traj.values.push_back(d);
  traj.velocities.push_back(dd);
  GalerkinMatrices m0 = system.at(0.0);
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    const GalerkinMatrices mh = system.at(t + 0.5 * h);
    GalerkinMatrices m1 = system.at((s + 1 == steps) ? horizon : t + h);
    const VecX k1d = dd, k1v = accel(m0, d, dd);
    const VecX k2d = dd + 0.5 * h * k1v, k2v = accel(mh, d + 0.5 * h * k1d, k2d);
    const VecX k3d = dd + 0.5 * h * k2v, k3v = accel(mh, d + 0.5 * h * k2d, k3d);
    const VecX k4d = dd + h * k3v, k4v = accel(m1, d + h * k3d, k4d);
    d += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    dd += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    check_state(d, dd, t + h);
    traj.times.push_back((s + 1 == steps) ? horizon : t + h);
    traj.values.push_back(d);
    traj.velocities.push_back(dd);
    m0 = std::move(m1);
  }
  return traj;
}

// ---------------------------------------------------------------- finite differences

FdOperator::FdOperator(const CoefficientField1D& coeffs, int cells, Exec exec)
    : coeffs_(coeffs), cells_(cells), exec_(exec) {
  if (cells < 8) throw Error(Errc::InvalidArgument, "finite-difference grid needs at least 8 cells");
  h_ = (coeffs.hi() - coeffs.lo()) / cells;
  nodes_.resize(static_cast<std::size_t>(cells) + 1);
  points_.resize(2 * static_cast<std::size_t>(cells) + 1);
  for (int i = 0; i <= cells; ++i) nodes_[static_cast<std::size_t>(i)] = coeffs.lo() + i * h_;
  for (int i = 0; i <= 2 * cells; ++i) points_[static_cast<std::size_t>(i)] = coeffs.lo() + 0.5 * i * h_;
  nodes_.back() = points_.back() = coeffs.hi();
}

const std::vector<Coeff1D>& FdOperator::coefficients_at(double t) const {
  for (const auto& entry : cache_)
    if (entry.first == t) return entry.second;
  if (cache_.size() >= 3) cache_.erase(cache_.begin());
  std::vector<Coeff1D> c(points_.size());
  coeffs_.sample(t, points_, c, exec_);
  cache_.emplace_back(t, std::move(c));
  return cache_.back().second;
}

void FdOperator::acceleration(double t, const VecX& v, const VecX& vt, VecX& acc) const {
  const std::vector<Coeff1D>& c = coefficients_at(t);
  const int n = cells_;
  const double h = h_;
  acc.resize(n + 1);
  acc(0) = acc(n) = 0.0;
  for (int i = 1; i < n; ++i) {
    const auto node = static_cast<std::size_t>(2 * i);
    const double fp = c[node + 1].B * (v(i + 1) - v(i)) / h;
    const double fm = c[node - 1].B * (v(i) - v(i - 1)) / h;
    acc(i) = (fp - fm) / h - c[node].a * (v(i + 1) - v(i - 1)) / (2.0 * h) +
             c[node].b * (vt(i + 1) - vt(i - 1)) / h + c[node].g;
  }
}

void FdOperator::step(double t, double dt, VecX& v, VecX& vt) const {
  VecX a1, a2, a3, a4;
  acceleration(t, v, vt, a1);
  const VecX v2 = v + 0.5 * dt * vt, w2 = vt + 0.5 * dt * a1;
  acceleration(t + 0.5 * dt, v2, w2, a2);
  const VecX v3 = v + 0.5 * dt * w2, w3 = vt + 0.5 * dt * a2;
  acceleration(t + 0.5 * dt, v3, w3, a3);
  const VecX v4 = v + dt * w3, w4 = vt + dt * a3;
  acceleration(t + dt, v4, w4, a4);
  v += dt / 6.0 * (vt + 2.0 * w2 + 2.0 * w3 + w4);
  vt += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  v(0) = v(cells_) = 0.0;
  vt(0) = vt(cells_) = 0.0;
}

double FdOperator::stable_dt(double t) const {
  const std::vector<Coeff1D>& c = coefficients_at(t);
  double bmax = 0.0;
  for (const auto& ci : c) bmax = std::max(bmax, ci.B);
  return bmax > 0.0 ? 0.9 * h_ / std::sqrt(bmax) : 1e300;
}

Trajectory solve_fd(const CoefficientField1D& coeffs, int cells, const InitialData1D& data, double dt,
                    double horizon, Exec exec) {
  const FdOperator op(coeffs, cells, exec);
  const int steps = step_count(horizon, dt);
  const double h = horizon / steps;
  VecX v(cells + 1), vt(cells + 1);
  for (int i = 0; i <= cells; ++i) {
    const double y = op.nodes()[static_cast<std::size_t>(i)];
    v(i) = data.v0 ? data.v0(y) : 0.0;
    vt(i) = data.v1 ? data.v1(y) : 0.0;
  }
  v(0) = v(cells) = vt(0) = vt(cells) = 0.0;

  Trajectory traj;
  traj.representation = Trajectory::Representation::Grid;
  traj.frame = Trajectory::Frame::Reference;
  traj.lo = coeffs.lo();
  traj.length = coeffs.hi() - coeffs.lo();
  traj.times.push_back(0.0);
  traj.values.push_back(v);
  traj.velocities.push_back(vt);
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    if (h > op.stable_dt(t))
      throw Error(Errc::CflViolation, "dt=" + std::to_string(h) + " exceeds 0.9 h / sqrt(max B)=" +
                                          std::to_string(op.stable_dt(t)) + " at t=" + std::to_string(t));
    op.step(t, h, v, vt);
    check_state(v, vt, t + h);
    traj.times.push_back((s + 1 == steps) ? horizon : t + h);
    traj.values.push_back(v);
    traj.velocities.push_back(vt);
  }
  return traj;
}

// ---------------------------------------------------------------- cylinder scheme

double grid_energy(const VecX& v, const VecX& vt, double h) {
  const auto n = v.size() - 1;
  double kinetic = 0.0, potential = 0.0;
  for (Eigen::Index i = 0; i <= n; ++i) kinetic += ((i == 0 || i == n) ? 0.5 : 1.0) * h * vt(i) * vt(i);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = (v(i + 1) - v(i)) / h;
    potential += h * d * d;
  }
  return 0.5 * (kinetic + potential);
}

namespace {

double grid_work_rate(const SpaceTimeField& f, double t, const std::vector<double>& x, const VecX& vt, double h) {
  if (f.is_zero()) return 0.0;
  double acc = 0.0;
  const auto n = static_cast<std::size_t>(vt.size()) - 1;
  for (std::size_t i = 0; i <= n; ++i)
    acc += ((i == 0 || i == n) ? 0.5 : 1.0) * h * f(t, x[i]) * vt(static_cast<Eigen::Index>(i));
  return acc;
}

double interpolate(const std::vector<double>& x, const VecX& v, double at) {
  if (at < x.front() || at > x.back()) return 0.0;
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  const auto n = static_cast<Eigen::Index>(x.size()) - 1;
  const double pos = (at - x.front()) / h;
  const auto i = std::min<Eigen::Index>(static_cast<Eigen::Index>(pos), n - 1);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * v(i) + w * v(i + 1);
}

}  // namespace

CylinderResult solve_cylinder(const geometry::MotionFamily& fam, const Expr& u0, const Expr& u1,
                              const SpaceTimeField& f, int partitions, const CylinderOptions& options, Exec exec) {
  if (fam.dim() != 1) throw Error(Errc::InvalidArgument, "cylinder scheme is one-dimensional");
  if (partitions < 1) throw Error(Errc::InvalidArgument, "partition count must be positive");
  const double T = fam.horizon();
  const transform::CoefficientField1D ref_coeffs(fam, SpaceTimeField::zero());
  auto domain_at = [&](double t) {
    return std::pair{fam.map(t, vec1(ref_coeffs.lo()))(0), fam.map(t, vec1(ref_coeffs.hi()))(0)};
  };

  CylinderResult out;
  Trajectory& traj = out.trajectory;
  traj.representation = Trajectory::Representation::Grid;
  traj.frame = Trajectory::Frame::Physical;

  const int n = options.cells;
  auto [a, b] = domain_at(0.0);
  std::vector<double> x(static_cast<std::size_t>(n) + 1);
  auto fill_nodes = [&](double lo, double hi) {
    for (int i = 0; i <= n; ++i) x[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / n;
  };
  fill_nodes(a, b);
  VecX v(n + 1), vt(n + 1);
  for (int i = 0; i <= n; ++i) {
    v(i) = u0(x[static_cast<std::size_t>(i)]);
    vt(i) = u1(x[static_cast<std::size_t>(i)]);
  }
  v(0) = v(n) = vt(0) = vt(n) = 0.0;
  out.initial_energy = grid_energy(v, vt, (b - a) / n);
  traj.times.push_back(0.0);
  traj.values.push_back(v);
  traj.velocities.push_back(vt);
  traj.extents.emplace_back(a, b);

  double work = 0.0;
  for (int k = 0; k < partitions; ++k) {
    const double t0 = T * k / partitions, t1 = (k + 1 == partitions) ? T : T * (k + 1) / partitions;
    const auto [na, nb] = domain_at(t0);
    if (nb < b - 1e-14 || na > a + 1e-14) throw Error(Errc::NotMonotone, "domain shrinks at t=" + std::to_string(t0));
    if (k > 0) {
      const std::vector<double> old_x = x;
      const VecX old_v = v, old_vt = vt;
      fill_nodes(na, nb);
      for (int i = 0; i <= n; ++i) {
        v(i) = interpolate(old_x, old_v, x[static_cast<std::size_t>(i)]);
        vt(i) = interpolate(old_x, old_vt, x[static_cast<std::size_t>(i)]);
      }
      v(0) = v(n) = vt(0) = vt(n) = 0.0;
      out.energy_after.push_back(grid_energy(v, vt, (nb - na) / n));
    }
    a = na;
    b = nb;
    const double hx = (b - a) / n;
    const transform::CoefficientField1D coeffs(
        geometry::identity_family(geometry::ReferenceDomain::interval(a, b), T), f);
    const FdOperator op(coeffs, n, exec);
    const int steps = step_count(t1 - t0, options.dt);
    const double dt = (t1 - t0) / steps;
    double rate = grid_work_rate(f, t0, x, vt, hx);
    for (int s = 0; s < steps; ++s) {
      const double t = t0 + s * dt;
      if (dt > op.stable_dt(t)) throw Error(Errc::CflViolation, "cylinder inner step violates the CFL bound");
      op.step(t, dt, v, vt);
      check_state(v, vt, t + dt);
      const double tn = (s + 1 == steps) ? t1 : t + dt;
      const double next_rate = grid_work_rate(f, tn, x, vt, hx);
      work += 0.5 * dt * (rate + next_rate);
      rate = next_rate;
      traj.times.push_back(tn);
      traj.values.push_back(v);
      traj.velocities.push_back(vt);
      traj.extents.emplace_back(a, b);
    }
    out.partition_times.push_back(t1);
    out.energy_before.push_back(grid_energy(v, vt, hx));
    out.work.push_back(work);
  }
  return out;
}

// ---------------------------------------------------------------- residuals

std::vector<Probe> basis_probes(const SpectralBasis& basis, int count) {
  std::vector<Probe> probes;
  for (int k = 1; k <= count; ++k)
    probes.push_back({[basis, k](double y) { return basis.value(k, y); },
                      [basis, k](double y) { return basis.derivative(k, y); }});
  return probes;
}

double weak_residual(const Trajectory& traj, const CoefficientField1D& coeffs, const std::vector<Probe>& probes,
                     Exec exec) {
  const std::size_t K = traj.size();
  if (K < 5 || probes.empty()) return 0.0;
  const double lo = traj.lo, hi = traj.lo + traj.length;
  const int panels = traj.representation == Trajectory::Representation::Modal
                         ? std::max(32, 2 * static_cast<int>(traj.values.front().size()))
                         : static_cast<int>(traj.values.front().size()) - 1;
  const QuadratureRule rule = composite_gauss(lo, hi, panels, 4);
  const std::size_t q = rule.nodes.size();
  const double dy = 1e-6 * (hi - lo);

  // Probe values at the quadrature nodes.
  std::vector<std::vector<double>> pv(probes.size(), std::vector<double>(q)), pd = pv;
  for (std::size_t j = 0; j < probes.size(); ++j)
    for (std::size_t i = 0; i < q; ++i) {
      pv[j][i] = probes[j].value(rule.nodes[i]);
      pd[j][i] = probes[j].derivative(rule.nodes[i]);
    }

  std::vector<double> result(K, 0.0);
  const std::size_t count = K - 4;
  for_each_index(exec, count, [&](std::size_t idx) {
    const std::size_t k = idx + 2;
    const double t = traj.times[k];
    const double dt = traj.times[k + 1] - traj.times[k];
    // Fourth-order central reconstruction of v_tt from stored velocities.
    Trajectory accel_holder;
    accel_holder.representation = traj.representation;
    accel_holder.frame = traj.frame;
    accel_holder.lo = traj.lo;
    accel_holder.length = traj.length;
    accel_holder.times = {t};
    const VecX vtt = (-traj.velocities[k + 2] + 8.0 * traj.velocities[k + 1] - 8.0 * traj.velocities[k - 1] +
                      traj.velocities[k - 2]) /
                     (12.0 * dt);
    accel_holder.values = {vtt};
    accel_holder.velocities = {vtt};
    std::vector<double> res(probes.size(), 0.0);
    for (std::size_t i = 0; i < q; ++i) {
      const double y = rule.nodes[i], w = rule.weights[i];
      const Trajectory::Sample s = traj.sample(k, y);
      const double acc = accel_holder.sample(0, y).v;
      const Coeff1D c = coeffs(t, y);
      const double b_y = (coeffs.family().jet_first_order(t, vec1(y - dy)).psi_t(0) -
                          coeffs.family().jet_first_order(t, vec1(y + dy)).psi_t(0)) /
                         (2.0 * dy);
      for (std::size_t j = 0; j < probes.size(); ++j) {
        const double phi = pv[j][i], dphi = pd[j][i];
        res[j] += w * (acc * phi + c.B * s.v_y * dphi + c.a * s.v_y * phi + 2.0 * s.v_t * (b_y * phi + c.b * dphi) -
                       c.g * phi);
      }
    }
    double worst = 0.0;
    for (double r : res) worst = std::max(worst, std::abs(r));
    result[k] = worst;
  });
  return *std::max_element(result.begin(), result.end());
}

}  // namespace movwave::hyperbolic
