#include "movwave/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "json.hpp"

#include "movwave/characteristics.hpp"
#include "movwave/coupled.hpp"
#include "movwave/energy.hpp"
#include "movwave/error.hpp"
#include "movwave/geometry.hpp"
#include "movwave/griffith.hpp"
#include "movwave/hyperbolic.hpp"
#include "movwave/transform.hpp"

namespace movwave::runner {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(const std::vector<double>& values) { rows_.push_back(values); }
  void write(const fs::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::InvalidArgument, "cannot write " + path.string());
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
    out << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_number(r[i]);
      out << '\n';
    }
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

// Rethrows module errors with the pipeline stage in front of the message.
template <class Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + ": " + e.what());
  }
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

// Indices of the stored times closest to `count` evenly spaced times.
std::vector<std::size_t> pick_indices(std::size_t stored, int count) {
  std::vector<std::size_t> out;
  if (stored == 0) return out;
  const int n = std::max(count, 2);
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(std::llround(static_cast<double>(i) * (stored - 1) / (n - 1)));
    if (out.empty() || out.back() != k) out.push_back(k);
  }
  return out;
}

// Physical samples of a 1D trajectory: t, x, u, u_t.
Csv trajectory_csv(const geometry::MotionFamily* fam, const Trajectory& traj, const Outputs& o) {
  Csv csv({"t", "x", "u", "u_t"});
  const bool physical = traj.frame == Trajectory::Frame::Physical;
  for (std::size_t k : pick_indices(traj.size(), o.trajectory_times)) {
    const auto [a, b] = traj.extent(k);
    const int n = std::max(o.trajectory_points, 2);
    for (int i = 0; i < n; ++i) {
      const double y = a + (b - a) * i / (n - 1);
      const auto s = traj.sample(k, y);
      if (physical) {
        csv.row({traj.times[k], y, s.v, s.v_t});
      } else {
        const geometry::MotionJet j = fam->jet_first_order(traj.times[k], vec1(y));
        csv.row({traj.times[k], j.phi(0), s.v, s.v_t + s.v_y * j.psi_t(0)});
      }
    }
  }
  return csv;
}

struct Boundary {
  std::vector<double> fixed;
  std::function<double(double)> moving;
};

// Classifies the endpoints of a 1D family by sampling their velocity.
Boundary classify_endpoints(const geometry::MotionFamily& fam, double lo, double hi) {
  Boundary out;
  for (double y : {lo, hi}) {
    double speed = 0.0;
    for (int i = 0; i <= 20; ++i) speed = std::max(speed, std::abs(fam.jet_first_order(fam.horizon() * i / 20, vec1(y)).phi_t(0)));
    if (speed == 0.0) {
      out.fixed.push_back(fam.map(0.0, vec1(y))(0));
    } else {
      if (out.moving) throw Error(Errc::InvalidArgument, "boundary lifting supports one moving endpoint");
      out.moving = [fam, y](double t) { return fam.map(t, vec1(y))(0); };
    }
  }
  return out;
}

void run_wave(const Scenario& sc, const fs::path& dir, Exec exec, RunArtifacts& art, Json& summary) {
  const geometry::MotionFamily fam = stage("motion", [&] { return geometry::build_motion(sc.motion); });
  const geometry::RegularityReport reg = stage("validate", [&] { return geometry::validate(fam, {}, exec); });
  summary["regularity_pass"] = reg.pass();
  summary["max_identity_residual"] = reg.max_identity_residual();
  summary["max_speed"] = reg.max_speed;

  if (fam.dim() != 1) {
    // Multi-dimensional families: geometry and measure series only.
    Csv csv({"t", "geometric_measure", "flux_measure"});
    double worst = 0.0;
    for (int i = 0; i < sc.outputs.trajectory_times; ++i) {
      const double t = fam.horizon() * i / std::max(sc.outputs.trajectory_times - 1, 1);
      const double g = fam.geometric_measure(t);
      const double f = stage("measure", [&] { return energy::flux_measure(fam, t); });
      worst = std::max(worst, std::abs(g - f));
      csv.row({t, g, f});
    }
    csv.write(dir / "measure.csv");
    art.files.push_back("measure.csv");
    summary["solver"] = "none";
    summary["max_measure_gap"] = worst;
    return;
  }

  // SineMode leaves take the initial domain length as their period.
  const transform::CoefficientField1D probe(fam, SpaceTimeField::zero());
  const double length = probe.hi() - probe.lo();
  SpaceTimeField f = sc.f.with_length(length);
  Expr u0 = sc.u0.with_length(length), u1 = sc.u1.with_length(length);
  if (sc.W) {
    const Boundary bd = stage("lift", [&] { return classify_endpoints(fam, probe.lo(), probe.hi()); });
    const transform::LiftedData lifted = stage("lift", [&] {
      return transform::lift_dirichlet(sc.W->with_length(length), u0, u1, bd.fixed, bd.moving, fam.horizon());
    });
    std::vector<SpaceTimeField::Term> terms = f.terms();
    terms.insert(terms.end(), lifted.f.terms().begin(), lifted.f.terms().end());
    f = SpaceTimeField(std::move(terms));
    u0 = lifted.u0;
    u1 = lifted.u1;
  }
  const transform::CoefficientField1D coeffs(fam, f);
  const double lo = coeffs.lo(), hi = coeffs.hi();
  auto v0 = [&](double y) { return u0(fam.map(0.0, vec1(y))(0)); };
  auto v1 = [&](double y) {
    const geometry::MotionJet j = fam.jet_first_order(0.0, vec1(y));
    return u1(j.phi(0)) + u0.eval(j.phi(0), 1) * j.phi_t(0);
  };

  const Numerics& num = sc.numerics;
  Trajectory traj;
  std::optional<hyperbolic::CylinderResult> cyl;
  switch (num.solver) {
    case WaveSolver::Galerkin: {
      const SpectralBasis basis(lo, hi - lo, num.modes);
      const auto system = stage("assemble", [&] { return hyperbolic::assemble(basis, coeffs, exec); });
      traj = stage("integrate", [&] {
        return hyperbolic::integrate(system, system.project(v0), system.project(v1), num.dt, fam.horizon());
      });
      summary["quadrature_panels"] = system.panels();
      break;
    }
    case WaveSolver::FiniteDifference:
      traj = stage("solve_fd", [&] { return hyperbolic::solve_fd(coeffs, num.grid, {v0, v1}, num.dt, fam.horizon(), exec); });
      break;
    case WaveSolver::Cylinder:
      cyl = stage("solve_cylinder", [&] {
        return hyperbolic::solve_cylinder(fam, u0, u1, f, num.partitions, {num.grid, num.dt}, exec);
      });
      traj = cyl->trajectory;
      break;
  }
  summary["solver"] = wave_solver_name(num.solver);
  summary["stored_times"] = traj.size();

  const bool moving = fam.kind() != geometry::MotionKind::Identity;
  if (sc.outputs.ledger) {
    const energy::EnergyLedger l =
        stage("ledger", [&] { return energy::ledger(energy::ledger_input_1d(fam, traj, f), exec); });
    std::vector<double> fixed;
    if (cyl) {
      // The cylinder scheme has no transformed operator; report |E - E0 - W|.
      for (std::size_t k = 0; k < l.t.size(); ++k)
        fixed.push_back(std::abs(l.kinetic[k] + l.potential[k] - l.initial_energy() - l.work[k]));
      double excess = 0.0;
      for (std::size_t k = 0; k < cyl->energy_before.size(); ++k) {
        const double bound = cyl->initial_energy + cyl->work[k];
        excess = std::max(excess, (cyl->energy_before[k] - bound) / std::max(std::abs(bound), 1e-300));
      }
      summary["max_relative_energy_excess"] = excess;
    } else {
      fixed = stage("residual_fixed", [&] { return energy::balance_residual_fixed(traj, coeffs, exec); });
    }
    std::vector<std::string> header = {"t", "kinetic", "potential", "work", "residual_fixed"};
    if (moving) {
      header.emplace_back("boundary_dissipation");
      header.emplace_back("residual_moving");
    }
    Csv csv(header);
    for (std::size_t k = 0; k < l.t.size(); ++k) {
      std::vector<double> row = {l.t[k], l.kinetic[k], l.potential[k], l.work[k], fixed[k]};
      if (moving) {
        row.push_back(l.boundary_dissipation[k]);
        row.push_back(l.residual_moving[k]);
      }
      csv.row(row);
    }
    csv.write(dir / "ledger.csv");
    art.files.push_back("ledger.csv");
    summary["initial_energy"] = l.initial_energy();
    summary["max_residual_fixed"] = max_of(fixed);
    if (moving) summary["max_residual_moving"] = max_of(l.residual_moving);
  }
  if (sc.outputs.trajectory) {
    trajectory_csv(&fam, traj, sc.outputs).write(dir / "trajectory.csv");
    art.files.push_back("trajectory.csv");
  }
}

void run_coupled(const Scenario& sc, const fs::path& dir, Exec exec, RunArtifacts& art, Json& summary) {
  coupled::CoupledOptions opt = sc.coupled_options();
  opt.exec = exec;
  const bool radial = sc.kind == ProblemKind::CoupledRadial;
  const coupled::CoupledResult r = radial
      ? stage("coupled", [&] { return coupled::evolve_coupled_radial(sc.radial_scenario(), opt); })
      : stage("coupled", [&] { return coupled::evolve_coupled_1d(sc.char_scenario(), opt); });

  if (sc.outputs.front) {
    Csv csv({"t", "position", "speed", "p", "u_dot", "kappa", "G", "complementarity"});
    for (const auto& fr : r.front) {
      const double G = griffith::release_rate(fr.p, fr.speed);
      csv.row({fr.t, fr.position, fr.speed, fr.p, fr.u_dot, fr.kappa, G, fr.speed * (G - fr.kappa)});
    }
    csv.write(dir / "front.csv");
    art.files.push_back("front.csv");
  }
  if (sc.outputs.ledger) {
    const auto& l = r.ledger;
    Csv csv({"t", "kinetic", "potential", "work", "boundary_dissipation", "debond_dissipation", "debond_direct",
             "balance_residual", "G_total"});
    for (std::size_t k = 0; k < l.t.size(); ++k)
      csv.row({l.t[k], l.kinetic[k], l.potential[k], l.work[k], l.boundary_dissipation[k], l.debond_dissipation[k],
               l.debond_direct[k], r.balance_residual[k], l.G_total[k].value_or(std::nan(""))});
    csv.write(dir / "ledger.csv");
    art.files.push_back("ledger.csv");
  }
  if (sc.outputs.trajectory) {
    trajectory_csv(nullptr, r.solution, sc.outputs).write(dir / "trajectory.csv");
    art.files.push_back("trajectory.csv");
  }

  double min_speed = 1.0, max_speed = 0.0;
  for (const auto& fr : r.front) {
    min_speed = std::min(min_speed, fr.speed);
    max_speed = std::max(max_speed, fr.speed);
  }
  summary["compatibility"] = sc.compatibility ? griffith::compatibility_name(*sc.compatibility) : "n/a";
  summary["final_position"] = r.front.back().position;
  summary["min_speed"] = min_speed;
  summary["max_speed"] = max_speed;
  summary["max_balance_residual"] = max_of(r.balance_residual);
  summary["griffith_pass"] = r.griffith.pass;
  summary["griffith_max_excess"] = r.griffith.max_excess;
  summary["griffith_max_complementarity"] = r.griffith.max_complementarity;
  summary["max_second_difference"] = r.max_second_difference;
  if (!radial) {
    const characteristics::FrontHistory exact =
        stage("front_ode", [&] { return characteristics::front_ode_exact(sc.char_scenario(), opt.dt); });
    double err = 0.0;
    for (const auto& fr : r.front) {
      const auto it = std::lower_bound(exact.times.begin(), exact.times.end(), fr.t - 1e-12);
      if (it == exact.times.end()) continue;
      err = std::max(err, std::abs(fr.speed - exact.speed[static_cast<std::size_t>(it - exact.times.begin())]));
    }
    summary["t_star"] = exact.t_star;
    summary["max_speed_error_vs_exact"] = err;
  }
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunArtifacts run(const Scenario& sc, const fs::path& directory, Exec exec) {
  RunArtifacts art;
  art.directory = directory.empty() ? fs::path(sc.outputs.directory) : directory;
  fs::create_directories(art.directory);

  Json summary = Json::object();
  if (sc.kind == ProblemKind::Wave)
    run_wave(sc, art.directory, exec, art, summary);
  else
    run_coupled(sc, art.directory, exec, art, summary);

  Json manifest;
  manifest["code_version"] = kCodeVersion;
  Json echo = Json::object();
  for (const auto& [k, v] : sc.echo()) echo[k] = v;
  manifest["scenario"] = echo;
  manifest["tolerances"] = {{"griffith_tol", sc.numerics.griffith_tol},
                            {"motion_tolerance", sc.motion.tolerance > 0.0 ? sc.motion.tolerance
                                                 : sc.motion.kind == geometry::MotionKind::SublevelFlow ? 1e-6
                                                                                                        : 1e-9}};
  manifest["files"] = art.files;
  manifest["summary"] = summary;
  art.manifest = manifest.dump(2) + "\n";
  std::ofstream(art.directory / "manifest.json", std::ios::binary) << art.manifest;

  for (const auto& [k, v] : summary.items())
    if (v.is_number()) art.summary.emplace_back(k, v.get<double>());
    else if (v.is_boolean()) art.summary.emplace_back(k, v.get<bool>() ? 1.0 : 0.0);
  return art;
}

std::vector<SweepEntry> sweep(const fs::path& dir, const fs::path& out, Exec exec) {
  if (!fs::is_directory(dir)) throw Error(Errc::MissingRequired, "sweep directory " + dir.string() + " not found");
  std::vector<SweepEntry> entries;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".scn") entries.push_back({e.path(), out / e.path().stem(), 0, {}});
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.scenario < b.scenario; });
  for_each_index(exec, entries.size(), [&](std::size_t i) {
    SweepEntry& en = entries[i];
    try {
      run(parse_scenario(en.scenario), en.directory, Exec::Serial);
      en.message = "ok";
    } catch (const Error& e) {
      en.status = is_input_error(e.code()) ? 2 : 3;
      en.message = e.what();
    } catch (const std::exception& e) {
      en.status = 3;
      en.message = e.what();
    }
  });
  return entries;
}

}  // namespace movwave::runner
