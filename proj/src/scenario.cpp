#include "movwave/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "movwave/error.hpp"

namespace movwave {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Call {
  std::string name;
  std::vector<std::string> args;
};

Call parse_call(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') throw Error(Errc::TypeMismatch, "expected Name(args), got '" + text + "'");
  Call c;
  c.name = trim(text.substr(0, open));
  const std::string inner = text.substr(open + 1, text.size() - open - 2);
  if (!trim(inner).empty()) c.args = split_top_level(inner, ',');
  return c;
}

void arity(const Call& c, std::size_t lo, std::size_t hi) {
  if (c.args.size() < lo || c.args.size() > hi)
    throw Error(Errc::TypeMismatch, c.name + " has " + std::to_string(c.args.size()) + " arguments");
}

geometry::ReferenceDomain parse_reference(const std::string& text) {
  using geometry::ReferenceDomain;
  const Call c = parse_call(text);
  if (c.name == "Interval") {
    arity(c, 1, 2);
    return c.args.size() == 1 ? ReferenceDomain::interval(parse_number(c.args[0]))
                              : ReferenceDomain::interval(parse_number(c.args[0]), parse_number(c.args[1]));
  }
  if (c.name == "Annulus") {
    arity(c, 2, 3);
    return ReferenceDomain::annulus(parse_number(c.args[0]), parse_number(c.args[1]),
                                    c.args.size() == 3 ? parse_int(c.args[2]) : 2);
  }
  if (c.name == "Box") {
    arity(c, 1, 3);
    std::vector<double> e;
    for (const auto& a : c.args) e.push_back(parse_number(a));
    return ReferenceDomain::box(e);
  }
  if (c.name == "Ball") {
    arity(c, 2, 2);
    return ReferenceDomain::ball(parse_number(c.args[0]), parse_int(c.args[1]));
  }
  if (c.name == "Tetrahedron") {
    arity(c, 3, 4);
    Vec n(static_cast<Eigen::Index>(c.args.size() - 1));
    for (std::size_t i = 1; i < c.args.size(); ++i) n(static_cast<Eigen::Index>(i - 1)) = parse_number(c.args[i]);
    return ReferenceDomain::tetrahedron(n, parse_number(c.args[0]));
  }
  throw Error(Errc::TypeMismatch, "unknown reference domain '" + c.name + "'");
}

geometry::LevelFunction parse_level(const std::string& text) {
  using geometry::LevelFunction;
  const Call c = parse_call(text);
  if (c.name == "Norm") {
    arity(c, 1, 1);
    return LevelFunction::norm(parse_int(c.args[0]));
  }
  if (c.name == "EllipticNorm") {
    arity(c, 2, 2);
    return LevelFunction::elliptic_norm(parse_number(c.args[0]), parse_number(c.args[1]));
  }
  if (c.name == "Affine1D") {
    arity(c, 2, 2);
    return LevelFunction::affine_1d(parse_number(c.args[0]), parse_number(c.args[1]));
  }
  throw Error(Errc::TypeMismatch, "unknown level function '" + c.name + "'");
}

geometry::MotionKind parse_motion_kind(const std::string& s) {
  using geometry::MotionKind;
  if (s == "identity") return MotionKind::Identity;
  if (s == "scaling") return MotionKind::OneDScaling;
  if (s == "homothetic") return MotionKind::Homothetic;
  if (s == "sublevel") return MotionKind::SublevelFlow;
  throw Error(Errc::TypeMismatch, "unknown motion type '" + s + "'");
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw Error(Errc::TypeMismatch, "expected true or false, got '" + s + "'");
}

int parse_positive_int(const std::string& s) {
  const int v = parse_int(s);
  if (v <= 0) throw Error(Errc::TypeMismatch, "expected a positive integer, got '" + s + "'");
  return v;
}

double parse_positive(const std::string& s) {
  const double v = parse_number(s);
  if (!(v > 0.0)) throw Error(Errc::TypeMismatch, "expected a positive number, got '" + s + "'");
  return v;
}

struct Entry {
  std::string value;
  int line = 0;
};

using Table = std::map<std::string, Entry>;  // "section.key"

}  // namespace

std::string problem_kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::Wave: return "wave";
    case ProblemKind::Coupled1D: return "coupled-1d";
    case ProblemKind::CoupledRadial: return "coupled-radial";
  }
  return "wave";
}

std::string wave_solver_name(WaveSolver s) {
  switch (s) {
    case WaveSolver::Galerkin: return "galerkin";
    case WaveSolver::FiniteDifference: return "fd";
    case WaveSolver::Cylinder: return "cylinder";
  }
  return "galerkin";
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
  static const std::set<std::string> kKeys = {
      "name", "kind",
      "motion.type", "motion.reference", "motion.scale", "motion.level", "motion.outer_level", "motion.horizon",
      "motion.tolerance",
      "data.u0", "data.u1", "data.f", "data.W", "data.kappa",
      "coupled.l0", "coupled.rho0", "coupled.outer_radius", "coupled.horizon",
      "numerics.modes", "numerics.grid", "numerics.dt", "numerics.partitions", "numerics.quadrature",
      "numerics.solver", "numerics.flow_rule", "numerics.griffith_tol",
      "output.directory", "output.ledger", "output.trajectory", "output.front", "output.trajectory_times",
      "output.trajectory_points"};
  static const std::set<std::string> kSections = {"motion", "data", "coupled", "numerics", "output"};

  Table table;
  std::istringstream in(text);
  std::string raw, section;
  int line_no = 0;
  auto fail = [&](Errc code, int line, const std::string& msg) -> Error {
    return Error(code, origin + ":" + std::to_string(line) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw fail(Errc::TypeMismatch, line_no, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(section)) throw fail(Errc::UnknownKey, line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail(Errc::TypeMismatch, line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    if (!kKeys.count(full)) throw fail(Errc::UnknownKey, line_no, "unknown key '" + key + "'");
    if (value.empty()) throw fail(Errc::TypeMismatch, line_no, "empty value for '" + key + "'");
    if (table.count(full)) throw fail(Errc::TypeMismatch, line_no, "duplicate key '" + key + "'");
    table[full] = {value, line_no};
  }

  Scenario sc;
  // Applies fn to the value of key when present, tagging parse errors with the line.
  auto with = [&](const std::string& key, const std::function<void(const std::string&)>& fn) {
    const auto it = table.find(key);
    if (it == table.end()) return false;
    try {
      fn(it->second.value);
    } catch (const Error& e) {
      const Errc code = is_input_error(e.code()) ? e.code() : Errc::TypeMismatch;
      throw fail(code == Errc::InvalidArgument ? Errc::TypeMismatch : code, it->second.line, e.what());
    }
    return true;
  };
  auto require = [&](const std::string& key, const std::function<void(const std::string&)>& fn) {
    if (!with(key, fn)) throw Error(Errc::MissingRequired, origin + ": missing required key '" + key + "'");
  };

  with("name", [&](const std::string& v) { sc.name = v; });
  with("kind", [&](const std::string& v) {
    if (v == "wave") sc.kind = ProblemKind::Wave;
    else if (v == "coupled-1d") sc.kind = ProblemKind::Coupled1D;
    else if (v == "coupled-radial") sc.kind = ProblemKind::CoupledRadial;
    else throw Error(Errc::TypeMismatch, "unknown kind '" + v + "'");
  });

  with("numerics.modes", [&](const std::string& v) { sc.numerics.modes = parse_positive_int(v); });
  with("numerics.grid", [&](const std::string& v) { sc.numerics.grid = parse_positive_int(v); });
  with("numerics.dt", [&](const std::string& v) { sc.numerics.dt = parse_positive(v); });
  with("numerics.partitions", [&](const std::string& v) { sc.numerics.partitions = parse_positive_int(v); });
  with("numerics.quadrature", [&](const std::string& v) { sc.numerics.quadrature = parse_positive_int(v); });
  with("numerics.griffith_tol", [&](const std::string& v) { sc.numerics.griffith_tol = parse_positive(v); });
  with("numerics.solver", [&](const std::string& v) {
    if (v == "galerkin") sc.numerics.solver = WaveSolver::Galerkin;
    else if (v == "fd") sc.numerics.solver = WaveSolver::FiniteDifference;
    else if (v == "cylinder") sc.numerics.solver = WaveSolver::Cylinder;
    else throw Error(Errc::TypeMismatch, "unknown solver '" + v + "'");
  });
  with("numerics.flow_rule", [&](const std::string& v) {
    if (v != "a" && v != "b") throw Error(Errc::TypeMismatch, "flow_rule must be a or b");
    sc.numerics.velocity_form = v == "b";
  });
  with("output.directory", [&](const std::string& v) { sc.outputs.directory = v; });
  with("output.ledger", [&](const std::string& v) { sc.outputs.ledger = parse_bool(v); });
  with("output.trajectory", [&](const std::string& v) { sc.outputs.trajectory = parse_bool(v); });
  with("output.front", [&](const std::string& v) { sc.outputs.front = parse_bool(v); });
  with("output.trajectory_times", [&](const std::string& v) { sc.outputs.trajectory_times = parse_positive_int(v); });
  with("output.trajectory_points", [&](const std::string& v) { sc.outputs.trajectory_points = parse_positive_int(v); });

  require("data.u0", [&](const std::string& v) { sc.u0 = Expr::parse(v); });
  with("data.u1", [&](const std::string& v) { sc.u1 = Expr::parse(v); });
  with("data.f", [&](const std::string& v) { sc.f = SpaceTimeField::parse(v); });
  with("data.W", [&](const std::string& v) { sc.W = SpaceTimeField::parse(v); });
  with("data.kappa", [&](const std::string& v) { sc.kappa = Expr::parse(v); });

  if (sc.kind == ProblemKind::Wave) {
    for (const char* k : {"coupled.l0", "coupled.rho0", "coupled.outer_radius", "coupled.horizon"})
      if (table.count(k)) throw fail(Errc::UnknownKey, table[k].line, std::string("key '") + k + "' requires a coupled kind");
    geometry::MotionSpec& m = sc.motion;
    require("motion.type", [&](const std::string& v) { m.kind = parse_motion_kind(v); });
    with("motion.horizon", [&](const std::string& v) { m.horizon = parse_positive(v); });
    with("motion.tolerance", [&](const std::string& v) { m.tolerance = parse_positive(v); });
    const bool needs_reference = m.kind == geometry::MotionKind::Identity || m.kind == geometry::MotionKind::Homothetic;
    const bool needs_scale = m.kind != geometry::MotionKind::Identity;
    const bool needs_level = m.kind == geometry::MotionKind::SublevelFlow;
    auto forbid = [&](const char* key, bool allowed) {
      if (!allowed && table.count(key))
        throw fail(Errc::UnknownKey, table[key].line, std::string("key '") + key + "' does not apply to this motion");
    };
    forbid("motion.reference", needs_reference);
    forbid("motion.scale", needs_scale);
    forbid("motion.level", needs_level);
    forbid("motion.outer_level", needs_level);
    if (needs_reference) {
      if (!with("motion.reference", [&](const std::string& v) { m.reference = parse_reference(v); }))
        m.reference = geometry::ReferenceDomain::interval(1.0);
    }
    if (needs_scale) require("motion.scale", [&](const std::string& v) { m.scale = Expr::parse(v); });
    if (needs_level) {
      require("motion.level", [&](const std::string& v) { m.level = parse_level(v); });
      require("motion.outer_level", [&](const std::string& v) { m.outer_level = parse_positive(v); });
    }
    sc.horizon = m.horizon;
    // Build once so that invalid motions are reported at parse time.
    try {
      (void)geometry::build_motion(m);
    } catch (const Error& e) {
      const int line = table.count("motion.type") ? table["motion.type"].line : 0;
      throw fail(e.code(), line, e.what());
    }
  } else {
    for (const auto& [key, entry] : table)
      if (key.rfind("motion.", 0) == 0) throw fail(Errc::UnknownKey, entry.line, "coupled problems take no [motion] section");
    const bool radial = sc.kind == ProblemKind::CoupledRadial;
    if (radial) {
      if (table.count("coupled.l0")) throw fail(Errc::UnknownKey, table["coupled.l0"].line, "radial problems use rho0");
      require("coupled.rho0", [&](const std::string& v) { sc.front0 = parse_positive(v); });
      with("coupled.outer_radius", [&](const std::string& v) { sc.outer_radius = parse_positive(v); });
    } else {
      for (const char* k : {"coupled.rho0", "coupled.outer_radius"})
        if (table.count(k)) throw fail(Errc::UnknownKey, table[k].line, std::string("key '") + k + "' requires kind = coupled-radial");
      require("coupled.l0", [&](const std::string& v) { sc.front0 = parse_positive(v); });
    }
    require("coupled.horizon", [&](const std::string& v) { sc.horizon = parse_positive(v); });
    require("data.u1", [](const std::string&) {});
    require("data.kappa", [](const std::string&) {});
    if (sc.W && radial) throw fail(Errc::UnknownKey, table["data.W"].line, "boundary lifting applies to coupled-1d only");
    if (radial) {
      const auto r = sc.radial_scenario();
      // In r = R - |x| the outward normal at the inner circle is +d/dr.
      const auto verdict = griffith::compatibility_check(r.u0.eval(r.rho0, 1), r.u1(r.rho0), r.kappa(r.rho0));
      sc.compatibility = std::abs(r.u0(r.rho0)) > 1e-9 ? griffith::Compatibility::Incompatible : verdict;
    } else {
      sc.compatibility = characteristics::scenario_compatibility(sc.char_scenario());
    }
  }
  return sc;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::MissingRequired, "cannot read scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), path.string());
}

characteristics::CharScenario Scenario::char_scenario() const {
  characteristics::CharScenario c;
  c.l0 = front0;
  c.kappa = kappa.with_length(front0);
  c.horizon = horizon;
  // SineMode leaves take the initial film length as their period.
  const Expr a = u0.with_length(front0), b = u1.with_length(front0);
  const SpaceTimeField force = f.with_length(front0);
  if (W) {
    const transform::LiftedData lifted = transform::lift_dirichlet(W->with_length(front0), a, b, {0.0}, {}, horizon, 1e-9);
    c.u0 = lifted.u0;
    c.u1 = lifted.u1;
    std::vector<SpaceTimeField::Term> terms = force.terms();
    terms.insert(terms.end(), lifted.f.terms().begin(), lifted.f.terms().end());
    c.f = SpaceTimeField(std::move(terms));
  } else {
    c.u0 = a;
    c.u1 = b;
    c.f = force;
  }
  return c;
}

coupled::RadialScenario Scenario::radial_scenario() const {
  coupled::RadialScenario r;
  r.outer_radius = outer_radius;
  r.rho0 = front0;
  r.u0 = u0.with_length(front0);
  r.u1 = u1.with_length(front0);
  r.kappa = kappa.with_length(front0);
  r.horizon = horizon;
  return r;
}

coupled::CoupledOptions Scenario::coupled_options() const {
  coupled::CoupledOptions o;
  o.cells = numerics.grid;
  o.dt = numerics.dt;
  o.velocity_form = numerics.velocity_form;
  o.griffith_tol = numerics.griffith_tol;
  return o;
}

std::vector<std::pair<std::string, std::string>> Scenario::echo() const {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("name", name);
  e.emplace_back("kind", problem_kind_name(kind));
  if (kind == ProblemKind::Wave) {
    e.emplace_back("motion.type", geometry::motion_kind_name(motion.kind));
    if (motion.kind == geometry::MotionKind::Identity || motion.kind == geometry::MotionKind::Homothetic)
      e.emplace_back("motion.reference", motion.reference.str());
    if (motion.kind != geometry::MotionKind::Identity) e.emplace_back("motion.scale", motion.scale.str());
    if (motion.kind == geometry::MotionKind::SublevelFlow) {
      e.emplace_back("motion.level", motion.level.str());
      e.emplace_back("motion.outer_level", num(motion.outer_level));
    }
    e.emplace_back("motion.horizon", num(motion.horizon));
    if (motion.tolerance > 0.0) e.emplace_back("motion.tolerance", num(motion.tolerance));
  }
  e.emplace_back("data.u0", u0.str());
  e.emplace_back("data.u1", u1.str());
  e.emplace_back("data.f", f.str());
  if (W) e.emplace_back("data.W", W->str());
  if (kind != ProblemKind::Wave) {
    e.emplace_back("data.kappa", kappa.str());
    e.emplace_back(kind == ProblemKind::CoupledRadial ? "coupled.rho0" : "coupled.l0", num(front0));
    if (kind == ProblemKind::CoupledRadial) e.emplace_back("coupled.outer_radius", num(outer_radius));
    e.emplace_back("coupled.horizon", num(horizon));
  }
  e.emplace_back("numerics.modes", std::to_string(numerics.modes));
  e.emplace_back("numerics.grid", std::to_string(numerics.grid));
  e.emplace_back("numerics.dt", num(numerics.dt));
  e.emplace_back("numerics.partitions", std::to_string(numerics.partitions));
  e.emplace_back("numerics.quadrature", std::to_string(numerics.quadrature));
  e.emplace_back("numerics.solver", wave_solver_name(numerics.solver));
  e.emplace_back("numerics.flow_rule", numerics.velocity_form ? "b" : "a");
  e.emplace_back("numerics.griffith_tol", num(numerics.griffith_tol));
  e.emplace_back("output.directory", outputs.directory);
  e.emplace_back("output.ledger", outputs.ledger ? "true" : "false");
  e.emplace_back("output.trajectory", outputs.trajectory ? "true" : "false");
  e.emplace_back("output.front", outputs.front ? "true" : "false");
  e.emplace_back("output.trajectory_times", std::to_string(outputs.trajectory_times));
  e.emplace_back("output.trajectory_points", std::to_string(outputs.trajectory_points));
  return e;
}

std::string Scenario::to_text() const {
  std::string out, section;
  for (const auto& [key, value] : echo()) {
    const auto dot = key.find('.');
    const std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string k = dot == std::string::npos ? key : key.substr(dot + 1);
    if (sec != section) {
      out += "\n[" + sec + "]\n";
      section = sec;
    }
    out += k + " = " + value + "\n";
  }
  return out;
}

}  // namespace movwave
