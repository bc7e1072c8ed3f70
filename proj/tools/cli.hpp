#pragma once

// Command-line front end. Exit codes: 0 ok, 1 other failure, 2 parse/usage
// error, 3 singularity, 4 contract violation, 5 tolerance failure.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hamjac/hamjac.hpp"

namespace hamjac::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseError = 2,
  kSingularity = 3,
  kContractViolation = 4,
  kToleranceFailure = 5,
};

inline constexpr double kFieldDefectTolerance = 1e-10;

/// "q=1,2;p=0,0;s=0" -> components. Keys q, p and s (aliases t, S).
struct PointSpec {
  std::optional<std::vector<double>> q, p;
  std::optional<double> s;
};

inline std::vector<double> parse_real_list(const std::string& text, std::size_t offset) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParseError("expected a real number", offset + start);
    }
    if (used != item.size() || !std::isfinite(v)) throw ParseError("malformed real number", offset + start);
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline PointSpec parse_point(const std::string& text) {
  PointSpec spec;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t semi = text.find(';', start);
    const std::string part = text.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
    if (!part.empty()) {
      const std::size_t eq = part.find('=');
      if (eq == std::string::npos) throw ParseError("expected key=value in point", start);
      const std::string key = part.substr(0, eq);
      const auto values = parse_real_list(part.substr(eq + 1), start + eq + 1);
      if (key == "q") {
        spec.q = values;
      } else if (key == "p") {
        spec.p = values;
      } else if (key == "s" || key == "t" || key == "S") {
        if (values.size() != 1) throw ParseError("s takes a single value", start + eq + 1);
        spec.s = values.front();
      } else {
        throw ParseError("unknown point key '" + key + "'", start);
      }
    }
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return spec;
}

inline ExtendedPoint require_extended_point(const std::string& text, std::size_t n) {
  const auto spec = parse_point(text);
  if (!spec.q || !spec.p) throw ParseError("point needs both q= and p=", 0);
  if (spec.q->size() != n || spec.p->size() != n)
    throw ParseError("point dimension does not match the system (n = " + std::to_string(n) + ")", 0);
  return ExtendedPoint(*spec.q, *spec.p, spec.s.value_or(0.0));
}

/// "a:b:N" per axis, comma separated.
struct GridAxis {
  double lo = 0.0, hi = 0.0;
  std::size_t count = 1;

  double at(std::size_t i) const {
    return count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
};

inline std::vector<GridAxis> parse_grid(const std::string& text) {
  std::vector<GridAxis> axes;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    const std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const std::size_t c1 = part.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : part.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ParseError("grid axis must be lo:hi:count", start);
    GridAxis ax;
    ax.lo = parse_real_list(part.substr(0, c1), start).at(0);
    ax.hi = parse_real_list(part.substr(c1 + 1, c2 - c1 - 1), start + c1 + 1).at(0);
    const double cnt = parse_real_list(part.substr(c2 + 1), start + c2 + 1).at(0);
    if (!(cnt >= 1.0) || cnt != std::floor(cnt)) throw ParseError("grid count must be a positive integer", start + c2 + 1);
    ax.count = static_cast<std::size_t>(cnt);
    axes.push_back(ax);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return axes;
}

struct CommonOptions {
  std::string system;
  std::string structure;
  std::vector<std::string> params;
  std::string omega;
  std::string potential;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct IntegratorOptions {
  std::string method = "rk45";
  double rtol = 1e-9;
  double atol = 1e-12;
  double step = 1e-3;
  std::size_t samples = 1000;
  std::size_t max_steps = 10'000'000;
  double q_min = 1e-6;
  double t0 = 0.0;
  double t1 = 1.0;

  IntegratorConfig config() const {
    IntegratorConfig c;
    if (method == "rk45")
      c.method = IntegratorMethod::rk45_adaptive;
    else if (method == "rk4")
      c.method = IntegratorMethod::rk4_fixed;
    else
      throw InvalidArgument("unknown integrator method '" + method + "'");
    c.rtol = rtol;
    c.atol = atol;
    c.step = step;
    c.output_intervals = samples;
    c.max_steps = max_steps;
    c.singularity_guard = q_min;
    c.validate();
    return c;
  }

  nlohmann::json to_json() const {
    return {{"method", method}, {"rtol", rtol},      {"atol", atol},   {"step", step}, {"samples", samples},
            {"max_steps", max_steps}, {"q_min", q_min}, {"t0", t0}, {"t1", t1}};
  }
};

inline ParameterMap parse_param_overrides(const std::vector<std::string>& items) {
  ParameterMap m;
  for (const auto& item : items) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("--param expects name=value", 0);
    m[item.substr(0, eq)] = parse_real_list(item.substr(eq + 1), eq + 1).at(0);
  }
  return m;
}

struct LoadedSystem {
  SystemDefinition definition;
  StructureKind structure = StructureKind::symplectic;
  HamiltonianFunction hamiltonian;
};

inline LoadedSystem load_system(const CommonOptions& o) {
  if (o.system.empty()) throw ParseError("--system is required", 0);
  const auto overrides = parse_param_overrides(o.params);
  models::ExpressionOverrides exprs;
  if (!o.omega.empty()) exprs["omega"] = o.omega;
  if (!o.potential.empty()) exprs["V"] = o.potential;
  std::optional<SystemDefinition> def = models::builtin_system(o.system, overrides, exprs);
  if (!def) {
    def = load_system_definition(o.system);
    for (const auto& [k, v] : overrides) def->params[k] = v;
  }
  StructureKind kind = def->structure;
  if (!o.structure.empty()) {
    auto k = parse_structure_kind(o.structure);
    if (!k) throw ParseError("unknown structure '" + o.structure + "'", 0);
    kind = *k;
  }
  return {*def, kind, def->make_hamiltonian()};
}

inline nlohmann::json base_manifest(const std::string& command, const CommonOptions& o, const LoadedSystem* sys) {
  nlohmann::json m;
  m["command"] = command;
  m["system"] = o.system;
  if (sys) {
    m["structure"] = std::string(to_string(sys->structure));
    m["definition"] = sys->definition.to_json();
  }
  m["output"] = o.out.empty() ? "-" : o.out;
  m["format"] = o.format;
  m["seed"] = o.seed;
  return m;
}

inline void emit(const CommonOptions& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file '" + o.out + "'");
  f << text;
}

inline std::string render_trajectory(const CommonOptions& o, const Trajectory& traj, const OutputHeader& header) {
  std::ostringstream s;
  if (o.format == "json")
    write_json(s, traj, header);
  else if (o.format == "csv")
    write_csv(s, traj, header);
  else
    throw InvalidArgument("unknown output format '" + o.format + "'");
  return s.str();
}

inline std::vector<std::string> section_components(const std::vector<std::string>& flags, const LoadedSystem& sys) {
  if (!flags.empty()) return flags;
  if (sys.definition.section) return *sys.definition.section;
  throw ParseError("a section is required (--section or \"section\" in the system file)", 0);
}

// ---------------------------------------------------------------------------

inline int cmd_field(const CommonOptions& o, const std::string& point, std::ostream& out) {
  const auto sys = load_system(o);
  const auto x = require_extended_point(point, sys.hamiltonian.arity());
  const auto v = hamiltonian_field(sys.structure, sys.hamiltonian, x);
  const auto r = contract_check(sys.structure, sys.hamiltonian, x);

  auto manifest = base_manifest("field", o, &sys);
  manifest["point"] = point;
  std::ostringstream s;
  write_comment_header(s, {manifest, o.seed});
  s << "structure=" << to_string(sys.structure) << '\n';
  for (std::size_t i = 0; i < v.dq.size(); ++i) s << "dq" << i + 1 << '=' << format_real(v.dq[i]) << '\n';
  for (std::size_t i = 0; i < v.dp.size(); ++i) s << "dp" << i + 1 << '=' << format_real(v.dp[i]) << '\n';
  s << "ds=" << format_real(v.ds) << '\n';
  s << "H=" << format_real(sys.hamiltonian(x)) << '\n';
  s << "eta_pairing=" << format_real(r.eta_pairing) << '\n';
  s << "omega_defect=" << format_real(r.omega_defect) << '\n';
  s << "hamiltonian_pairing_defect=" << format_real(r.hamiltonian_pairing_defect) << '\n';
  emit(o, s.str(), out);

  bool ok = r.omega_defect < kFieldDefectTolerance && r.relative_pairing_defect() < kFieldDefectTolerance;
  if (sys.structure == StructureKind::cosymplectic) ok = ok && std::abs(r.eta_pairing - 1.0) < kFieldDefectTolerance;
  return ok ? kOk : kContractViolation;
}

inline int cmd_integrate(const CommonOptions& o, const IntegratorOptions& io, const std::string& from,
                         std::ostream& out) {
  const auto sys = load_system(o);
  const auto x0 = require_extended_point(from, sys.hamiltonian.arity());
  auto traj = integrate(sys.structure, sys.hamiltonian, x0, {io.t0, io.t1}, io.config());
  traj = with_dissipation_defect(std::move(traj), sys.hamiltonian);
  auto manifest = base_manifest("integrate", o, &sys);
  manifest["from"] = from;
  manifest["integrator"] = io.to_json();
  emit(o, render_trajectory(o, traj, {manifest, o.seed}), out);
  return kOk;
}

inline int cmd_characteristics(const CommonOptions& o, const IntegratorOptions& io, const std::string& q0,
                               const std::string& gamma0, double s0, std::ostream& out) {
  const auto sys = load_system(o);
  const auto q = parse_real_list(q0, 0);
  const auto g = parse_real_list(gamma0, 0);
  if (q.size() != sys.hamiltonian.arity() || g.size() != sys.hamiltonian.arity())
    throw ParseError("--q0/--gamma0 dimension does not match the system", 0);
  auto traj = characteristics(sys.structure, sys.hamiltonian, q, g, s0, {io.t0, io.t1}, io.config());
  traj = with_dissipation_defect(std::move(traj), sys.hamiltonian);
  auto manifest = base_manifest("characteristics", o, &sys);
  manifest["q0"] = q0;
  manifest["gamma0"] = gamma0;
  manifest["s0"] = s0;
  manifest["integrator"] = io.to_json();
  emit(o, render_trajectory(o, traj, {manifest, o.seed}), out);
  return kOk;
}

inline int cmd_compare(const CommonOptions& o, const IntegratorOptions& io, const std::vector<std::string>& section,
                       const std::string& from, double tol, std::ostream& out) {
  const auto sys = load_system(o);
  const std::size_t n = sys.hamiltonian.arity();
  const auto comps = section_components(section, sys);
  const Section gamma(comps, n, sys.definition.params);
  const auto base = parse_point(from);
  if (!base.q || base.q->size() != n) throw ParseError("--from needs q= with n components", 0);
  const auto cmp = compare_lifted(sys.structure, sys.hamiltonian, gamma, *base.q, base.s.value_or(0.0),
                                  {io.t0, io.t1}, io.config());

  auto manifest = base_manifest("compare", o, &sys);
  manifest["section"] = comps;
  manifest["from"] = from;
  manifest["tol"] = tol;
  manifest["integrator"] = io.to_json();
  if (!o.out.empty()) emit(o, render_trajectory(o, cmp.lifted, {manifest, o.seed}), out);
  std::ostringstream s;
  write_comment_header(s, {manifest, o.seed});
  s << "max_point_deviation=" << format_real(cmp.max_point_deviation) << '\n';
  out << s.str();
  return cmp.max_point_deviation < tol ? kOk : kToleranceFailure;
}

inline int cmd_hj_residual(const CommonOptions& o, const std::vector<std::string>& section, const std::string& grid,
                           const std::string& mode, double frozen_value, std::optional<double> tol,
                           std::ostream& out) {
  const auto sys = load_system(o);
  const std::size_t n = sys.hamiltonian.arity();
  const auto comps = section_components(section, sys);
  const Section gamma(comps, n, sys.definition.params);
  const auto axes = parse_grid(grid);
  if (axes.size() != n + 1) throw ParseError("--grid needs n + 1 axes (q1..qn, s)", 0);
  if (mode != "general" && mode != "frozen") throw ParseError("--mode must be general or frozen", 0);
  if (mode == "frozen" && sys.structure != StructureKind::contact)
    throw ParseError("--mode frozen applies to contact systems only", 0);

  std::size_t total = 1;
  for (const auto& a : axes) total *= a.count;

  struct Row {
    std::vector<double> base;
    HJReport report;
  };
  std::vector<Row> rows(total);
  parallel_for(total, o.threads, [&](std::size_t idx) {
    std::vector<double> coords(n + 1);
    std::size_t rem = idx;
    for (std::size_t a = axes.size(); a-- > 0;) {
      coords[a] = axes[a].at(rem % axes[a].count);
      rem /= axes[a].count;
    }
    const std::span<const double> q(coords.data(), n);
    HJReport r = relatedness_defect(sys.structure, sys.hamiltonian, gamma, q, coords[n]);
    if (mode == "frozen")
      r.residual = hj_residual_contact(sys.hamiltonian, gamma, q, coords[n], {frozen_value});
    rows[idx] = {std::move(coords), std::move(r)};
  });

  auto manifest = base_manifest("hj-residual", o, &sys);
  manifest["section"] = comps;
  manifest["grid"] = grid;
  manifest["mode"] = mode;
  if (mode == "frozen") manifest["frozen_value"] = frozen_value;
  if (tol) manifest["tol"] = *tol;

  std::ostringstream s;
  double worst = 0.0;
  if (o.format == "json") {
    nlohmann::json j;
    j["version"] = kVersion;
    j["manifest"] = manifest;
    j["seed"] = o.seed;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : rows) {
      for (double v : row.report.residual) worst = std::max(worst, std::abs(v));
      j["rows"].push_back({{"q", std::vector<double>(row.base.begin(), row.base.begin() + n)},
                           {"s", row.base[n]},
                           {"residual", row.report.residual},
                           {"relatedness", row.report.relatedness_defect},
                           {"closedness", row.report.closedness_defect}});
    }
    s << j.dump(1) << '\n';
  } else if (o.format == "csv") {
    write_comment_header(s, {manifest, o.seed});
    for (std::size_t i = 1; i <= n; ++i) s << 'q' << i << ',';
    s << 's';
    for (std::size_t i = 1; i <= n; ++i) s << ",residual" << i;
    s << ",relatedness,closedness\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i <= n; ++i) s << (i ? "," : "") << format_real(row.base[i]);
      for (double v : row.report.residual) {
        s << ',' << format_real(v);
        worst = std::max(worst, std::abs(v));
      }
      s << ',' << format_real(row.report.relatedness_defect) << ',' << format_real(row.report.closedness_defect)
        << '\n';
    }
  } else {
    throw InvalidArgument("unknown output format '" + o.format + "'");
  }
  emit(o, s.str(), out);
  return (tol && !(worst < *tol)) ? kToleranceFailure : kOk;
}

struct PinneyOptions {
  double k = 1.0;
  std::string omega = "1";
  std::string y1, y2;
  std::string form = "classical";
  double a = 1.0, b = 0.0, c = 1.0;
  double c1 = 1.0, c2 = 1.0;
  std::string branch = "+";
  double t0 = 0.0, t1 = 10.0;
  std::size_t samples = 1000;
};

inline int cmd_pinney(const CommonOptions& o, const PinneyOptions& po, std::ostream& out) {
  models::PinneySpec spec;
  spec.k = po.k;
  spec.omega = po.omega;
  spec.y1 = po.y1.empty() ? "cos((" + po.omega + ")*t)" : po.y1;
  spec.y2 = po.y2.empty() ? "sin((" + po.omega + ")*t)" : po.y2;
  if (po.form == "classical") {
    spec.form = models::ClassicalPinneyForm{po.a, po.b, po.c};
  } else if (po.form == "nested") {
    if (po.branch != "+" && po.branch != "-") throw ParseError("--branch must be + or -", 0);
    spec.form = models::NestedRootPinneyForm{po.c1, po.c2, po.branch == "+" ? 1 : -1};
  } else {
    throw ParseError("--form must be classical or nested", 0);
  }
  if (!(po.t1 > po.t0) || po.samples < 1) throw InvalidArgument("pinney needs t1 > t0 and samples >= 1");
  const models::PinneySolution sol(spec);
  const auto h = models::ws_hamiltonian(po.k, po.omega);

  Trajectory traj{StructureKind::cosymplectic, {}};
  traj.samples.resize(po.samples + 1);
  parallel_for(po.samples + 1, o.threads, [&](std::size_t i) {
    const double t = i == po.samples ? po.t1 : po.t0 + (po.t1 - po.t0) * static_cast<double>(i) / po.samples;
    TrajectorySample smp;
    smp.tau = t;
    smp.x = ExtendedPoint({sol(t)}, {sol.velocity(t)}, t);
    smp.hamiltonian = h(smp.x);
    smp.defect = sol.residual(t);
    traj.samples[i] = std::move(smp);
  });

  nlohmann::json manifest;
  manifest["command"] = "pinney";
  manifest["k"] = po.k;
  manifest["omega"] = po.omega;
  manifest["y1"] = spec.y1;
  manifest["y2"] = spec.y2;
  manifest["form"] = po.form;
  if (po.form == "classical") {
    manifest["A"] = po.a;
    manifest["B"] = po.b;
    manifest["C"] = po.c;
  } else {
    manifest["C1"] = po.c1;
    manifest["C2"] = po.c2;
    manifest["branch"] = po.branch;
  }
  manifest["t0"] = po.t0;
  manifest["t1"] = po.t1;
  manifest["samples"] = po.samples;
  manifest["output"] = o.out.empty() ? "-" : o.out;
  manifest["format"] = o.format;
  manifest["seed"] = o.seed;
  emit(o, render_trajectory(o, traj, {manifest, o.seed}), out);
  return kOk;
}

// ---------------------------------------------------------------------------
// check: contract suite on seeded random points

struct CheckLine {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  double threshold = 0.0;
};

inline std::vector<CheckLine> run_contract_suite(const std::string& label, StructureKind kind,
                                                 const HamiltonianFunction& h, std::size_t points, std::uint64_t seed,
                                                 std::size_t threads) {
  const std::size_t n = h.arity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> q_dist(0.5, 2.0), p_dist(-2.0, 2.0), s_dist(0.0, 2.0);
  std::vector<ExtendedPoint> pts;
  pts.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    std::vector<double> q(n), p(n);
    for (auto& v : q) v = (rng() & 1u) ? q_dist(rng) : -q_dist(rng);
    for (auto& v : p) v = p_dist(rng);
    pts.emplace_back(std::move(q), std::move(p), s_dist(rng));
  }

  std::vector<double> eta_err(points), omega_err(points), pairing_err(points), grad_err(points);
  parallel_for(points, threads, [&](std::size_t i) {
    const auto r = contract_check(kind, h, pts[i]);
    eta_err[i] = kind == StructureKind::cosymplectic ? std::abs(r.eta_pairing - 1.0) : 0.0;
    omega_err[i] = r.omega_defect;
    pairing_err[i] = r.relative_pairing_defect();
    const auto flat = pts[i].flat();
    grad_err[i] = grad_crosscheck(h, std::span<const double>(flat)).max_discrepancy;
  });
  auto worst = [](const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); };
  std::vector<CheckLine> lines;
  const std::string prefix = label + "/" + std::string(to_string(kind)) + "/";
  if (kind == StructureKind::cosymplectic) lines.push_back({prefix + "reeb_dt_pairing", worst(eta_err) == 0.0, worst(eta_err), 0.0});
  lines.push_back({prefix + "defining_form", worst(omega_err) < 1e-12, worst(omega_err), 1e-12});
  if (kind == StructureKind::contact)
    lines.push_back({prefix + "eta_of_field_plus_H", worst(pairing_err) < 1e-12, worst(pairing_err), 1e-12});
  lines.push_back({prefix + "gradient_crosscheck", worst(grad_err) < 1e-6, worst(grad_err), 1e-6});
  return lines;
}

inline int cmd_check(const CommonOptions& o, std::size_t points, std::ostream& out) {
  std::vector<CheckLine> lines;
  nlohmann::json manifest;
  manifest["command"] = "check";
  manifest["points"] = points;
  manifest["seed"] = o.seed;
  manifest["output"] = o.out.empty() ? "-" : o.out;
  if (o.system.empty()) {
    manifest["system"] = "builtins";
    for (const char* name : {"ws", "trig", "damped"}) {
      CommonOptions oo = o;
      oo.system = name;
      const auto sys = load_system(oo);
      auto l = run_contract_suite(name, sys.structure, sys.hamiltonian, points, o.seed, o.threads);
      lines.insert(lines.end(), l.begin(), l.end());
    }
  } else {
    const auto sys = load_system(o);
    manifest["system"] = o.system;
    manifest["definition"] = sys.definition.to_json();
    lines = run_contract_suite(o.system, sys.structure, sys.hamiltonian, points, o.seed, o.threads);
  }
  std::ostringstream s;
  write_comment_header(s, {manifest, o.seed});
  bool all = true;
  for (const auto& l : lines) {
    char threshold[16];
    std::snprintf(threshold, sizeof threshold, "%g", l.threshold);
    s << (l.pass ? "PASS " : "FAIL ") << l.name << " worst=" << format_real(l.worst) << " threshold=" << threshold
      << '\n';
    all = all && l.pass;
  }
  emit(o, s.str(), out);
  return all ? kOk : kContractViolation;
}

// ---------------------------------------------------------------------------

inline void add_common(CLI::App* app, CommonOptions& o, bool system_required = true) {
  auto* sys = app->add_option("--system", o.system, "Built-in system (ws, trig, damped) or path to a system JSON file");
  if (system_required) sys->required();
  app->add_option("--structure", o.structure, "Override the structure: symplectic, cosymplectic or contact");
  app->add_option("--param", o.params, "Parameter override name=value (repeatable)");
  app->add_option("--omega", o.omega, "Frequency expression in t for the ws system");
  app->add_option("--potential", o.potential, "Potential expression V(q1) for the damped system");
  app->add_option("--out", o.out, "Output path (default stdout)");
  app->add_option("--format", o.format, "Output format: csv or json");
  app->add_option("--seed", o.seed, "Seed recorded in the output header");
  app->add_option("--threads", o.threads, "Worker threads for independent evaluations");
}

inline void add_integrator(CLI::App* app, IntegratorOptions& io, bool t1_required) {
  app->add_option("--method", io.method, "rk45 (adaptive) or rk4 (fixed step)");
  app->add_option("--rtol", io.rtol);
  app->add_option("--atol", io.atol);
  app->add_option("--step", io.step, "rk4 step");
  app->add_option("--samples", io.samples, "Number of output intervals");
  app->add_option("--max-steps", io.max_steps);
  app->add_option("--q-min", io.q_min, "Singularity guard for q-singular systems");
  app->add_option("--t0", io.t0);
  auto* t1 = app->add_option("--t1", io.t1);
  if (t1_required) t1->required();
}

/// Runs the CLI on argv-style arguments (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hamilton-Jacobi toolkit for symplectic, cosymplectic and contact dynamics", "hamjac"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonOptions common;
  IntegratorOptions integ;
  std::string point, from, q0, gamma0, grid, mode = "general";
  std::vector<std::string> section;
  double s0 = 0.0, tol = 1e-6, frozen_value = 1.0;
  std::optional<double> residual_tol;
  std::size_t points = 1000;
  PinneyOptions pinney;

  auto* field = app.add_subcommand("field", "Evaluate the Hamiltonian field and its defining contracts at a point");
  add_common(field, common);
  field->add_option("--point", point, "q=...;p=...;s=...")->required();

  auto* integ_cmd = app.add_subcommand("integrate", "Integrate the Hamiltonian field");
  add_common(integ_cmd, common);
  add_integrator(integ_cmd, integ, true);
  integ_cmd->add_option("--from", from, "Initial point q=...;p=...;s=...")->required();

  auto* chars = app.add_subcommand("characteristics", "Integrate the characteristic system of the HJ equation");
  add_common(chars, common);
  add_integrator(chars, integ, true);
  chars->add_option("--q0", q0)->required();
  chars->add_option("--gamma0", gamma0)->required();
  chars->add_option("--s0", s0);

  auto* compare = app.add_subcommand("compare", "Compare lifted projected curves with full integral curves");
  add_common(compare, common);
  add_integrator(compare, integ, true);
  compare->add_option("--section", section, "Section component expression (one per dimension)");
  compare->add_option("--from", from, "Base point q=...;s=...")->required();
  compare->add_option("--tol", tol, "Pass threshold for max_point_deviation");

  auto* hjr = app.add_subcommand("hj-residual", "Evaluate HJ residuals and relatedness defects on a grid");
  add_common(hjr, common);
  hjr->add_option("--section", section, "Section component expression (one per dimension)");
  hjr->add_option("--grid", grid, "q1lo:q1hi:n1,...,slo:shi:ns")->required();
  hjr->add_option("--mode", mode, "general, or frozen (contact: d gamma/dS fixed)");
  hjr->add_option("--frozen-value", frozen_value, "Value of d gamma/dS in frozen mode");
  hjr->add_option("--tol", residual_tol, "Fail (exit 5) if any |residual| reaches this");

  auto* pin = app.add_subcommand("pinney", "Sample closed-form Milne-Pinney solutions with their residual");
  pin->add_option("--out", common.out);
  pin->add_option("--format", common.format);
  pin->add_option("--seed", common.seed);
  pin->add_option("--threads", common.threads);
  pin->add_option("--k", pinney.k);
  pin->add_option("--omega", pinney.omega, "Frequency expression in t");
  pin->add_option("--y1", pinney.y1, "First oscillator solution (default cos(omega*t))");
  pin->add_option("--y2", pinney.y2, "Second oscillator solution (default sin(omega*t))");
  pin->add_option("--form", pinney.form, "classical or nested");
  pin->add_option("--A", pinney.a);
  pin->add_option("--B", pinney.b);
  pin->add_option("--C", pinney.c);
  pin->add_option("--C1", pinney.c1);
  pin->add_option("--C2", pinney.c2);
  pin->add_option("--branch", pinney.branch, "+ or -");
  pin->add_option("--t0", pinney.t0);
  pin->add_option("--t1", pinney.t1);
  pin->add_option("--samples", pinney.samples);

  auto* check = app.add_subcommand("check", "Run the contract suite on seeded random points");
  add_common(check, common, false);
  check->add_option("--points", points);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  try {
    if (*field) return cmd_field(common, point, out);
    if (*integ_cmd) return cmd_integrate(common, integ, from, out);
    if (*chars) return cmd_characteristics(common, integ, q0, gamma0, s0, out);
    if (*compare) return cmd_compare(common, integ, section, from, tol, out);
    if (*hjr) return cmd_hj_residual(common, section, grid, mode, frozen_value, residual_tol, out);
    if (*pin) return cmd_pinney(common, pinney, out);
    if (*check) return cmd_check(common, points, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const UnknownSymbolError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kParseError;
  } catch (const DomainError& e) {
    err << "singularity: " << e.what() << '\n';
    return kSingularity;
  } catch (const IntegrationError& e) {
    err << "integration failed at tau=" << format_real(e.last_tau()) << ": " << e.what() << '\n';
    return e.reason() == IntegrationError::Reason::singularity ? kSingularity : kFailure;
  } catch (const TimeDependenceError& e) {
    err << "contract violation: " << e.what() << '\n';
    return kContractViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace hamjac::cli
