#pragma once

// Trajectory export. CSV columns: tau,q1..qn,p1..pn,s,H,defect, every real
// with 17 significant digits, preceded by '#' comment lines carrying the
// version, the run manifest and the seed.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>

#include "json.hpp"

#include "hamjac/flows/trajectory.hpp"
#include "hamjac/phase/expression.hpp"
#include "hamjac/version.hpp"

namespace hamjac {

struct OutputHeader {
  nlohmann::json manifest = nlohmann::json::object();
  std::uint64_t seed = 0;
};

inline void write_comment_header(std::ostream& out, const OutputHeader& header) {
  out << "# hamjac " << kVersion << '\n';
  out << "# manifest " << header.manifest.dump() << '\n';
  out << "# seed " << header.seed << '\n';
}

inline std::string csv_columns(std::size_t n) {
  std::string cols = "tau";
  for (std::size_t i = 1; i <= n; ++i) cols += ",q" + std::to_string(i);
  for (std::size_t i = 1; i <= n; ++i) cols += ",p" + std::to_string(i);
  cols += ",s,H,defect";
  return cols;
}

inline void write_csv(std::ostream& out, const Trajectory& traj, const OutputHeader& header) {
  write_comment_header(out, header);
  const std::size_t n = traj.dimension();
  out << csv_columns(n) << '\n';
  for (const auto& smp : traj.samples) {
    out << format_real(smp.tau);
    for (double v : smp.x.q) out << ',' << format_real(v);
    for (double v : smp.x.p) out << ',' << format_real(v);
    out << ',' << format_real(smp.x.s) << ',' << format_real(smp.hamiltonian) << ',' << format_real(smp.defect)
        << '\n';
  }
}

/// Same fields as the CSV; non-finite reals become null.
inline nlohmann::json trajectory_to_json(const Trajectory& traj, const OutputHeader& header) {
  auto real = [](double v) -> nlohmann::json { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  nlohmann::json j;
  j["version"] = kVersion;
  j["manifest"] = header.manifest;
  j["seed"] = header.seed;
  j["structure"] = std::string(to_string(traj.kind));
  j["samples"] = nlohmann::json::array();
  for (const auto& smp : traj.samples) {
    nlohmann::json row;
    row["tau"] = real(smp.tau);
    row["q"] = smp.x.q;
    row["p"] = smp.x.p;
    row["s"] = real(smp.x.s);
    row["H"] = real(smp.hamiltonian);
    row["defect"] = real(smp.defect);
    j["samples"].push_back(std::move(row));
  }
  return j;
}

inline void write_json(std::ostream& out, const Trajectory& traj, const OutputHeader& header) {
  out << trajectory_to_json(traj, header).dump(1) << '\n';
}

}  // namespace hamjac
