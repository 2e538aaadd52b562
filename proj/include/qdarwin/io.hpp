// Copyright 2026 The qdarwin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QDARWIN_IO_HPP
#define QDARWIN_IO_HPP

// State files, report JSON and CSV. Needs nlohmann/json (json.hpp) on the
// include path.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdarwin/entropy.hpp"
#include "qdarwin/error.hpp"
#include "qdarwin/layout.hpp"
#include "qdarwin/objectivity.hpp"
#include "qdarwin/optimizer.hpp"
#include "qdarwin/redundancy.hpp"
#include "qdarwin/state.hpp"
#include "qdarwin/tolerances.hpp"

namespace qdarwin {

using Json = nlohmann::json;

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---- state files -----------------------------------------------------------

inline std::string state_to_json(const DensityMatrix& rho) {
  std::ostringstream os;
  os << "{\n  \"layout\": [";
  const auto& f = rho.layout().factors();
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << (i ? ", " : "") << "{\"label\": " << Json(f[i].label).dump() << ", \"dim\": " << f[i].dim
       << ", \"role\": \"" << (f[i].role == Role::System ? "system" : "environment") << "\"}";
  }
  os << "],\n  \"matrix\": [\n";
  const auto& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << "    [";
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      os << (c ? ", " : "") << "[" << format_double(m(r, c).real()) << ", " << format_double(m(r, c).imag()) << "]";
    os << "]" << (r + 1 < m.rows() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

namespace detail {

[[noreturn]] inline void malformed(const std::string& what) { throw Error(ErrorCode::MalformedFile, what); }

inline SubsystemLayout layout_from_json(const Json& j) {
  if (!j.is_array()) malformed("\"layout\" must be an array");
  std::vector<Factor> factors;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("label") || !e.contains("dim"))
      malformed("layout entries need \"label\" and \"dim\"");
    if (!e["label"].is_string()) malformed("layout label must be a string");
    if (!e["dim"].is_number_integer() || e["dim"].get<long long>() < 1)
      malformed("layout dim must be a positive integer");
    Role role = Role::Environment;
    if (e.contains("role")) {
      const std::string r = e["role"].is_string() ? e["role"].get<std::string>() : "";
      if (r == "system")
        role = Role::System;
      else if (r != "environment")
        malformed("layout role must be \"system\" or \"environment\"");
    }
    factors.push_back({e["label"].get<std::string>(), e["dim"].get<std::size_t>(), role});
  }
  return SubsystemLayout(std::move(factors));
}

}  // namespace detail

/// Parses and validates a state file. Throws MalformedFile for syntax or
/// shape problems; validation failures keep their own error codes.
inline DensityMatrix state_from_json(const std::string& text, const Tolerances& tol = {}) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    detail::malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("layout") || !j.contains("matrix"))
    detail::malformed("state file needs \"layout\" and \"matrix\"");
  const SubsystemLayout layout = detail::layout_from_json(j["layout"]);
  if (!layout.system_label()) detail::malformed("state layout needs exactly one system factor");
  const auto& rows = j["matrix"];
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != d)
    detail::malformed("matrix must have " + std::to_string(d) + " rows");
  ComplexMatrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
      detail::malformed("row " + std::to_string(r) + " must have " + std::to_string(d) + " entries");
    for (Eigen::Index c = 0; c < d; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = cplx(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        detail::malformed("entry (" + std::to_string(r) + "," + std::to_string(c) + ") must be [re, im]");
      }
    }
  }
  return validate_density_matrix(m, layout, tol);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MalformedFile, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

inline DensityMatrix read_state_file(const std::string& path, const Tolerances& tol = {}) {
  return state_from_json(read_text_file(path), tol);
}

inline void write_state_file(const std::string& path, const DensityMatrix& rho) {
  write_text_file(path, state_to_json(rho));
}

// ---- CSV -------------------------------------------------------------------

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row_strings(header); }

  void row(const std::vector<double>& values) {
    std::vector<std::string> s;
    for (double v : values) s.push_back(format_double(v));
    row_strings(s);
  }

  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
    text_ += "\n";
  }

  const std::string& str() const noexcept { return text_; }

 private:
  std::string text_;
};

// ---- reports ---------------------------------------------------------------

inline Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

inline Json to_json(const std::optional<ProjectiveMeasurement>& m) {
  if (!m) return nullptr;
  return {{"subsystem", m->subsystem()}, {"basis_columns", to_json(m->basis())}};
}

inline Json to_json(const OptimizerConfig& c) {
  return {{"theta_points", c.theta_points}, {"phi_points", c.phi_points},
          {"refine_starts", c.refine_starts}, {"restarts", c.restarts},
          {"max_evaluations", c.max_evaluations}, {"seed", c.seed},
          {"tol_opt", c.tol},                 {"throw_on_nonconvergence", c.throw_on_nonconvergence}};
}

inline Json to_json(const VerdictTolerances& t) {
  return {{"offdiag", t.offdiag},     {"overlap", t.overlap},       {"cmi", t.cmi},
          {"product", t.product},     {"sqd", t.sqd},               {"borderline_factor", t.borderline},
          {"pointer_degeneracy", t.pointer_degeneracy}};
}

inline Json to_json(const AccessibleInfoBounds& b) {
  return {{"lower_bits", b.lower}, {"upper_bits", b.upper}, {"exact", b.exact}};
}

inline Json to_json(const SqdVerdict& v) {
  Json subs = Json::array();
  for (const auto& s : v.per_subfragment)
    subs.push_back({{"fragment", s.fragment}, {"holds", s.holds}, {"I_bits", s.I}, {"chi_bits", s.chi},
                    {"discord_bits", s.discord}});
  return {{"holds", v.holds},
          {"I_bits", v.I},
          {"chi_bits", v.chi},
          {"H_S_bits", v.H_S},
          {"discord_bits", v.discord},
          {"tolerance_bits", v.tolerance},
          {"per_subfragment", subs},
          {"acc_bounds", to_json(v.acc_bounds)},
          {"optimizer_basis", to_json(v.optimizer_basis)},
          {"measurement_class", MeasureValue::measurement_class},
          {"chi_gap_bits", v.chi_gap},
          {"ratio", v.ratio},
          {"borderline", v.borderline}};
}

inline Json to_json(const SbsVerdict& v) {
  return {{"holds", v.holds},
          {"bipartite", v.bipartite},
          {"bipartite_only", v.bipartite_only},
          {"degenerate_spectrum", v.degenerate_spectrum},
          {"pointer_basis", to_json(v.pointer_basis)},
          {"branch_probabilities", v.branch_probabilities},
          {"max_offdiagonal_block_norm", v.max_offdiagonal_block_norm},
          {"max_pairwise_overlap", v.max_pairwise_overlap},
          {"max_joint_overlap", v.max_joint_overlap},
          {"max_conditional_cmi_bits", v.max_conditional_cmi},
          {"max_product_deviation", v.max_product_deviation},
          {"ratio", v.ratio},
          {"bipartite_ratio", v.bipartite_ratio},
          {"borderline", v.borderline},
          {"bipartite_borderline", v.bipartite_borderline}};
}

inline Json to_json(const StrongIndependence& s) {
  return {{"holds", s.holds},
          {"worst_pair", s.worst_pair.first.empty() ? Json(nullptr)
                                                    : Json::array({s.worst_pair.first, s.worst_pair.second})},
          {"worst_cmi_bits", s.worst_cmi},
          {"ratio", s.ratio},
          {"borderline", s.borderline}};
}

inline Json to_json(const TheoremWitness& w) {
  return {{"sqd", to_json(w.sqd)},
          {"sbs", to_json(w.sbs)},
          {"strong_independence", to_json(w.strong_independence)},
          {"consistent", w.consistent},
          {"borderline", w.borderline},
          {"outcome", to_string(w.outcome)}};
}

inline Json to_json(const ObjectivityReport& r) {
  Json si = to_json(r.strong_independence);
  si["applicable"] = r.strong_independence_applicable;
  return {{"system", r.system},
          {"fragment", r.fragment},
          {"subfragments", r.subfragments},
          {"sqd", to_json(r.sqd)},
          {"sbs", to_json(r.sbs)},
          {"strong_independence", si},
          {"m_sqd", r.m_sqd ? Json(*r.m_sqd) : Json(nullptr)},
          {"eta", r.eta},
          {"acc_bounds", to_json(r.acc_bounds)},
          {"optimizer", to_json(r.optimizer)},
          {"tolerances", to_json(r.tolerances)},
          {"units", "bits"}};
}

inline Json to_json(const RedundancyReport& r) {
  Json curve = Json::array();
  for (const auto& p : r.scan_curve)
    curve.push_back({{"fraction", p.fraction},
                     {"mean_chi_bits", p.mean_chi},
                     {"mean_discord_bits", p.mean_discord},
                     {"mean_I_bits", p.mean_I},
                     {"n_samples", p.samples}});
  return {{"delta", r.delta},
          {"strategy", r.strategy},
          {"H_S_bits", r.system_entropy},
          {"threshold_bits", r.threshold},
          {"R_delta", r.R_delta},
          {"witness_fragments", r.witness_fragments},
          {"witness_chi_bits", r.witness_chi},
          {"f_delta_min", r.f_delta_min},
          {"scan_curve", curve},
          {"discord_bound",
           {{"checked", r.discord_bound_checked},
            {"violations", r.discord_bound_violations},
            {"skipped_I_above_H_S", r.discord_bound_skipped}}},
          {"fragments_evaluated", r.fragments_evaluated}};
}

inline std::string scan_csv(const RedundancyReport& r) {
  CsvWriter csv({"fraction", "mean_chi_bits", "mean_discord_bits", "mean_I_bits", "n_samples"});
  for (const auto& p : r.scan_curve)
    csv.row_strings({format_double(p.fraction), format_double(p.mean_chi), format_double(p.mean_discord),
                     format_double(p.mean_I), std::to_string(p.samples)});
  return csv.str();
}

}  // namespace qdarwin

#endif  // QDARWIN_IO_HPP
