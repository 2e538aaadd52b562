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

#ifndef QDARWIN_TOOLS_COMMANDS_HPP
#define QDARWIN_TOOLS_COMMANDS_HPP

// Subcommand bodies of the qdarwin tool. Kept apart from argument parsing
// so tests can drive them directly.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qdarwin/io.hpp"
#include "qdarwin/qdarwin.hpp"

namespace qdarwin::cli {

enum Exit : int { kOk = 0, kAssertion = 1, kUsage = 2, kNoConvergence = 3 };

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  double tol_opt = 1e-6;
  double tol_num = 1e-9;
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> grid;
  std::string out;  // empty: stdout
  std::string format = "json";

  OptimizerConfig optimizer() const {
    OptimizerConfig c;
    c.tol = tol_opt;
    if (restarts) c.restarts = *restarts;
    if (grid) {
      c.theta_points = *grid;
      c.phi_points = std::max<std::size_t>(*grid / 2, 1);
    }
    if (seed) c.seed = *seed;
    return c;
  }

  Tolerances tolerances() const {
    Tolerances t;
    t.herm = t.psd = t.trace = t.orth = tol_num;
    return t;
  }
};

inline std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split_list(s)) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != t.size()) throw Error(ErrorCode::InvalidArgument, "not a number: " + t);
    out.push_back(v);
  }
  return out;
}

inline std::vector<std::size_t> parse_dims(const std::string& s) {
  std::vector<std::size_t> out;
  for (double v : parse_doubles(s)) {
    if (!(v >= 1.0) || v != std::floor(v)) throw Error(ErrorCode::InvalidArgument, "dims must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty --dims");
  return out;
}

inline void emit(const GlobalOptions& g, const std::string& text, std::ostream& out) {
  if (g.out.empty())
    out << text;
  else
    write_text_file(g.out, text);
}

inline std::string layout_summary(const SubsystemLayout& l) {
  std::string s = "[";
  for (std::size_t i = 0; i < l.size(); ++i)
    s += (i ? ", " : "") + l[i].label + ":" + std::to_string(l[i].dim);
  return s + "]";
}

/// Runs `body`; maps library errors to exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::OptimizerDidNotConverge ? kNoConvergence : kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

// ---- make ------------------------------------------------------------------

struct MakeParams {
  std::string kind;
  double p = 0.25;
  double p1 = 0.5;
  std::size_t n = 2;
  std::string dims;   // haar: full layout; sbs: subenvironment dims
  std::string probs;  // sbs, cq
  double overlap = 0.0;
  std::size_t branches = 2;
  std::size_t subenvs = 3;
  std::size_t max_dim = 4;
  std::string spec_file;  // sbs: JSON SbsSpec
};

namespace detail {

inline SbsSpec sbs_spec_from_json(const Json& j) {
  SbsSpec spec;
  try {
    spec.probabilities = j.at("probabilities").get<std::vector<double>>();
    spec.subenvironment_dims = j.at("subenvironment_dims").get<std::vector<std::size_t>>();
    spec.supports = j.at("supports").get<std::vector<std::vector<std::vector<std::size_t>>>>();
    spec.spectra = j.at("spectra").get<std::vector<std::vector<std::vector<double>>>>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedFile, std::string("sbs spec: ") + e.what());
  }
  return spec;
}

/// One pure conditional per branch: branch i sits on index i of every
/// subenvironment.
inline SbsSpec simple_sbs_spec(const std::vector<double>& probs, const std::vector<std::size_t>& dims) {
  SbsSpec spec;
  spec.probabilities = probs;
  spec.subenvironment_dims = dims;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    spec.supports.push_back({});
    spec.spectra.push_back({});
    for (std::size_t k = 0; k < dims.size(); ++k) {
      spec.supports[i].push_back({i});
      spec.spectra[i].push_back({1.0});
    }
  }
  return spec;
}

}  // namespace detail

inline int cmd_make(const MakeParams& mp, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::uint64_t seed = g.seed.value_or(1);
    std::optional<DensityMatrix> rho;
    const std::string& k = mp.kind;
    if (k == "horodecki") {
      rho = make_horodecki(mp.p);
    } else if (k == "ghz") {
      if (mp.n < 1) throw Error(ErrorCode::InvalidArgument, "--n must be >= 1");
      rho = make_ghz_reduced(mp.n);
    } else if (k == "appendix-b1") {
      rho = make_appendix_b1(mp.n, mp.p1);
    } else if (k == "appendix-b2") {
      rho = make_appendix_b2(mp.n, mp.p1);
    } else if (k == "haar") {
      if (!g.seed) throw Error(ErrorCode::InvalidArgument, "haar needs --seed");
      rho = make_haar_random_pure(seed, SubsystemLayout::system_environment(parse_dims(mp.dims))).to_density();
    } else if (k == "cq") {
      if (!g.seed) throw Error(ErrorCode::InvalidArgument, "cq needs --seed");
      rho = make_cq_state(seed, parse_doubles(mp.probs.empty() ? "0.5,0.5" : mp.probs), mp.overlap);
    } else if (k == "random-sbs") {
      if (!g.seed) throw Error(ErrorCode::InvalidArgument, "random-sbs needs --seed");
      rho = make_random_sbs(seed, mp.branches, mp.subenvs, mp.max_dim);
    } else if (k == "sbs") {
      if (!mp.spec_file.empty()) {
        Json j;
        try {
          j = Json::parse(read_text_file(mp.spec_file));
        } catch (const Json::exception& e) {
          throw Error(ErrorCode::MalformedFile, std::string("sbs spec: ") + e.what());
        }
        rho = make_sbs(detail::sbs_spec_from_json(j));
      } else {
        rho = make_sbs(detail::simple_sbs_spec(parse_doubles(mp.probs.empty() ? "0.5,0.5" : mp.probs),
                                               parse_dims(mp.dims.empty() ? "2,2" : mp.dims)));
      }
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown kind '" + k +
                                                   "' (sbs, ghz, horodecki, appendix-b1, appendix-b2, haar, cq, "
                                                   "random-sbs)");
    }
    emit(g, state_to_json(*rho), out);
    (g.out.empty() ? err : out) << k << ": layout " << layout_summary(rho->layout()) << ", dim " << rho->dim()
                                << "\n";
    return int(kOk);
  });
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeParams {
  std::string state_path;
  std::string system;  // default: the system factor
  std::string fragment;
  std::vector<std::string> subfragments;
};

inline int cmd_analyze(const AnalyzeParams& ap, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DensityMatrix rho = read_state_file(ap.state_path, g.tolerances());
    const std::string system = ap.system.empty() ? *rho.layout().system_label() : ap.system;
    const std::vector<std::string> labels =
        ap.fragment.empty() ? rho.layout().environment_labels() : split_list(ap.fragment);
    const FragmentSelector fragment(rho.layout(), labels);
    std::vector<FragmentSelector> subs;
    for (const auto& s : ap.subfragments) subs.emplace_back(rho.layout(), split_list(s));
    VerdictTolerances vt;
    vt.sqd = g.tol_opt;
    const ObjectivityReport report = analyze(rho, system, fragment, subs, g.optimizer(), vt);
    Json j = to_json(report);
    j["state_file"] = ap.state_path;
    j["tol_num"] = g.tol_num;
    emit(g, j.dump(2) + "\n", out);
    return int(kOk);
  });
}

// ---- scan ------------------------------------------------------------------

struct ScanParams {
  std::string state_path;
  std::string system;
  double delta = 0.1;
  std::size_t samples = 50;
  std::string strategy;  // default: exhaustive up to 12 subenvironments
  std::string report_path;
};

inline int cmd_scan(const ScanParams& sp, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(sp.delta > 0.0 && sp.delta < 1.0)) throw Error(ErrorCode::DeltaOutOfRange, "--delta must lie in (0, 1)");
    const DensityMatrix rho = read_state_file(sp.state_path, g.tolerances());
    const std::string system = sp.system.empty() ? *rho.layout().system_label() : sp.system;
    RedundancyOptions ro;
    ro.scan_samples = sp.samples;
    ro.scan_seed = g.seed.value_or(1);
    ro.eps_opt = g.tol_opt;
    const std::size_t n = rho.layout().environment_labels().size();
    if (sp.strategy.empty())
      ro.strategy = n <= kMaxExhaustiveSubenvs ? RedundancyStrategy::Exhaustive : RedundancyStrategy::Greedy;
    else if (sp.strategy == "exhaustive")
      ro.strategy = RedundancyStrategy::Exhaustive;
    else if (sp.strategy == "greedy")
      ro.strategy = RedundancyStrategy::Greedy;
    else
      throw Error(ErrorCode::InvalidArgument, "--strategy must be exhaustive or greedy");
    const RedundancyReport report = redundancy(rho, system, sp.delta, g.optimizer(), ro);
    Json j = to_json(report);
    j["scan_seed"] = ro.scan_seed;
    j["optimizer"] = to_json(g.optimizer());
    if (g.format == "json") {
      emit(g, j.dump(2) + "\n", out);
    } else {
      emit(g, scan_csv(report), out);
      if (!sp.report_path.empty()) write_text_file(sp.report_path, j.dump(2) + "\n");
    }
    return int(kOk);
  });
}

// ---- verify-theorem --------------------------------------------------------

enum class Family { Sbs, PerturbedSbs, Cq, Haar };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::Sbs: return "sbs";
    case Family::PerturbedSbs: return "perturbed-sbs";
    case Family::Cq: return "cq";
    case Family::Haar: return "haar";
  }
  return "?";
}

struct TheoremCase {
  Family family = Family::Sbs;
  std::uint64_t seed = 0;
  Json parameters;
  DensityMatrix state = DensityMatrix::assume_valid(ComplexMatrix::Identity(2, 2) / 2.0,
                                                    SubsystemLayout::system_environment({2}));
};

/// Case `index` of the randomized family mix; families rotate with the
/// index, parameters come from `seed`.
inline TheoremCase make_theorem_case(std::size_t index, std::uint64_t seed, std::size_t dims_cap,
                                     double perturbation) {
  TheoremCase c;
  c.family = static_cast<Family>(index % 4);
  c.seed = seed;
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  if (c.family == Family::Sbs || c.family == Family::PerturbedSbs) {
    struct Shape {
      std::size_t branches, subenvs, max_dim;
    };
    std::vector<Shape> shapes;
    for (std::size_t nb = 2; nb <= 3; ++nb)
      for (std::size_t n = 1; n <= 3; ++n) {
        std::size_t d = nb;
        while (nb * static_cast<std::size_t>(std::pow(double(d + 1), double(n))) <= dims_cap && d < 8) ++d;
        if (nb * static_cast<std::size_t>(std::pow(double(d), double(n))) <= dims_cap) shapes.push_back({nb, n, d});
      }
    if (shapes.empty()) throw Error(ErrorCode::InvalidArgument, "--dims-cap too small for broadcast states");
    const Shape s = shapes[pick(shapes.size())];
    c.parameters = {{"branches", s.branches}, {"subenvs", s.subenvs}, {"max_dim", s.max_dim}};
    c.state = make_random_sbs(rng(), s.branches, s.subenvs, s.max_dim);
    if (c.family == Family::PerturbedSbs) {
      c.parameters["perturbation"] = perturbation;
      c.state = make_perturbed(c.state, rng(), perturbation);
    }
  } else if (c.family == Family::Cq) {
    std::size_t max_n = 2;
    while ((max_n + 1) * (max_n + 1) <= dims_cap && max_n < 4) ++max_n;
    if (4 > dims_cap) throw Error(ErrorCode::InvalidArgument, "--dims-cap too small for cq states");
    const std::size_t n = 2 + pick(max_n - 1);
    const double overlap = 0.1 * static_cast<double>(pick(10));
    const auto p = qdarwin::detail::flat_simplex(n, rng);
    c.parameters = {{"probabilities", p}, {"overlap", overlap}};
    c.state = make_cq_state(rng(), p, overlap);
  } else {
    std::vector<std::vector<std::size_t>> layouts{{2, 2}, {2, 2, 2}, {2, 2, 2, 2}, {2, 4},    {3, 2},
                                                  {3, 3}, {2, 2, 4}, {3, 2, 2},    {2, 2, 2, 2, 2}};
    std::vector<std::vector<std::size_t>> ok;
    for (const auto& l : layouts) {
      std::size_t d = 1;
      for (auto x : l) d *= x;
      if (d <= dims_cap) ok.push_back(l);
    }
    if (ok.empty()) throw Error(ErrorCode::InvalidArgument, "--dims-cap too small for haar states");
    const auto dims = ok[pick(ok.size())];
    c.parameters = {{"dims", dims}};
    c.state = make_haar_random_pure(rng(), SubsystemLayout::system_environment(dims)).to_density();
  }
  return c;
}

struct TheoremBatch {
  std::size_t pass = 0, borderline = 0, fail = 0;
  Json cases = Json::array();
};

inline TheoremBatch run_theorem_batch(std::size_t n_cases, std::uint64_t seed, std::size_t dims_cap,
                                      double perturbation, const OptimizerConfig& opt,
                                      const VerdictTolerances& tol = {}) {
  TheoremBatch out;
  std::mt19937_64 master(seed);
  OptimizerConfig local = opt;
  local.throw_on_nonconvergence = false;
  for (std::size_t i = 0; i < n_cases; ++i) {
    const TheoremCase c = make_theorem_case(i, master(), dims_cap, perturbation);
    const auto envs = c.state.layout().environment_labels();
    const TheoremWitness w = verify_theorem(c.state, "S", envs, local, tol);
    switch (w.outcome) {
      case TheoremOutcome::Pass: ++out.pass; break;
      case TheoremOutcome::Borderline: ++out.borderline; break;
      case TheoremOutcome::Fail: ++out.fail; break;
    }
    Json j = to_json(w);
    j["index"] = i;
    j["family"] = to_string(c.family);
    j["seed"] = c.seed;
    j["parameters"] = c.parameters;
    j["layout"] = layout_summary(c.state.layout());
    out.cases.push_back(std::move(j));
  }
  return out;
}

struct VerifyParams {
  std::size_t cases = 500;
  std::size_t dims_cap = 32;
  double perturbation = 1e-2;
  std::string report_path;
};

inline int cmd_verify_theorem(const VerifyParams& vp, const GlobalOptions& g, std::ostream& out,
                              std::ostream& err) {
  return guarded(err, [&] {
    if (vp.cases < 1) throw Error(ErrorCode::InvalidArgument, "--cases must be >= 1");
    if (!(vp.perturbation > 0.0 && vp.perturbation <= 1.0))
      throw Error(ErrorCode::InvalidArgument, "--perturbation must lie in (0, 1]");
    const std::uint64_t seed = g.seed.value_or(42);
    const TheoremBatch b = run_theorem_batch(vp.cases, seed, vp.dims_cap, vp.perturbation, g.optimizer());
    Json summary = {{"cases", vp.cases},        {"seed", seed},
                    {"dims_cap", vp.dims_cap},  {"perturbation", vp.perturbation},
                    {"pass", b.pass},           {"borderline", b.borderline},
                    {"fail", b.fail},           {"optimizer", to_json(g.optimizer())},
                    {"tolerances", to_json(VerdictTolerances{})}};
    if (!vp.report_path.empty()) {
      Json report = {{"summary", summary}, {"cases", b.cases}};
      write_text_file(vp.report_path, report.dump(1) + "\n");
    }
    emit(g, summary.dump(2) + "\n", out);
    if (b.fail > 0) {
      for (const auto& c : b.cases)
        if (c["outcome"] == "fail")
          err << "inconsistent case " << c["index"] << " (" << c["family"].get<std::string>() << ", seed "
              << c["seed"] << ")\n";
      return int(kAssertion);
    }
    return int(kOk);
  });
}

// ---- appendix-c ------------------------------------------------------------

/// chi of the Horodecki state in the computational basis:
/// H(p) - pt H(p^2/pt, (1-p)^2/pt) - (1 - pt), pt = p^2 + (1-p)^2.
inline double horodecki_closed_form_chi(double p) {
  const double pt = p * p + (1 - p) * (1 - p);
  return shannon_entropy({p, 1 - p}) - pt * shannon_entropy({p * p / pt, (1 - p) * (1 - p) / pt}) - (1 - pt);
}

struct AppendixCRow {
  double p, H_S, I, chi_optimized, chi_closed_form, discord, m_sqd;
};

inline std::vector<double> appendix_c_grid(std::size_t points, bool endpoints) {
  std::vector<double> grid;
  if (endpoints) grid.push_back(0.0);
  for (std::size_t k = 1; k <= points; ++k) grid.push_back(static_cast<double>(k) / static_cast<double>(points + 1));
  if (endpoints) grid.push_back(1.0);
  return grid;
}

inline AppendixCRow appendix_c_row(double p, const OptimizerConfig& opt) {
  const DensityMatrix rho = make_horodecki(p);
  const SystemFragmentModel model(rho, "S", {"E1"});
  const FragmentMeasures m = fragment_measures(model, opt);
  const double msqd = m.system_entropy > 1e-12 ? m_sqd(m.system_entropy, m.chi.value, m.discord.value)
                                               : std::numeric_limits<double>::quiet_NaN();
  return {p, m.system_entropy, m.mutual_information, m.chi.value, horodecki_closed_form_chi(p), m.discord.value,
          msqd};
}

struct AppendixCParams {
  std::size_t grid_points = 99;
  bool endpoints = false;
};

inline int cmd_appendix_c(const AppendixCParams& ap, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (ap.grid_points < 3) throw Error(ErrorCode::InvalidArgument, "--grid-points must be >= 3");
    CsvWriter csv({"p", "H_S", "I", "chi_optimized", "chi_closed_form", "discord", "m_sqd"});
    double worst_chi = 0.0, worst_i = 0.0;
    std::optional<AppendixCRow> worst_chi_row, worst_i_row;
    for (double p : appendix_c_grid(ap.grid_points, ap.endpoints)) {
      const AppendixCRow r = appendix_c_row(p, g.optimizer());
      csv.row({r.p, r.H_S, r.I, r.chi_optimized, r.chi_closed_form, r.discord, r.m_sqd});
      const double dc = std::abs(r.chi_optimized - r.chi_closed_form);
      const double di = std::abs(r.I - r.H_S);
      if (!worst_chi_row || dc > worst_chi) {
        worst_chi = dc;
        worst_chi_row = r;
      }
      if (!worst_i_row || di > worst_i) {
        worst_i = di;
        worst_i_row = r;
      }
    }
    emit(g, csv.str(), out);
    const bool ok = worst_chi <= 1e-6 && worst_i <= 1e-9;
    if (!ok) {
      const AppendixCRow& r = worst_chi > 1e-6 ? *worst_chi_row : *worst_i_row;
      err << "appendix-c regression failed: max |chi_optimized - chi_closed_form| = " << format_double(worst_chi)
          << ", max |I - H_S| = " << format_double(worst_i) << "\n"
          << "worst row: p=" << format_double(r.p) << " H_S=" << format_double(r.H_S) << " I=" << format_double(r.I)
          << " chi_optimized=" << format_double(r.chi_optimized)
          << " chi_closed_form=" << format_double(r.chi_closed_form) << " discord=" << format_double(r.discord)
          << " m_sqd=" << format_double(r.m_sqd) << "\n";
      return int(kAssertion);
    }
    return int(kOk);
  });
}

}  // namespace qdarwin::cli

#endif  // QDARWIN_TOOLS_COMMANDS_HPP
