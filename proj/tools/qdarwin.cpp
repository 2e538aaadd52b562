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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace qdarwin::cli;

int main(int argc, char** argv) {
  CLI::App app{"qdarwin: objectivity diagnostics for system-environment states"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::uint64_t seed = 0;
  std::size_t restarts = 0, grid = 0;
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_option("--tol-opt", g.tol_opt, "optimizer tolerance, bits")->check(CLI::PositiveNumber);
  app.add_option("--tol-num", g.tol_num, "state validation tolerance")->check(CLI::PositiveNumber);
  auto* restarts_opt = app.add_option("--restarts", restarts, "random restarts for dim >= 3");
  auto* grid_opt = app.add_option("--grid", grid, "polar grid points for qubit searches")->check(CLI::Range(2, 100000));
  app.add_option("-o,--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  MakeParams mp;
  auto* make = app.add_subcommand("make", "build a state file");
  make->add_option("kind", mp.kind, "sbs, ghz, horodecki, appendix-b1, appendix-b2, haar, cq, random-sbs")
      ->required();
  make->add_option("--p", mp.p, "horodecki mixing parameter");
  make->add_option("--p1", mp.p1, "appendix-b branch probability");
  make->add_option("--n", mp.n, "number of subenvironments");
  make->add_option("--dims", mp.dims, "comma-separated dims (haar: full layout, sbs: subenvironments)");
  make->add_option("--probs", mp.probs, "comma-separated branch probabilities");
  make->add_option("--overlap", mp.overlap, "cq conditional overlap");
  make->add_option("--branches", mp.branches, "random-sbs branch count");
  make->add_option("--subenvs", mp.subenvs, "random-sbs subenvironment count");
  make->add_option("--max-dim", mp.max_dim, "random-sbs largest subenvironment dim");
  make->add_option("--spec", mp.spec_file, "sbs: JSON branch specification");

  AnalyzeParams ap;
  auto* analyze = app.add_subcommand("analyze", "objectivity report for one state");
  analyze->add_option("state", ap.state_path, "state file")->required();
  analyze->add_option("--system", ap.system, "system label");
  analyze->add_option("--fragment", ap.fragment, "comma-separated labels (default: all environments)");
  analyze->add_option("--subfragment", ap.subfragments, "comma-separated labels; repeatable");

  ScanParams sp;
  auto* scan = app.add_subcommand("scan", "fragment scan and redundancy");
  scan->add_option("state", sp.state_path, "state file")->required();
  scan->add_option("--system", sp.system, "system label");
  scan->add_option("--delta", sp.delta, "information deficit");
  scan->add_option("--samples", sp.samples, "fragments sampled per fraction")->check(CLI::PositiveNumber);
  scan->add_option("--strategy", sp.strategy, "exhaustive or greedy");
  scan->add_option("--report", sp.report_path, "redundancy report JSON");

  VerifyParams vp;
  auto* verify = app.add_subcommand("verify-theorem", "randomized SBS <=> SQD + SI check");
  verify->add_option("--cases", vp.cases, "number of cases");
  verify->add_option("--dims-cap", vp.dims_cap, "largest total dimension");
  verify->add_option("--perturbation", vp.perturbation, "strength of the perturbed family");
  verify->add_option("--report", vp.report_path, "per-case JSON report");

  AppendixCParams cp;
  auto* appc = app.add_subcommand("appendix-c", "Horodecki state regression");
  appc->add_option("--grid-points", cp.grid_points, "interior grid points");
  appc->add_flag("--endpoints", cp.endpoints, "also evaluate p = 0 and p = 1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  if (*seed_opt) g.seed = seed;
  if (*restarts_opt) g.restarts = restarts;
  if (*grid_opt) g.grid = grid;

  if (*make) return cmd_make(mp, g, std::cout, std::cerr);
  if (*analyze) return cmd_analyze(ap, g, std::cout, std::cerr);
  if (*scan) {
    if (app.get_option("--format")->count() == 0) g.format = "csv";
    return cmd_scan(sp, g, std::cout, std::cerr);
  }
  if (*verify) return cmd_verify_theorem(vp, g, std::cout, std::cerr);
  if (*appc) return cmd_appendix_c(cp, g, std::cout, std::cerr);
  return kUsage;
}
