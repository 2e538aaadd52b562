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

// Small tour: a broadcast state, an entangled state that still passes the
// mutual-information test, and redundancy of the reduced GHZ state.

#include <cstdio>

#include "qdarwin/qdarwin.hpp"

using namespace qdarwin;

static void report(const char* name, const DensityMatrix& rho, const std::vector<std::string>& fragment) {
  const FragmentSelector f(rho.layout(), fragment);
  const ObjectivityReport r = analyze(rho, "S", f);
  std::printf("%-12s H(S)=%.6f I=%.6f chi=%.6f D=%.6f  sqd=%d sbs=%d", name, r.sqd.H_S, r.sqd.I, r.sqd.chi,
              r.sqd.discord, r.sqd.holds, r.sbs.holds);
  if (r.m_sqd) std::printf("  M=%.6f", *r.m_sqd);
  std::printf("  eta=%.6f\n", r.eta);
}

int main() {
  report("ghz N=3", make_ghz_reduced(3), {"E1"});
  report("horodecki", make_horodecki(0.25), {"E1"});
  report("random sbs", make_random_sbs(7, 2, 2, 4), {"E1", "E2"});
  report("cq 0.5", make_cq_state(3, {0.5, 0.5}, 0.5), {"E1"});

  RedundancyOptions ro;
  ro.strategy = RedundancyStrategy::Exhaustive;
  const RedundancyReport red = redundancy(make_ghz_reduced(5), "S", 0.01, {}, ro);
  std::printf("ghz N=5: R_0.01 = %zu, f_min = %.3f\n", red.R_delta, red.f_delta_min);
  for (const auto& p : red.scan_curve) std::printf("  f=%.2f  <chi>=%.6f\n", p.fraction, p.mean_chi);
  return 0;
}
