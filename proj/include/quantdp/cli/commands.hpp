//
// Copyright 2026 The quantdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef QUANTDP_CLI_COMMANDS_HPP_
#define QUANTDP_CLI_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "quantdp/error.hpp"
#include "quantdp/simulate.hpp"

namespace quantdp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitHypothesis = 3;
inline constexpr int kExitUnsupported = 4;
inline constexpr int kExitDivergence = 5;

int exit_code_for(ErrorCode code);

struct CliOptions {
  std::string config_path;  // unused by repro
  std::string out_dir;      // empty: write nothing to disk
  std::optional<std::uint64_t> seed;
  std::optional<long> runs;
  std::optional<long> horizon;
  bool quiet = false;
};

// Runs one of check, design, simulate, audit, bound, repro. Results go to
// `out` as key=value lines (repro prints a table). Library errors are caught
// and reported on `err` as a single line
//   error code=<name> exit=<status> message="<text>"
// and the matching exit status is returned.
int run_subcommand(const std::string& name, const CliOptions& options,
                   std::ostream& out, std::ostream& err);

// CSV column header for one trajectory:
//   k,x_1..x_n1,xhat_1..xhat_n1,xr_1..xr_n2,y_1..y_p,v_1..v_p,u_1..u_m,
//   ey_1..ey_q,d_k
std::string trajectory_csv_header(const Trajectory& traj);

// Full CSV text (header plus one line per step, 17 significant digits).
std::string trajectory_csv(const Trajectory& traj);

}  // namespace quantdp::cli

#endif  // QUANTDP_CLI_COMMANDS_HPP_
