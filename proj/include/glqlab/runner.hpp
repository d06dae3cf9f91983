#pragma once

#include <iosfwd>

#include "glqlab/config.hpp"

namespace glqlab {

// Exit-code contract shared with the command line front end:
//   0 ok, 2 config parse failure, 3 singular stationarity system,
//   4 trajectory blow-up, 5 unreliable eigensolve.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitKkt = 3;
inline constexpr int kExitBlowup = 4;
inline constexpr int kExitSpectral = 5;

int cmd_steady(const RunConfig& cfg, std::ostream& out);
int cmd_solve(const RunConfig& cfg, std::ostream& out);
int cmd_scan(const RunConfig& cfg, std::ostream& out);
int cmd_hautus(const RunConfig& cfg, std::ostream& out);
int cmd_heat(const RunConfig& cfg, std::ostream& out);

}  // namespace glqlab
