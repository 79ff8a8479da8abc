#pragma once

#include <optional>
#include <string>

#include "paircorr/config.hpp"

namespace paircorr {

/// Exit codes of the command-line front end.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitResource = 2;

/// Parses the restricted scaling expressions
///   "N^b"                      -> PowerBeta
///   "N^(1-alpha)", "l*N^(1-alpha)" -> ScaledPower
///   "c*N^b"                    -> CustomScaling (needs a declared lambda)
ScalingSpec parse_phi_expr(const std::string& expr, std::optional<double> declared_lambda = std::nullopt);

/// printf("%.17g").
std::string format_number(double x);

int run_cli(int argc, char** argv);

}  // namespace paircorr
