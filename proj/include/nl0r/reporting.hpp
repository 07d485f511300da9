#pragma once

#include <string>

#include "nl0r/core_types.hpp"
#include "nl0r/newton_solver.hpp"

namespace nl0r {

/// JSON rendering of a solve. Wall time is only included on request so the
/// default output is reproducible byte for byte.
std::string solve_result_to_json(const SolveResult& result, const std::string& solver,
                                 const Vector* x_star = nullptr, bool include_timing = false);

/// Applies a JSON object of overrides ({"sigma": ..., "max_iters": ...}) on
/// top of `base`. Unknown keys are rejected.
SolverConfig config_from_json(const std::string& text, SolverConfig base = {});

}  // namespace nl0r
