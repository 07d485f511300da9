#include "nl0r/reporting.hpp"

#include <json.hpp>

namespace nl0r {

using nlohmann::json;

std::string solve_result_to_json(const SolveResult& result, const std::string& solver,
                                 const Vector* x_star, bool include_timing) {
  json doc;
  doc["solver"] = solver;
  doc["status"] = to_string(result.status);
  doc["iterations"] = result.iterations;
  doc["objective"] = result.objective;
  doc["regularized_objective"] = result.regularized_objective;
  doc["lambda0"] = result.lambda0;
  doc["final_lambda"] = result.final_lambda;
  doc["final_tau"] = result.final_tau;
  doc["certificate_tau"] = result.certificate_tau;
  const IndexSet supp = support(result.x);
  doc["support"] = std::vector<Index>(supp.begin(), supp.end());
  json values = json::array();
  for (Index i : supp) values.push_back(result.x[i]);
  doc["support_values"] = values;
  doc["n"] = result.x.size();
  if (x_star) doc["recovery_error"] = (result.x - *x_star).norm();
  if (include_timing) doc["wall_seconds"] = result.wall_seconds;
  return doc.dump(2);
}

SolverConfig config_from_json(const std::string& text, SolverConfig base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number()) throw std::invalid_argument("config: '" + key + "' must be a number");
    if (key == "sigma") base.sigma = value.get<double>();
    else if (key == "beta") base.beta = value.get<double>();
    else if (key == "tau0") base.tau0 = value.get<double>();
    else if (key == "lambda0") base.lambda0 = value.get<double>();
    else if (key == "lambda_decay") base.lambda_decay = value.get<double>();
    else if (key == "lambda_init_fraction") base.lambda_init_fraction = value.get<double>();
    else if (key == "delta_small") base.delta_small = value.get<double>();
    else if (key == "delta_large") base.delta_large = value.get<double>();
    else if (key == "max_iters") base.max_iters = value.get<int>();
    else if (key == "residual_tol") base.residual_tol = value.get<double>();
    else if (key == "tau_adapt_factor") base.tau_adapt_factor = value.get<double>();
    else if (key == "tau_adapt_period") base.tau_adapt_period = value.get<int>();
    else if (key == "lambda_floor_fraction") base.lambda_floor_fraction = value.get<double>();
    else if (key == "max_backtracks") base.max_backtracks = value.get<int>();
    else if (key == "rng_seed") base.rng_seed = value.get<std::uint64_t>();
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  base.validate();
  return base;
}

}  // namespace nl0r
