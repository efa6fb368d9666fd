#include "fermistab/form_breakdown.hpp"

#include <cstdio>

#include <json.hpp>

namespace fermistab {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_json_string(const FormBreakdown& fb, const std::string& extra_config) {
  nlohmann::ordered_json j;
  j["alpha_term"] = fb.alpha_term;
  j["diagonal"] = fb.diagonal;
  j["off_diagonal"] = fb.off_diagonal;
  j["total"] = fb.total;
  j["std_err"] = fb.std_err;
  j["n_samples"] = fb.n_samples;
  j["seed"] = fb.seed;
  if (!extra_config.empty()) j["config"] = nlohmann::ordered_json::parse(extra_config);
  return j.dump(2);
}

}  // namespace fermistab
