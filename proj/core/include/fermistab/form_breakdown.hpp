#pragma once

#include <cstdint>
#include <string>

namespace fermistab {

/// Result of a quadratic-form evaluation, split as
/// total = alpha_term + diagonal + off_diagonal. std_err is zero for
/// deterministic (quadrature) evaluations.
struct FormBreakdown {
  double alpha_term = 0.0;
  double diagonal = 0.0;
  double off_diagonal = 0.0;
  double total = 0.0;
  double std_err = 0.0;
  long long n_samples = 0;
  std::uint64_t seed = 0;
};

/// JSON with keys alpha_term, diagonal, off_diagonal, total, std_err,
/// n_samples, seed. extra_config, when nonempty, is attached under "config".
std::string to_json_string(const FormBreakdown& fb, const std::string& extra_config = "");

/// %.17g rendering used by every CSV artifact.
std::string format_g17(double v);

}  // namespace fermistab
