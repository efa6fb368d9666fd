#include "fermistab/legendre.hpp"

#include <cmath>

#include "fermistab/errors.hpp"

namespace fermistab {

double legendre_p(int l, double y) {
  if (l < 0) throw DomainError("legendre_p: l must be >= 0");
  if (std::abs(y) > 1.0) throw DomainError("legendre_p: |y| must be <= 1");
  if (l == 0) return 1.0;
  double p0 = 1.0, p1 = y;
  for (int k = 1; k < l; ++k) {
    double p2 = ((2 * k + 1) * y * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace fermistab
