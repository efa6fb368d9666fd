#pragma once

namespace fermistab {

/// Legendre polynomial P_l(y) on [-1,1] by the three-term recurrence.
double legendre_p(int l, double y);

}  // namespace fermistab
