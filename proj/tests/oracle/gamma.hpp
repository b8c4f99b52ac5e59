#pragma once

#include <complex>

namespace oracle {

/// Complex Gamma via the Lanczos approximation (g = 7, 9 terms) with the
/// reflection formula for Re z < 1/2. Relative accuracy ~1e-15 near the real axis.
std::complex<double> gamma(std::complex<double> z);

}  // namespace oracle
