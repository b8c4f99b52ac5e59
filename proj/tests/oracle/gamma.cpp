#include "oracle/gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace oracle {

std::complex<double> gamma(std::complex<double> z) {
  constexpr double pi = std::numbers::pi;
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma(1.0 - z));
  static constexpr std::array<double, 9> c{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                           771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                           -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  std::complex<double> x = c[0];
  for (int k = 1; k < 9; ++k) x += c[k] / (z + static_cast<double>(k));
  const std::complex<double> t = z + 7.5;
  return std::sqrt(2 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace oracle
