#include <boost/math/special_functions/airy.hpp>

#include "mwfpi/potentials.hpp"

namespace mwfpi {

double airy_ai(double x) { return boost::math::airy_ai(x); }

std::vector<double> airy_zero_magnitudes(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "need at least one Airy zero");
  std::vector<double> z(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) z[static_cast<std::size_t>(j - 1)] = -boost::math::airy_ai_zero<double>(j);
  return z;
}

}  // namespace mwfpi
