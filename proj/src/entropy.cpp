#include "strauss/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace strauss {

namespace detail {

double h_unchecked(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return -(u * std::log(u) + (1.0 - u) * std::log1p(-u));
}

double h_block(double u) {
  if (u < -kBoundaryTol || u > 1.0 + kBoundaryTol)
    return std::numeric_limits<double>::quiet_NaN();
  return h_unchecked(u);
}

} // namespace detail

double h_entropy(double u, int order) {
  if (!(u >= 0.0 && u <= 1.0))
    throw std::domain_error("h_entropy: u = " + std::to_string(u) +
                            " outside [0,1]");
  switch (order) {
    case 0:
      return detail::h_unchecked(u);
    case 1:
      if (u <= 0.0 || u >= 1.0)
        throw std::domain_error("h_entropy: H' undefined at u = " +
                                std::to_string(u));
      return std::log((1.0 - u) / u);
    case 2:
      if (u <= 0.0 || u >= 1.0)
        throw std::domain_error("h_entropy: H'' undefined at u = " +
                                std::to_string(u));
      return -1.0 / (u * (1.0 - u));
    default:
      throw std::invalid_argument("h_entropy: order must be 0, 1 or 2");
  }
}

} // namespace strauss
