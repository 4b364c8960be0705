#include "ise/rng.hpp"

#include <cmath>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace ise {

double CounterRng::normal() {
  const double u = uniform();
  return -boost::math::constants::root_two<double>() * boost::math::erfc_inv(2.0 * u);
}

double CounterRng::cauchy() {
  return std::tan(boost::math::constants::pi<double>() * (uniform() - 0.5));
}

}  // namespace ise
