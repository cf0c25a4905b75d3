#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "tiling_lab/continuum.hpp"

namespace tiling_lab {

namespace {

// Cl2(theta) for |theta| <= pi:
// theta - theta log|theta| + sum_k |B_2k| theta^(2k+1) / (2k (2k+1) (2k)!).
struct ClausenCoefficients {
  std::array<double, 60> c{};
  ClausenCoefficients() {
    for (unsigned k = 1; k < c.size(); ++k)
      c[k] = std::fabs(boost::math::bernoulli_b2n<double>(static_cast<int>(k))) /
             (2.0 * k * (2.0 * k + 1.0) * boost::math::factorial<double>(2 * k));
  }
};

double clausen_near_zero(double theta) {
  static const ClausenCoefficients coeff;
  if (theta == 0.0) return 0.0;
  double a = std::fabs(theta);
  double sum = a - a * std::log(a);
  double power = a;
  const double a2 = a * a;
  for (unsigned k = 1; k < coeff.c.size(); ++k) {
    power *= a2;
    double term = coeff.c[k] * power;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return theta < 0 ? -sum : sum;
}

}  // namespace

double lobachevsky(double x) {
  // L(x) = Cl2(2x)/2; reduce 2x into [-pi, pi].
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double theta = std::remainder(2.0 * x, two_pi);
  return 0.5 * clausen_near_zero(theta);
}

}  // namespace tiling_lab
