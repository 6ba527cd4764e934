#include "orlicz_gauge/quadrature_rule.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace orlicz {

namespace {

KronrodRule build_g30k61() {
  using kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;
  using gauss = boost::math::quadrature::gauss<double, 30>;
  const auto& abscissa = kronrod::abscissa();
  const auto& kweights = kronrod::weights();
  const auto& gweights = gauss::weights();

  // Boost stores the non-negative half: index 0 is the centre, Gauss nodes
  // sit at odd indices for an even Gauss order.
  KronrodRule rule;
  std::size_t k = 0;
  rule.nodes[k] = 0.0;
  rule.kronrod_weights[k] = kweights[0];
  rule.gauss_weights[k] = 0.0;
  ++k;
  for (std::size_t i = 1; i < abscissa.size(); ++i) {
    const double g = (i % 2 == 1) ? gweights[i / 2] : 0.0;
    for (double sign : {-1.0, 1.0}) {
      rule.nodes[k] = sign * abscissa[i];
      rule.kronrod_weights[k] = kweights[i];
      rule.gauss_weights[k] = g;
      ++k;
    }
  }
  return rule;
}

}  // namespace

const KronrodRule& KronrodRule::g30k61() {
  static const KronrodRule rule = build_g30k61();
  return rule;
}

}  // namespace orlicz
