#pragma once

#include "mimocov/model.hpp"

namespace testing_support {

struct Params {
  int M = 1;
  double tau = 1.0;
  double alpha = 4.0;
  double lambda = 1e-3;
  double theta = 1.0;
  double kappa = 1.0;
  double beta = 1.0;
  double r0 = 1.0;
  double noise = 0.0;
};

inline mimocov::Bundle cellular(const Params& p) {
  mimocov::NetworkScenario s;
  s.kind = mimocov::NetworkKind::cellular;
  s.lambda = p.lambda;
  s.alpha = p.alpha;
  s.noise = p.noise;
  s.tau = p.tau;
  return mimocov::Bundle::validate(s, {p.M, p.theta},
                                   mimocov::InterfererGainSpec::gamma(p.kappa, p.beta));
}

inline mimocov::Bundle adhoc(const Params& p) {
  mimocov::NetworkScenario s;
  s.kind = mimocov::NetworkKind::adhoc;
  s.lambda = p.lambda;
  s.alpha = p.alpha;
  s.r0 = p.r0;
  s.noise = p.noise;
  s.tau = p.tau;
  return mimocov::Bundle::validate(s, {p.M, p.theta},
                                   mimocov::InterfererGainSpec::gamma(p.kappa, p.beta));
}

}  // namespace testing_support
