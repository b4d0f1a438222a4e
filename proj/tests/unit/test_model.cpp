#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "bundles.hpp"
#include "mimocov/analytic.hpp"
#include "mimocov/config.hpp"
#include "mimocov/error.hpp"
#include "mimocov/model.hpp"
#include "oracles.hpp"

namespace {

using namespace mimocov;
using testing_support::Params;

ValidationCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ValidationError";
  return ValidationCode::non_finite;
}

TEST(Bundle, EachViolationHasItsOwnCode) {
  const auto gamma = InterfererGainSpec::gamma(1.0, 1.0);
  const auto with = [&](auto edit) {
    NetworkScenario s;
    SignalGainSpec sig;
    edit(s, sig);
    return [=] { Bundle::validate(s, sig, gamma); };
  };
  EXPECT_EQ(code_of(with([](auto& s, auto&) { s.lambda = 0.0; })), ValidationCode::lambda_not_positive);
  EXPECT_EQ(code_of(with([](auto& s, auto&) { s.lambda = NAN; })), ValidationCode::non_finite);
  EXPECT_EQ(code_of(with([](auto& s, auto&) { s.alpha = 2.0; })), ValidationCode::alpha_not_above_two);
  EXPECT_EQ(code_of(with([](auto& s, auto&) { s.r0 = 1.0; })), ValidationCode::r0_on_cellular);
  EXPECT_EQ(code_of(with([](auto& s, auto&) { s.kind = NetworkKind::adhoc; })),
            ValidationCode::r0_not_positive);
  EXPECT_EQ(code_of(with([](auto& s, auto&) {
              s.kind = NetworkKind::adhoc;
              s.r0 = -1.0;
            })),
            ValidationCode::r0_not_positive);
  EXPECT_EQ(code_of(with([](auto& s, auto&) { s.noise = -0.1; })), ValidationCode::noise_negative);
  EXPECT_EQ(code_of(with([](auto& s, auto&) { s.tau = 0.0; })), ValidationCode::tau_not_positive);
  EXPECT_EQ(code_of(with([](auto&, auto& g) { g.shape = 0; })), ValidationCode::shape_not_positive);
  EXPECT_EQ(code_of(with([](auto&, auto& g) { g.scale = -2.0; })), ValidationCode::scale_not_positive);
  EXPECT_EQ(code_of([] { InterfererGainSpec::gamma(0.0, 1.0); }), ValidationCode::kappa_not_positive);
  EXPECT_EQ(code_of([] { InterfererGainSpec::gamma(1.0, -1.0); }), ValidationCode::beta_not_positive);
  EXPECT_EQ(code_of([] { GeneralSignalPdf({}); }), ValidationCode::mixture_empty);
  EXPECT_EQ(code_of([] { GeneralSignalPdf({{0, 0, -1.0, 1.0}}); }),
            ValidationCode::mixture_rate_not_positive);
  EXPECT_EQ(code_of([] { GeneralSignalPdf({{0, 0, 1.0, 0.5}}); }), ValidationCode::mixture_not_normalized);
  EXPECT_EQ(code_of([] { InterfererGainSpec::from_pdf([](double u) { return 2.0 * std::exp(-u); }); }),
            ValidationCode::law_not_normalized);
  // Unit mass, negative beyond u = 4 ln 2.
  EXPECT_EQ(code_of([] {
              InterfererGainSpec::from_pdf(
                  [](double u) { return 2.0 * std::exp(-u) - 0.5 * std::exp(-u / 2.0); });
            }),
            ValidationCode::law_negative_pdf);
}

TEST(Bundle, DeltaIsCachedAndInUnitInterval) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> alpha(2.0001, 12.0);
  for (int i = 0; i < 200; ++i) {
    Params p;
    p.alpha = alpha(rng);
    const Bundle b = testing_support::cellular(p);
    EXPECT_EQ(b.delta(), 2.0 / p.alpha);
    EXPECT_GT(b.delta(), 0.0);
    EXPECT_LT(b.delta(), 1.0);
    EXPECT_EQ(b.with_threshold(3.0).delta(), b.delta());
    EXPECT_EQ(b.with_antennas(4).delta(), b.delta());
  }
}

TEST(Bundle, DeltaMomentMatchesGammaFormula) {
  Params p;
  p.kappa = 2.5;
  p.beta = 0.7;
  p.alpha = 3.0;
  const Bundle b = testing_support::cellular(p);
  const double d = 2.0 / 3.0;
  const double want = std::tgamma(p.kappa + d) / std::tgamma(p.kappa) * std::pow(p.beta, d);
  EXPECT_NEAR(b.delta_moment(), want, 1e-14 * want);
}

TEST(Bundle, WithersRevalidate) {
  const Bundle b = testing_support::cellular({});
  EXPECT_THROW(b.with_threshold(-1.0), ValidationError);
  EXPECT_THROW(b.with_antennas(0), ValidationError);
  EXPECT_THROW(b.with_r0(2.0), ValidationError);
  EXPECT_THROW(b.r0(), UnsupportedConfiguration);
  EXPECT_EQ(testing_support::adhoc({}).with_r0(2.0).r0(), 2.0);
}

TEST(InterfererLaw, GammaSamplerMoments) {
  for (auto [kappa, beta] : {std::pair{1.0, 1.0}, {0.6, 2.0}, {3.0, 0.5}}) {
    const auto law = InterfererGainSpec::gamma(kappa, beta);
    std::mt19937_64 rng(2024);
    const int n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = law.sample(rng);
      sum += g;
      sum2 += g * g;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    EXPECT_NEAR(mean, kappa * beta, 0.01 * kappa * beta);
    EXPECT_NEAR(var, kappa * beta * beta, 0.01 * kappa * beta * beta);
  }
}

TEST(InterfererLaw, PdfLawMatchesGammaExpectations) {
  const double kappa = 2.0, beta = 1.5;
  const auto pdf_law = InterfererGainSpec::from_pdf(
      [=](double u) { return oracle::gamma_pdf(u, kappa, beta); });
  const auto gamma_law = InterfererGainSpec::gamma(kappa, beta);
  for (double s : {0.2, 0.5, 0.8})
    EXPECT_NEAR(pdf_law.moment(s), gamma_law.moment(s), 1e-10 * gamma_law.moment(s));
  EXPECT_NEAR(pdf_law.mean(), kappa * beta, 1e-10);
  EXPECT_NEAR(pdf_law.second_moment(), kappa * (kappa + 1) * beta * beta, 1e-9);
  EXPECT_FALSE(pdf_law.can_sample());
  std::mt19937_64 rng(1);
  EXPECT_THROW(pdf_law.sample(rng), UnsupportedConfiguration);
}

TEST(InterfererLaw, PointMass) {
  const auto law = InterfererGainSpec::point_mass(2.0);
  EXPECT_DOUBLE_EQ(law.moment(0.5), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(law.expect([](double g) { return g * g; }), 4.0);
  std::mt19937_64 rng(1);
  EXPECT_EQ(law.sample(rng), 2.0);
}

TEST(GeneralSignalPdf, ReducesToGammaSignal) {
  for (int M : {1, 2, 4, 7}) {
    for (double theta : {0.5, 1.0, 3.0}) {
      const double varphi = 1.0 / (std::pow(theta, M) * std::tgamma(M));
      const GeneralSignalPdf pdf({{0, M - 1, 1.0 / theta, varphi}});
      EXPECT_NEAR(GeneralSignalPdf::term_weight(pdf.terms()[0]), 1.0, 1e-14);
      for (double u : {0.1, 1.0, 4.0})
        EXPECT_NEAR(pdf.pdf(u), oracle::gamma_pdf(u, M, theta), 1e-13);
      const GeneralSignalPdf same = GeneralSignalPdf::from_gamma({M, theta});
      EXPECT_EQ(same.terms()[0].q, M - 1);

      Params p;
      p.M = M;
      p.theta = theta;
      p.tau = 2.0;
      const Bundle cell = testing_support::cellular(p);
      EXPECT_NEAR(coverage_general_pdf(cell, pdf).value, cellular_coverage(cell, M).value, 1e-10);
      p.lambda = 0.02;
      const Bundle adh = testing_support::adhoc(p);
      EXPECT_NEAR(coverage_general_pdf(adh, pdf).value, adhoc_coverage(adh, M).value, 1e-10);
    }
  }
}

TEST(Config, ParsesKeysCommentsAndDefaults) {
  std::istringstream in(
      "# scenario\n"
      "kind = adhoc\n"
      "alpha = 3.5   # path loss\n"
      "\n"
      "tau_db = 3\n"
      "M = 4\n"
      "kappa = 2\n");
  const ScenarioConfig cfg = parse_config(in);
  const Bundle b = cfg.to_bundle();
  EXPECT_EQ(b.kind(), NetworkKind::adhoc);
  EXPECT_DOUBLE_EQ(b.scenario().alpha, 3.5);
  EXPECT_NEAR(b.scenario().tau, std::pow(10.0, 0.3), 1e-15);
  EXPECT_EQ(b.signal().shape, 4);
  EXPECT_EQ(b.r0(), kDefaultAdhocR0);
  EXPECT_EQ(b.scenario().lambda, kDefaultLambda);
  EXPECT_EQ(b.interferer().gamma_params().kappa, 2.0);
}

TEST(Config, Errors) {
  std::istringstream bad_key("alpha = 4\ncolour = red\n");
  EXPECT_THROW(parse_config(bad_key), ConfigError);
  std::istringstream bad_line("alpha 4\n");
  EXPECT_THROW(parse_config(bad_line), ConfigError);
  std::istringstream bad_number("alpha = 4x\n");
  EXPECT_THROW(parse_config(bad_number), ConfigError);
  std::istringstream no_alpha("kind = cellular\n");
  EXPECT_THROW(parse_config(no_alpha).to_bundle(), ConfigError);
  std::istringstream bad_value("alpha = 1.5\n");
  EXPECT_THROW(parse_config(bad_value).to_bundle(), ValidationError);
  EXPECT_THROW(load_config_file("/nonexistent/mimocov.cfg"), ConfigError);
}

TEST(Config, MergeAndDecibels) {
  ScenarioConfig base, over;
  base.set("alpha", "4");
  base.set("M", "2");
  over.set("M", "8");
  base.merge(over);
  EXPECT_EQ(*base.antennas, 8);
  EXPECT_EQ(*base.alpha, 4.0);
  for (double db : {-20.0, -3.0, 0.0, 7.5, 20.0}) EXPECT_NEAR(linear_to_db(db_to_linear(db)), db, 1e-12);
}

}  // namespace
