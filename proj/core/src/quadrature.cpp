#include "mimocov/quadrature.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mimocov/error.hpp"

namespace mimocov::quad {

namespace {

std::string interval(double a, double b) {
  std::ostringstream os;
  os.precision(6);
  os << '[' << a << ", " << b << ']';
  return os.str();
}

void check(double value, double error, double l1, double abs_tol, double rel_tol,
           const char* method, double a, double b) {
  if (!std::isfinite(value)) {
    throw NumericalFailure(std::string(method) + ": non-finite integral on " + interval(a, b));
  }
  const double allowed = std::max(abs_tol, rel_tol * l1);
  if (error > allowed) {
    std::ostringstream os;
    os << method << ": error estimate " << error << " above " << allowed << " on "
       << interval(a, b);
    throw NumericalFailure(os.str());
  }
}

}  // namespace

double integrate(const Integrand& f, double a, double b, double abs_tol, double rel_tol) {
  if (a == b) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  // The adaptive recursion misjudges its error on very narrow intervals, so
  // always integrate over [0, 1].
  const double width = b - a;
  const auto g = [&](double t) { return f(a + width * t); };
  try {
    value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 15,
                                                                          rel_tol, &error, &l1);
  } catch (const std::exception& e) {
    throw NumericalFailure(std::string("gauss_kronrod: ") + e.what());
  }
  check(value * width, error * std::abs(width), l1 * std::abs(width), abs_tol, 1e-9,
        "gauss_kronrod", a, b);
  return value * width;
}

double integrate_singular(const Integrand& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  // Map onto [0, 1] so that tiny intervals keep the abscissa spacing sane.
  const double width = b - a;
  const auto g = [&](double t) { return f(a + width * t); };
  try {
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    value = integrator.integrate(g, 0.0, 1.0, rel_tol, &error, &l1);
  } catch (const std::exception& e) {
    throw NumericalFailure(std::string("tanh_sinh: ") + e.what());
  }
  check(value * width, error * std::abs(width), l1 * std::abs(width), 1e-14, 1e-9, "tanh_sinh",
        a, b);
  return value * width;
}

double integrate_half_line(const Integrand& f, double a, double rel_tol) {
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  try {
    thread_local boost::math::quadrature::exp_sinh<double> integrator;
    value = integrator.integrate(f, a, std::numeric_limits<double>::infinity(), rel_tol, &error,
                                 &l1);
  } catch (const std::exception& e) {
    throw NumericalFailure(std::string("exp_sinh: ") + e.what());
  }
  check(value, error, l1, 1e-14, 1e-9, "exp_sinh", a, std::numeric_limits<double>::infinity());
  return value;
}

DensityPartition::DensityPartition(const Integrand& pdf, double tail) : pdf_(pdf) {
  constexpr int kLow = -30;
  constexpr int kHigh = 60;
  std::vector<double> breaks{0.0};
  std::vector<double> masses;
  double cum = 0.0;
  for (int k = kLow; k <= kHigh; ++k) {
    const double lo = breaks.back();
    const double hi = std::ldexp(1.0, k);
    const double m =
        (lo == 0.0) ? integrate_singular(pdf_, lo, hi) : integrate(pdf_, lo, hi, 1e-14);
    breaks.push_back(hi);
    masses.push_back(m);
    cum += m;
    if (cum >= 1.0 - tail) break;
  }
  mass_ = cum;

  // Fold the negligible low-end segments into one singular segment from zero.
  std::size_t first = 0;
  double low = 0.0;
  while (first + 1 < masses.size() && low + masses[first] < 1e-15) low += masses[first++];
  breaks_.push_back(0.0);
  for (std::size_t i = first + 1; i < breaks.size(); ++i) breaks_.push_back(breaks[i]);
  if (breaks_.size() < 2) throw NumericalFailure("DensityPartition: empty partition");
}

double DensityPartition::expect(const Integrand& f) const {
  const Integrand weighted = [this, &f](double u) {
    const double w = pdf_(u);
    return w == 0.0 ? 0.0 : f(u) * w;
  };
  double total = integrate_singular(weighted, breaks_[0], breaks_[1]);
  for (std::size_t i = 1; i + 1 < breaks_.size(); ++i) {
    total += integrate(weighted, breaks_[i], breaks_[i + 1]);
  }
  // f may grow fast enough that the pdf tail beyond the quantile still
  // matters; keep doubling until two consecutive segments are negligible.
  double lo = breaks_.back();
  int quiet = 0;
  for (int k = 0; quiet < 2; ++k) {
    if (k > 64) throw NumericalFailure("DensityPartition::expect: tail does not converge");
    const double part = integrate(weighted, lo, 2.0 * lo, 0.0);
    total += part;
    quiet = (std::abs(part) <= 1e-17 * std::abs(total)) ? quiet + 1 : 0;
    lo *= 2.0;
  }
  if (!std::isfinite(total)) throw NumericalFailure("DensityPartition::expect: non-finite");
  return total;
}

}  // namespace mimocov::quad
