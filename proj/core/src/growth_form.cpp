#include "records/growth_form.hpp"

#include <cmath>
#include <sstream>

namespace records {

namespace {

constexpr double kTol = 1e-12;

bool same(double a, double b) { return std::abs(a - b) <= kTol; }
bool positive(double a) { return a > kTol; }
bool negative(double a) { return a < -kTol; }

SeriesBehaviour power_test(double a, double b, double d) {
  if (negative(a + 1.0)) return SeriesBehaviour::Converges;
  if (positive(a + 1.0)) return SeriesBehaviour::Diverges;
  if (negative(b + 1.0)) return SeriesBehaviour::Converges;
  if (positive(b + 1.0)) return SeriesBehaviour::Diverges;
  return negative(d + 1.0) ? SeriesBehaviour::Converges : SeriesBehaviour::Diverges;
}

// sum n^a (ln n)^b (lnln n)^d e^{-X(n)} with X -> infinity and no exp part.
SeriesBehaviour iterated_log_test(double a, double b, double d, const GrowthForm& x) {
  const double beta = x.pow_t, gamma = x.pow_log, delta = x.pow_loglog, c = x.coef;
  if (positive(beta)) return SeriesBehaviour::Converges;

  if (positive(gamma)) {
    if (positive(gamma - 1.0) || (same(gamma, 1.0) && positive(delta)))
      return SeriesBehaviour::Converges;
    if (same(gamma, 1.0) && same(delta, 0.0)) {
      // e^{-X} = n^{-c}
      if (!x.exact && same(a - c, -1.0)) return SeriesBehaviour::Undetermined;
      return power_test(a - c, b, d);
    }
    // between every power of n and every power of ln n
    if (negative(a + 1.0)) return SeriesBehaviour::Converges;
    if (positive(a + 1.0)) return SeriesBehaviour::Diverges;
    return SeriesBehaviour::Converges;
  }

  // X = c (lnln n)^delta
  if (positive(delta - 1.0)) {
    if (positive(a + 1.0)) return SeriesBehaviour::Diverges;
    return SeriesBehaviour::Converges;
  }
  if (same(delta, 1.0)) {
    // e^{-X} = (ln n)^{-c}
    if (!x.exact && same(a, -1.0) && same(b - c, -1.0)) return SeriesBehaviour::Undetermined;
    return power_test(a, b - c, d);
  }
  if (negative(a + 1.0)) return SeriesBehaviour::Converges;
  if (positive(a + 1.0)) return SeriesBehaviour::Diverges;
  if (negative(b + 1.0)) return SeriesBehaviour::Converges;
  if (positive(b + 1.0)) return SeriesBehaviour::Diverges;
  return SeriesBehaviour::Converges;
}

}  // namespace

GrowthForm GrowthForm::constant(double c, bool exact) {
  GrowthForm f;
  f.coef = c;
  f.exact = exact;
  return f;
}

GrowthForm GrowthForm::power(double coef, double pow_t, bool exact) {
  GrowthForm f;
  f.coef = coef;
  f.pow_t = pow_t;
  f.exact = exact;
  return f;
}

double GrowthForm::operator()(double t) const {
  if (coef == 0.0) return 0.0;
  double log_value = std::log(std::abs(coef));
  if (exp_rate != 0.0) log_value += exp_rate * std::pow(t, exp_power);
  if (pow_t != 0.0) log_value += pow_t * std::log(t);
  if (pow_log != 0.0) log_value += pow_log * std::log(std::log(t));
  if (pow_loglog != 0.0) log_value += pow_loglog * std::log(std::log(std::log(t)));
  return std::copysign(std::exp(log_value), coef);
}

GrowthForm::Limit GrowthForm::limit() const {
  if (coef == 0.0) return Limit::Zero;
  for (double e : {exp_rate, pow_t, pow_log, pow_loglog}) {
    if (positive(e)) return Limit::Infinite;
    if (negative(e)) return Limit::Zero;
  }
  return Limit::Positive;
}

std::string GrowthForm::describe() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << coef;
  if (exp_rate != 0.0) os << "*exp(" << exp_rate << "*t^" << exp_power << ")";
  if (pow_t != 0.0) os << "*t^" << pow_t;
  if (pow_log != 0.0) os << "*(ln t)^" << pow_log;
  if (pow_loglog != 0.0) os << "*(lnln t)^" << pow_loglog;
  if (!exact) os << " (asymptotic)";
  return os.str();
}

GrowthForm operator*(const GrowthForm& a, const GrowthForm& b) {
  GrowthForm r;
  r.coef = a.coef * b.coef;
  r.pow_t = a.pow_t + b.pow_t;
  r.pow_log = a.pow_log + b.pow_log;
  r.pow_loglog = a.pow_loglog + b.pow_loglog;
  r.exact = a.exact && b.exact;
  if (a.exp_rate == 0.0) {
    r.exp_rate = b.exp_rate;
    r.exp_power = b.exp_power;
  } else if (b.exp_rate == 0.0) {
    r.exp_rate = a.exp_rate;
    r.exp_power = a.exp_power;
  } else if (same(a.exp_power, b.exp_power)) {
    r.exp_rate = a.exp_rate + b.exp_rate;
    r.exp_power = a.exp_power;
  } else {
    const GrowthForm& dom = a.exp_power > b.exp_power ? a : b;
    r.exp_rate = dom.exp_rate;
    r.exp_power = dom.exp_power;
    r.exact = false;
  }
  return r;
}

std::string to_string(SeriesBehaviour b) {
  switch (b) {
    case SeriesBehaviour::Converges: return "converges";
    case SeriesBehaviour::Diverges: return "diverges";
    case SeriesBehaviour::Undetermined: return "undetermined";
  }
  return "undetermined";
}

SeriesBehaviour exp_weighted_series(const GrowthForm& prefactor, const GrowthForm& exponent) {
  if (prefactor.is_zero()) return SeriesBehaviour::Converges;

  const auto x_limit = exponent.limit();
  if (x_limit != GrowthForm::Limit::Infinite) {
    // e^{-X} tends to a positive constant: the prefactor alone decides.
    if (prefactor.exp_rate > 0.0) return SeriesBehaviour::Diverges;
    if (prefactor.exp_rate < 0.0) return SeriesBehaviour::Converges;
    return power_test(prefactor.pow_t, prefactor.pow_log, prefactor.pow_loglog);
  }

  if (exponent.exp_rate > 0.0) {
    // e^{-X} decays like exp(-exp(...)); ln(prefactor) only grows like a power.
    return SeriesBehaviour::Converges;
  }
  if (prefactor.exp_rate != 0.0) {
    // a prefactor exp(r t^k) against X ~ c t^beta (ln t)^gamma (lnln t)^delta
    const bool x_pure_power = same(exponent.pow_log, 0.0) && same(exponent.pow_loglog, 0.0);
    if (positive(exponent.pow_t - prefactor.exp_power) ||
        (same(exponent.pow_t, prefactor.exp_power) && !x_pure_power &&
         positive(exponent.pow_log + exponent.pow_loglog))) {
      return SeriesBehaviour::Converges;
    }
    if (same(exponent.pow_t, prefactor.exp_power) && x_pure_power) {
      const double net = prefactor.exp_rate - exponent.coef;
      if (positive(net)) return SeriesBehaviour::Diverges;
      if (negative(net)) return SeriesBehaviour::Converges;
      return SeriesBehaviour::Undetermined;
    }
    return prefactor.exp_rate > 0.0 ? SeriesBehaviour::Diverges : SeriesBehaviour::Converges;
  }
  return iterated_log_test(prefactor.pow_t, prefactor.pow_log, prefactor.pow_loglog, exponent);
}

}  // namespace records
