#include "records/sequences.hpp"

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "records/compensated.hpp"
#include "records/error.hpp"

namespace records {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_double(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// AlphaSequence

AlphaSequence AlphaSequence::constant(double c) {
  require(c > 0.0 && std::isfinite(c), ErrorCode::InvalidArgument, "alpha constant must be positive");
  return {AlphaFamily::Constant, c, 0.0};
}

AlphaSequence AlphaSequence::geometric(double r) {
  require(r > 0.0 && std::isfinite(r), ErrorCode::InvalidArgument, "alpha ratio must be positive");
  return {AlphaFamily::Geometric, r, 0.0};
}

AlphaSequence AlphaSequence::polynomial(double theta) {
  require(std::isfinite(theta), ErrorCode::InvalidArgument, "alpha exponent must be finite");
  return {AlphaFamily::Polynomial, theta, 0.0};
}

AlphaSequence AlphaSequence::exp_power(double c, double kappa) {
  require(std::isfinite(c) && kappa > 0.0 && std::isfinite(kappa), ErrorCode::InvalidArgument,
          "exp_power needs finite c and kappa > 0");
  return {AlphaFamily::ExpPower, c, kappa};
}

AlphaSequence AlphaSequence::table(std::vector<double> terms, DeclaredLimits declared) {
  require(!terms.empty(), ErrorCode::InvalidArgument, "alpha table is empty");
  for (std::size_t i = 0; i < terms.size(); ++i)
    require(terms[i] > 0.0 && std::isfinite(terms[i]), ErrorCode::InvalidArgument,
            "alpha table entry " + std::to_string(i + 1) + " must be positive");
  AlphaSequence a{AlphaFamily::Table, 0.0, 0.0};
  a.table_ = std::make_shared<const std::vector<double>>(std::move(terms));
  a.declared_ = std::move(declared);
  return a;
}

std::string AlphaSequence::describe() const {
  switch (family_) {
    case AlphaFamily::Constant: return "constant(" + fmt_double(a_) + ")";
    case AlphaFamily::Geometric: return "geometric(" + fmt_double(a_) + ")";
    case AlphaFamily::Polynomial: return "polynomial(" + fmt_double(a_) + ")";
    case AlphaFamily::ExpPower: return "exp_power(" + fmt_double(a_) + "," + fmt_double(b_) + ")";
    case AlphaFamily::Table: return "table[" + std::to_string(table_->size()) + "]";
  }
  return "?";
}

double AlphaSequence::term(std::size_t n) const {
  require(n >= 1, ErrorCode::InvalidArgument, "alpha index starts at 1");
  const double x = static_cast<double>(n);
  switch (family_) {
    case AlphaFamily::Constant: return a_;
    case AlphaFamily::Geometric: return std::pow(a_, x);
    case AlphaFamily::Polynomial: return std::pow(x, a_);
    case AlphaFamily::ExpPower: return std::exp(a_ * std::pow(x, b_));
    case AlphaFamily::Table:
      require(n <= table_->size(), ErrorCode::OutOfRange,
              "alpha table has only " + std::to_string(table_->size()) + " entries");
      return (*table_)[n - 1];
  }
  return 0.0;
}

double AlphaSequence::partial_sum(std::size_t n) const {
  if (n == 0) return 0.0;
  const double x = static_cast<double>(n);
  switch (family_) {
    case AlphaFamily::Constant: return a_ * x;
    case AlphaFamily::Geometric:
      if (a_ == 1.0) return x;
      // r (r^n - 1) / (r - 1)
      return a_ * std::expm1(x * std::log(a_)) / (a_ - 1.0);
    default: break;
  }
  NeumaierSum s;
  for (std::size_t k = 1; k <= n; ++k) s += term(k);
  return s.value();
}

std::vector<double> AlphaSequence::partial_sums(std::size_t n) const {
  std::vector<double> s(n + 1, 0.0);
  NeumaierSum acc;
  for (std::size_t k = 1; k <= n; ++k) {
    acc += term(k);
    s[k] = acc.value();
  }
  return s;
}

std::vector<double> AlphaSequence::terms(std::size_t n) const {
  std::vector<double> out(n);
  for (std::size_t k = 1; k <= n; ++k) out[k - 1] = term(k);
  return out;
}

std::optional<std::size_t> AlphaSequence::length() const {
  if (family_ == AlphaFamily::Table) return table_->size();
  return std::nullopt;
}

std::optional<bool> AlphaSequence::c1() const {
  switch (family_) {
    case AlphaFamily::Constant: return true;
    case AlphaFamily::Geometric: return a_ >= 1.0;
    case AlphaFamily::Polynomial: return a_ >= -1.0;
    case AlphaFamily::ExpPower: return a_ >= 0.0;
    case AlphaFamily::Table: return declared_.c1;
  }
  return std::nullopt;
}

std::optional<GrowthForm> AlphaSequence::term_form() const {
  GrowthForm f;
  switch (family_) {
    case AlphaFamily::Constant: return GrowthForm::constant(a_);
    case AlphaFamily::Geometric:
      f.exp_rate = std::log(a_);
      f.exp_power = 1.0;
      return f;
    case AlphaFamily::Polynomial: return GrowthForm::power(1.0, a_);
    case AlphaFamily::ExpPower:
      f.exp_rate = a_;
      f.exp_power = b_;
      return f;
    case AlphaFamily::Table: return declared_.term_form;
  }
  return std::nullopt;
}

std::optional<GrowthForm> AlphaSequence::sum_form() const {
  GrowthForm f;
  f.exact = false;
  switch (family_) {
    case AlphaFamily::Constant: return GrowthForm::power(a_, 1.0);
    case AlphaFamily::Geometric:
      if (a_ == 1.0) return GrowthForm::power(1.0, 1.0);
      if (a_ < 1.0) return GrowthForm::constant(a_ / (1.0 - a_), false);
      f.coef = a_ / (a_ - 1.0);
      f.exp_rate = std::log(a_);
      f.exp_power = 1.0;
      return f;
    case AlphaFamily::Polynomial:
      if (a_ > -1.0) return GrowthForm::power(1.0 / (a_ + 1.0), a_ + 1.0, false);
      if (a_ == -1.0) {
        f.pow_log = 1.0;
        return f;
      }
      return GrowthForm::constant(boost::math::zeta(-a_), false);
    case AlphaFamily::ExpPower: {
      const double c = a_, kappa = b_;
      if (c == 0.0) return GrowthForm::power(1.0, 1.0);
      if (c < 0.0) {
        NeumaierSum s;
        for (std::size_t k = 1; k < 100000000; ++k) {
          const double t = term(k);
          s += t;
          if (t < 1e-18 * s.value()) break;
        }
        return GrowthForm::constant(s.value(), false);
      }
      f.exp_rate = c;
      f.exp_power = kappa;
      if (kappa > 1.0) f.coef = 1.0;
      else if (kappa == 1.0) f.coef = std::exp(c) / std::expm1(c);
      else {
        f.coef = 1.0 / (c * kappa);
        f.pow_t = 1.0 - kappa;
      }
      return f;
    }
    case AlphaFamily::Table: return declared_.sum_form;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// ThresholdSequence

ThresholdSequence ThresholdSequence::neg_infinity() {
  return {ThresholdFamily::NegInfinity, -kInf, 0.0};
}

ThresholdSequence ThresholdSequence::flat(double level) {
  require(!std::isnan(level), ErrorCode::InvalidArgument, "flat threshold level is NaN");
  if (level == -kInf) return neg_infinity();
  return {ThresholdFamily::Flat, level, 0.0};
}

ThresholdSequence ThresholdSequence::log_scaled(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b), ErrorCode::InvalidArgument,
          "log_scaled threshold needs finite a, b");
  return {ThresholdFamily::LogScaled, a, b};
}

ThresholdSequence ThresholdSequence::tail_quantile(const Distribution& F, GrowthForm q,
                                                   std::size_t start) {
  require(start >= 1, ErrorCode::InvalidArgument, "tail_quantile start index must be >= 1");
  const double q0 = q(static_cast<double>(start));
  require(q0 > 0.0 && q0 < 1.0, ErrorCode::InvalidArgument,
          "tail_quantile shape must lie in (0, 1) at its start index");
  ThresholdSequence t{ThresholdFamily::TailQuantile, 0.0, 0.0};
  t.start_ = start;
  t.dist_ = F;
  t.form_ = q;
  return t;
}

ThresholdSequence ThresholdSequence::table(std::vector<double> levels,
                                           std::optional<GrowthForm> declared_tail) {
  require(!levels.empty(), ErrorCode::InvalidArgument, "threshold table is empty");
  ThresholdSequence t{ThresholdFamily::Table, 0.0, 0.0};
  t.table_ = std::make_shared<const std::vector<double>>(std::move(levels));
  t.form_ = declared_tail;
  return t;
}

std::string ThresholdSequence::describe() const {
  switch (family_) {
    case ThresholdFamily::NegInfinity: return "neg_infinity";
    case ThresholdFamily::Flat: return "flat(" + fmt_double(a_) + ")";
    case ThresholdFamily::LogScaled:
      return "log_scaled(" + fmt_double(a_) + "," + fmt_double(b_) + ")";
    case ThresholdFamily::TailQuantile: return "tail_quantile(" + form_->describe() + ")";
    case ThresholdFamily::Table: return "table[" + std::to_string(table_->size()) + "]";
  }
  return "?";
}

double ThresholdSequence::level(std::size_t n) const {
  require(n >= 1, ErrorCode::InvalidArgument, "threshold index starts at 1");
  switch (family_) {
    case ThresholdFamily::NegInfinity: return -kInf;
    case ThresholdFamily::Flat: return a_;
    case ThresholdFamily::LogScaled: return a_ * std::log(static_cast<double>(n)) + b_;
    case ThresholdFamily::TailQuantile: {
      const double q = (*form_)(static_cast<double>(std::max(n, start_)));
      return dist_->upper_quantile(q);
    }
    case ThresholdFamily::Table:
      require(n <= table_->size(), ErrorCode::OutOfRange,
              "threshold table has only " + std::to_string(table_->size()) + " entries");
      return (*table_)[n - 1];
  }
  return 0.0;
}

double ThresholdSequence::tail(const Distribution& F, std::size_t n) const {
  if (family_ == ThresholdFamily::NegInfinity) return 1.0;
  if (family_ == ThresholdFamily::TailQuantile && dist_->describe() == F.describe())
    return (*form_)(static_cast<double>(std::max(n, start_)));
  return F.survival(level(n));
}

std::vector<double> ThresholdSequence::levels(std::size_t n) const {
  std::vector<double> out(n);
  for (std::size_t k = 1; k <= n; ++k) out[k - 1] = level(k);
  return out;
}

bool ThresholdSequence::monotone_flag() const {
  switch (family_) {
    case ThresholdFamily::NegInfinity:
    case ThresholdFamily::Flat: return true;
    case ThresholdFamily::LogScaled: return a_ >= 0.0;
    case ThresholdFamily::TailQuantile: return form_->limit() != GrowthForm::Limit::Infinite;
    case ThresholdFamily::Table: return check_monotone(table_->size());
  }
  return false;
}

bool ThresholdSequence::check_monotone(std::size_t n_max) const {
  if (is_flat()) return true;
  double prev = level(1);
  for (std::size_t n = 2; n <= n_max; ++n) {
    const double cur = level(n);
    if (cur < prev) return false;
    prev = cur;
  }
  return true;
}

std::optional<GrowthForm> ThresholdSequence::tail_form(const Distribution& F) const {
  switch (family_) {
    case ThresholdFamily::NegInfinity: return GrowthForm::constant(1.0);
    case ThresholdFamily::Flat: return GrowthForm::constant(F.survival(a_));
    case ThresholdFamily::LogScaled: return log_scaled_tail_form(F, a_, b_);
    case ThresholdFamily::TailQuantile:
      if (dist_->describe() == F.describe()) return form_;
      return std::nullopt;
    case ThresholdFamily::Table: return form_;
  }
  return std::nullopt;
}

std::optional<GrowthForm> log_scaled_tail_form(const Distribution& F, double a, double b) {
  if (a == 0.0) return GrowthForm::constant(F.survival(b));
  if (a < 0.0) return GrowthForm::constant(1.0 - F.cdf(F.lower_support()), false);
  if (std::isfinite(F.upper_endpoint())) return GrowthForm::constant(0.0);

  const double e = F.exponent();
  const bool unit_power = e == 1.0;
  GrowthForm f;
  switch (F.family()) {
    case Family::Exponential: {
      const double rate = F.parameter();
      f = GrowthForm::power(std::exp(-rate * b), -rate * a, unit_power);
      break;
    }
    case Family::Gumbel:
      f = GrowthForm::power(std::exp(-b), -a, false);
      break;
    case Family::Pareto: {
      const double k = F.parameter();
      f.coef = std::pow(a, -k);
      f.pow_log = -k;
      f.exact = false;
      break;
    }
    default: return std::nullopt;
  }
  // 1 - (1 - q)^e ~ e q
  f.coef *= e;
  return f;
}

}  // namespace records
