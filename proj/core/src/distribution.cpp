#include "records/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "records/error.hpp"

namespace records {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

struct Distribution::Base {
  Family family = Family::Uniform;
  double param = kNaN;
  std::vector<double> xs;
  std::vector<double> fs;
  CustomCdf custom;

  double cdf(double x) const {
    switch (family) {
      case Family::Uniform: return std::clamp(x, 0.0, 1.0);
      case Family::Exponential: return x <= 0.0 ? 0.0 : -std::expm1(-param * x);
      case Family::Pareto: return x <= 1.0 ? 0.0 : -std::expm1(-param * std::log(x));
      case Family::Gumbel: return std::exp(-std::exp(-x));
      case Family::Table: return table_cdf(x);
      case Family::Custom: return custom.cdf(x);
    }
    return kNaN;
  }

  double log_cdf(double x) const {
    switch (family) {
      case Family::Uniform: return x <= 0.0 ? -kInf : (x >= 1.0 ? 0.0 : std::log(x));
      case Family::Exponential: return x <= 0.0 ? -kInf : std::log1p(-std::exp(-param * x));
      case Family::Pareto: return x <= 1.0 ? -kInf : std::log1p(-std::pow(x, -param));
      case Family::Gumbel: return -std::exp(-x);
      case Family::Table:
      case Family::Custom: {
        const double f = cdf(x);
        return f > 0.0 ? std::log(f) : -kInf;
      }
    }
    return kNaN;
  }

  double survival(double x) const {
    switch (family) {
      case Family::Uniform: return 1.0 - std::clamp(x, 0.0, 1.0);
      case Family::Exponential: return x <= 0.0 ? 1.0 : std::exp(-param * x);
      case Family::Pareto: return x <= 1.0 ? 1.0 : std::pow(x, -param);
      case Family::Gumbel: return -std::expm1(-std::exp(-x));
      case Family::Table:
      case Family::Custom: return 1.0 - cdf(x);
    }
    return kNaN;
  }

  bool has_density() const {
    return family != Family::Custom || static_cast<bool>(custom.density);
  }

  double density(double x) const {
    switch (family) {
      case Family::Uniform: return (x > 0.0 && x < 1.0) ? 1.0 : 0.0;
      case Family::Exponential: return x < 0.0 ? 0.0 : param * std::exp(-param * x);
      case Family::Pareto: return x < 1.0 ? 0.0 : param * std::pow(x, -param - 1.0);
      case Family::Gumbel: return std::exp(-x - std::exp(-x));
      case Family::Table: {
        if (x < xs.front() || x >= xs.back()) return 0.0;
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const auto i = static_cast<std::size_t>(it - xs.begin());
        return (fs[i] - fs[i - 1]) / (xs[i] - xs[i - 1]);
      }
      case Family::Custom:
        if (!custom.density) fail(ErrorCode::Unsupported, custom.name + " has no density");
        return custom.density(x);
    }
    return kNaN;
  }

  double table_cdf(double x) const {
    if (x < xs.front()) return 0.0;
    if (x >= xs.back()) return fs.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return fs[i - 1] + w * (fs[i] - fs[i - 1]);
  }

  double quantile_from_log(double log_u) const {
    switch (family) {
      case Family::Uniform: return std::exp(log_u);
      case Family::Exponential: return -std::log(-std::expm1(log_u)) / param;
      case Family::Pareto: return std::exp(-std::log(-std::expm1(log_u)) / param);
      case Family::Gumbel: return -std::log(-log_u);
      case Family::Table:
      case Family::Custom:
        return bisect_quantile([this](double x) { return log_cdf(x); }, log_u, lower_support(),
                               upper_endpoint());
    }
    return kNaN;
  }

  double lower_support() const {
    switch (family) {
      case Family::Uniform: return 0.0;
      case Family::Exponential: return 0.0;
      case Family::Pareto: return 1.0;
      case Family::Gumbel: return -kInf;
      case Family::Table: {
        // first x with F > 0 to its right
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
          if (fs[i + 1] > 0.0 || fs[i] > 0.0) return xs[i];
        return xs.back();
      }
      case Family::Custom: return custom.lower_support;
    }
    return kNaN;
  }

  double upper_endpoint() const {
    switch (family) {
      case Family::Uniform: return 1.0;
      case Family::Exponential:
      case Family::Pareto:
      case Family::Gumbel: return kInf;
      case Family::Table: {
        for (std::size_t i = 0; i < xs.size(); ++i)
          if (fs[i] >= 1.0) return xs[i];
        return xs.back();
      }
      case Family::Custom: return custom.upper_endpoint;
    }
    return kNaN;
  }

  bool continuous() const {
    switch (family) {
      case Family::Table: return fs.front() == 0.0;
      case Family::Custom: return custom.continuous;
      default: return true;
    }
  }
};

double bisect_quantile(const std::function<double(double)>& log_cdf, double log_u,
                       double lower, double upper) {
  require(log_u < 0.0 && !std::isnan(log_u), ErrorCode::InvalidArgument,
          "quantile level must lie in (0, 1)");
  auto reaches = [&](double x) { return log_cdf(x) >= log_u; };

  double lo = lower;
  double hi = upper;
  if (std::isfinite(lo) && reaches(lo)) return lo;
  constexpr int kMaxExpand = 2100;
  if (!std::isfinite(lo)) {
    double step = 1.0;
    lo = std::isfinite(hi) ? hi - step : -1.0;
    int k = 0;
    while (reaches(lo)) {
      if (++k > kMaxExpand) fail(ErrorCode::NonConvergence, "cannot bracket quantile from below");
      step *= 2.0;
      lo -= step;
    }
  }
  if (!std::isfinite(hi)) {
    double step = 1.0;
    hi = std::max(lo, 0.0) + step;
    int k = 0;
    while (!reaches(hi)) {
      if (++k > kMaxExpand || !std::isfinite(hi))
        fail(ErrorCode::NonConvergence, "cannot bracket quantile from above");
      step *= 2.0;
      hi += step;
    }
  } else if (!reaches(hi)) {
    fail(ErrorCode::NonConvergence, "d.f. does not reach the requested level at its endpoint");
  }

  constexpr int kMaxIter = 400;
  for (int it = 0; it < kMaxIter; ++it) {
    const double tol = 1e-12 * std::max(1.0, std::abs(hi));
    if (hi - lo <= tol) return hi;
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) return hi;
    if (reaches(mid)) hi = mid;
    else lo = mid;
  }
  fail(ErrorCode::NonConvergence, "bisection iteration cap exceeded");
}

Distribution Distribution::uniform() {
  auto b = std::make_shared<Base>();
  b->family = Family::Uniform;
  return {std::move(b), 1.0};
}

Distribution Distribution::exponential(double rate) {
  require(rate > 0.0 && std::isfinite(rate), ErrorCode::InvalidArgument,
          "exponential rate must be positive");
  auto b = std::make_shared<Base>();
  b->family = Family::Exponential;
  b->param = rate;
  return {std::move(b), 1.0};
}

Distribution Distribution::pareto(double shape) {
  require(shape > 0.0 && std::isfinite(shape), ErrorCode::InvalidArgument,
          "pareto shape must be positive");
  auto b = std::make_shared<Base>();
  b->family = Family::Pareto;
  b->param = shape;
  return {std::move(b), 1.0};
}

Distribution Distribution::gumbel() {
  auto b = std::make_shared<Base>();
  b->family = Family::Gumbel;
  return {std::move(b), 1.0};
}

Distribution Distribution::table(std::vector<double> x, std::vector<double> cdf) {
  require(x.size() == cdf.size() && x.size() >= 2, ErrorCode::InvalidArgument,
          "table d.f. needs at least two (x, F) knots");
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(std::isfinite(x[i]) && cdf[i] >= 0.0 && cdf[i] <= 1.0, ErrorCode::InvalidArgument,
            "table knot " + std::to_string(i) + " out of range");
    if (i > 0) {
      require(x[i] > x[i - 1], ErrorCode::InvalidArgument, "table x must be strictly increasing");
      require(cdf[i] >= cdf[i - 1], ErrorCode::InvalidArgument, "table F must be non-decreasing");
    }
  }
  require(cdf.back() == 1.0, ErrorCode::InvalidArgument, "table d.f. must end at F = 1");
  auto b = std::make_shared<Base>();
  b->family = Family::Table;
  b->xs = std::move(x);
  b->fs = std::move(cdf);
  return {std::move(b), 1.0};
}

Distribution Distribution::table_from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::InvalidArgument, "cannot open " + path.string());
  std::vector<double> xs, fs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    double x = 0.0, f = 0.0;
    if (!(row >> x >> f)) {
      require(first, ErrorCode::InvalidArgument, "malformed row in " + path.string() + ": " + line);
      first = false;
      continue;
    }
    first = false;
    xs.push_back(x);
    fs.push_back(f);
  }
  return table(std::move(xs), std::move(fs));
}

Distribution Distribution::custom(CustomCdf spec) {
  require(static_cast<bool>(spec.cdf), ErrorCode::InvalidArgument, "custom d.f. needs a cdf");
  auto b = std::make_shared<Base>();
  b->family = Family::Custom;
  b->custom = std::move(spec);
  return {std::move(b), 1.0};
}

Distribution Distribution::power(double exponent) const {
  require(exponent > 0.0 && std::isfinite(exponent), ErrorCode::InvalidArgument,
          "power exponent must be positive and finite");
  return {base_, exponent_ * exponent};
}

Family Distribution::family() const { return base_->family; }
double Distribution::parameter() const { return base_->param; }

std::string Distribution::describe() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  switch (base_->family) {
    case Family::Uniform: os << "uniform(0,1)"; break;
    case Family::Exponential: os << "exponential(" << base_->param << ")"; break;
    case Family::Pareto: os << "pareto(" << base_->param << ")"; break;
    case Family::Gumbel: os << "gumbel"; break;
    case Family::Table: os << "table[" << base_->xs.size() << "]"; break;
    case Family::Custom: os << base_->custom.name; break;
  }
  if (exponent_ != 1.0) os << "^" << exponent_;
  return os.str();
}

double Distribution::log_cdf(double x) const {
  const double base = base_->log_cdf(x);
  return exponent_ == 1.0 ? base : exponent_ * base;
}

double Distribution::cdf(double x) const {
  if (exponent_ == 1.0) return base_->cdf(x);
  const double l = log_cdf(x);
  return l == -kInf ? 0.0 : std::exp(l);
}

double Distribution::survival(double x) const {
  if (exponent_ == 1.0) return base_->survival(x);
  const double l = log_cdf(x);
  return l == -kInf ? 1.0 : -std::expm1(l);
}

bool Distribution::has_density() const { return base_->has_density(); }

double Distribution::density(double x) const {
  const double f = base_->density(x);
  if (exponent_ == 1.0 || f == 0.0) return f;
  const double l = base_->log_cdf(x);
  if (l == -kInf) return exponent_ < 1.0 ? kInf : 0.0;
  return exponent_ * std::exp((exponent_ - 1.0) * l) * f;
}

double Distribution::quantile(double u) const {
  require(u > 0.0 && u < 1.0, ErrorCode::InvalidArgument, "quantile level must lie in (0, 1)");
  return quantile_from_log(std::log(u));
}

double Distribution::quantile_from_log(double log_u) const {
  require(log_u < 0.0, ErrorCode::InvalidArgument, "log quantile level must be negative");
  return base_->quantile_from_log(log_u / exponent_);
}

double Distribution::upper_quantile(double q) const {
  require(q > 0.0 && q < 1.0, ErrorCode::InvalidArgument, "tail level must lie in (0, 1)");
  return quantile_from_log(std::log1p(-q));
}

double Distribution::lower_support() const { return base_->lower_support(); }
double Distribution::upper_endpoint() const { return base_->upper_endpoint(); }
bool Distribution::is_continuous() const { return base_->continuous(); }

std::span<const double> Distribution::knots() const {
  return {base_->xs.data(), base_->xs.size()};
}

double power_cdf(const Distribution& F, double a, double x) {
  require(a > 0.0, ErrorCode::InvalidArgument, "power must be positive");
  const double l = F.log_cdf(x);
  if (l == -kInf) return 0.0;
  return std::exp(a * l);
}

bool Distribution::identical_to(const Distribution& other) const {
  if (exponent_ != other.exponent_) return false;
  if (base_ == other.base_) return true;
  const Family f = family();
  if (f == Family::Table || f == Family::Custom || f != other.family()) return false;
  return describe() == other.describe();
}

}  // namespace records
