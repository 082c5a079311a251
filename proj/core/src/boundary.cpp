#include "records/boundary.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "records/error.hpp"

namespace records {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

struct BoundaryFunction::Impl {
  virtual ~Impl() = default;
  virtual double value(double t) const = 0;
  virtual BoundaryKind kind() const = 0;
  virtual std::string describe() const = 0;
  virtual std::vector<double> breakpoints(double, double) const { return {}; }
  virtual double domain_end() const { return kInf; }
  virtual std::optional<GrowthForm> tail_form(const Distribution&) const { return std::nullopt; }
  virtual std::span<const double> jump_times() const { return {}; }
  virtual std::span<const double> jump_levels() const { return {}; }
};

namespace {

// Right-continuous step through knots; also used for step boundaries.
struct KnotImpl final : BoundaryFunction::Impl {
  std::vector<double> times;   // increasing
  std::vector<double> values;  // same size
  double end = kInf;
  BoundaryKind tag = BoundaryKind::Table;
  std::string name;

  double value(double t) const override {
    if (t >= end) {
      fail(ErrorCode::OutOfRange, "boundary evaluated past its last jump (t = " +
                                      std::to_string(t) + ")");
    }
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return values.front();
    return values[static_cast<std::size_t>(it - times.begin()) - 1];
  }
  BoundaryKind kind() const override { return tag; }
  std::string describe() const override { return name; }
  std::vector<double> breakpoints(double lo, double hi) const override {
    std::vector<double> out;
    for (double t : times)
      if (t > lo && t < hi) out.push_back(t);
    return out;
  }
  double domain_end() const override { return end; }
  std::span<const double> jump_times() const override { return times; }
  std::span<const double> jump_levels() const override { return values; }
};

struct FunctionImpl final : BoundaryFunction::Impl {
  std::function<double(double)> fn;
  std::string name;
  double value(double t) const override { return fn(t); }
  BoundaryKind kind() const override { return BoundaryKind::Analytic; }
  std::string describe() const override { return name; }
};

struct LogScaledImpl final : BoundaryFunction::Impl {
  double a = 0.0, b = 0.0;
  double value(double t) const override { return a * std::log(t) + b; }
  BoundaryKind kind() const override { return BoundaryKind::LogScaled; }
  std::string describe() const override {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << a << "*ln(t)+" << b;
    return os.str();
  }
  std::optional<GrowthForm> tail_form(const Distribution& F) const override {
    return log_scaled_tail_form(F, a, b);
  }
};

// Running sup of a general boundary, precomputed on [t0, horizon].
struct EnvelopeImpl final : BoundaryFunction::Impl {
  BoundaryFunction base;
  double t0 = 1.0;
  double width = 0.05;
  std::vector<double> prefix;  // prefix[k] = sup over [t0, t0 + k*width]
  bool forward_form = false;     // base is non-decreasing, so g keeps its shape

  explicit EnvelopeImpl(BoundaryFunction b) : base(std::move(b)) {}

  double interval_sup(double lo, double hi) const {
    double best = std::max(base(lo), base(hi));
    if (hi > lo) {
      const auto r = boost::math::tools::brent_find_minima(
          [this](double t) { return -base(t); }, lo, hi, 40);
      best = std::max(best, -r.second);
    }
    return best;
  }

  void build(double horizon) {
    const auto cells = static_cast<std::size_t>(std::ceil((horizon - t0) / width));
    prefix.assign(cells + 1, 0.0);
    prefix[0] = base(t0);
    for (std::size_t k = 1; k <= cells; ++k) {
      const double lo = t0 + static_cast<double>(k - 1) * width;
      prefix[k] = std::max(prefix[k - 1], interval_sup(lo, lo + width));
    }
  }

  double value(double t) const override {
    if (t <= t0) return prefix[0];
    auto k = static_cast<std::size_t>((t - t0) / width);
    double sup;
    if (k < prefix.size()) {
      sup = prefix[k];
    } else {
      k = prefix.size() - 1;
      sup = prefix[k];
      const auto last = static_cast<std::size_t>((t - t0) / width);
      for (std::size_t j = k; j < last; ++j) {
        const double lo = t0 + static_cast<double>(j) * width;
        sup = std::max(sup, interval_sup(lo, lo + width));
      }
      k = last;
    }
    const double cell_start = t0 + static_cast<double>(k) * width;
    if (t > cell_start) sup = std::max(sup, interval_sup(cell_start, t));
    return sup;
  }
  BoundaryKind kind() const override { return BoundaryKind::Envelope; }
  std::string describe() const override { return "envelope(" + base.describe() + ")"; }
  double domain_end() const override { return base.domain_end(); }
  std::optional<GrowthForm> tail_form(const Distribution& F) const override {
    if (!forward_form) return std::nullopt;
    return base.tail_form(F);
  }
};

}  // namespace

BoundaryFunction BoundaryFunction::step(const ThresholdSequence& levels, const AlphaSequence& alpha,
                                        std::size_t n_max) {
  require(n_max >= 1, ErrorCode::InvalidArgument, "step boundary needs n_max >= 1");
  if (const auto len = alpha.length()) {
    require(*len >= n_max + 1, ErrorCode::OutOfRange,
            "alpha table too short for a step boundary with n_max = " + std::to_string(n_max));
  }
  auto impl = std::make_shared<KnotImpl>();
  const auto s = alpha.partial_sums(n_max + 1);
  impl->times.assign(s.begin() + 1, s.end() - 1);
  impl->values = levels.levels(n_max);
  impl->end = s[n_max + 1];
  impl->tag = BoundaryKind::Step;
  impl->name = "step(" + levels.describe() + ", " + alpha.describe() + ")";
  return BoundaryFunction(std::move(impl));
}

BoundaryFunction BoundaryFunction::analytic(std::function<double(double)> b, std::string name) {
  auto impl = std::make_shared<FunctionImpl>();
  impl->fn = std::move(b);
  impl->name = std::move(name);
  return BoundaryFunction(std::move(impl));
}

BoundaryFunction BoundaryFunction::log_scaled(double a, double b) {
  auto impl = std::make_shared<LogScaledImpl>();
  impl->a = a;
  impl->b = b;
  return BoundaryFunction(std::move(impl));
}

BoundaryFunction BoundaryFunction::table(std::vector<double> times, std::vector<double> values) {
  require(!times.empty() && times.size() == values.size(), ErrorCode::InvalidArgument,
          "boundary table needs matching non-empty times and values");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i] > times[i - 1], ErrorCode::InvalidArgument,
            "boundary table times must be strictly increasing");
  auto impl = std::make_shared<KnotImpl>();
  impl->times = std::move(times);
  impl->values = std::move(values);
  impl->name = "table[" + std::to_string(impl->times.size()) + "]";
  return BoundaryFunction(std::move(impl));
}

double BoundaryFunction::operator()(double t) const { return impl_->value(t); }
BoundaryKind BoundaryFunction::kind() const { return impl_->kind(); }
std::string BoundaryFunction::describe() const { return impl_->describe(); }
std::vector<double> BoundaryFunction::breakpoints(double lo, double hi) const {
  return impl_->breakpoints(lo, hi);
}
double BoundaryFunction::domain_end() const { return impl_->domain_end(); }
std::optional<GrowthForm> BoundaryFunction::tail_form(const Distribution& F) const {
  return impl_->tail_form(F);
}
std::span<const double> BoundaryFunction::jump_times() const { return impl_->jump_times(); }
std::span<const double> BoundaryFunction::jump_levels() const { return impl_->jump_levels(); }

BoundaryFunction step_boundary(const ThresholdSequence& levels, const AlphaSequence& alpha,
                               std::size_t n_max) {
  return BoundaryFunction::step(levels, alpha, n_max);
}

BoundaryFunction monotone_envelope(const BoundaryFunction& b, double t0, double horizon) {
  require(t0 > 0.0, ErrorCode::InvalidArgument, "envelope start t0 must be positive");
  if (b.kind() == BoundaryKind::Table || b.kind() == BoundaryKind::Step) {
    auto impl = std::make_shared<KnotImpl>();
    const auto times = b.jump_times();
    double running = b(t0);
    impl->times.push_back(t0);
    impl->values.push_back(running);
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] <= t0) continue;
      running = std::max(running, b.jump_levels()[i]);
      impl->times.push_back(times[i]);
      impl->values.push_back(running);
    }
    impl->end = b.domain_end();
    impl->tag = b.kind();
    impl->name = "envelope(" + b.describe() + ")";
    return BoundaryFunction(std::move(impl));
  }
  auto impl = std::make_shared<EnvelopeImpl>(b);
  impl->t0 = t0;
  impl->forward_form = b.kind() == BoundaryKind::LogScaled && b(t0) <= b(2.0 * t0);
  horizon = std::max(horizon, t0 + 1.0);
  impl->width = std::max(0.05, (horizon - t0) / 2e5);
  impl->build(horizon);
  return BoundaryFunction(std::move(impl));
}

}  // namespace records
