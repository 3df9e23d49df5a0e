#include "semdelta/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "semdelta/error.hpp"

namespace semdelta {

namespace {

constexpr double kTolerance = 1e-12;
constexpr int kMaxIterations = 300;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b) (Numerical Recipes form, modified Lentz).
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double step = d * c;
    h *= step;
    if (std::fabs(step - 1.0) < kTolerance) {
      return h;
    }
  }
  throw Error(ErrorCode::kNoConvergence,
              "incomplete beta did not converge (a=" + std::to_string(a) +
                  ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")");
}

// I_x(a, b) with y = 1 - x supplied separately so callers can avoid the
// cancellation in 1 - x.
double incomplete_beta(double x, double y, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::clamp(front * beta_continued_fraction(x, a, b) / a, 0.0, 1.0);
  }
  return std::clamp(1.0 - front * beta_continued_fraction(y, b, a) / b, 0.0, 1.0);
}

// Two-sided tail mass P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2).
double two_sided_tail(double t, double df) {
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  const double denom = df + t2;
  return incomplete_beta(df / denom, t2 / denom, df / 2.0, 0.5);
}

}  // namespace

double SampleStats::stddev() const { return std::sqrt(variance); }

void RunningStats::push(double value) {
  ++n_;
  const double d = value - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (value - mean_);
}

RunningStats& RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return *this;
  if (n_ == 0) {
    *this = other;
    return *this;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double d = other.mean_ - mean_;
  mean_ += d * nb / n;
  m2_ += other.m2_ + d * d * na * nb / n;
  n_ += other.n_;
  return *this;
}

SampleStats RunningStats::finish() const {
  if (n_ == 0) {
    throw Error(ErrorCode::kEmptySample, "cannot summarize an empty sample");
  }
  SampleStats s;
  s.n = n_;
  s.mean = mean_;
  s.variance = n_ > 1 ? std::max(0.0, m2_ / static_cast<double>(n_ - 1)) : 0.0;
  return s;
}

SampleStats summarize(std::span<const double> values) {
  RunningStats acc;
  for (const double v : values) {
    acc.push(v);
  }
  return acc.finish();
}

std::string_view to_string(Tail tail) {
  switch (tail) {
    case Tail::kTwoSided: return "two-sided";
    case Tail::kGreater: return "greater";
    case Tail::kLess: return "less";
  }
  return "two-sided";
}

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || std::isnan(x)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return incomplete_beta(x, 1.0 - x, a, b);
}

double student_t_two_sided_p(double t, double df) { return two_sided_tail(t, df); }

double student_t_cdf(double t, double df) {
  const double half_tail = 0.5 * two_sided_tail(t, df);
  return t > 0.0 ? 1.0 - half_tail : half_tail;
}

WelchResult welch_t_test(const SampleStats& a, const SampleStats& b, Tail tail) {
  if (a.n < 2 || b.n < 2) {
    throw Error(ErrorCode::kInsufficientSample,
                "Welch test needs n >= 2 per group (got " + std::to_string(a.n) + " and " +
                    std::to_string(b.n) + ")");
  }
  if (a.variance + b.variance <= 0.0) {
    throw Error(ErrorCode::kDegenerateVariance, "both samples have zero variance");
  }
  const double na = static_cast<double>(a.n);
  const double nb = static_cast<double>(b.n);
  const double va = a.variance / na;
  const double vb = b.variance / nb;

  WelchResult r;
  r.tail = tail;
  r.t_statistic = (a.mean - b.mean) / std::sqrt(va + vb);
  if (va == vb && a.n == b.n) {
    // Balanced case: the formula reduces to n_a + n_b - 2 exactly.
    r.degrees_of_freedom = na + nb - 2.0;
  } else {
    r.degrees_of_freedom = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    r.degrees_of_freedom =
        std::clamp(r.degrees_of_freedom, std::min(na, nb) - 1.0, na + nb - 2.0);
  }

  const double both = two_sided_tail(r.t_statistic, r.degrees_of_freedom);
  switch (tail) {
    case Tail::kTwoSided:
      r.p_value = both;
      break;
    case Tail::kGreater:
      r.p_value = r.t_statistic > 0.0 ? 0.5 * both : 1.0 - 0.5 * both;
      break;
    case Tail::kLess:
      r.p_value = r.t_statistic < 0.0 ? 0.5 * both : 1.0 - 0.5 * both;
      break;
  }
  r.p_value = std::clamp(r.p_value, 0.0, 1.0);
  r.reject_at_0_05 = r.p_value < 0.05;
  return r;
}

}  // namespace semdelta
