#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace semdelta {

struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased (divisor n - 1); 0 when n == 1

  double stddev() const;
};

// Welford accumulator. merge() is associative, so partial accumulators built
// on disjoint slices can be combined in any grouping.
class RunningStats {
 public:
  void push(double value);
  RunningStats& merge(const RunningStats& other);

  std::size_t count() const noexcept { return n_; }
  // Throws Error{kEmptySample} when nothing was pushed.
  SampleStats finish() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Throws Error{kEmptySample} on an empty span.
SampleStats summarize(std::span<const double> values);

enum class Tail {
  kTwoSided,
  kGreater,  // H1: mean(a) > mean(b)
  kLess,     // H1: mean(a) < mean(b)
};

std::string_view to_string(Tail tail);

struct WelchResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;  // Welch-Satterthwaite
  double p_value = 1.0;
  bool reject_at_0_05 = false;
  Tail tail = Tail::kTwoSided;
};

// Welch's unequal-variance t-test of mean(a) against mean(b).
// Throws Error{kInsufficientSample} when either n < 2 and
// Error{kDegenerateVariance} when both variances are zero.
WelchResult welch_t_test(const SampleStats& a, const SampleStats& b, Tail tail = Tail::kTwoSided);

// I_x(a, b), evaluated with the modified Lentz continued fraction
// (relative tolerance 1e-12, at most 300 iterations).
double regularized_incomplete_beta(double x, double a, double b);

// P(T <= t) for Student's t with `df` > 0 degrees of freedom.
double student_t_cdf(double t, double df);

// P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

}  // namespace semdelta
