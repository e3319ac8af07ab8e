#pragma once

// Population estimates for hypergraph surveys: exact binomial totals,
// coupon-collector class counts and Bernoulli confidence bounds.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ks/precision_real.hpp"

namespace ks {

using BigCount = mpz_class;

/// Throws std::out_of_range unless 0 <= k <= n.
BigCount binomial(long n, long k);

struct CouponInput {
  BigCount n;  // samples, drawn with replacement
  BigCount c;  // distinct classes observed
};

struct CouponEstimate {
  bool bounded = false;
  BigCount j;    // valid when bounded
  BigCount cap;  // search limit used
};

/// Binary-search cap for the class-count search.
BigCount coupon_cap();

/// Smallest j >= c with log(j+1) - log(j+1-c) + n (log j - log(j+1)) < 0,
/// evaluated at `digits` significant digits. c == n never satisfies it and
/// is reported unbounded, as is any input whose j would exceed the cap.
/// Throws std::invalid_argument for c > n or c < 1.
CouponEstimate coupon_mle(const CouponInput& input, unsigned digits = PrecisionReal::kDefaultDigits);

/// I_x(a, b) by continued fraction (modified Lentz), switching to
/// 1 - I_{1-x}(b, a) when x > (a+1)/(a+b+2). Throws std::runtime_error
/// when the fraction fails to converge.
PrecisionReal reg_inc_beta(const PrecisionReal& x, const PrecisionReal& a, const PrecisionReal& b);

/// x with I_x(a, b) = p, to the precision of p. Throws std::domain_error for
/// p outside (0,1) or non-positive shapes, std::runtime_error on
/// non-convergence.
PrecisionReal reg_inc_beta_inv(const PrecisionReal& p, const PrecisionReal& a, const PrecisionReal& b);

struct BernoulliInput {
  PrecisionReal K;  // population size the rate is applied to
  BigCount n;       // sample size
  BigCount m;       // successes observed
  double level = 0.95;
};

struct Bounds {
  PrecisionReal lower;
  PrecisionReal upper;
};

/// K * I^-1_{(1-L)/2}(m+1, n-m+1) and K * I^-1_{(1+L)/2}(m+1, n-m+1); the
/// lower bound is 0 when m == 0.
Bounds confidence_bounds(const BernoulliInput& input, unsigned digits = PrecisionReal::kDefaultDigits);

/// One line of survey statistics for a given edge count. Exact integers are
/// carried as strings in JSON. Field names (JSON keys):
///   edges, parent_edges (default 75), total (default C(parent_edges, edges)),
///   unconnected_estimate, noniso_estimate or coupon_samples + coupon_classes,
///   ks_estimate or ks_sampled + ks_found (scaled by the non-isomorphic
///   estimate), ks_samples, criticals_observed, criticals_odd, criticals_even.
struct SurveyRecord {
  int edges = 0;
  int parent_edges = 75;
  std::optional<BigCount> total;
  std::optional<std::string> unconnected_estimate;
  std::optional<BigCount> noniso_estimate;
  std::optional<BigCount> coupon_samples;
  std::optional<BigCount> coupon_classes;
  std::optional<std::string> ks_estimate;
  std::optional<BigCount> ks_sampled;
  std::optional<BigCount> ks_found;
  std::optional<BigCount> ks_samples;
  std::optional<BigCount> criticals_observed;
  std::optional<BigCount> criticals_odd;
  std::optional<BigCount> criticals_even;
};

/// Parses one JSON object; throws std::invalid_argument with the bad key.
SurveyRecord parse_survey_record(const std::string& json_line);
std::string survey_record_to_json(const SurveyRecord& r);
std::vector<SurveyRecord> read_survey_records(std::istream& in);

struct SurveyRow {
  int edges = 0;
  BigCount total;
  std::optional<std::string> unconnected;
  std::optional<std::string> noniso;  // "unbounded" when the estimator diverges
  std::optional<std::string> ks;
  std::optional<BigCount> criticals_observed;
  std::optional<BigCount> criticals_odd;
  std::optional<BigCount> criticals_even;
  std::optional<PrecisionReal> expected_criticals;  // K m / n
  std::optional<PrecisionReal> min_criticals;
  std::optional<PrecisionReal> max_criticals;
};

struct SurveyReport {
  std::vector<SurveyRow> rows;  // ascending edges
  PrecisionReal expected_total;
  PrecisionReal min_total;
  PrecisionReal max_total;
};

/// Throws std::invalid_argument on duplicate edge counts.
SurveyReport survey_aggregate(const std::vector<SurveyRecord>& records, double level = 0.95,
                              unsigned digits = PrecisionReal::kDefaultDigits);

/// Tab separated table with a header line and a final "total" row.
void write_survey_table(std::ostream& out, const SurveyReport& report);
/// Whitespace separated numeric columns (gnuplot style); "-" for absent values.
void write_survey_plot_data(std::ostream& out, const SurveyReport& report);

}  // namespace ks
