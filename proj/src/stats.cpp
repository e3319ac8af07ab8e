#include "ks/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <type_traits>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace ks {

BigCount binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) throw std::out_of_range("binomial: need 0 <= k <= n");
  BigCount r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

BigCount coupon_cap() {
  BigCount cap;
  mpz_ui_pow_ui(cap.get_mpz_t(), 10, 30);
  return cap;
}

CouponEstimate coupon_mle(const CouponInput& input, unsigned digits) {
  if (input.c < 1) throw std::invalid_argument("coupon_mle: need at least one observed class");
  if (input.c > input.n) throw std::invalid_argument("coupon_mle: more classes than samples");
  CouponEstimate est;
  est.cap = coupon_cap();
  if (input.c == input.n) return est;

  const PrecisionReal n(input.n, digits);
  const PrecisionReal one(1L, digits);
  auto satisfied = [&](const BigCount& j) {
    PrecisionReal pj(j, digits);
    PrecisionReal pj1 = pj + one;
    PrecisionReal pjc(BigCount(j + 1 - input.c), digits);
    PrecisionReal f = log(pj1) - log(pjc) + n * (log(pj) - log(pj1));
    return f.sign() < 0;
  };

  BigCount lo = input.c;
  if (satisfied(lo)) {
    est.bounded = true;
    est.j = lo;
    return est;
  }
  BigCount hi = est.cap;
  if (hi <= lo || !satisfied(hi)) return est;
  while (hi - lo > 1) {
    BigCount mid = (lo + hi) / 2;
    if (satisfied(mid))
      hi = mid;
    else
      lo = mid;
  }
  est.bounded = true;
  est.j = hi;
  return est;
}

namespace {

PrecisionReal power_of_ten(int e, unsigned digits) {
  return pow(PrecisionReal(10L, digits), PrecisionReal(static_cast<long>(e), digits));
}

// Continued fraction for I_x(a,b) / (x^a (1-x)^b / (a B(a,b))), modified Lentz.
PrecisionReal beta_fraction(const PrecisionReal& x, const PrecisionReal& a, const PrecisionReal& b, unsigned digits) {
  const PrecisionReal one(1L, digits);
  const PrecisionReal eps = power_of_ten(-static_cast<int>(digits) - 2, digits);
  const PrecisionReal tiny = power_of_ten(-3 * static_cast<int>(digits) - 50, digits);
  auto guard = [&](PrecisionReal& v) {
    if (abs(v) < tiny) v = tiny;
  };

  PrecisionReal qab = a + b;
  PrecisionReal qap = a + one;
  PrecisionReal qam = a - one;
  PrecisionReal c = one;
  PrecisionReal d = one - qab * x / qap;
  guard(d);
  d = one / d;
  PrecisionReal h = d;
  // sqrt(max(a,b)) terms is the usual order of convergence
  double big = std::max(a.to_double(), b.to_double());
  long max_iter = 1000 + static_cast<long>(200 * std::sqrt(big));
  for (long m = 1; m <= max_iter; ++m) {
    PrecisionReal pm(m, digits);
    PrecisionReal m2 = pm + pm;
    PrecisionReal aa = pm * (b - pm) * x / ((qam + m2) * (a + m2));
    d = one + aa * d;
    guard(d);
    c = one + aa / c;
    guard(c);
    d = one / d;
    h = h * d * c;
    aa = -((a + pm) * (qab + pm) * x) / ((a + m2) * (qap + m2));
    d = one + aa * d;
    guard(d);
    c = one + aa / c;
    guard(c);
    d = one / d;
    PrecisionReal del = d * c;
    h = h * del;
    if (abs(del - one) < eps) return h;
  }
  throw std::runtime_error("reg_inc_beta: continued fraction did not converge in " + std::to_string(max_iter) +
                           " iterations");
}

PrecisionReal decimal(double v, unsigned digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return PrecisionReal(std::string(buf, res.ptr), digits);
}

}  // namespace

PrecisionReal reg_inc_beta(const PrecisionReal& x, const PrecisionReal& a, const PrecisionReal& b) {
  unsigned digits = std::max({x.digits(), a.digits(), b.digits()});
  if (a.sign() <= 0 || b.sign() <= 0) throw std::domain_error("reg_inc_beta: shapes must be positive");
  const PrecisionReal one(1L, digits);
  if (x.sign() <= 0) return PrecisionReal(digits);
  if (x >= one) return one;
  PrecisionReal ln_beta = lngamma(a) + lngamma(b) - lngamma(a + b);
  PrecisionReal front = exp(a * log(x) + b * log1p(-x) - ln_beta);
  if (x > (a + one) / (a + b + PrecisionReal(2L, digits)))
    return one - front * beta_fraction(one - x, b, a, digits) / b;
  return front * beta_fraction(x, a, b, digits) / a;
}

PrecisionReal reg_inc_beta_inv(const PrecisionReal& p, const PrecisionReal& a, const PrecisionReal& b) {
  unsigned digits = std::max({p.digits(), a.digits(), b.digits()});
  if (a.sign() <= 0 || b.sign() <= 0) throw std::domain_error("reg_inc_beta_inv: shapes must be positive");
  if (p.sign() <= 0 || p >= PrecisionReal(1L, digits)) throw std::domain_error("reg_inc_beta_inv: p must lie in (0,1)");

  // Safeguarded Newton: a cheap pass at modest precision, then a polish at full precision.
  PrecisionReal x = a / (a + b);
  std::vector<unsigned> phases;
  if (digits > 30) phases.push_back(30);
  phases.push_back(digits);
  for (unsigned d : phases) {
    PrecisionReal pd = p.with_digits(d), ad = a.with_digits(d), bd = b.with_digits(d);
    PrecisionReal one(1L, d);
    PrecisionReal lo(d), hi = one;
    x = x.with_digits(d);
    PrecisionReal tol = power_of_ten(-static_cast<int>(d) + 3, d);
    PrecisionReal ln_beta = lngamma(ad) + lngamma(bd) - lngamma(ad + bd);
    bool converged = false;
    for (int iter = 0; iter < 2000 && !converged; ++iter) {
      PrecisionReal f = reg_inc_beta(x, ad, bd) - pd;
      if (f.is_zero()) {
        converged = true;
        break;
      }
      if (f.sign() < 0)
        lo = x;
      else
        hi = x;
      PrecisionReal density = exp((ad - one) * log(x) + (bd - one) * log1p(-x) - ln_beta);
      PrecisionReal next = x - f / density;
      if (!(next > lo && next < hi)) next = (lo + hi) / PrecisionReal(2L, d);
      if (abs(next - x) <= tol * abs(next)) converged = true;
      x = next;
    }
    if (!converged) throw std::runtime_error("reg_inc_beta_inv: no convergence");
  }
  return x;
}

Bounds confidence_bounds(const BernoulliInput& input, unsigned digits) {
  if (input.m < 0 || input.n < input.m) throw std::invalid_argument("confidence_bounds: need 0 <= m <= n");
  if (!(input.level > 0 && input.level < 1)) throw std::invalid_argument("confidence_bounds: level must lie in (0,1)");
  const PrecisionReal one(1L, digits);
  const PrecisionReal two(2L, digits);
  PrecisionReal level = decimal(input.level, digits);
  PrecisionReal a(BigCount(input.m + 1), digits);
  PrecisionReal b(BigCount(input.n - input.m + 1), digits);
  PrecisionReal K = input.K.with_digits(digits);
  Bounds out{PrecisionReal(digits), PrecisionReal(digits)};
  if (input.m > 0) out.lower = K * reg_inc_beta_inv((one - level) / two, a, b);
  out.upper = K * reg_inc_beta_inv((one + level) / two, a, b);
  return out;
}

namespace {

using nlohmann::json;

BigCount json_count(const json& v, const std::string& key) {
  try {
    if (v.is_string()) {
      BigCount r(v.get<std::string>(), 10);
      if (r < 0) throw std::invalid_argument("negative");
      return r;
    }
    if (v.is_number_unsigned()) return BigCount(std::to_string(v.get<unsigned long long>()), 10);
    if (v.is_number_integer() && v.get<long long>() >= 0) return BigCount(std::to_string(v.get<long long>()), 10);
  } catch (const std::invalid_argument&) {
  }
  throw std::invalid_argument("record field '" + key + "' must be a non-negative integer (string or number)");
}

std::string json_estimate(const json& v, const std::string& key) {
  std::string text;
  if (v.is_string())
    text = v.get<std::string>();
  else if (v.is_number())
    text = v.dump();
  else
    throw std::invalid_argument("record field '" + key + "' must be a number or numeric string");
  try {
    PrecisionReal check(text, 20);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("record field '" + key + "' is not numeric: " + text);
  }
  return text;
}

std::string show(const PrecisionReal& v) { return v.to_string(6); }

}  // namespace

SurveyRecord parse_survey_record(const std::string& json_line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("survey record is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("survey record must be a JSON object");
  SurveyRecord r;
  bool have_edges = false;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    if (k == "edges" || k == "parent_edges") {
      auto n = json_count(v, k);
      if (!n.fits_sint_p()) throw std::invalid_argument("record field '" + k + "' out of range");
      (k == "edges" ? r.edges : r.parent_edges) = static_cast<int>(n.get_si());
      have_edges = have_edges || k == "edges";
    } else if (k == "total") {
      r.total = json_count(v, k);
    } else if (k == "unconnected_estimate") {
      r.unconnected_estimate = json_estimate(v, k);
    } else if (k == "noniso_estimate") {
      r.noniso_estimate = json_count(v, k);
    } else if (k == "coupon_samples") {
      r.coupon_samples = json_count(v, k);
    } else if (k == "coupon_classes") {
      r.coupon_classes = json_count(v, k);
    } else if (k == "ks_estimate") {
      r.ks_estimate = json_estimate(v, k);
    } else if (k == "ks_sampled") {
      r.ks_sampled = json_count(v, k);
    } else if (k == "ks_found") {
      r.ks_found = json_count(v, k);
    } else if (k == "ks_samples") {
      r.ks_samples = json_count(v, k);
    } else if (k == "criticals_observed") {
      r.criticals_observed = json_count(v, k);
    } else if (k == "criticals_odd") {
      r.criticals_odd = json_count(v, k);
    } else if (k == "criticals_even") {
      r.criticals_even = json_count(v, k);
    } else {
      throw std::invalid_argument("unknown survey record field '" + k + "'");
    }
  }
  if (!have_edges) throw std::invalid_argument("survey record lacks 'edges'");
  if (r.edges < 0 || r.edges > r.parent_edges) throw std::invalid_argument("survey record: edges outside 0..parent_edges");
  return r;
}

std::string survey_record_to_json(const SurveyRecord& r) {
  json j;
  j["edges"] = r.edges;
  j["parent_edges"] = r.parent_edges;
  auto put = [&](const char* key, const std::optional<BigCount>& v) {
    if (v) j[key] = v->get_str();
  };
  put("total", r.total);
  if (r.unconnected_estimate) j["unconnected_estimate"] = *r.unconnected_estimate;
  put("noniso_estimate", r.noniso_estimate);
  put("coupon_samples", r.coupon_samples);
  put("coupon_classes", r.coupon_classes);
  if (r.ks_estimate) j["ks_estimate"] = *r.ks_estimate;
  put("ks_sampled", r.ks_sampled);
  put("ks_found", r.ks_found);
  put("ks_samples", r.ks_samples);
  put("criticals_observed", r.criticals_observed);
  put("criticals_odd", r.criticals_odd);
  put("criticals_even", r.criticals_even);
  return j.dump();
}

std::vector<SurveyRecord> read_survey_records(std::istream& in) {
  std::vector<SurveyRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_survey_record(line));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

SurveyReport survey_aggregate(const std::vector<SurveyRecord>& records, double level, unsigned digits) {
  std::map<int, const SurveyRecord*> by_edges;
  for (const auto& r : records)
    if (!by_edges.emplace(r.edges, &r).second)
      throw std::invalid_argument("duplicate survey record for " + std::to_string(r.edges) + " edges");

  SurveyReport report{{}, PrecisionReal(digits), PrecisionReal(digits), PrecisionReal(digits)};
  for (const auto& [edges, rp] : by_edges) {
    const SurveyRecord& r = *rp;
    SurveyRow row;
    row.edges = edges;
    row.total = r.total ? *r.total : binomial(r.parent_edges, edges);
    row.unconnected = r.unconnected_estimate;
    row.criticals_observed = r.criticals_observed;
    row.criticals_odd = r.criticals_odd;
    row.criticals_even = r.criticals_even;

    std::optional<PrecisionReal> noniso;
    if (r.noniso_estimate) {
      noniso = PrecisionReal(*r.noniso_estimate, digits);
      row.noniso = r.noniso_estimate->get_str();
    } else if (r.coupon_samples && r.coupon_classes) {
      auto est = coupon_mle({*r.coupon_samples, *r.coupon_classes}, digits);
      if (est.bounded) {
        noniso = PrecisionReal(est.j, digits);
        row.noniso = est.j.get_str();
      } else {
        row.noniso = "unbounded";
      }
    }

    std::optional<PrecisionReal> K;
    if (r.ks_estimate) {
      K = PrecisionReal(*r.ks_estimate, digits);
      row.ks = *r.ks_estimate;
    } else if (r.ks_sampled && r.ks_found && noniso && *r.ks_sampled > 0) {
      K = *noniso * PrecisionReal(*r.ks_found, digits) / PrecisionReal(*r.ks_sampled, digits);
      row.ks = show(*K);
    }

    if (K && r.ks_samples && r.criticals_observed && *r.ks_samples > 0) {
      auto b = confidence_bounds({*K, *r.ks_samples, *r.criticals_observed, level}, digits);
      row.expected_criticals = *K * PrecisionReal(*r.criticals_observed, digits) / PrecisionReal(*r.ks_samples, digits);
      row.min_criticals = b.lower;
      row.max_criticals = b.upper;
      report.expected_total = report.expected_total + *row.expected_criticals;
      report.min_total = report.min_total + b.lower;
      report.max_total = report.max_total + b.upper;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_survey_table(std::ostream& out, const SurveyReport& report) {
  auto opt = [](const auto& v) -> std::string {
    if (!v) return "-";
    if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, BigCount>)
      return v->get_str();
    else if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, PrecisionReal>)
      return show(*v);
    else
      return *v;
  };
  out << "edges\ttotal\tunconnected\tnoniso\tks\tcriticals_observed\tcriticals_odd\tcriticals_even\t"
         "expected_criticals\tmin_criticals\tmax_criticals\n";
  for (const auto& r : report.rows) {
    out << r.edges << '\t' << r.total.get_str() << '\t' << opt(r.unconnected) << '\t' << opt(r.noniso) << '\t'
        << opt(r.ks) << '\t' << opt(r.criticals_observed) << '\t' << opt(r.criticals_odd) << '\t'
        << opt(r.criticals_even) << '\t' << opt(r.expected_criticals) << '\t' << opt(r.min_criticals) << '\t'
        << opt(r.max_criticals) << '\n';
  }
  out << "total\t-\t-\t-\t-\t-\t-\t-\t" << show(report.expected_total) << '\t' << show(report.min_total) << '\t'
      << show(report.max_total) << '\n';
}

void write_survey_plot_data(std::ostream& out, const SurveyReport& report) {
  auto num = [](const std::optional<std::string>& s) -> std::string {
    if (!s || *s == "unbounded") return "-";
    return PrecisionReal(*s, 20).to_string(6);
  };
  auto big = [](const std::optional<BigCount>& v) -> std::string { return v ? v->get_str() : "-"; };
  auto real = [](const std::optional<PrecisionReal>& v) -> std::string {
    if (!v || v->is_zero()) return "-";  // zero has no place on a log axis
    return v->to_string(6);
  };
  out << "# edges total unconnected noniso ks observed_odd observed_even min_crit max_crit\n";
  for (const auto& r : report.rows) {
    out << r.edges << ' ' << PrecisionReal(r.total, 20).to_string(6) << ' ' << num(r.unconnected) << ' '
        << num(r.noniso) << ' ' << num(r.ks) << ' ' << big(r.criticals_odd) << ' ' << big(r.criticals_even) << ' '
        << real(r.min_criticals) << ' ' << real(r.max_criticals) << '\n';
  }
}

}  // namespace ks
