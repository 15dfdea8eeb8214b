#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "podium/corpus.hpp"
#include "podium/quotematch.hpp"
#include "podium/util.hpp"

namespace podium {

namespace detail {

// Continued fraction for the regularized incomplete beta function
// (modified Lentz's method).
inline double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

// Regularized incomplete beta function I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::betacf(a, b, x) / a;
  return 1.0 - front * detail::betacf(b, a, 1.0 - x) / b;
}

// Upper-tail probability P(T > t) of Student's t with nu degrees of freedom.
inline double student_t_upper(double nu, double t) {
  if (nu <= 0.0) throw config_error("degrees of freedom must be positive");
  const double x = nu / (nu + t * t);
  const double half_tail = 0.5 * incomplete_beta(nu / 2.0, 0.5, x);
  return t >= 0.0 ? half_tail : 1.0 - half_tail;
}

enum class TailDirection { greater, less };

struct PairedTestOutcome {
  bool degenerate = false;  // n < 2 or zero-variance differences
  double t = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

// One-sided paired t-test on d = a - b. direction 'greater' tests whether
// mean(a) exceeds mean(b). Zero-variance differences yield an explicit
// degenerate outcome rather than NaN.
inline PairedTestOutcome paired_t_one_sided(const std::vector<double>& a,
                                            const std::vector<double>& b,
                                            TailDirection direction) {
  if (a.size() != b.size()) throw data_error("paired t-test requires equal-length samples");
  PairedTestOutcome out;
  out.n = a.size();
  if (a.size() < 2) {
    out.degenerate = true;
    return out;
  }
  const double n = static_cast<double>(a.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = (a[i] - b[i]) - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / (n - 1.0));
  if (sd == 0.0) {
    out.degenerate = true;
    return out;
  }
  out.t = mean / (sd / std::sqrt(n));
  const double upper = student_t_upper(n - 1.0, out.t);
  out.p = direction == TailDirection::greater ? upper : 1.0 - upper;
  return out;
}

// Bonferroni adjustment: min(1, p * m).
inline double bonferroni(double p, std::size_t m) {
  return std::min(1.0, p * static_cast<double>(m));
}

enum class EffectDirection { up, down, none };

struct TestResult {
  std::string feature;
  bool degenerate = false;
  double t = 0.0;
  double raw_p = 1.0;
  double adjusted_p = 1.0;
  EffectDirection direction = EffectDirection::none;
  int tier = 0;  // 0 = not significant; 1..4 = alpha 0.05, 0.01, 0.001, 0.0001
};

inline int significance_tier(double adjusted_p) {
  if (adjusted_p < 0.0001) return 4;
  if (adjusted_p < 0.001) return 3;
  if (adjusted_p < 0.01) return 2;
  if (adjusted_p < 0.05) return 1;
  return 0;
}

inline std::string arrows(const TestResult& r) {
  if (r.tier == 0 || r.direction == EffectDirection::none) return "";
  std::string glyph = r.direction == EffectDirection::up ? "↑" : "↓";
  std::string out;
  for (int i = 0; i < r.tier; ++i) out += glyph;
  return out;
}

// Runs the feature battery: for each feature, a one-sided paired t-test of
// highlight values against matched non-highlight values in the observed
// direction, Bonferroni-corrected by the full battery size (degenerate
// features still count toward m).
inline std::vector<TestResult> feature_battery(
    const std::vector<std::string>& feature_names,
    const std::vector<std::vector<double>>& highlight_values,
    const std::vector<std::vector<double>>& non_highlight_values) {
  if (highlight_values.size() != feature_names.size() ||
      non_highlight_values.size() != feature_names.size())
    throw data_error("feature battery: value matrix does not match feature names");
  const std::size_t m = feature_names.size();
  std::vector<TestResult> results;
  for (std::size_t i = 0; i < m; ++i) {
    TestResult r;
    r.feature = feature_names[i];
    auto greater = paired_t_one_sided(highlight_values[i], non_highlight_values[i],
                                      TailDirection::greater);
    if (greater.degenerate) {
      r.degenerate = true;
      results.push_back(r);
      continue;
    }
    r.t = greater.t;
    if (greater.t > 0.0) {
      r.direction = EffectDirection::up;
      r.raw_p = greater.p;
    } else if (greater.t < 0.0) {
      r.direction = EffectDirection::down;
      r.raw_p = 1.0 - greater.p;
    } else {
      r.direction = EffectDirection::none;
      r.raw_p = 0.5;
    }
    r.adjusted_p = bonferroni(r.raw_p, m);
    r.tier = significance_tier(r.adjusted_p);
    results.push_back(r);
  }
  return results;
}

// --- Descriptive corpus statistics (per-debate) ------------------------------

struct DecileDistribution {
  std::array<double, 10> fractions{};
  bool no_quotes = false;
};

// Fraction of the debate's quotes falling in each position decile of turns.
// Turns are bucketed into 10 equal groups, the remainder spread over the
// earliest buckets.
inline DecileDistribution quote_decile_distribution(const Debate& debate,
                                                    const QuoteIndex& index) {
  DecileDistribution out;
  const std::size_t n = debate.turns.size();
  std::vector<long> turn_quotes(n, 0);
  long total = 0;
  for (std::size_t ti = 0; ti < n; ++ti) {
    for (const auto& s : debate.turns[ti].sentences) turn_quotes[ti] += index.total_count(s.id);
    total += turn_quotes[ti];
  }
  if (total == 0) {
    out.no_quotes = true;
    return out;
  }
  const std::size_t q = n / 10;
  const std::size_t r = n % 10;
  std::size_t turn = 0;
  for (std::size_t bucket = 0; bucket < 10; ++bucket) {
    const std::size_t size = q + (bucket < r ? 1 : 0);
    long sum = 0;
    for (std::size_t k = 0; k < size && turn < n; ++k, ++turn) sum += turn_quotes[turn];
    out.fractions[bucket] = static_cast<double>(sum) / static_cast<double>(total);
  }
  return out;
}

struct CoverageFractions {
  double quoted_sentence_fraction = 0.0;  // sentences with at least one quote
  double quote_text_fraction = 0.0;       // article tokens inside matched quotes
};

inline CoverageFractions coverage_fractions(const Debate& debate,
                                            const std::vector<Article>& articles,
                                            const QuoteIndex& index,
                                            const std::vector<QuoteMatch>& matches) {
  CoverageFractions out;
  const std::size_t n_sentences = debate.sentence_count();
  if (n_sentences > 0) {
    std::size_t quoted = 0;
    for (const auto* s : debate.all_sentences())
      if (index.total_count(s->id) >= 1) ++quoted;
    out.quoted_sentence_fraction = static_cast<double>(quoted) / static_cast<double>(n_sentences);
  }

  std::size_t total_tokens = 0, quote_tokens = 0;
  for (const auto& article : articles) {
    if (article.debate_id != debate.id) continue;
    std::vector<bool> in_quote(article.tokens.size(), false);
    for (const auto& m : matches) {
      if (m.article_id != article.id) continue;
      for (std::size_t t = m.token_begin; t < m.token_end && t < in_quote.size(); ++t)
        in_quote[t] = true;
    }
    total_tokens += article.tokens.size();
    for (bool b : in_quote) quote_tokens += b ? 1 : 0;
  }
  if (total_tokens > 0)
    out.quote_text_fraction =
        static_cast<double>(quote_tokens) / static_cast<double>(total_tokens);
  return out;
}

struct TrendFit {
  double slope = 0.0;
  double intercept = 0.0;
  double t = 0.0;
  double p = 1.0;  // two-sided test of slope != 0
  std::size_t n = 0;
};

// Ordinary least squares with a two-sided t-test on the slope.
inline TrendFit linear_trend(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw data_error("linear_trend requires equal-length vectors");
  if (x.size() < 3) throw data_error("linear_trend requires at least 3 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw data_error("linear_trend: x values are constant");
  TrendFit fit;
  fit.n = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += r * r;
  }
  const double se2 = sse / (n - 2.0) / sxx;
  if (se2 == 0.0) {
    // Exact fit: slope is trivially nonzero unless it is literally 0.
    fit.t = fit.slope == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    fit.p = fit.slope == 0.0 ? 1.0 : 0.0;
    return fit;
  }
  fit.t = fit.slope / std::sqrt(se2);
  fit.p = 2.0 * student_t_upper(n - 2.0, std::abs(fit.t));
  return fit;
}

}  // namespace podium
