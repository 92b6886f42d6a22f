#include "corpuslm/byte_premium.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "corpuslm/common.hpp"
#include "corpuslm/kernels.hpp"
#include "corpuslm/unicode.hpp"

namespace corpuslm {

ScriptType parse_script_type(std::string_view name) {
  if (name == "alphabet") return ScriptType::alphabet;
  if (name == "abjad") return ScriptType::abjad;
  if (name == "abugida") return ScriptType::abugida;
  if (name == "logography") return ScriptType::logography;
  throw Error("unknown script type '" + std::string(name) + "'");
}

std::string_view script_type_name(ScriptType t) {
  switch (t) {
    case ScriptType::alphabet: return "alphabet";
    case ScriptType::abjad: return "abjad";
    case ScriptType::abugida: return "abugida";
    case ScriptType::logography: return "logography";
  }
  return "?";
}

std::string_view method_name(BytePremiumEstimate::Method m) {
  return m == BytePremiumEstimate::Method::direct ? "direct" : "regressed";
}

BytePremiumEstimate::Method parse_method(std::string_view name) {
  if (name == "direct") return BytePremiumEstimate::Method::direct;
  if (name == "regressed") return BytePremiumEstimate::Method::regressed;
  throw Error("unknown premium method '" + std::string(name) + "'");
}

double char_entropy(std::string_view text) {
  if (text.empty()) throw Error("char_entropy: empty text");
  // Ordered map so the summation order is a pure function of the character
  // multiset; entropy is then exactly permutation-invariant.
  std::map<char32_t, std::uint64_t> counts;
  std::size_t pos = 0;
  std::uint64_t total = 0;
  while (pos < text.size()) {
    ++counts[unicode::decode_next(text, pos)];
    ++total;
  }
  std::vector<double> terms;
  terms.reserve(counts.size());
  const double n = static_cast<double>(total);
  for (const auto& [cp, c] : counts) {
    const double p = static_cast<double>(c) / n;
    terms.push_back(-p * std::log2(p));
  }
  return kernels::sum_f64(terms);
}

BytePremiumEstimate direct_byte_premium(std::string_view target_parallel,
                                        std::string_view english_parallel) {
  if (english_parallel.empty()) {
    throw Error("direct_byte_premium: empty English side");
  }
  BytePremiumEstimate est;
  est.b = static_cast<double>(target_parallel.size()) /
          static_cast<double>(english_parallel.size());
  est.method = BytePremiumEstimate::Method::direct;
  est.clipped = false;
  return est;
}

namespace {

constexpr std::size_t kFeatureCount = 5;
constexpr const char* kFeatureNames[kFeatureCount] = {
    "intercept", "entropy", "abjad", "abugida", "logography"};

std::array<double, kFeatureCount> featurize(double entropy,
                                            ScriptType script) {
  std::array<double, kFeatureCount> row{1.0, entropy, 0.0, 0.0, 0.0};
  switch (script) {
    case ScriptType::alphabet: break;
    case ScriptType::abjad: row[2] = 1.0; break;
    case ScriptType::abugida: row[3] = 1.0; break;
    case ScriptType::logography: row[4] = 1.0; break;
  }
  return row;
}

}  // namespace

RegressionModel fit_regression(const std::vector<RegressionSample>& samples) {
  const std::size_t n = samples.size();
  const std::size_t p = kFeatureCount;
  if (n < p) {
    throw Error("fit_regression: need at least " + std::to_string(p) +
                " samples, got " + std::to_string(n));
  }
  std::vector<double> a(n * p);  // row-major design matrix
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = featurize(samples[i].entropy, samples[i].script);
    std::copy(row.begin(), row.end(), a.begin() + static_cast<long>(i * p));
    y[i] = samples[i].byte_premium;
  }

  // Householder QR, applying reflections to y as we go.
  double col_scale = 0.0;
  for (double v : a) col_scale = std::max(col_scale, std::abs(v));
  const double tol = 1e-10 * std::max(1.0, col_scale);
  for (std::size_t j = 0; j < p; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < n; ++i) norm += a[i * p + j] * a[i * p + j];
    norm = std::sqrt(norm);
    if (norm <= tol) {
      throw Error(std::string("fit_regression: rank-deficient design, ") +
                  "feature '" + kFeatureNames[j] + "' is degenerate");
    }
    const double alpha = a[j * p + j] >= 0 ? -norm : norm;
    std::vector<double> v(n - j);
    v[0] = a[j * p + j] - alpha;
    for (std::size_t i = j + 1; i < n; ++i) v[i - j] = a[i * p + j];
    double vnorm2 = 0.0;
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 > 0) {
      for (std::size_t k = j; k < p; ++k) {
        double dot = 0.0;
        for (std::size_t i = j; i < n; ++i) dot += v[i - j] * a[i * p + k];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = j; i < n; ++i) a[i * p + k] -= f * v[i - j];
      }
      double dot = 0.0;
      for (std::size_t i = j; i < n; ++i) dot += v[i - j] * y[i];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = j; i < n; ++i) y[i] -= f * v[i - j];
    }
    if (std::abs(a[j * p + j]) <= tol) {
      throw Error(std::string("fit_regression: rank-deficient design, ") +
                  "feature '" + kFeatureNames[j] + "' is degenerate");
    }
  }

  // Back-substitution on the p x p upper triangle.
  std::array<double, kFeatureCount> beta{};
  for (std::size_t jj = p; jj-- > 0;) {
    double s = y[jj];
    for (std::size_t k = jj + 1; k < p; ++k) s -= a[jj * p + k] * beta[k];
    beta[jj] = s / a[jj * p + jj];
  }

  RegressionModel model;
  model.intercept = beta[0];
  model.entropy_weight = beta[1];
  model.script_weights = {beta[2], beta[3], beta[4]};
  return model;
}

double RegressionModel::predict_value(double entropy,
                                      ScriptType script) const {
  const auto row = featurize(entropy, script);
  return intercept + entropy_weight * row[1] + script_weights[0] * row[2] +
         script_weights[1] * row[3] + script_weights[2] * row[4];
}

BytePremiumEstimate predict_byte_premium(const RegressionModel& model,
                                         double entropy, ScriptType script) {
  BytePremiumEstimate est;
  est.b = model.predict_value(entropy, script);
  est.method = BytePremiumEstimate::Method::regressed;
  est.clipped = false;
  return est;
}

BytePremiumEstimate clip_premium(BytePremiumEstimate est) {
  const double clipped = std::min(kPremiumMax, std::max(kPremiumMin, est.b));
  if (clipped != est.b) {
    est.b = clipped;
    est.clipped = true;
  }
  return est;
}

std::string write_premium_csv(const std::vector<PremiumRow>& rows) {
  std::string out = "language,byte_premium,method,clipped\n";
  for (const auto& row : rows) {
    out += row.language;
    out += ',';
    out += format_double(row.estimate.b);
    out += ',';
    out += method_name(row.estimate.method);
    out += ',';
    out += row.estimate.clipped ? "true" : "false";
    out += '\n';
  }
  return out;
}

namespace {

bool parse_bool(std::string_view s, std::size_t line_no) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw Error("invalid boolean '" + std::string(s) + "' at line " +
              std::to_string(line_no));
}

}  // namespace

std::vector<PremiumRow> parse_premium_csv(std::string_view csv) {
  std::vector<PremiumRow> rows;
  const auto lines = split_lines(csv);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i == 0 && lines[i].starts_with("language,")) continue;
    if (lines[i].empty()) continue;
    const auto fields = split(lines[i], ',');
    if (fields.size() != 4) {
      throw Error("premium CSV: expected 4 fields at line " +
                  std::to_string(i + 1));
    }
    PremiumRow row;
    row.language = std::string(fields[0]);
    row.estimate.b = parse_double(fields[1], i + 1);
    row.estimate.method = parse_method(fields[2]);
    row.estimate.clipped = parse_bool(fields[3], i + 1);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SeedRow> parse_seed_csv(std::string_view csv) {
  std::vector<SeedRow> rows;
  const auto lines = split_lines(csv);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i == 0 && lines[i].starts_with("language,")) continue;
    if (lines[i].empty()) continue;
    const auto fields = split(lines[i], ',');
    if (fields.size() != 4) {
      throw Error("seed CSV: expected 4 fields at line " +
                  std::to_string(i + 1));
    }
    SeedRow row;
    row.language = std::string(fields[0]);
    row.sample.entropy = parse_double(fields[1], i + 1);
    row.sample.script = parse_script_type(fields[2]);
    row.sample.byte_premium = parse_double(fields[3], i + 1);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace corpuslm
