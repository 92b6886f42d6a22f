#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace corpuslm {

enum class ScriptType { alphabet, abjad, abugida, logography };

ScriptType parse_script_type(std::string_view name);
std::string_view script_type_name(ScriptType t);

// Multiplier b relating a language's UTF-8 byte cost to English. After
// clip_premium, b lies in [0.70, 5.00]; English is 1.0 by definition.
struct BytePremiumEstimate {
  double b = 1.0;
  enum class Method { direct, regressed } method = Method::direct;
  bool clipped = false;
};

std::string_view method_name(BytePremiumEstimate::Method m);
BytePremiumEstimate::Method parse_method(std::string_view name);

// Shannon entropy (bits) of the empirical Unicode-scalar distribution.
// Throws Error on empty text.
double char_entropy(std::string_view text);

// b = bytes(target) / bytes(english) over content-matched corpora.
BytePremiumEstimate direct_byte_premium(std::string_view target_parallel,
                                        std::string_view english_parallel);

// Affine predictor of b from character entropy and script type. Script
// types are one-hot with the alphabet category folded into the intercept.
struct RegressionModel {
  double intercept = 0.0;
  double entropy_weight = 0.0;
  // abjad, abugida, logography (alphabet is the baseline).
  std::array<double, 3> script_weights{};

  double predict_value(double entropy, ScriptType script) const;
};

struct RegressionSample {
  double entropy = 0.0;
  ScriptType script = ScriptType::alphabet;
  double byte_premium = 0.0;
};

// Ordinary least squares via Householder QR. Throws Error on fewer samples
// than features or a rank-deficient design, naming the degenerate feature.
RegressionModel fit_regression(const std::vector<RegressionSample>& samples);

BytePremiumEstimate predict_byte_premium(const RegressionModel& model,
                                         double entropy, ScriptType script);

inline constexpr double kPremiumMin = 0.70;
inline constexpr double kPremiumMax = 5.00;

BytePremiumEstimate clip_premium(BytePremiumEstimate est);

inline double scaled_size(double raw_bytes, double b) { return raw_bytes / b; }
inline double raw_budget(double scaled_bytes, double b) {
  return scaled_bytes * b;
}

// CSV interchange: "language,byte_premium,method,clipped" rows and the
// regression seed format "language,entropy_bits,script_type,byte_premium".
struct PremiumRow {
  std::string language;
  BytePremiumEstimate estimate;
};
struct SeedRow {
  std::string language;
  RegressionSample sample;
};

std::string write_premium_csv(const std::vector<PremiumRow>& rows);
std::vector<PremiumRow> parse_premium_csv(std::string_view csv);
std::vector<SeedRow> parse_seed_csv(std::string_view csv);

}  // namespace corpuslm
