#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "risklabs/analyzer/lexicon.hpp"
#include "risklabs/core/errors.hpp"

namespace risklabs::analyzer {

/// Width of AnalyzerOutput::feature_vector.
inline constexpr std::size_t kSummaryDim = 4;

struct AnalyzerOutput {
  std::string summary;
  double sentiment = 0.0;  // [-1, 1]
  int risk_term_count = 0;
  std::vector<double> feature_vector;  // kSummaryDim

  friend bool operator==(const AnalyzerOutput&, const AnalyzerOutput&) = default;
};

enum class Tone { kGood, kBad, kIrrelevant };

inline const char* tone_name(Tone t) {
  switch (t) {
    case Tone::kGood: return "good";
    case Tone::kBad: return "bad";
    case Tone::kIrrelevant: return "irrelevant";
  }
  return "irrelevant";
}

struct HeadlineLabel {
  Tone label = Tone::kIrrelevant;
  double score = 0.0;

  friend bool operator==(const HeadlineLabel&, const HeadlineLabel&) = default;
};

/// Score above 0.1 is good, below -0.1 bad, anything else irrelevant.
inline HeadlineLabel label_from_score(double score) {
  if (score > 0.1) return {Tone::kGood, score};
  if (score < -0.1) return {Tone::kBad, score};
  return {Tone::kIrrelevant, score};
}

/// [sentiment, tanh(risk/10), tanh(words/500), tanh(sentences/50)]
inline std::vector<double> feature_vector(double sentiment, int risk_terms, std::string_view text) {
  const auto words = static_cast<double>(tokenize(text).size());
  const auto sentences = static_cast<double>(count_sentences(text));
  return {sentiment, std::tanh(risk_terms / 10.0), std::tanh(words / 500.0), std::tanh(sentences / 50.0)};
}

/// First sentence of the text, whitespace-trimmed, at most 200 characters.
inline std::string leading_sentence(std::string_view text) {
  const auto end = text.find_first_of(".!?");
  std::string s{risklabs::detail::trim(text.substr(0, end == std::string_view::npos ? text.size() : end + 1))};
  if (s.size() > 200) s.resize(200);
  return s;
}

inline void require_text(std::string_view text, const char* what) {
  if (tokenize(text).empty()) throw InputError(std::string(what) + ": text is empty");
}

/// Text-analysis service. Implementations share one output schema so callers
/// cannot tell a remote service from the offline stub.
class Analyzer {
 public:
  virtual ~Analyzer() = default;
  virtual std::string name() const = 0;
  virtual AnalyzerOutput analyze_transcript(const std::string& text) = 0;
  virtual HeadlineLabel classify_headline(const std::string& headline) = 0;
};

/// Offline lexicon scorer: sentiment = (pos - neg) / (pos + neg + 1).
class StubAnalyzer final : public Analyzer {
 public:
  explicit StubAnalyzer(Lexicon lexicon = Lexicon::builtin()) : lex_(std::move(lexicon)) {}

  std::string name() const override { return "stub"; }

  AnalyzerOutput analyze_transcript(const std::string& text) override {
    require_text(text, "analyze_transcript");
    const auto c = count(text);
    AnalyzerOutput out;
    out.summary = leading_sentence(text);
    out.sentiment = c.sentiment();
    out.risk_term_count = c.risk;
    out.feature_vector = feature_vector(out.sentiment, out.risk_term_count, text);
    return out;
  }

  HeadlineLabel classify_headline(const std::string& headline) override {
    require_text(headline, "classify_headline");
    return label_from_score(count(headline).sentiment());
  }

  const Lexicon& lexicon() const { return lex_; }

 private:
  struct Counts {
    int pos = 0, neg = 0, risk = 0;
    double sentiment() const {
      return std::clamp(static_cast<double>(pos - neg) / static_cast<double>(pos + neg + 1), -1.0, 1.0);
    }
  };

  Counts count(std::string_view text) const {
    Counts c;
    for (const auto& w : tokenize(text)) {
      c.pos += lex_.positive.count(w) ? 1 : 0;
      c.neg += lex_.negative.count(w) ? 1 : 0;
      c.risk += lex_.risk.count(w) ? 1 : 0;
    }
    return c;
  }

  Lexicon lex_;
};

}  // namespace risklabs::analyzer
