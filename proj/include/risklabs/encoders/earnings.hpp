#pragma once

#include <span>
#include <string>
#include <vector>

#include "risklabs/analyzer/analyzer.hpp"
#include "risklabs/core/types.hpp"
#include "risklabs/core/validate.hpp"
#include "risklabs/nn/attention.hpp"
#include "risklabs/nn/tensor.hpp"

namespace risklabs {

/// out = W_audio a + W_text t + W_summary s + bias
struct FusionWeights {
  nn::Param audio;
  nn::Param text;
  nn::Param summary;
  nn::Param bias;

  FusionWeights() = default;
  FusionWeights(const std::string& name, std::size_t fused_dim, std::size_t audio_dim, std::size_t text_dim,
                std::size_t summary_dim)
      : audio(name + ".audio", fused_dim, audio_dim),
        text(name + ".text", fused_dim, text_dim),
        summary(name + ".summary", fused_dim, summary_dim),
        bias(name + ".bias", fused_dim, 1) {}

  std::size_t fused_dim() const { return bias.value.rows(); }

  void init(nn::Rng& rng) {
    nn::glorot_uniform(audio.value, audio.value.cols(), fused_dim(), rng);
    nn::glorot_uniform(text.value, text.value.cols(), fused_dim(), rng);
    nn::glorot_uniform(summary.value, summary.value.cols(), fused_dim(), rng);
    bias.value.fill(0.0);
  }

  nn::Vector forward(std::span<const double> a, std::span<const double> t, std::span<const double> s) const {
    check("audio", audio, a.size());
    check("text", text, t.size());
    check("summary", summary, s.size());
    nn::Vector out(bias.value.values());
    nn::gemv_acc(audio.value, a, out);
    nn::gemv_acc(text.value, t, out);
    nn::gemv_acc(summary.value, s, out);
    return out;
  }

  struct InputGrads {
    nn::Vector audio, text, summary;
  };

  InputGrads backward(std::span<const double> a, std::span<const double> t, std::span<const double> s,
                      std::span<const double> dy) {
    nn::require_len(dy.size(), fused_dim(), "fusion backward");
    nn::outer_acc(audio.grad, dy, a);
    nn::outer_acc(text.grad, dy, t);
    nn::outer_acc(summary.grad, dy, s);
    for (std::size_t i = 0; i < dy.size(); ++i) bias.grad[i] += dy[i];
    InputGrads g{nn::Vector(a.size(), 0.0), nn::Vector(t.size(), 0.0), nn::Vector(s.size(), 0.0)};
    nn::gemv_t_acc(audio.value, dy, g.audio);
    nn::gemv_t_acc(text.value, dy, g.text);
    nn::gemv_t_acc(summary.value, dy, g.summary);
    return g;
  }

  void collect(std::vector<nn::Param*>& out) {
    out.push_back(&audio);
    out.push_back(&text);
    out.push_back(&summary);
    out.push_back(&bias);
  }

 private:
  static void check(const char* what, const nn::Param& w, std::size_t got) {
    if (got != w.value.cols()) {
      throw InputError(std::string("fusion ") + what + ": weights " + w.value.shape() + " vs input " +
                       nn::shape_str(got, 1));
    }
  }
};

/// Segment features of an event stacked as rows.
inline nn::Tensor2 audio_matrix(const EarningsEvent& e) {
  if (e.segments.empty()) throw InputError("earnings event without segments");
  nn::Tensor2 m(e.segments.size(), e.segments.front().audio_features.size());
  for (std::size_t i = 0; i < e.segments.size(); ++i) {
    nn::require_len(e.segments[i].audio_features.size(), m.cols(), "audio_features");
    std::copy(e.segments[i].audio_features.begin(), e.segments[i].audio_features.end(), m.row(i).begin());
  }
  return m;
}

inline nn::Tensor2 text_matrix(const EarningsEvent& e) {
  if (e.segments.empty()) throw InputError("earnings event without segments");
  nn::Tensor2 m(e.segments.size(), e.segments.front().text_embedding.size());
  for (std::size_t i = 0; i < e.segments.size(); ++i) {
    nn::require_len(e.segments[i].text_embedding.size(), m.cols(), "text_embedding");
    std::copy(e.segments[i].text_embedding.begin(), e.segments[i].text_embedding.end(), m.row(i).begin());
  }
  return m;
}

/// Attention over audio and text segments, then additive fusion with the analyzer features.
class EarningsEncoder {
 public:
  struct Tape {
    nn::AttentionPool::Tape audio;
    nn::AttentionPool::Tape text;
    nn::Vector a, t, s;
  };

  EarningsEncoder() = default;
  EarningsEncoder(const std::string& name, const Dims& dims, std::size_t fused_dim, std::size_t heads,
                  std::size_t key_dim, std::size_t value_dim)
      : audio_pool(name + ".audio_attention", dims.audio, heads, key_dim, value_dim, dims.audio),
        text_pool(name + ".text_attention", dims.text, heads, key_dim, value_dim, dims.text),
        fusion(name + ".fusion", fused_dim, dims.audio, dims.text, dims.summary) {}

  void init(nn::Rng& rng) {
    audio_pool.init(rng);
    text_pool.init(rng);
    fusion.init(rng);
  }

  std::size_t output_dim() const { return fusion.fused_dim(); }

  nn::Vector forward(const nn::Tensor2& audio, const nn::Tensor2& text, std::span<const double> summary,
                     Tape* tape = nullptr) const {
    if (audio.rows() != text.rows()) throw InputError("earnings encoder: audio and text segment counts differ");
    Tape local;
    Tape& tp = tape ? *tape : local;
    tp.a = audio_pool.forward(audio, &tp.audio);
    tp.t = text_pool.forward(text, &tp.text);
    tp.s.assign(summary.begin(), summary.end());
    return fusion.forward(tp.a, tp.t, tp.s);
  }

  /// Accumulates parameter gradients; input gradients are not needed by callers.
  void backward(const Tape& tp, std::span<const double> dy) {
    const auto g = fusion.backward(tp.a, tp.t, tp.s, dy);
    audio_pool.backward(tp.audio, g.audio);
    text_pool.backward(tp.text, g.text);
  }

  void collect(std::vector<nn::Param*>& out) {
    audio_pool.collect(out);
    text_pool.collect(out);
    fusion.collect(out);
  }

  nn::AttentionPool audio_pool;
  nn::AttentionPool text_pool;
  FusionWeights fusion;
};

/// Fused earnings-call vector for one event.
inline nn::Vector encode_earnings(const EarningsEvent& event, const nn::AttentionPool& audio_pool,
                                  const nn::AttentionPool& text_pool, const analyzer::AnalyzerOutput& analysis,
                                  const FusionWeights& fusion) {
  require_valid(event, "earnings event");
  if (analysis.feature_vector.size() != fusion.summary.value.cols()) {
    throw InputError("analyzer features: expected D_s = " + std::to_string(fusion.summary.value.cols()) + ", got " +
                     std::to_string(analysis.feature_vector.size()));
  }
  const auto a = audio_pool.forward(audio_matrix(event));
  const auto t = text_pool.forward(text_matrix(event));
  return fusion.forward(a, t, analysis.feature_vector);
}

}  // namespace risklabs
