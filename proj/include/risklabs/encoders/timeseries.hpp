#pragma once

#include <span>
#include <string>

#include "risklabs/classical/risk.hpp"
#include "risklabs/core/types.hpp"
#include "risklabs/ingest/returns.hpp"
#include "risklabs/nn/recurrent.hpp"

namespace risklabs {

inline constexpr std::size_t kTimeseriesStats = 3;

/// [realized_log_vol(window), ewma_vol(window), last return]
inline nn::Vector timeseries_stats(std::span<const double> lookback) {
  return {realized_log_vol(lookback), ewma_vol(lookback), lookback.back()};
}

inline nn::Tensor2 as_sequence(std::span<const double> lookback) {
  return nn::Tensor2(lookback.size(), 1, nn::Vector(lookback.begin(), lookback.end()));
}

/// Final hidden state of `cell` over the 30 returns, followed by timeseries_stats.
inline nn::Vector encode_timeseries(std::span<const double> lookback, const nn::RecurrentCell& cell,
                                    nn::RecurrentCell::Tape* tape = nullptr) {
  if (lookback.size() != kLookback) {
    throw InputError("encode_timeseries expects " + std::to_string(kLookback) + " returns, got " +
                     std::to_string(lookback.size()));
  }
  if (cell.input_dim() != 1) throw InputError("encode_timeseries needs a cell with input width 1");
  nn::Vector out = cell.forward(as_sequence(lookback), tape);
  const auto stats = timeseries_stats(lookback);
  out.insert(out.end(), stats.begin(), stats.end());
  return out;
}

/// Backpropagates d(loss)/d(encoding) into the cell; the statistics carry no parameters.
inline void encode_timeseries_backward(nn::RecurrentCell& cell, const nn::RecurrentCell::Tape& tape,
                                       std::span<const double> d_encoding) {
  nn::require_len(d_encoding.size(), cell.hidden_dim() + kTimeseriesStats, "encode_timeseries backward");
  cell.backward(tape, d_encoding.first(cell.hidden_dim()));
}

}  // namespace risklabs
