#pragma once

#include "risklabs/core/dataset.hpp"
#include "risklabs/core/errors.hpp"
#include "risklabs/core/serialize.hpp"
#include "risklabs/core/types.hpp"
#include "risklabs/core/validate.hpp"

#include "risklabs/ingest/io.hpp"
#include "risklabs/ingest/returns.hpp"
#include "risklabs/ingest/samples.hpp"
#include "risklabs/ingest/synth.hpp"

#include "risklabs/classical/garch.hpp"
#include "risklabs/classical/nelder_mead.hpp"
#include "risklabs/classical/risk.hpp"

#include "risklabs/nn/adam.hpp"
#include "risklabs/nn/attention.hpp"
#include "risklabs/nn/dense.hpp"
#include "risklabs/nn/grad_check.hpp"
#include "risklabs/nn/loss.hpp"
#include "risklabs/nn/recurrent.hpp"
#include "risklabs/nn/serialize.hpp"
#include "risklabs/nn/tensor.hpp"

#include "risklabs/analyzer/analyzer.hpp"
#include "risklabs/analyzer/lexicon.hpp"
#include "risklabs/analyzer/remote.hpp"

#include "risklabs/encoders/earnings.hpp"
#include "risklabs/encoders/news.hpp"
#include "risklabs/encoders/timeseries.hpp"

#include "risklabs/model/config.hpp"
#include "risklabs/model/model.hpp"
#include "risklabs/model/objectives.hpp"

#include "risklabs/backtest/methods.hpp"
#include "risklabs/backtest/metrics.hpp"
#include "risklabs/backtest/report.hpp"
#include "risklabs/backtest/rolling.hpp"
