// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "daywatch/core.hpp"

namespace daywatch {

/// Anomalous is the positive class.
struct ConfusionMatrix {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;

    std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Counts over dates present in both maps. Throws InvalidInput when no date
/// is shared.
ConfusionMatrix confusion(const std::map<Date, int>& predictions, const std::map<Date, int>& truth);

/// Empty denominators yield 0.
Metrics metrics(const ConfusionMatrix& cm);

/// Half away from zero, two decimals.
double round2(double value);

struct PredictionTable {
    std::map<Date, int> predicted;
    std::map<Date, int> labels;  // only rows whose label column is filled
};

/// Reads any CSV whose header contains `date` and `predicted` columns, and
/// optionally `label`.
PredictionTable parse_prediction_csv(std::string_view text);

}  // namespace daywatch
