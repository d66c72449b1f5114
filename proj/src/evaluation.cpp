// SPDX-License-Identifier: Apache-2.0
#include "daywatch/evaluation.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "daywatch/error.hpp"
#include "daywatch/io.hpp"

namespace daywatch {

ConfusionMatrix confusion(const std::map<Date, int>& predictions, const std::map<Date, int>& truth) {
    ConfusionMatrix cm;
    for (const auto& [date, predicted] : predictions) {
        const auto it = truth.find(date);
        if (it == truth.end()) continue;
        const bool p = predicted == 1, t = it->second == 1;
        if (p && t)
            ++cm.tp;
        else if (p)
            ++cm.fp;
        else if (t)
            ++cm.fn;
        else
            ++cm.tn;
    }
    if (cm.total() == 0) throw InvalidInput("predictions and ground truth share no date");
    return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
    Metrics m;
    if (cm.tp + cm.fp > 0) m.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    if (cm.tp + cm.fn > 0) m.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

double round2(double value) { return std::round(value * 100.0) / 100.0; }

PredictionTable parse_prediction_csv(std::string_view text) {
    const auto rows = io::lines(text);
    if (rows.empty()) throw ParseError(1, "prediction file is empty");
    std::optional<std::size_t> date_col, pred_col, label_col;
    const auto header = io::split(rows[0], ',');
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto name = io::trim(header[i]);
        if (name == "date") date_col = i;
        if (name == "predicted") pred_col = i;
        if (name == "label") label_col = i;
    }
    if (!date_col || !pred_col) throw ParseError(1, "header must name 'date' and 'predicted' columns");

    PredictionTable table;
    const auto flag = [](std::string_view v, std::size_t line, const char* what) {
        v = io::trim(v);
        if (v == "0") return 0;
        if (v == "1") return 1;
        throw ParseError(line, std::string(what) + " '" + std::string(v) + "' is not 0 or 1");
    };
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::size_t line = r + 1;
        if (io::trim(rows[r]).empty()) continue;
        const auto fields = io::split(rows[r], ',');
        if (fields.size() != header.size())
            throw ParseError(line, "expected " + std::to_string(header.size()) + " fields");
        Date date;
        try {
            date = Date::parse(fields[*date_col]);
        } catch (const ParseError& e) {
            throw ParseError(line, e.what());
        }
        if (table.predicted.contains(date)) throw ParseError(line, "duplicate date " + date.to_string());
        table.predicted[date] = flag(fields[*pred_col], line, "predicted");
        if (label_col && !io::trim(fields[*label_col]).empty())
            table.labels[date] = flag(fields[*label_col], line, "label");
    }
    return table;
}

}  // namespace daywatch
