#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gssa/time_series.hpp"

namespace gssa {

/// Thrown on unreadable, malformed, or too-short CSV input; messages carry
/// the path and, for row problems, the 1-based line number.
class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trimmed(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

/// Splits one CSV line into exactly two cells, or reports why it cannot.
inline std::pair<std::string_view, std::string_view> splitRow(std::string_view line,
                                                              const std::string& path,
                                                              long line_number) {
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) {
        throw CsvError(path + ":" + std::to_string(line_number) +
                       ": expected two comma-separated columns");
    }
    const std::string_view rest = line.substr(comma + 1);
    if (rest.find(',') != std::string_view::npos) {
        throw CsvError(path + ":" + std::to_string(line_number) +
                       ": expected two columns, found more");
    }
    return {trimmed(line.substr(0, comma)), trimmed(rest)};
}

} // namespace detail

/// Reads a two-column (period_label, value) CSV with a header row into a
/// labeled series. Values must be finite decimals; an empty value cell marks
/// a gap and is rejected. Series shorter than `min_observations` are refused
/// because the monthly embedding has nothing to work with.
inline TimeSeries loadCsv(const std::string& path, std::size_t min_observations = 24) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CsvError(path + ": cannot open file");
    }

    std::string line;
    long line_number = 0;
    std::vector<std::string> labels;
    std::vector<double> values;

    while (std::getline(in, line)) {
        ++line_number;
        std::string_view view = line;
        if (line_number == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") {
            view.remove_prefix(3);
        }
        if (!view.empty() && view.back() == '\r') {
            view.remove_suffix(1);
        }
        if (view.empty()) {
            if (in.peek() == std::char_traits<char>::eof()) {
                break; // trailing newline
            }
            throw CsvError(path + ":" + std::to_string(line_number) + ": blank row");
        }

        const auto [label, cell] = detail::splitRow(view, path, line_number);
        if (line_number == 1) {
            continue; // header row carries no data
        }
        if (cell.empty()) {
            throw CsvError(path + ":" + std::to_string(line_number) + ": empty value cell");
        }
        double value = 0.0;
        const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc{} || end != cell.data() + cell.size()) {
            throw CsvError(path + ":" + std::to_string(line_number) + ": unparseable value \"" +
                           std::string(cell) + "\"");
        }
        if (!std::isfinite(value)) {
            throw CsvError(path + ":" + std::to_string(line_number) + ": non-finite value \"" +
                           std::string(cell) + "\"");
        }
        labels.emplace_back(label);
        values.push_back(value);
    }

    if (line_number == 0) {
        throw CsvError(path + ": empty file");
    }
    if (values.size() < min_observations) {
        throw CsvError(path + ": " + std::to_string(values.size()) +
                       " observations, need at least " + std::to_string(min_observations));
    }
    try {
        return TimeSeries(std::move(values), std::move(labels));
    } catch (const std::invalid_argument& e) {
        throw CsvError(path + ": " + e.what());
    }
}

} // namespace gssa
