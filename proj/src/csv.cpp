#include "divret/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "divret/error.hpp"

namespace divret {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string_view rest(line);
    while (true) {
        const auto comma = rest.find(',');
        cells.emplace_back(trim(rest.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(comma + 1);
    }
    return cells;
}

std::string where(std::string_view source, std::size_t line, std::size_t column)
{
    return std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(column) + ": ";
}

/// Parses "12.5", "-9.10" or accounting-style "(9.10)".
std::optional<double> parse_number(std::string_view cell)
{
    bool negate = false;
    if (cell.size() >= 2 && cell.front() == '(' && cell.back() == ')') {
        negate = true;
        cell = trim(cell.substr(1, cell.size() - 2));
    }
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return negate ? -value : value;
}

/// Non-blank lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> read_lines(std::istream& in)
{
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!trim(line).empty()) {
            lines.emplace_back(number, line);
        }
    }
    return lines;
}

std::ifstream open(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return in;
}

}  // namespace

Unit parse_unit(std::string_view name)
{
    if (name == "percent") {
        return Unit::Percent;
    }
    if (name == "decimal") {
        return Unit::Decimal;
    }
    throw ValidationError("unknown unit '" + std::string(name) + "' (expected percent or decimal)");
}

ReturnMatrix parse_csv(std::istream& in, Unit unit, std::string_view source)
{
    const auto lines = read_lines(in);
    if (lines.empty()) {
        throw ValidationError(std::string(source) + ": empty file");
    }
    const auto header = split_line(lines.front().second);
    if (header.size() < 2) {
        throw ValidationError(where(source, lines.front().first, 1) +
                              "header needs a period column and at least one asset");
    }
    const std::size_t n = header.size() - 1;
    std::vector<std::string> labels(header.begin() + 1, header.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i].empty()) {
            throw ValidationError(where(source, lines.front().first, i + 2) + "empty asset label");
        }
    }

    const std::size_t periods = lines.size() - 1;
    if (periods == 0) {
        throw ValidationError(std::string(source) + ": no data rows");
    }
    const double scale = unit == Unit::Percent ? 0.01 : 1.0;
    std::vector<double> flat(periods * n, 0.0);
    std::vector<std::optional<std::size_t>> first(n);
    std::vector<std::string> period_labels;
    period_labels.reserve(periods);

    for (std::size_t t = 0; t < periods; ++t) {
        const auto& [line_no, text] = lines[t + 1];
        const auto cells = split_line(text);
        if (cells.size() != n + 1) {
            throw ValidationError(where(source, line_no, 1) + "expected " + std::to_string(n + 1) +
                                  " cells, found " + std::to_string(cells.size()));
        }
        period_labels.push_back(cells[0]);
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& cell = cells[i + 1];
            if (cell.empty()) {
                if (first[i]) {
                    throw ValidationError(where(source, line_no, i + 2) + "missing value for '" +
                                          labels[i] + "' after its first period");
                }
                continue;
            }
            const auto value = parse_number(cell);
            if (!value) {
                throw ValidationError(where(source, line_no, i + 2) + "non-numeric cell '" + cell + "'");
            }
            const double r = *value * scale;
            if (r <= -1.0) {
                throw ValidationError(where(source, line_no, i + 2) + "return '" + cell +
                                      "' is at or below -100%");
            }
            if (!first[i]) {
                first[i] = t;
            }
            flat[t * n + i] = r;
        }
    }

    std::vector<std::size_t> availability(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!first[i]) {
            throw ValidationError(std::string(source) + ": column '" + labels[i] + "' has no values");
        }
        availability[i] = *first[i];
    }
    return ReturnMatrix(periods, n, std::move(flat), std::move(labels), std::move(availability),
                        std::move(period_labels));
}

ReturnMatrix parse_csv(const std::filesystem::path& path, Unit unit)
{
    auto in = open(path);
    return parse_csv(in, unit, path.string());
}

SquareMatrix parse_correlation_csv(std::istream& in, std::string_view source)
{
    const auto lines = read_lines(in);
    const std::size_t n = lines.size();
    if (n == 0) {
        throw ValidationError(std::string(source) + ": empty correlation matrix");
    }
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& [line_no, text] = lines[i];
        const auto cells = split_line(text);
        if (cells.size() != n) {
            throw ValidationError(where(source, line_no, 1) + "correlation matrix must be " +
                                  std::to_string(n) + " x " + std::to_string(n));
        }
        for (std::size_t j = 0; j < n; ++j) {
            const auto value = parse_number(cells[j]);
            if (!value) {
                throw ValidationError(where(source, line_no, j + 1) + "non-numeric cell '" + cells[j] + "'");
            }
            m(i, j) = *value;
        }
    }
    return m;
}

SquareMatrix parse_correlation_csv(const std::filesystem::path& path)
{
    auto in = open(path);
    return parse_correlation_csv(in, path.string());
}

}  // namespace divret
