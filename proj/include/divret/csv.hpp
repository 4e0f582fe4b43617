#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "divret/matrix.hpp"
#include "divret/portfolio.hpp"

namespace divret {

enum class Unit { Percent, Decimal };

/// Accepts "percent" or "decimal".
[[nodiscard]] Unit parse_unit(std::string_view name);

/**
 * @brief Reads a return table.
 *
 * Layout: a header row (first cell names the period column, the rest are
 * asset labels), then one row per period: a period label followed by one
 * return per asset. Negative values may be written "-9.10" or "(9.10)".
 * Leading empty cells in a column mark periods before that asset exists and
 * set its availability index. The returned matrix always carries an
 * availability schedule (all zeros when no cell is empty).
 *
 * Throws IoError if the file cannot be read and ValidationError with
 * row/column coordinates for malformed content.
 */
[[nodiscard]] ReturnMatrix parse_csv(const std::filesystem::path& path, Unit unit = Unit::Percent);
[[nodiscard]] ReturnMatrix parse_csv(std::istream& in, Unit unit, std::string_view source = "<input>");

/// N x N numeric correlation matrix, no header. Diagonal and symmetry are
/// validated by the consumer.
[[nodiscard]] SquareMatrix parse_correlation_csv(const std::filesystem::path& path);
[[nodiscard]] SquareMatrix parse_correlation_csv(std::istream& in, std::string_view source = "<input>");

}  // namespace divret
