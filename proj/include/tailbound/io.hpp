#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tailbound {

inline constexpr std::string_view kVersion = "0.1.0";

/// Empty cells serialize as blank (CSV/TSV) or null (JSON).
using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class Format { Csv, Tsv, Json };

/// "csv", "tsv" or "json"; throws InvalidParameter otherwise.
Format parse_format(std::string_view text);

struct OutputOptions {
  Format format = Format::Csv;
  int precision = 4;  // significant digits
  std::uint64_t seed = 1;
};

/// %.*g with `precision` significant digits; inf, -inf and nan spelled out.
std::string format_number(double value, int precision);

/// CSV/TSV: per table a `# tailbound <version> seed=<seed> table=<name>`
/// comment, a header row and the data rows, tables separated by a blank line.
/// JSON: one object with tool, version, seed and the tables keyed by name.
void write_tables(std::ostream& out, std::span<const Table> tables, const OutputOptions& options);

/// One positive value per line, or a `date,close` CSV whose negative log
/// returns become the sample. Blank lines and `#` comments are skipped.
std::vector<double> read_sample(std::istream& in);

}  // namespace tailbound
