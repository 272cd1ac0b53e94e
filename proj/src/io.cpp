#include "tailbound/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "tailbound/bounds.hpp"
#include "tailbound/error.hpp"
#include "tailbound/returns.hpp"

namespace tailbound {

namespace {

std::string cell_text(const Cell& cell, int precision) {
  struct Visitor {
    int precision;
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_number(v, precision); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{precision}, cell);
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

nlohmann::ordered_json cell_json(const Cell& cell, int precision) {
  struct Visitor {
    int precision;
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return std::stod(format_number(v, precision));
    }
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{precision}, cell);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::Csv;
  if (text == "tsv") return Format::Tsv;
  if (text == "json") return Format::Json;
  throw InvalidParameter("unknown format '" + std::string(text) + "' (csv, tsv or json)");
}

std::string format_number(double value, int precision) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, value);
  return buf;
}

void write_tables(std::ostream& out, std::span<const Table> tables, const OutputOptions& options) {
  if (options.precision < 1 || options.precision > 17) {
    throw InvalidParameter("precision must lie in [1, 17]");
  }
  if (options.format == Format::Json) {
    nlohmann::ordered_json doc;
    doc["tool"] = "tailbound";
    doc["version"] = std::string(kVersion);
    doc["seed"] = options.seed;
    auto& body = doc["tables"] = nlohmann::ordered_json::object();
    for (const auto& t : tables) {
      auto rows = nlohmann::ordered_json::array();
      for (const auto& r : t.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t c = 0; c < t.columns.size() && c < r.size(); ++c) {
          obj[t.columns[c]] = cell_json(r[c], options.precision);
        }
        rows.push_back(std::move(obj));
      }
      body[t.name] = std::move(rows);
    }
    out << doc.dump(2) << '\n';
    return;
  }

  const char sep = options.format == Format::Tsv ? '\t' : ',';
  auto field = [&](const std::string& s) {
    return options.format == Format::Csv ? quote_csv(s) : s;
  };
  bool first = true;
  for (const auto& t : tables) {
    if (!first) out << '\n';
    first = false;
    out << "# tailbound " << kVersion << " seed=" << options.seed << " table=" << t.name << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      out << (c ? std::string(1, sep) : "") << field(t.columns[c]);
    }
    out << '\n';
    for (const auto& r : t.rows) {
      for (std::size_t c = 0; c < r.size(); ++c) {
        out << (c ? std::string(1, sep) : "") << field(cell_text(r[c], options.precision));
      }
      out << '\n';
    }
  }
}

std::vector<double> read_sample(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.find_first_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ") !=
            std::string_view::npos &&
        t.find(',') != std::string_view::npos) {
      std::istringstream csv(text);
      const auto returns = log_returns(load_prices(csv));
      const auto losses = negative_losses(returns);
      return {losses.values().begin(), losses.values().end()};
    }
    break;
  }

  std::vector<double> values;
  std::istringstream again(text);
  std::size_t line_no = 0;
  while (std::getline(again, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw DataError("line " + std::to_string(line_no) + ": not a number '" + std::string(t) + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw DataError("sample input is empty");
  return values;
}

}  // namespace tailbound
