#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ottr/jetpoly.hpp"
#include "ottr/laxpde.hpp"
#include "ottr/report.hpp"
#include "ottr/series.hpp"
#include "ottr/theory.hpp"

namespace ottr {

inline constexpr std::string_view kFormatTag = "ottr-series-v1";

/// Malformed input file; line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

using OperatorList = std::vector<LinearDiffOp>;
using FileValue = std::variant<BigSeries, JetPoly, OperatorList, ResidualReport>;

struct SeriesFile {
  TheoryData theory;
  FileValue value;

  const char* kind() const;
};

std::string emit(const TheoryData& theory, const BigSeries& f);
std::string emit(const TheoryData& theory, const JetPoly& p);
std::string emit(const TheoryData& theory, const OperatorList& ops);
std::string emit(const TheoryData& theory, const ResidualReport& report);
std::string emit(const SeriesFile& file);

/// Strict parser: canonical term order, coefficients in lowest terms, every
/// variable inside the declared truncation.
SeriesFile parse(std::string_view text);

/// Lowers the truncation of a parsed file. Raising any parameter is a
/// DomainError: values cannot gain precision they were not computed with.
SeriesFile restrict_truncation(const SeriesFile& file, const Truncation& to);

/// Reads and parses a file; I/O failures are reported as ParseError at line 0.
SeriesFile read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace ottr
