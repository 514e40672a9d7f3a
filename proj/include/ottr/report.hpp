#pragma once

#include <string>
#include <vector>

#include "ottr/linsolve.hpp"
#include "ottr/series.hpp"

namespace ottr {

struct ReportEntry {
  std::string equation;
  std::vector<int> index;
  BigSeries residual;

  bool zero() const { return residual.is_zero(); }
};

/// Residuals of a family of equations over a finite index window.
class ResidualReport {
 public:
  ResidualReport() = default;
  explicit ResidualReport(std::string title) : title_(std::move(title)) {}

  void add(std::string equation, std::vector<int> index, BigSeries residual);
  void add(const Residual<Rational>& r) { add(r.id, r.index, r.residual); }
  void add_all(const std::vector<Residual<Rational>>& rs);
  void merge(const ResidualReport& other);
  /// Free-form description of the index ranges that were checked.
  void note(std::string text) { notes_.push_back(std::move(text)); }

  const std::string& title() const { return title_; }
  const std::vector<ReportEntry>& entries() const { return entries_; }
  const std::vector<std::string>& notes() const { return notes_; }

  bool all_zero() const;
  std::size_t failures() const;
  const ReportEntry* first_failure() const;
  /// Lowest reliable degree over all entries (what "zero" was checked up to).
  int min_reliable() const;

  std::string summary() const;

 private:
  std::string title_;
  std::vector<ReportEntry> entries_;
  std::vector<std::string> notes_;
};

}  // namespace ottr
