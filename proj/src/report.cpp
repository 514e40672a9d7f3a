#include "ottr/report.hpp"

#include <sstream>

namespace ottr {

void ResidualReport::add(std::string equation, std::vector<int> index, BigSeries residual) {
  entries_.push_back({std::move(equation), std::move(index), std::move(residual)});
}

void ResidualReport::add_all(const std::vector<Residual<Rational>>& rs) {
  for (const auto& r : rs) add(r);
}

void ResidualReport::merge(const ResidualReport& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
  notes_.insert(notes_.end(), other.notes_.begin(), other.notes_.end());
}

bool ResidualReport::all_zero() const { return failures() == 0; }

std::size_t ResidualReport::failures() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.zero() ? 0 : 1;
  return n;
}

const ReportEntry* ResidualReport::first_failure() const {
  for (const auto& e : entries_) {
    if (!e.zero()) return &e;
  }
  return nullptr;
}

int ResidualReport::min_reliable() const {
  int r = kExact;
  for (const auto& e : entries_) r = std::min(r, e.residual.prec());
  return r;
}

std::string ResidualReport::summary() const {
  std::ostringstream os;
  os << (title_.empty() ? "report" : title_) << ": " << entries_.size() << " residuals, " << failures() << " nonzero";
  if (!entries_.empty()) {
    int r = min_reliable();
    os << ", checked through degree " << (r >= kExact ? std::string("exact") : std::to_string(r));
  }
  if (const auto* f = first_failure()) os << "; first failure " << f->equation << index_string(f->index);
  return os.str();
}

}  // namespace ottr
