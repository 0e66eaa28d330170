#include "netdist/taxa.hpp"

#include <algorithm>
#include <cctype>

#include "netdist/errors.hpp"

namespace netdist {
namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

// Numeric names sort by value ahead of other names, so "2" < "10".
bool natural_less(const std::string& a, const std::string& b) {
  bool da = all_digits(a);
  bool db = all_digits(b);
  if (da != db) return da;
  if (da && a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

TaxaSet::TaxaSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw PreconditionError("taxa set must not be empty");
  std::sort(labels_.begin(), labels_.end(), natural_less);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw PreconditionError("empty taxon name");
    if (labels_[i] == kRootName) throw PreconditionError("taxon name '" + kRootName + "' is reserved");
    if (i > 0 && labels_[i] == labels_[i - 1])
      throw PreconditionError("duplicate taxon '" + labels_[i] + "'");
  }
}

TaxaSet TaxaSet::numbered(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back(std::to_string(i));
  return TaxaSet(std::move(names));
}

std::optional<int> TaxaSet::index_of(const std::string& label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label, natural_less);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

}  // namespace netdist
