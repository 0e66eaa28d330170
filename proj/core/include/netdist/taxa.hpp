#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace netdist {

// Label of the root vertex. Never a valid taxon name.
inline const std::string kRootName = "rho";

// Ordered set of taxon names. Taxon i is the i-th name in sorted order, so
// two sets with the same names always agree on indices.
class TaxaSet {
 public:
  TaxaSet() = default;
  explicit TaxaSet(std::vector<std::string> labels);

  // Taxa named "1".."n".
  static TaxaSet numbered(int n);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& name(int taxon) const { return labels_.at(taxon); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<int> index_of(const std::string& label) const;

  bool operator==(const TaxaSet& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
};

using TaxaPtr = std::shared_ptr<const TaxaSet>;

inline TaxaPtr make_taxa(std::vector<std::string> labels) {
  return std::make_shared<const TaxaSet>(std::move(labels));
}

inline bool same_taxa(const TaxaPtr& a, const TaxaPtr& b) {
  return a == b || (a && b && *a == *b);
}

}  // namespace netdist
