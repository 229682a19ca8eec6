#pragma once

#include <algorithm>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace cgen {

/// A set of variable names. Ordering-sensitive callers go through
/// `Admg::ordered` to get declaration order.
using VarSet = std::set<std::string>;

/// Joint value assignment keyed by variable name.
using Assignment = std::map<std::string, int>;

inline VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline VarSet set_minus(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline VarSet set_intersect(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline bool is_subset(const VarSet& a, const VarSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool disjoint(const VarSet& a, const VarSet& b) { return set_intersect(a, b).empty(); }

inline VarSet to_set(const std::vector<std::string>& names) { return VarSet(names.begin(), names.end()); }

/// "{A, B}" rendering used in traces and error messages.
std::string format_set(const VarSet& s);

}  // namespace cgen
