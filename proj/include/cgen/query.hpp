#pragma once

#include <iosfwd>
#include <string>

#include "cgen/admg.hpp"

namespace cgen {

/// P_do(targets | given).
struct QuerySpec {
  VarSet targets;
  Assignment intervention;
  Assignment given;

  VarSet do_vars() const;
  VarSet given_vars() const;
  bool conditional() const { return !given.empty(); }

  /// Checks names, disjointness and value ranges against `g`.
  void validate(const Admg& g) const;
  /// "P_{X=1}(Y | A=0)"
  std::string to_string() const;

  friend bool operator==(const QuerySpec&, const QuerySpec&) = default;
};

/// key=value lines: `target=Y,Z`, `do=X:1,W:0`, `given=A:1`. `#` comments.
QuerySpec parse_query(std::istream& in);
QuerySpec parse_query_string(const std::string& text);
QuerySpec load_query(const std::string& path);
void write_query(std::ostream& out, const QuerySpec& q);

}  // namespace cgen
