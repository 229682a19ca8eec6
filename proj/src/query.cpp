#include "cgen/query.hpp"

#include <fstream>
#include <sstream>

namespace cgen {

namespace {

std::string trim(std::string s) {
  const char* ws = " \t\r";
  s.erase(0, s.find_first_not_of(ws));
  s.erase(s.find_last_not_of(ws) + 1);
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Assignment parse_assignment(const std::string& value, int line_number) {
  Assignment out;
  for (const auto& item : split(value, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("query line " + std::to_string(line_number) + ": expected name:value in '" + item +
                                  "'");
    const std::string name = trim(item.substr(0, colon));
    const std::string v = trim(item.substr(colon + 1));
    std::size_t used = 0;
    int parsed = 0;
    try {
      parsed = std::stoi(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v.size() || v.empty())
      throw std::invalid_argument("query line " + std::to_string(line_number) + ": bad value '" + v + "'");
    if (!out.emplace(name, parsed).second)
      throw std::invalid_argument("query line " + std::to_string(line_number) + ": '" + name + "' repeated");
  }
  return out;
}

std::string format_assignment(const Assignment& a) {
  std::string out;
  for (const auto& [k, v] : a) out += (out.empty() ? "" : ",") + k + ":" + std::to_string(v);
  return out;
}

}  // namespace

VarSet QuerySpec::do_vars() const {
  VarSet out;
  for (const auto& [k, v] : intervention) out.insert(k);
  return out;
}

VarSet QuerySpec::given_vars() const {
  VarSet out;
  for (const auto& [k, v] : given) out.insert(k);
  return out;
}

void QuerySpec::validate(const Admg& g) const {
  if (targets.empty()) throw std::invalid_argument("query has no target");
  g.require_known(targets);
  g.require_known(do_vars());
  g.require_known(given_vars());
  if (!disjoint(targets, do_vars()) || !disjoint(targets, given_vars()) || !disjoint(do_vars(), given_vars()))
    throw std::invalid_argument("query target, do and given sets must be disjoint");
  for (const auto* a : {&intervention, &given})
    for (const auto& [k, v] : *a)
      if (v < 0 || v >= g.cardinality(k))
        throw std::invalid_argument("value " + std::to_string(v) + " out of range for '" + k + "'");
}

std::string QuerySpec::to_string() const {
  std::string out = "P";
  if (!intervention.empty()) {
    out += "_{";
    bool first = true;
    for (const auto& [k, v] : intervention) {
      out += (first ? "" : ",") + k + "=" + std::to_string(v);
      first = false;
    }
    out += "}";
  }
  out += "(";
  bool first = true;
  for (const auto& t : targets) {
    out += (first ? "" : ",") + t;
    first = false;
  }
  if (!given.empty()) {
    out += " | ";
    first = true;
    for (const auto& [k, v] : given) {
      out += (first ? "" : ",") + k + "=" + std::to_string(v);
      first = false;
    }
  }
  return out + ")";
}

QuerySpec parse_query(std::istream& in) {
  QuerySpec q;
  std::string line;
  int line_number = 0;
  bool have_target = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("query line " + std::to_string(line_number) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = line.substr(eq + 1);
    if (key == "target") {
      for (const auto& t : split(value, ',')) q.targets.insert(t);
      have_target = true;
    } else if (key == "do") {
      q.intervention = parse_assignment(value, line_number);
    } else if (key == "given") {
      q.given = parse_assignment(value, line_number);
    } else {
      throw std::invalid_argument("query line " + std::to_string(line_number) + ": unknown key '" + key + "'");
    }
  }
  if (!have_target || q.targets.empty()) throw std::invalid_argument("query: missing target");
  return q;
}

QuerySpec parse_query_string(const std::string& text) {
  std::istringstream in(text);
  return parse_query(in);
}

QuerySpec load_query(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open query '" + path + "'");
  return parse_query(in);
}

void write_query(std::ostream& out, const QuerySpec& q) {
  out << "target=";
  bool first = true;
  for (const auto& t : q.targets) {
    out << (first ? "" : ",") << t;
    first = false;
  }
  out << '\n';
  if (!q.intervention.empty()) out << "do=" << format_assignment(q.intervention) << '\n';
  if (!q.given.empty()) out << "given=" << format_assignment(q.given) << '\n';
}

}  // namespace cgen
