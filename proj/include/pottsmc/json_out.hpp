#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stats.hpp"
#include "suites.hpp"

namespace pottsmc {

using json = nlohmann::json;

namespace detail {

inline void write_number(std::ostream& os, double x) {
  if (!std::isfinite(x)) {
    os << "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}

inline void write_json(std::ostream& os, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_json(os, it.value(), indent, depth + 1);
      }
      os << nl << close << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) os << ',' << nl;
        os << pad;
        write_json(os, j[i], indent, depth + 1);
      }
      os << nl << close << ']';
      return;
    }
    case json::value_t::number_float:
      write_number(os, j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Serializes with sorted keys and floats at 17 significant digits.
inline void write_json(std::ostream& os, const json& j, int indent = 2) {
  detail::write_json(os, j, indent, 0);
  os << '\n';
}

inline std::string to_json_string(const json& j, int indent = 2) {
  std::ostringstream os;
  write_json(os, j, indent);
  return os.str();
}

inline json to_json(const SuiteEntry& e) {
  const CheckResult& r = e.result;
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  return {{"suite", e.suite},         {"instance", r.instance}, {"params", params},
          {"check", r.check},         {"lhs", r.lhs},           {"rhs", r.rhs},
          {"slack", r.slack},         {"tolerance", r.tolerance},
          {"violations", r.violations}, {"pass", r.pass}};
}

inline json to_json(const std::vector<SuiteEntry>& entries) {
  json arr = json::array();
  for (const auto& e : entries) arr.push_back(to_json(e));
  return arr;
}

inline json to_json(const SpectrumResult& s, std::size_t dim) {
  return {{"dim", dim}, {"eigenvalues", s.eigenvalues}, {"gap", s.gap}};
}

}  // namespace pottsmc
