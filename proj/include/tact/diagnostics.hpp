#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tact {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  SourceLoc loc;

  std::string str() const {
    std::string s = severity == Severity::Error ? "error" : "warning";
    if (loc.line > 0) {
      s += " at " + std::to_string(loc.line) + ":" + std::to_string(loc.column);
    }
    return s + ": " + message;
  }
};

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

inline std::ostream& operator<<(std::ostream& os, const Diagnostic& d) { return os << d.str(); }

}  // namespace tact
