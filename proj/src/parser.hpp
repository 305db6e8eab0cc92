#pragma once

#include "its.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rhobound {

struct SourceSpan {
  std::string file;
  int line = 1;
  int col = 1;
};

struct ParseDiagnostic {
  SourceSpan span;
  std::string message;
  std::string str() const {
    return span.file + ":" + std::to_string(span.line) + ":" + std::to_string(span.col) + ": " +
           message;
  }
};

struct ParseResult {
  std::optional<Program> program;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return program.has_value() && diagnostics.empty(); }
};

ParseResult parse(const std::string &text, const std::string &filename = "<input>");
ParseResult parse_file(const std::string &path);

// parse(pretty_print(p)) is structurally equal to p.
std::string pretty_print(const Program &prog);

}  // namespace rhobound
