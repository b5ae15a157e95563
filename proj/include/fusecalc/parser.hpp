#pragma once

#include <string>
#include <string_view>

#include "fusecalc/ast.hpp"
#include "fusecalc/diagnostics.hpp"

namespace fusecalc {

/// Parses a program file. Throws ParseError on syntax errors and on static
/// validation failures (range restriction, sort discipline, arity conflicts,
/// unknown TBox names, COLLECT scope clashes).
Program parseProgram(std::string_view text, const std::string& filename = "<input>");

/// Parses several files into one program (facts and rules concatenate,
/// TBox declarations merge).
Program parseProgramFiles(const std::vector<std::pair<std::string, std::string>>& files);

/// Parses a standalone knowledge-base file for `dl-check`: exactly one
/// `tbox <name> { ... }` block and one `abox <name> { ... }` block.
struct KbFile {
  dl::TBox tbox;
  dl::ABox abox;
};
KbFile parseKbFile(std::string_view text, const std::string& filename = "<input>");

}  // namespace fusecalc
