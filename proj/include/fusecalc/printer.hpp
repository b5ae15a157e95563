#pragma once

#include <string>
#include <vector>

#include "fusecalc/ast.hpp"
#include "fusecalc/term.hpp"

namespace fusecalc {

std::string renderTerm(const Term& t);
std::string renderAtom(const Atom& a);
std::string renderLiteral(const BodyLiteral& lit);
std::string renderRule(const Rule& r);
std::string renderProgram(const Program& p);

/// One atom per line, canonical order; empty string for the empty model.
std::string renderModel(const Interpretation& i);

/// Line-oriented machine format:
///   model <k>
///   <atom>
///   ...
///   end
///   ...
///   models <n>
std::string renderMachine(const std::vector<Interpretation>& models);

std::string renderText(const std::vector<Interpretation>& models);

}  // namespace fusecalc
