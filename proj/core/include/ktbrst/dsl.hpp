#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ktbrst/brst.hpp"

namespace ktbrst {

struct ParseError : Error {
  int line = 0;
  int col = 0;
  ParseError(std::string message, int line_, int col_)
      : Error(std::move(message)), line(line_), col(col_) {}
};

struct LintWarning {
  int line = 0;
  int col = 0;
  std::string message;
};

// Parses a model source. The grammar covers a header (dim/coords), field,
// ghost and antifield declarations, named expression bindings, the
// lagrangian, stage blocks and optional xi components. Expressions are
// polynomials: rational literals, + - * ^, jets as name[x0,x1], and
// d(expr, coord) for total derivatives.
Model parse_model(std::string_view source, std::vector<LintWarning>* warnings = nullptr);

// Canonical rendering; parse_model(render_model(m)) reproduces m.
std::string render_model(const Model& m);

}  // namespace ktbrst
