#include "ktbrst/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace ktbrst {

namespace {

struct Token {
  enum Kind { Ident, Number, Symbol, End } kind = End;
  std::string text;
  int col = 0;
};

class LineLexer {
 public:
  LineLexer(std::string_view text, int line) : text_(text), line_(line) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }
  bool at_end() const { return tok_.kind == Token::End; }
  int line() const { return line_; }

  [[noreturn]] void fail(const std::string& message, int col) const {
    throw ParseError(message, line_, col);
  }
  [[noreturn]] void fail_here(const std::string& message) const { fail(message, tok_.col); }

  Token expect_ident(const std::string& what) {
    if (tok_.kind != Token::Ident) fail_here("expected " + what);
    return take();
  }
  void expect_symbol(char c) {
    if (tok_.kind != Token::Symbol || tok_.text[0] != c)
      fail_here(std::string("expected '") + c + "'");
    take();
  }
  bool accept_symbol(char c) {
    if (tok_.kind == Token::Symbol && tok_.text[0] == c) {
      take();
      return true;
    }
    return false;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    tok_.col = static_cast<int>(pos_) + 1;
    if (pos_ >= text_.size() || text_[pos_] == '#') {
      tok_ = Token{Token::End, "", tok_.col};
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      tok_ = Token{Token::Ident, std::string(text_.substr(start, pos_ - start)), tok_.col};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      tok_ = Token{Token::Number, std::string(text_.substr(start, pos_ - start)), tok_.col};
      return;
    }
    static const std::string symbols = "+-*^()[]{},=/";
    if (symbols.find(c) == std::string::npos)
      throw ParseError(std::string("unexpected character '") + c + "'", line_, tok_.col);
    ++pos_;
    tok_ = Token{Token::Symbol, std::string(1, c), tok_.col};
  }

  std::string_view text_;
  int line_;
  size_t pos_ = 0;
  Token tok_;
};

struct ParserState {
  int dim = 0;
  std::vector<std::string> coords;
  std::vector<FieldDecl> primals;
  std::vector<std::pair<std::string, std::string>> antifields;  // (name, dual)
  FieldSpacePtr space;
  std::map<std::string, GradedPoly> bindings;
  std::vector<LintWarning>* warnings = nullptr;
};

long parse_long(LineLexer& lex) {
  Token t = lex.take();
  if (t.kind != Token::Number) lex.fail("expected a number", t.col);
  return std::stol(t.text);
}

class ExprParser {
 public:
  ExprParser(LineLexer& lex, ParserState& st) : lex_(lex), st_(st) {}

  GradedPoly parse() {
    GradedPoly value = parse_sum();
    if (!lex_.at_end()) lex_.fail_here("unexpected trailing input in expression");
    return value;
  }

 private:
  GradedPoly parse_sum() {
    GradedPoly value = parse_product();
    while (true) {
      if (lex_.accept_symbol('+'))
        value += parse_product();
      else if (lex_.accept_symbol('-'))
        value -= parse_product();
      else
        return value;
    }
  }

  GradedPoly parse_product() {
    std::map<JetVar, int> odd_uses;
    int first_col = lex_.peek().col;
    GradedPoly value = parse_signed(odd_uses);
    while (lex_.accept_symbol('*')) value = mul(value, parse_signed(odd_uses));
    for (const auto& [var, uses] : odd_uses)
      if (uses >= 2 && st_.warnings)
        st_.warnings->push_back(LintWarning{
            lex_.line(), first_col,
            "odd variable " + st_.space->decl(var.field).name + " squared; the term is zero"});
    return value;
  }

  GradedPoly parse_signed(std::map<JetVar, int>& odd_uses) {
    if (lex_.accept_symbol('-')) return -parse_signed(odd_uses);
    return parse_power(odd_uses);
  }

  GradedPoly parse_power(std::map<JetVar, int>& odd_uses) {
    auto [value, var] = parse_primary();
    int exponent = 1;
    if (lex_.accept_symbol('^')) {
      Token t = lex_.take();
      if (t.kind != Token::Number) lex_.fail("expected an integer exponent", t.col);
      exponent = std::stoi(t.text);
      if (exponent < 0) lex_.fail("negative exponents are not supported", t.col);
      GradedPoly power = GradedPoly::constant(rat(1), st_.space);
      for (int i = 0; i < exponent; ++i) power = mul(power, value);
      value = power;
    }
    if (var && st_.space->is_odd(var->field)) odd_uses[*var] += exponent;
    return value;
  }

  // Returns the parsed primary and, when it was a plain (jet) variable, the
  // variable itself for the odd-square lint.
  std::pair<GradedPoly, std::optional<JetVar>> parse_primary() {
    Token t = lex_.peek();
    if (t.kind == Token::Number) {
      lex_.take();
      Rational q(t.text);
      if (lex_.accept_symbol('/')) {
        Token d = lex_.take();
        if (d.kind != Token::Number) lex_.fail("expected a denominator", d.col);
        Rational den(d.text);
        if (sgn(den) == 0) lex_.fail("zero denominator", d.col);
        q /= den;
      }
      q.canonicalize();
      return {GradedPoly::constant(q, st_.space), std::nullopt};
    }
    if (t.kind == Token::Symbol && t.text == "(") {
      lex_.take();
      GradedPoly inner = parse_sum();
      lex_.expect_symbol(')');
      return {inner, std::nullopt};
    }
    if (t.kind == Token::Ident && t.text == "d") {
      lex_.take();
      lex_.expect_symbol('(');
      GradedPoly inner = parse_sum();
      lex_.expect_symbol(',');
      Token coord = lex_.expect_ident("a coordinate name");
      auto idx = st_.space->coord_index(coord.text);
      if (!idx) lex_.fail("unknown coordinate: " + coord.text, coord.col);
      lex_.expect_symbol(')');
      return {total_derivative(inner, *idx), std::nullopt};
    }
    if (t.kind != Token::Ident) lex_.fail("expected an expression", t.col);
    Token name = lex_.take();

    if (auto it = st_.bindings.find(name.text); it != st_.bindings.end()) {
      if (lex_.peek().kind == Token::Symbol && lex_.peek().text == "[")
        lex_.fail("cannot attach a jet index to a binding; use d(...)", lex_.peek().col);
      return {it->second, std::nullopt};
    }
    auto field = st_.space->find(name.text);
    if (!field) lex_.fail("unknown field or binding: " + name.text, name.col);
    MultiIndex idx(st_.space->dim());
    if (lex_.accept_symbol('[')) {
      while (true) {
        Token coord = lex_.expect_ident("a coordinate name");
        auto ci = st_.space->coord_index(coord.text);
        if (!ci) lex_.fail("unknown coordinate: " + coord.text, coord.col);
        idx = idx.plus(*ci);
        if (lex_.accept_symbol(']')) break;
        lex_.expect_symbol(',');
      }
    }
    JetVar var{*field, idx};
    return {GradedPoly::jet(st_.space, var), var};
  }

  LineLexer& lex_;
  ParserState& st_;
};

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Model parse_model(std::string_view source, std::vector<LintWarning>* warnings) {
  ParserState st;
  st.warnings = warnings;

  Model model;
  model.name = "model";
  bool have_lagrangian = false;
  GradedPoly lagrangian;
  std::map<int, NoetherStage> stages;
  std::map<std::string, GradedPoly> xi_components;
  int open_stage = -1;
  bool in_stage = false;

  auto ensure_space = [&](LineLexer& lex) {
    if (st.space) return;
    if (st.dim == 0) lex.fail_here("dim must be declared before expressions");
    if (static_cast<int>(st.coords.size()) != st.dim)
      lex.fail_here("coords must be declared before expressions");
    std::vector<FieldDecl> decls = st.primals;
    for (const auto& [name, dual] : st.antifields) {
      auto primal = std::find_if(st.primals.begin(), st.primals.end(),
                                 [&](const FieldDecl& d) { return d.name == dual; });
      if (primal == st.primals.end())
        lex.fail_here("antifield " + name + " refers to unknown declaration " + dual);
      decls.push_back(FieldDecl::antifield_for(*primal, name));
    }
    st.space = FieldSpace::make(st.coords, std::move(decls));
  };

  std::istringstream stream{std::string(source)};
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    LineLexer lex(raw, line_no);
    if (lex.at_end()) continue;
    Token head = lex.peek();

    if (head.kind == Token::Symbol && head.text == "}") {
      lex.take();
      if (!in_stage) lex.fail("'}' without an open stage block", head.col);
      if (!lex.at_end()) lex.fail_here("unexpected input after '}'");
      in_stage = false;
      continue;
    }

    if (head.kind != Token::Ident) lex.fail("expected a statement", head.col);
    std::string keyword = head.text;

    if (in_stage && keyword != "gen" && keyword != "alpha")
      lex.fail("only gen/alpha statements may appear inside a stage block", head.col);

    if (keyword == "model" || keyword == "description") {
      size_t at = raw.find(keyword);
      std::string rest = trim(std::string_view(raw).substr(at + keyword.size()));
      if (size_t hash = rest.find('#'); hash != std::string::npos)
        rest = trim(std::string_view(rest).substr(0, hash));
      if (keyword == "model") {
        if (rest.empty()) lex.fail("model statement needs a name", head.col);
        model.name = rest;
      } else {
        model.description = rest;
      }
      continue;
    }

    lex.take();  // consume keyword

    if (keyword == "dim") {
      if (st.dim != 0) lex.fail("dim declared twice", head.col);
      st.dim = static_cast<int>(parse_long(lex));
      if (st.dim < 1 || st.dim > MultiIndex::kMaxDim) lex.fail("dim out of range", head.col);
    } else if (keyword == "coords") {
      if (st.dim == 0) lex.fail("dim must precede coords", head.col);
      if (!st.coords.empty()) lex.fail("coords declared twice", head.col);
      while (!lex.at_end()) st.coords.push_back(lex.expect_ident("a coordinate name").text);
      if (static_cast<int>(st.coords.size()) != st.dim)
        lex.fail("expected exactly " + std::to_string(st.dim) + " coordinate names", head.col);
    } else if (keyword == "field" || keyword == "ghost" || keyword == "antifield") {
      if (st.space) lex.fail("declarations must precede expressions", head.col);
      Token name = lex.expect_ident("a declaration name");
      if (keyword == "antifield") {
        Token of = lex.expect_ident("'of'");
        if (of.text != "of") lex.fail("expected 'of'", of.col);
        Token dual = lex.expect_ident("the dual declaration name");
        st.antifields.emplace_back(name.text, dual.text);
      } else {
        Token parity = lex.expect_ident("'even' or 'odd'");
        if (parity.text != "even" && parity.text != "odd")
          lex.fail("expected 'even' or 'odd'", parity.col);
        Parity p = parity.text == "odd" ? Parity::Odd : Parity::Even;
        if (keyword == "field") {
          st.primals.push_back(FieldDecl::field(name.text, p));
        } else {
          Token gh = lex.expect_ident("'gh'");
          if (gh.text != "gh") lex.fail("expected 'gh'", gh.col);
          long k = parse_long(lex);
          if (k < 1) lex.fail("ghost number must be >= 1", gh.col);
          st.primals.push_back(FieldDecl::ghost(name.text, p, static_cast<int>(k)));
        }
      }
      if (!lex.at_end()) lex.fail_here("unexpected trailing input");
    } else if (keyword == "let") {
      ensure_space(lex);
      Token name = lex.expect_ident("a binding name");
      if (st.space->find(name.text) || st.bindings.count(name.text))
        lex.fail("name already in use: " + name.text, name.col);
      lex.expect_symbol('=');
      st.bindings[name.text] = ExprParser(lex, st).parse();
    } else if (keyword == "lagrangian") {
      ensure_space(lex);
      if (have_lagrangian) lex.fail("lagrangian declared twice", head.col);
      have_lagrangian = true;
      lagrangian = ExprParser(lex, st).parse();
    } else if (keyword == "stage") {
      ensure_space(lex);
      long k = parse_long(lex);
      lex.expect_symbol('{');
      if (!lex.at_end()) lex.fail_here("unexpected input after '{'");
      if (k < 0) lex.fail("stage must be non-negative", head.col);
      if (stages.count(static_cast<int>(k))) lex.fail("stage declared twice", head.col);
      open_stage = static_cast<int>(k);
      stages[open_stage].stage = open_stage;
      in_stage = true;
    } else if (keyword == "gen" || keyword == "alpha") {
      if (!in_stage) lex.fail(keyword + " is only valid inside a stage block", head.col);
      Token ghost = lex.expect_ident("a ghost name");
      if (!st.space->find(ghost.text)) lex.fail("unknown ghost: " + ghost.text, ghost.col);
      lex.expect_symbol('=');
      GradedPoly value = ExprParser(lex, st).parse();
      if (keyword == "gen")
        stages[open_stage].generators.push_back(NoetherGenerator{ghost.text, Density(value)});
      else
        stages[open_stage].alphas[ghost.text] = Density(value);
    } else if (keyword == "xi") {
      ensure_space(lex);
      Token ghost = lex.expect_ident("a ghost name");
      auto ordinal = st.space->find(ghost.text);
      if (!ordinal || st.space->decl(*ordinal).role != FieldRole::Ghost)
        lex.fail("xi components must name a ghost", ghost.col);
      if (xi_components.count(ghost.text)) lex.fail("xi declared twice for " + ghost.text, ghost.col);
      lex.expect_symbol('=');
      xi_components[ghost.text] = ExprParser(lex, st).parse();
    } else {
      lex.fail("unknown statement: " + keyword, head.col);
    }
  }

  if (in_stage) throw ParseError("unterminated stage block", line_no, 1);
  if (!st.space) {
    LineLexer lex("", line_no);
    ensure_space(lex);
  }

  model.space = st.space;
  model.lagrangian = Density(have_lagrangian ? lagrangian : GradedPoly::zero(st.space));
  for (auto& [k, stage] : stages) model.stages.push_back(std::move(stage));
  std::map<int, GradedPoly> xi;
  for (auto& [name, value] : xi_components)
    if (!value.is_zero()) xi.emplace(st.space->require(name), std::move(value));
  if (!xi.empty())
    model.brst_xi = Derivation(st.space, std::move(xi), Chirality::Left, Parity::Odd, 1);
  validate_model(model);
  return model;
}

std::string render_model(const Model& m) {
  std::ostringstream os;
  os << "model " << m.name << '\n';
  if (!m.description.empty()) {
    std::string desc = m.description;
    std::replace(desc.begin(), desc.end(), '\n', ' ');
    os << "description " << desc << '\n';
  }
  os << "dim " << m.space->dim() << '\n';
  os << "coords";
  for (const std::string& c : m.space->coords()) os << ' ' << c;
  os << '\n';

  for (const FieldDecl& d : m.space->decls())
    if (d.role == FieldRole::Field)
      os << "field " << d.name << ' ' << to_string(d.parity) << '\n';
  for (const FieldDecl& d : m.space->decls())
    if (d.role == FieldRole::Ghost)
      os << "ghost " << d.name << ' ' << to_string(d.parity) << " gh " << d.ghost_number << '\n';
  for (const FieldDecl& d : m.space->decls())
    if (is_antifield_role(d.role)) os << "antifield " << d.name << " of " << *d.dual_of << '\n';

  os << "lagrangian " << m.lagrangian.coeff.str() << '\n';

  for (const NoetherStage& st : m.stages) {
    os << "stage " << st.stage << " {\n";
    for (const NoetherGenerator& gen : st.generators)
      os << "gen " << gen.ghost << " = " << gen.density.coeff.str() << '\n';
    for (const auto& [target, alpha] : st.alphas)
      os << "alpha " << target << " = " << alpha.coeff.str() << '\n';
    os << "}\n";
  }

  if (m.brst_xi)
    for (const auto& [field, comp] : m.brst_xi->components())
      os << "xi " << m.space->decl(field).name << " = " << comp.str() << '\n';
  return os.str();
}

}  // namespace ktbrst
