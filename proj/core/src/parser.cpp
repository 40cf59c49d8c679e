// Copyright 2026 The Fixq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Hand-written recursive-descent parser for the query language. Precedence,
// loosest to tightest: `,` < union/except < comparison < additive <
// multiplicative < path `/` < predicate `[]`. Abbreviations expand while
// parsing: `name` to child::name, `@name` to attribute::name, `//` to
// /descendant-or-self::node()/.
//
// The scanner is fused with the parser so direct element constructors can
// switch to XML-style scanning where a primary expression is expected.

#include "fixq/parser.hpp"

#include <cctype>
#include <optional>
#include <string>

#include "fixq/errors.hpp"

namespace fixq {

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

const char* const kKeywords[] = {
    "for", "let", "in", "return", "if", "then", "else", "typeswitch", "case", "default",
    "with", "seeded", "by", "recurse", "union", "except", "declare", "function", "as", "at",
    "idiv", "eq", "ne", "lt", "le", "gt", "ge",
};

bool is_keyword(std::string_view word) {
  for (const char* k : kKeywords) {
    if (word == k) return true;
  }
  return false;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Program parse_program() {
    Program program;
    skip_ws();
    while (at_word("declare")) {
      program.functions.push_back(parse_function_decl());
      skip_ws();
    }
    program.main = parse_expr();
    skip_ws();
    if (!eof()) fail("end of input");
    resolve_calls(program);
    return program;
  }

  ExprPtr parse_single() {
    skip_ws();
    ExprPtr e = parse_expr();
    skip_ws();
    if (!eof()) fail("end of input");
    return e;
  }

 private:
  // ---- scanning -----------------------------------------------------------

  bool eof() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw QuerySyntaxError(pos_, expected);
  }

  void skip_ws() {
    for (;;) {
      while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
      if (peek() == '(' && peek(1) == ':') {
        std::size_t depth = 1;
        pos_ += 2;
        while (!eof() && depth > 0) {
          if (peek() == '(' && peek(1) == ':') {
            depth++;
            pos_ += 2;
          } else if (peek() == ':' && peek(1) == ')') {
            depth--;
            pos_ += 2;
          } else {
            ++pos_;
          }
        }
        if (depth > 0) fail("closing :)");
        continue;
      }
      return;
    }
  }

  bool at_symbol(std::string_view sym) const { return text_.substr(pos_).starts_with(sym); }

  bool eat_symbol(std::string_view sym) {
    skip_ws();
    if (!at_symbol(sym)) return false;
    pos_ += sym.size();
    return true;
  }

  void expect_symbol(std::string_view sym) {
    if (!eat_symbol(sym)) fail("'" + std::string(sym) + "'");
  }

  bool at_word(std::string_view word) {
    skip_ws();
    if (!text_.substr(pos_).starts_with(word)) return false;
    char next = pos_ + word.size() < text_.size() ? text_[pos_ + word.size()] : '\0';
    return !is_name_char(next);
  }

  bool eat_word(std::string_view word) {
    if (!at_word(word)) return false;
    pos_ += word.size();
    return true;
  }

  void expect_word(std::string_view word) {
    if (!eat_word(word)) fail("'" + std::string(word) + "'");
  }

  std::string parse_name() {
    skip_ws();
    if (eof() || !is_name_start(peek())) fail("a name");
    std::size_t start = pos_;
    while (!eof() && is_name_char(peek())) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string parse_var_name() {
    expect_symbol("$");
    if (eof() || !is_name_start(peek())) fail("a variable name after '$'");
    return parse_name();
  }

  std::string parse_string_literal() {
    skip_ws();
    char quote = peek();
    if (quote != '"' && quote != '\'') fail("a string literal");
    ++pos_;
    std::string value;
    for (;;) {
      if (eof()) fail("closing quote");
      char c = peek();
      if (c == quote) {
        if (peek(1) == quote) {  // doubled quote escapes itself
          value.push_back(quote);
          pos_ += 2;
          continue;
        }
        ++pos_;
        return value;
      }
      value.push_back(c);
      ++pos_;
    }
  }

  // ---- grammar ------------------------------------------------------------

  Function parse_function_decl() {
    expect_word("declare");
    expect_word("function");
    std::string name = parse_name();
    if (is_builtin_name(name) || name == "closure")
      fail("a function name not shadowing a built-in");
    expect_symbol("(");
    std::vector<std::string> params;
    skip_ws();
    if (!at_symbol(")")) {
      for (;;) {
        params.push_back(parse_var_name());
        maybe_type_annotation();
        if (!eat_symbol(",")) break;
      }
    }
    expect_symbol(")");
    maybe_type_annotation();
    expect_symbol("{");
    ExprPtr body = parse_expr();
    expect_symbol("}");
    expect_symbol(";");
    return Function{std::move(name), std::move(params), std::move(body)};
  }

  // Accepts and ignores `as <type>` annotations so conventional declarations
  // parse; everything is untyped here.
  void maybe_type_annotation() {
    if (!eat_word("as")) return;
    parse_sequence_type_text();
  }

  void parse_sequence_type_text() {
    skip_ws();
    std::size_t start = pos_;
    while (!eof() && (is_name_char(peek()) || peek() == ':')) ++pos_;
    if (pos_ == start) fail("a type name");
    if (eat_symbol("(")) expect_symbol(")");
    if (peek() == '*' || peek() == '+' || peek() == '?') ++pos_;
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_expr_single();
    while (eat_symbol(",")) e = mk_seq_concat(e, parse_expr_single());
    return e;
  }

  ExprPtr parse_expr_single() {
    skip_ws();
    if (at_word("for")) return parse_for();
    if (at_word("let")) return parse_let();
    if (at_word("if")) return parse_if();
    if (at_word("typeswitch")) return parse_typeswitch();
    if (at_word("with")) return parse_fixpoint();
    return parse_set_expr();
  }

  ExprPtr parse_for() {
    expect_word("for");
    std::string var = parse_var_name();
    std::string pos_var;
    if (eat_word("at")) pos_var = parse_var_name();
    maybe_type_annotation();
    expect_word("in");
    ExprPtr range = parse_expr_single();
    expect_word("return");
    ExprPtr ret = parse_expr_single();
    return mk_for(std::move(var), std::move(pos_var), std::move(range), std::move(ret));
  }

  ExprPtr parse_let() {
    expect_word("let");
    std::string var = parse_var_name();
    maybe_type_annotation();
    expect_symbol(":=");
    ExprPtr value = parse_expr_single();
    expect_word("return");
    ExprPtr body = parse_expr_single();
    return mk_let(std::move(var), std::move(value), std::move(body));
  }

  ExprPtr parse_if() {
    expect_word("if");
    expect_symbol("(");
    ExprPtr cond = parse_expr();
    expect_symbol(")");
    expect_word("then");
    ExprPtr then_branch = parse_expr_single();
    expect_word("else");
    ExprPtr else_branch = parse_expr_single();
    return mk_if(std::move(cond), std::move(then_branch), std::move(else_branch));
  }

  SeqTypeName parse_sequence_type_name() {
    skip_ws();
    if (eat_word("node")) { expect_symbol("("); expect_symbol(")"); return SeqTypeName::Node; }
    if (eat_word("element")) { expect_symbol("("); expect_symbol(")"); return SeqTypeName::Element; }
    if (eat_word("attribute")) { expect_symbol("("); expect_symbol(")"); return SeqTypeName::Attribute; }
    if (eat_word("text")) { expect_symbol("("); expect_symbol(")"); return SeqTypeName::Text; }
    if (eat_word("empty-sequence")) { expect_symbol("("); expect_symbol(")"); return SeqTypeName::EmptySequence; }
    if (eat_symbol("xs:string")) return SeqTypeName::XsString;
    if (eat_symbol("xs:integer")) return SeqTypeName::XsInteger;
    if (eat_symbol("xs:boolean")) return SeqTypeName::XsBoolean;
    fail("a sequence type");
  }

  ExprPtr parse_typeswitch() {
    expect_word("typeswitch");
    expect_symbol("(");
    ExprPtr scrutinee = parse_expr();
    expect_symbol(")");
    std::vector<TypeswitchCase> cases;
    while (at_word("case")) {
      expect_word("case");
      SeqTypeName type = parse_sequence_type_name();
      expect_word("return");
      cases.push_back({type, parse_expr_single()});
    }
    if (cases.empty()) fail("at least one 'case'");
    expect_word("default");
    expect_word("return");
    ExprPtr default_case = parse_expr_single();
    return mk_typeswitch(std::move(scrutinee), std::move(cases), std::move(default_case));
  }

  ExprPtr parse_fixpoint() {
    expect_word("with");
    std::string var = parse_var_name();
    expect_word("seeded");
    expect_word("by");
    ExprPtr seed = parse_expr_single();
    expect_word("recurse");
    ExprPtr body = parse_expr_single();
    return mk_fixpoint(std::move(var), std::move(seed), std::move(body));
  }

  ExprPtr parse_set_expr() {
    ExprPtr e = parse_comparison_expr();
    for (;;) {
      if (eat_word("union") || eat_symbol("|")) {
        e = mk_node_set_op(SetOp::Union, e, parse_comparison_expr());
      } else if (eat_word("except")) {
        e = mk_node_set_op(SetOp::Except, e, parse_comparison_expr());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_comparison_expr() {
    ExprPtr lhs = parse_additive_expr();
    skip_ws();
    struct OpToken { const char* text; CompOp op; bool general; };
    // longest match first
    static const OpToken ops[] = {
        {"!=", CompOp::Ne, true}, {"<=", CompOp::Le, true}, {">=", CompOp::Ge, true},
        {"=", CompOp::Eq, true},  {"<", CompOp::Lt, true},  {">", CompOp::Gt, true},
    };
    for (const OpToken& op : ops) {
      if (at_symbol(op.text)) {
        pos_ += std::string_view(op.text).size();
        return mk_general_comparison(op.op, lhs, parse_additive_expr());
      }
    }
    static const OpToken value_ops[] = {
        {"eq", CompOp::Eq, false}, {"ne", CompOp::Ne, false}, {"lt", CompOp::Lt, false},
        {"le", CompOp::Le, false}, {"gt", CompOp::Gt, false}, {"ge", CompOp::Ge, false},
    };
    for (const OpToken& op : value_ops) {
      if (at_word(op.text)) {
        pos_ += 2;
        return mk_value_comparison(op.op, lhs, parse_additive_expr());
      }
    }
    return lhs;
  }

  ExprPtr parse_additive_expr() {
    ExprPtr e = parse_multiplicative_expr();
    for (;;) {
      skip_ws();
      if (at_symbol("+")) {
        ++pos_;
        e = mk_arith(ArithOp::Add, e, parse_multiplicative_expr());
      } else if (at_symbol("-") && !at_symbol("->")) {
        ++pos_;
        e = mk_arith(ArithOp::Sub, e, parse_multiplicative_expr());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_multiplicative_expr() {
    ExprPtr e = parse_path_expr();
    for (;;) {
      skip_ws();
      if (at_symbol("*")) {
        ++pos_;
        e = mk_arith(ArithOp::Mul, e, parse_path_expr());
      } else if (at_word("idiv")) {
        pos_ += 4;
        e = mk_arith(ArithOp::IDiv, e, parse_path_expr());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_path_expr() {
    ExprPtr e = parse_step_expr();
    for (;;) {
      skip_ws();
      if (at_symbol("//")) {
        pos_ += 2;
        e = mk_path_step(e, Axis::DescendantOrSelf, NodeTest::any_node());
        e = extend_path(e);
      } else if (at_symbol("/")) {
        ++pos_;
        e = extend_path(e);
      } else {
        return e;
      }
    }
  }

  // One step to the right of '/': an axis step chains into PathStep (with
  // per-context predicates), anything else becomes a general PathExpr whose
  // right side is re-evaluated per context node.
  ExprPtr extend_path(ExprPtr lhs) {
    skip_ws();
    if (auto step = try_parse_axis_step()) {
      auto [axis, test, predicates] = *step;
      if (predicates.empty()) return mk_path_step(lhs, axis, test);
      ExprPtr inner = mk_path_step(mk_context_item(), axis, test);
      for (const ExprPtr& p : predicates) inner = mk_predicate(inner, p);
      return mk_path_expr(lhs, inner);
    }
    ExprPtr rhs = parse_postfix_expr();
    return mk_path_expr(std::move(lhs), std::move(rhs));
  }

  struct AxisStep {
    Axis axis;
    NodeTest test;
    std::vector<ExprPtr> predicates;
  };

  // Attempts to read `axis::test`, `@name`, or a bare name test (plus
  // predicates) at the cursor; backtracks and returns nullopt otherwise.
  std::optional<AxisStep> try_parse_axis_step() {
    skip_ws();
    std::size_t saved = pos_;
    std::optional<Axis> axis;
    if (eat_symbol("@")) {
      axis = Axis::Attribute;
    } else if (is_name_start(peek())) {
      std::size_t name_start = pos_;
      std::string word = parse_name();
      if (at_symbol("::")) {
        pos_ += 2;
        axis = axis_from_name(word);
        if (!axis) fail("an axis name");
      } else {
        std::size_t after_name = pos_;
        skip_ws();
        bool call_like = at_symbol("(") && !at_symbol("(:");
        bool brace = at_symbol("{");
        pos_ = after_name;
        if (call_like) {
          // `name()` is a kind test on the child axis; any other `name(`
          // is a function call and not a step.
          if (is_kind_test_name(word)) {
            expect_symbol("(");
            expect_symbol(")");
            return finish_axis_step(Axis::Child, kind_test_for(word));
          }
          pos_ = saved;
          return std::nullopt;
        }
        // computed constructors: `text {...}`, `element name {...}`
        if (brace && (word == "text" || word == "element")) {
          pos_ = saved;
          return std::nullopt;
        }
        if (word == "element" && is_name_start(peek_after_ws())) {
          std::size_t probe = pos_;
          skip_ws();
          parse_name();
          skip_ws();
          bool computed = at_symbol("{");
          pos_ = probe;
          if (computed) {
            pos_ = saved;
            return std::nullopt;
          }
        }
        pos_ = name_start;
        if (is_keyword(word)) {  // keywords cannot start a bare name test
          pos_ = saved;
          return std::nullopt;
        }
        axis = Axis::Child;
      }
    } else {
      if (peek() == '*') {
        ++pos_;
        return finish_axis_step(Axis::Child, NodeTest::wildcard());
      }
      return std::nullopt;
    }
    // node test
    skip_ws();
    if (peek() == '*') {
      ++pos_;
      return finish_axis_step(*axis, NodeTest::wildcard());
    }
    if (!is_name_start(peek())) fail("a node test");
    std::string name = parse_name();
    if (eat_symbol("(")) {
      expect_symbol(")");
      if (name == "node") return finish_axis_step(*axis, NodeTest::any_node());
      if (name == "text") return finish_axis_step(*axis, NodeTest::kind(NodeKind::Text));
      if (name == "element") return finish_axis_step(*axis, NodeTest::kind(NodeKind::Element));
      if (name == "attribute") return finish_axis_step(*axis, NodeTest::kind(NodeKind::Attribute));
      if (name == "document-node")
        return finish_axis_step(*axis, NodeTest::kind(NodeKind::Document));
      fail("a kind test");
    }
    return finish_axis_step(*axis, NodeTest::name(std::move(name)));
  }

  AxisStep finish_axis_step(Axis axis, NodeTest test) {
    AxisStep step{axis, std::move(test), {}};
    while (eat_symbol("[")) {
      step.predicates.push_back(parse_expr());
      expect_symbol("]");
    }
    return step;
  }

  char peek_after_ws() {
    std::size_t saved = pos_;
    skip_ws();
    char c = peek();
    pos_ = saved;
    return c;
  }

  static bool is_kind_test_name(std::string_view name) {
    return name == "node" || name == "text" || name == "element" || name == "attribute" ||
           name == "document-node";
  }

  static NodeTest kind_test_for(std::string_view name) {
    if (name == "node") return NodeTest::any_node();
    if (name == "text") return NodeTest::kind(NodeKind::Text);
    if (name == "element") return NodeTest::kind(NodeKind::Element);
    if (name == "attribute") return NodeTest::kind(NodeKind::Attribute);
    return NodeTest::kind(NodeKind::Document);
  }

  static std::optional<Axis> axis_from_name(std::string_view name) {
    if (name == "child") return Axis::Child;
    if (name == "descendant") return Axis::Descendant;
    if (name == "descendant-or-self") return Axis::DescendantOrSelf;
    if (name == "parent") return Axis::Parent;
    if (name == "ancestor") return Axis::Ancestor;
    if (name == "self") return Axis::Self;
    if (name == "following-sibling") return Axis::FollowingSibling;
    if (name == "attribute") return Axis::Attribute;
    return std::nullopt;
  }

  ExprPtr parse_step_expr() {
    skip_ws();
    if (auto step = try_parse_axis_step()) {
      // A leading bare step navigates from the context item.
      ExprPtr e = mk_path_step(mk_context_item(), step->axis, step->test);
      for (const ExprPtr& p : step->predicates) e = mk_predicate(e, p);
      return e;
    }
    return parse_postfix_expr();
  }

  ExprPtr parse_postfix_expr() {
    ExprPtr e = parse_primary_expr();
    while (eat_symbol("[")) {
      ExprPtr pred = parse_expr();
      expect_symbol("]");
      e = mk_predicate(e, pred);
    }
    return e;
  }

  ExprPtr parse_primary_expr() {
    skip_ws();
    if (eof()) fail("an expression");
    char c = peek();
    if (c == '"' || c == '\'') return mk_string(parse_string_literal());
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_integer_literal();
    if (c == '$') return mk_var(parse_var_name());
    if (c == '.') {
      ++pos_;
      return mk_context_item();
    }
    if (c == '(') {
      ++pos_;
      skip_ws();
      if (eat_symbol(")")) return mk_empty();
      ExprPtr e = parse_expr();
      expect_symbol(")");
      return e;
    }
    if (c == '<') return parse_direct_constructor();
    if (at_word("text") ) {
      std::size_t saved = pos_;
      pos_ += 4;
      if (eat_symbol("{")) {
        skip_ws();
        ExprPtr content = at_symbol("}") ? mk_empty() : parse_expr();
        expect_symbol("}");
        return mk_text_constructor(content);
      }
      pos_ = saved;
    }
    if (at_word("element")) {
      std::size_t saved = pos_;
      pos_ += 7;
      skip_ws();
      if (is_name_start(peek())) {
        std::string name = parse_name();
        if (eat_symbol("{")) {
          skip_ws();
          std::vector<ExprPtr> content;
          if (!at_symbol("}")) content.push_back(parse_expr());
          expect_symbol("}");
          return mk_elem_constructor(std::move(name), {}, std::move(content));
        }
      }
      pos_ = saved;
    }
    if (is_name_start(c)) {
      std::size_t saved = pos_;
      std::string name = parse_name();
      skip_ws();
      if (at_symbol("(") && !at_symbol("(:")) {
        ++pos_;
        std::vector<ExprPtr> args;
        skip_ws();
        if (!at_symbol(")")) {
          for (;;) {
            args.push_back(parse_expr_single());
            if (!eat_symbol(",")) break;
          }
        }
        expect_symbol(")");
        if (name == "closure") {
          if (args.size() != 1) fail("closure(expr) with one argument");
          return mk_closure(args[0]);
        }
        if (is_builtin_name(name)) return mk_builtin_call(std::move(name), std::move(args));
        if (is_keyword(name)) fail("an expression (keyword '" + name + "' is reserved)");
        return mk_fun_call(std::move(name), std::move(args));
      }
      pos_ = saved;
      fail("an expression");
    }
    fail("an expression");
  }

  ExprPtr parse_integer_literal() {
    std::size_t start = pos_;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    return mk_int(std::stoll(std::string(text_.substr(start, pos_ - start))));
  }

  // ---- direct element constructors ---------------------------------------

  ExprPtr parse_direct_constructor() {
    ++pos_;  // '<'
    if (!is_name_start(peek())) fail("an element name after '<'");
    std::string name = parse_name();
    std::vector<std::pair<std::string, std::string>> attrs;
    for (;;) {
      skip_raw_ws();
      if (eof()) fail("'>' or '/>'");
      if (peek() == '/' || peek() == '>') break;
      std::string attr_name = parse_name();
      skip_raw_ws();
      expect_raw('=');
      skip_raw_ws();
      attrs.emplace_back(std::move(attr_name), parse_xml_attr_value());
    }
    if (peek() == '/') {
      ++pos_;
      expect_raw('>');
      return mk_elem_constructor(std::move(name), std::move(attrs), {});
    }
    ++pos_;  // '>'
    std::vector<ExprPtr> content = parse_constructor_content(name);
    return mk_elem_constructor(std::move(name), std::move(attrs), std::move(content));
  }

  void skip_raw_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  void expect_raw(char c) {
    if (peek() != c) fail(std::string("'") + c + "'");
    ++pos_;
  }

  std::string parse_xml_attr_value() {
    char quote = peek();
    if (quote != '"' && quote != '\'') fail("a quoted attribute value");
    ++pos_;
    std::string value;
    while (!eof() && peek() != quote) {
      if (peek() == '&') {
        value += decode_xml_entity();
      } else {
        value.push_back(peek());
        ++pos_;
      }
    }
    if (eof()) fail("closing attribute quote");
    ++pos_;
    return value;
  }

  std::string decode_xml_entity() {
    std::size_t semi = text_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 6) fail("an entity reference");
    std::string_view name = text_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (name == "amp") return "&";
    if (name == "lt") return "<";
    if (name == "gt") return ">";
    if (name == "quot") return "\"";
    if (name == "apos") return "'";
    fail("a predefined entity");
  }

  // Direct content: nested elements, text runs (boundary whitespace-only
  // runs are dropped), and enclosed expressions in braces.
  std::vector<ExprPtr> parse_constructor_content(const std::string& name) {
    std::vector<ExprPtr> content;
    std::string text;
    auto flush_text = [&](bool keep_ws_only) {
      bool ws_only = text.find_first_not_of(" \t\r\n") == std::string::npos;
      if (!text.empty() && (keep_ws_only || !ws_only)) content.push_back(mk_string(text));
      text.clear();
    };
    for (;;) {
      if (eof()) fail("'</" + name + ">'");
      char c = peek();
      if (c == '<') {
        if (peek(1) == '/') {
          flush_text(false);
          pos_ += 2;
          std::string closing = parse_name();
          if (closing != name) fail("'</" + name + ">'");
          skip_raw_ws();
          expect_raw('>');
          return content;
        }
        flush_text(false);
        content.push_back(parse_direct_constructor());
      } else if (c == '{') {
        flush_text(false);
        ++pos_;
        content.push_back(parse_expr());
        expect_symbol("}");
      } else if (c == '&') {
        text += decode_xml_entity();
      } else {
        text.push_back(c);
        ++pos_;
      }
    }
  }

  // ---- post-parse resolution ----------------------------------------------

  void resolve_calls(const Program& program) {
    for (const Function& f : program.functions) {
      std::size_t count = 0;
      for (const Function& g : program.functions) {
        if (g.name == f.name && g.params.size() == f.params.size()) ++count;
      }
      if (count > 1) fail("unique function name " + f.name);
      check_calls(f.body, program);
    }
    check_calls(program.main, program);
  }

  void check_calls(const ExprPtr& e, const Program& program) {
    if (e->kind == ExprKind::FunCall && !program.find_function(e->name, e->children.size()))
      fail("a declared function for call " + e->name + "/" + std::to_string(e->children.size()));
    for (const ExprPtr& c : e->children) check_calls(c, program);
    if (e->kind == ExprKind::Typeswitch) {
      for (const TypeswitchCase& c : e->cases) check_calls(c.body, program);
      check_calls(e->default_case, program);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse_query(std::string_view text) { return Parser(text).parse_program(); }

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse_single(); }

}  // namespace fixq
