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

#include "fixq/ast.hpp"

#include <algorithm>
#include <array>
#include <atomic>

#include "fixq/errors.hpp"

namespace fixq {

const char* to_string(SeqTypeName t) {
  switch (t) {
    case SeqTypeName::Node: return "node()";
    case SeqTypeName::Element: return "element()";
    case SeqTypeName::Attribute: return "attribute()";
    case SeqTypeName::Text: return "text()";
    case SeqTypeName::XsString: return "xs:string";
    case SeqTypeName::XsInteger: return "xs:integer";
    case SeqTypeName::XsBoolean: return "xs:boolean";
    case SeqTypeName::EmptySequence: return "empty-sequence()";
  }
  return "?";
}

const Function* Program::find_function(const std::string& name, std::size_t arity) const {
  for (const Function& f : functions) {
    if (f.name == name && f.params.size() == arity) return &f;
  }
  return nullptr;
}

bool is_builtin_name(const std::string& name) {
  static const std::array<const char*, 9> names = {
      "count", "empty", "data", "id", "doc", "position", "last", "root", "deep-equal"};
  return std::find(names.begin(), names.end(), name) != names.end();
}

namespace {

std::shared_ptr<Expr> base(ExprKind kind) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  return e;
}

void merge_fv(Expr& e) {
  for (const ExprPtr& c : e.children) {
    e.free_vars.insert(c->free_vars.begin(), c->free_vars.end());
  }
}

}  // namespace

ExprPtr mk_string(std::string value) {
  auto e = base(ExprKind::StringLit);
  e->str_value = std::move(value);
  return e;
}

ExprPtr mk_int(std::int64_t value) {
  auto e = base(ExprKind::IntLit);
  e->int_value = value;
  return e;
}

ExprPtr mk_empty() { return base(ExprKind::EmptySeq); }

ExprPtr mk_context_item() { return base(ExprKind::ContextItem); }

ExprPtr mk_var(std::string name) {
  auto e = base(ExprKind::VarRef);
  e->name = std::move(name);
  e->free_vars.insert(e->name);
  return e;
}

namespace {

ExprPtr binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs) {
  auto e = base(kind);
  e->children = {std::move(lhs), std::move(rhs)};
  merge_fv(*e);
  return e;
}

}  // namespace

ExprPtr mk_seq_concat(ExprPtr lhs, ExprPtr rhs) {
  return binary(ExprKind::SeqConcat, std::move(lhs), std::move(rhs));
}

ExprPtr mk_node_set_op(SetOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = base(ExprKind::NodeSetOp);
  e->set_op = op;
  e->children = {std::move(lhs), std::move(rhs)};
  merge_fv(*e);
  return e;
}

ExprPtr mk_path_step(ExprPtr input, Axis axis, NodeTest test) {
  auto e = base(ExprKind::PathStep);
  e->axis = axis;
  e->test = std::move(test);
  e->children = {std::move(input)};
  merge_fv(*e);
  return e;
}

ExprPtr mk_path_expr(ExprPtr lhs, ExprPtr rhs) {
  return binary(ExprKind::PathExpr, std::move(lhs), std::move(rhs));
}

ExprPtr mk_predicate(ExprPtr input, ExprPtr pred) {
  return binary(ExprKind::Predicate, std::move(input), std::move(pred));
}

ExprPtr mk_for(std::string var, std::string pos_var, ExprPtr range, ExprPtr ret) {
  auto e = base(ExprKind::For);
  e->name = std::move(var);
  e->pos_var = std::move(pos_var);
  e->children = {std::move(range), std::move(ret)};
  e->free_vars = e->children[0]->free_vars;
  std::set<std::string> body_fv = e->children[1]->free_vars;
  body_fv.erase(e->name);
  if (!e->pos_var.empty()) body_fv.erase(e->pos_var);
  e->free_vars.insert(body_fv.begin(), body_fv.end());
  return e;
}

ExprPtr mk_let(std::string var, ExprPtr value, ExprPtr body) {
  auto e = base(ExprKind::Let);
  e->name = std::move(var);
  e->children = {std::move(value), std::move(body)};
  e->free_vars = e->children[0]->free_vars;
  std::set<std::string> body_fv = e->children[1]->free_vars;
  body_fv.erase(e->name);
  e->free_vars.insert(body_fv.begin(), body_fv.end());
  return e;
}

ExprPtr mk_if(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch) {
  auto e = base(ExprKind::If);
  e->children = {std::move(cond), std::move(then_branch), std::move(else_branch)};
  merge_fv(*e);
  return e;
}

ExprPtr mk_typeswitch(ExprPtr scrutinee, std::vector<TypeswitchCase> cases, ExprPtr default_case) {
  auto e = base(ExprKind::Typeswitch);
  e->children = {std::move(scrutinee)};
  e->cases = std::move(cases);
  e->default_case = std::move(default_case);
  merge_fv(*e);
  for (const TypeswitchCase& c : e->cases)
    e->free_vars.insert(c.body->free_vars.begin(), c.body->free_vars.end());
  e->free_vars.insert(e->default_case->free_vars.begin(), e->default_case->free_vars.end());
  return e;
}

ExprPtr mk_general_comparison(CompOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = binary(ExprKind::GeneralComparison, std::move(lhs), std::move(rhs));
  const_cast<Expr&>(*e).comp_op = op;
  return e;
}

ExprPtr mk_value_comparison(CompOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = binary(ExprKind::ValueComparison, std::move(lhs), std::move(rhs));
  const_cast<Expr&>(*e).comp_op = op;
  return e;
}

ExprPtr mk_arith(ArithOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = binary(ExprKind::Arith, std::move(lhs), std::move(rhs));
  const_cast<Expr&>(*e).arith_op = op;
  return e;
}

ExprPtr mk_fun_call(std::string name, std::vector<ExprPtr> args) {
  auto e = base(ExprKind::FunCall);
  e->name = std::move(name);
  e->children = std::move(args);
  merge_fv(*e);
  return e;
}

ExprPtr mk_builtin_call(std::string name, std::vector<ExprPtr> args) {
  auto e = base(ExprKind::BuiltinCall);
  e->name = std::move(name);
  e->children = std::move(args);
  merge_fv(*e);
  return e;
}

ExprPtr mk_elem_constructor(std::string name,
                            std::vector<std::pair<std::string, std::string>> attrs,
                            std::vector<ExprPtr> content) {
  auto e = base(ExprKind::ElemConstructor);
  e->name = std::move(name);
  e->attrs = std::move(attrs);
  e->children = std::move(content);
  merge_fv(*e);
  return e;
}

ExprPtr mk_text_constructor(ExprPtr content) {
  auto e = base(ExprKind::TextConstructor);
  e->children = {std::move(content)};
  merge_fv(*e);
  return e;
}

ExprPtr mk_fixpoint(std::string var, ExprPtr seed, ExprPtr body) {
  auto e = base(ExprKind::Fixpoint);
  e->name = std::move(var);
  e->children = {std::move(seed), std::move(body)};
  e->free_vars = e->children[0]->free_vars;
  std::set<std::string> body_fv = e->children[1]->free_vars;
  body_fv.erase(e->name);
  e->free_vars.insert(body_fv.begin(), body_fv.end());
  return e;
}

ExprPtr mk_closure(ExprPtr step) {
  auto e = base(ExprKind::Closure);
  e->children = {std::move(step)};
  merge_fv(*e);
  return e;
}

const std::set<std::string>& free_vars(const ExprPtr& e) { return e->free_vars; }

namespace {

std::atomic<std::uint64_t> fresh_counter{0};

std::string fresh_var(const char* stem) {
  return std::string(stem) + "__" + std::to_string(fresh_counter.fetch_add(1) + 1);
}

// Rebuilds a node with new children, preserving all other payload.
ExprPtr rebuild(const ExprPtr& e, std::vector<ExprPtr> children,
                std::vector<TypeswitchCase> cases = {}, ExprPtr default_case = nullptr) {
  switch (e->kind) {
    case ExprKind::StringLit:
    case ExprKind::IntLit:
    case ExprKind::EmptySeq:
    case ExprKind::ContextItem:
    case ExprKind::VarRef:
      return e;
    case ExprKind::SeqConcat:
      return mk_seq_concat(children[0], children[1]);
    case ExprKind::NodeSetOp:
      return mk_node_set_op(e->set_op, children[0], children[1]);
    case ExprKind::PathStep:
      return mk_path_step(children[0], e->axis, e->test);
    case ExprKind::PathExpr:
      return mk_path_expr(children[0], children[1]);
    case ExprKind::Predicate:
      return mk_predicate(children[0], children[1]);
    case ExprKind::For:
      return mk_for(e->name, e->pos_var, children[0], children[1]);
    case ExprKind::Let:
      return mk_let(e->name, children[0], children[1]);
    case ExprKind::If:
      return mk_if(children[0], children[1], children[2]);
    case ExprKind::Typeswitch:
      return mk_typeswitch(children[0], std::move(cases), std::move(default_case));
    case ExprKind::GeneralComparison:
      return mk_general_comparison(e->comp_op, children[0], children[1]);
    case ExprKind::ValueComparison:
      return mk_value_comparison(e->comp_op, children[0], children[1]);
    case ExprKind::Arith:
      return mk_arith(e->arith_op, children[0], children[1]);
    case ExprKind::FunCall:
      return mk_fun_call(e->name, std::move(children));
    case ExprKind::BuiltinCall:
      return mk_builtin_call(e->name, std::move(children));
    case ExprKind::ElemConstructor:
      return mk_elem_constructor(e->name, e->attrs, std::move(children));
    case ExprKind::TextConstructor:
      return mk_text_constructor(children[0]);
    case ExprKind::Fixpoint:
      return mk_fixpoint(e->name, children[0], children[1]);
    case ExprKind::Closure:
      return mk_closure(children[0]);
  }
  throw_error(ErrorKind::Unsupported, "rebuild: unknown expression kind");
}

template <typename Transform>
ExprPtr map_children(const ExprPtr& e, Transform&& transform) {
  std::vector<ExprPtr> children;
  children.reserve(e->children.size());
  bool changed = false;
  for (const ExprPtr& c : e->children) {
    ExprPtr t = transform(c);
    changed |= (t != c);
    children.push_back(std::move(t));
  }
  std::vector<TypeswitchCase> cases;
  ExprPtr default_case = e->default_case;
  if (e->kind == ExprKind::Typeswitch) {
    for (const TypeswitchCase& c : e->cases) {
      ExprPtr t = transform(c.body);
      changed |= (t != c.body);
      cases.push_back({c.type, std::move(t)});
    }
    default_case = transform(e->default_case);
    changed |= (default_case != e->default_case);
  }
  if (!changed) return e;
  return rebuild(e, std::move(children), std::move(cases), std::move(default_case));
}

}  // namespace

ExprPtr desugar(const ExprPtr& e) {
  ExprPtr mapped = map_children(e, [](const ExprPtr& c) { return desugar(c); });
  if (mapped->kind != ExprKind::Closure) return mapped;
  std::string var = fresh_var("closure");
  return mk_fixpoint(var, mk_context_item(),
                     mk_path_expr(mk_var(var), mapped->children[0]));
}

Program desugar(const Program& p) {
  Program out;
  for (const Function& f : p.functions) out.functions.push_back({f.name, f.params, desugar(f.body)});
  out.main = desugar(p.main);
  return out;
}

ExprPtr substitute_var(const ExprPtr& e, const std::string& var, const ExprPtr& replacement) {
  if (!e->free_vars.contains(var)) return e;
  if (e->kind == ExprKind::VarRef) return e->name == var ? replacement : e;
  // Binders shadow: stop below a binder that rebinds `var`.
  auto shadows = [&](const std::string& bound) { return bound == var; };
  switch (e->kind) {
    case ExprKind::For: {
      ExprPtr range = substitute_var(e->children[0], var, replacement);
      ExprPtr ret = (shadows(e->name) || (!e->pos_var.empty() && shadows(e->pos_var)))
                        ? e->children[1]
                        : substitute_var(e->children[1], var, replacement);
      return mk_for(e->name, e->pos_var, range, ret);
    }
    case ExprKind::Let: {
      ExprPtr value = substitute_var(e->children[0], var, replacement);
      ExprPtr body =
          shadows(e->name) ? e->children[1] : substitute_var(e->children[1], var, replacement);
      return mk_let(e->name, value, body);
    }
    case ExprKind::Fixpoint: {
      ExprPtr seed = substitute_var(e->children[0], var, replacement);
      ExprPtr body =
          shadows(e->name) ? e->children[1] : substitute_var(e->children[1], var, replacement);
      return mk_fixpoint(e->name, seed, body);
    }
    default:
      return map_children(e, [&](const ExprPtr& c) { return substitute_var(c, var, replacement); });
  }
}

bool contains_constructor(const ExprPtr& e) {
  if (e->kind == ExprKind::ElemConstructor || e->kind == ExprKind::TextConstructor) return true;
  for (const ExprPtr& c : e->children) {
    if (contains_constructor(c)) return true;
  }
  if (e->kind == ExprKind::Typeswitch) {
    for (const TypeswitchCase& c : e->cases) {
      if (contains_constructor(c.body)) return true;
    }
    if (contains_constructor(e->default_case)) return true;
  }
  return false;
}

namespace {

const char* comp_op_text(CompOp op, bool general) {
  switch (op) {
    case CompOp::Eq: return general ? "=" : "eq";
    case CompOp::Ne: return general ? "!=" : "ne";
    case CompOp::Lt: return general ? "<" : "lt";
    case CompOp::Le: return general ? "<=" : "le";
    case CompOp::Gt: return general ? ">" : "gt";
    case CompOp::Ge: return general ? ">=" : "ge";
  }
  return "?";
}

const char* arith_op_text(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::IDiv: return "idiv";
  }
  return "?";
}

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

void print(const ExprPtr& e, std::string& out);

void print_paren(const ExprPtr& e, std::string& out) {
  out += "(";
  print(e, out);
  out += ")";
}

void print(const ExprPtr& e, std::string& out) {
  switch (e->kind) {
    case ExprKind::StringLit:
      out += quote_string(e->str_value);
      return;
    case ExprKind::IntLit:
      out += std::to_string(e->int_value);
      return;
    case ExprKind::EmptySeq:
      out += "()";
      return;
    case ExprKind::ContextItem:
      out += ".";
      return;
    case ExprKind::VarRef:
      out += "$" + e->name;
      return;
    case ExprKind::SeqConcat:
      out += "(";
      print(e->children[0], out);
      out += ", ";
      print(e->children[1], out);
      out += ")";
      return;
    case ExprKind::NodeSetOp:
      print_paren(e->children[0], out);
      out += e->set_op == SetOp::Union ? " union " : " except ";
      print_paren(e->children[1], out);
      return;
    case ExprKind::PathStep:
      if (e->children[0]->kind != ExprKind::ContextItem) {
        print_paren(e->children[0], out);
        out += "/";
      }
      out += std::string(to_string(e->axis)) + "::" + to_string(e->test);
      return;
    case ExprKind::PathExpr:
      print_paren(e->children[0], out);
      out += "/";
      print_paren(e->children[1], out);
      return;
    case ExprKind::Predicate:
      print_paren(e->children[0], out);
      out += "[";
      print(e->children[1], out);
      out += "]";
      return;
    case ExprKind::For:
      out += "for $" + e->name;
      if (!e->pos_var.empty()) out += " at $" + e->pos_var;
      out += " in ";
      print_paren(e->children[0], out);
      out += " return ";
      print_paren(e->children[1], out);
      return;
    case ExprKind::Let:
      out += "let $" + e->name + " := ";
      print_paren(e->children[0], out);
      out += " return ";
      print_paren(e->children[1], out);
      return;
    case ExprKind::If:
      out += "if (";
      print(e->children[0], out);
      out += ") then ";
      print_paren(e->children[1], out);
      out += " else ";
      print_paren(e->children[2], out);
      return;
    case ExprKind::Typeswitch:
      out += "typeswitch (";
      print(e->children[0], out);
      out += ")";
      for (const TypeswitchCase& c : e->cases) {
        out += " case " + std::string(to_string(c.type)) + " return ";
        print_paren(c.body, out);
      }
      out += " default return ";
      print_paren(e->default_case, out);
      return;
    case ExprKind::GeneralComparison:
    case ExprKind::ValueComparison:
      print_paren(e->children[0], out);
      out += std::string(" ") + comp_op_text(e->comp_op, e->kind == ExprKind::GeneralComparison) +
             " ";
      print_paren(e->children[1], out);
      return;
    case ExprKind::Arith:
      print_paren(e->children[0], out);
      out += std::string(" ") + arith_op_text(e->arith_op) + " ";
      print_paren(e->children[1], out);
      return;
    case ExprKind::FunCall:
    case ExprKind::BuiltinCall: {
      out += e->name + "(";
      bool first = true;
      for (const ExprPtr& arg : e->children) {
        if (!first) out += ", ";
        first = false;
        print(arg, out);
      }
      out += ")";
      return;
    }
    case ExprKind::ElemConstructor: {
      out += "<" + e->name;
      for (const auto& [name, value] : e->attrs) {
        out += " " + name + "=\"" + escape_attribute(value) + "\"";
      }
      if (e->children.empty()) {
        out += "/>";
        return;
      }
      out += ">";
      for (const ExprPtr& c : e->children) {
        if (c->kind == ExprKind::ElemConstructor) {
          print(c, out);
        } else if (c->kind == ExprKind::StringLit) {
          out += escape_text(c->str_value);
        } else {
          out += "{";
          print(c, out);
          out += "}";
        }
      }
      out += "</" + e->name + ">";
      return;
    }
    case ExprKind::TextConstructor:
      out += "text {";
      print(e->children[0], out);
      out += "}";
      return;
    case ExprKind::Fixpoint:
      out += "with $" + e->name + " seeded by ";
      print_paren(e->children[0], out);
      out += " recurse ";
      print_paren(e->children[1], out);
      return;
    case ExprKind::Closure:
      out += "closure(";
      print(e->children[0], out);
      out += ")";
      return;
  }
}

}  // namespace

std::string to_query_string(const ExprPtr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::string to_query_string(const Program& p) {
  std::string out;
  for (const Function& f : p.functions) {
    out += "declare function " + f.name + "(";
    bool first = true;
    for (const std::string& param : f.params) {
      if (!first) out += ", ";
      first = false;
      out += "$" + param;
    }
    out += ") { " + to_query_string(f.body) + " };\n";
  }
  out += to_query_string(p.main);
  return out;
}

}  // namespace fixq
