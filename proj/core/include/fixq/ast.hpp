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
// Expression tree for the query language. Nodes are immutable after
// construction and shared freely; free-variable sets are computed bottom-up
// when a node is built. "." and position()/last() are focus, not variables.

#ifndef FIXQ_AST_HPP
#define FIXQ_AST_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "fixq/xdm.hpp"

namespace fixq {

enum class ExprKind {
  StringLit,
  IntLit,
  EmptySeq,
  ContextItem,
  VarRef,
  SeqConcat,
  NodeSetOp,
  PathStep,
  PathExpr,
  Predicate,
  For,
  Let,
  If,
  Typeswitch,
  GeneralComparison,
  ValueComparison,
  Arith,
  FunCall,
  ElemConstructor,
  TextConstructor,
  BuiltinCall,
  Fixpoint,
  Closure,
};

enum class SetOp { Union, Except };
enum class CompOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class ArithOp { Add, Sub, Mul, IDiv };

enum class SeqTypeName {
  Node,
  Element,
  Attribute,
  Text,
  XsString,
  XsInteger,
  XsBoolean,
  EmptySequence,
};

const char* to_string(SeqTypeName t);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct TypeswitchCase {
  SeqTypeName type;
  ExprPtr body;
};

/// Child roles by kind:
///   SeqConcat/NodeSetOp/comparisons/Arith: [lhs, rhs]
///   PathStep: [input]            PathExpr/Predicate: [lhs, rhs]
///   For: [range, return]         Let: [value, body]
///   If: [cond, then, else]       Typeswitch: [scrutinee] + cases/default
///   FunCall/BuiltinCall: args    ElemConstructor: content items
///   TextConstructor: [content]   Fixpoint: [seed, body]    Closure: [step]
struct Expr {
  ExprKind kind;
  std::string name;     // VarRef/FunCall/BuiltinCall name, binder var, element name
  std::string pos_var;  // For: optional positional variable
  std::string str_value;
  std::int64_t int_value = 0;
  Axis axis = Axis::Child;
  NodeTest test;
  SetOp set_op = SetOp::Union;
  CompOp comp_op = CompOp::Eq;
  ArithOp arith_op = ArithOp::Add;
  std::vector<ExprPtr> children;
  std::vector<TypeswitchCase> cases;
  ExprPtr default_case;
  std::vector<std::pair<std::string, std::string>> attrs;  // literal constructor attributes
  std::set<std::string> free_vars;
};

struct Function {
  std::string name;
  std::vector<std::string> params;
  ExprPtr body;
};

struct Program {
  std::vector<Function> functions;
  ExprPtr main;

  const Function* find_function(const std::string& name, std::size_t arity) const;
};

bool is_builtin_name(const std::string& name);

// Node factories; free_vars is computed here.
ExprPtr mk_string(std::string value);
ExprPtr mk_int(std::int64_t value);
ExprPtr mk_empty();
ExprPtr mk_context_item();
ExprPtr mk_var(std::string name);
ExprPtr mk_seq_concat(ExprPtr lhs, ExprPtr rhs);
ExprPtr mk_node_set_op(SetOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr mk_path_step(ExprPtr input, Axis axis, NodeTest test);
ExprPtr mk_path_expr(ExprPtr lhs, ExprPtr rhs);
ExprPtr mk_predicate(ExprPtr input, ExprPtr pred);
ExprPtr mk_for(std::string var, std::string pos_var, ExprPtr range, ExprPtr ret);
ExprPtr mk_let(std::string var, ExprPtr value, ExprPtr body);
ExprPtr mk_if(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch);
ExprPtr mk_typeswitch(ExprPtr scrutinee, std::vector<TypeswitchCase> cases, ExprPtr default_case);
ExprPtr mk_general_comparison(CompOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr mk_value_comparison(CompOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr mk_arith(ArithOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr mk_fun_call(std::string name, std::vector<ExprPtr> args);
ExprPtr mk_builtin_call(std::string name, std::vector<ExprPtr> args);
ExprPtr mk_elem_constructor(std::string name,
                            std::vector<std::pair<std::string, std::string>> attrs,
                            std::vector<ExprPtr> content);
ExprPtr mk_text_constructor(ExprPtr content);
ExprPtr mk_fixpoint(std::string var, ExprPtr seed, ExprPtr body);
ExprPtr mk_closure(ExprPtr step);

/// Free variables under standard binding rules: For/Let/Fixpoint bind their
/// variables in the return/body subexpressions only.
const std::set<std::string>& free_vars(const ExprPtr& e);

/// Replaces Closure(s) with `with $fresh seeded by . recurse $fresh/s`
/// everywhere; all other nodes are rebuilt unchanged. Idempotent.
ExprPtr desugar(const ExprPtr& e);
Program desugar(const Program& p);

/// Consistent replacement of free occurrences of `var` by `replacement`.
ExprPtr substitute_var(const ExprPtr& e, const std::string& var, const ExprPtr& replacement);

/// Renders an expression back to parseable query text.
std::string to_query_string(const ExprPtr& e);
std::string to_query_string(const Program& p);

bool contains_constructor(const ExprPtr& e);

}  // namespace fixq

#endif  // FIXQ_AST_HPP
