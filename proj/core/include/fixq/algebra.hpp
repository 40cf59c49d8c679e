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
// Relational side of the engine: a plan dialect over flat iter|pos|item
// tables, a simplified loop-lifting compiler for the query subset, a bag
// interpreter including the fixpoint operators, and the union push-up
// distributivity analyzer.
//
// Sequences encode as tables with schema iter|pos|item: one row per item,
// iter distinguishing iterations of the enclosing for-loop, pos carrying
// sequence order where an operator needs it. Every operator is classified
// for the push-up check: unary operators pass a union marker through,
// binary operators pass it around one input, and operators that must see
// their whole input (duplicate elimination, difference, aggregation, row
// numbering, node construction) block it.

#ifndef FIXQ_ALGEBRA_HPP
#define FIXQ_ALGEBRA_HPP

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "fixq/ast.hpp"
#include "fixq/eval.hpp"
#include "fixq/xdm.hpp"

namespace fixq {

using Cell = std::variant<std::monostate, NodeId, std::int64_t, double, bool, std::string>;

std::string cell_to_string(const Cell& cell);
Item cell_to_item(const Cell& cell);
Cell item_to_cell(const Item& item);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t col(const std::string& name) const;  // throws SchemaMismatch
  bool has_col(const std::string& name) const;
};

enum class PlanOp {
  Project,
  Select,
  Join,
  Cross,
  Distinct,
  Union,
  DifferenceAll,
  CountAgg,
  MapOp,
  RowTag,
  RowNum,
  StepJoin,
  DocLookup,
  IdLookup,
  NodeConstructor,
  LiteralTable,
  RecInput,
  RecOutput,
  Mu,
  MuDelta,
};

const char* to_string(PlanOp op);

/// Push-up classification: does a union below this operator commute with it?
enum class PushClass {
  Unary,     // passes the marker through
  Binary,    // passes it around one input
  Blocking,  // consumes its whole input
  Leaf,
};

PushClass push_class(PlanOp op);

struct MapSpec {
  enum class Fn { Compare, Arith, StringValue, Const };
  Fn fn = Fn::Const;
  CompOp comp = CompOp::Eq;
  ArithOp arith = ArithOp::Add;
  Cell const_value;
  std::vector<std::string> inputs;
  std::string out;
};

struct PlanNode;
using PlanNodePtr = std::shared_ptr<PlanNode>;

struct PlanNode {
  std::size_t id = 0;
  PlanOp op = PlanOp::LiteralTable;
  std::vector<PlanNodePtr> children;

  std::vector<std::pair<std::string, std::string>> renamings;  // Project: (out, in)
  std::string column;       // Select / RowTag out / CountAgg out / RowNum out
  std::string group_by;     // CountAgg
  std::vector<std::pair<std::string, std::string>> join_on;  // Join: (left, right)
  MapSpec map;              // MapOp
  std::vector<std::string> order_cols;  // RowNum
  std::string partition;                // RowNum
  Axis axis = Axis::Child;  // StepJoin
  NodeTest test;            // StepJoin
  std::string uri;          // DocLookup / IdLookup ("" = the single registered document)
  NodeKind ctor_kind = NodeKind::Element;  // NodeConstructor
  std::vector<std::string> schema;         // LiteralTable / RecInput
  std::vector<std::vector<Cell>> rows;     // LiteralTable
  // Distinct/RowNum emitted purely for distinct-doc-order or sequence-order
  // semantics; the distributivity check may discard them.
  bool order_bookkeeping = false;
  // The iteration frame's loop relation: one row per live iteration, tag
  // column only. It carries no item data, so the push-up check treats it as
  // unmarked; see docs/algebra.md.
  bool loop_relation = false;
  // Mu / MuDelta
  PlanNodePtr body_input;   // RecInput leaf of the recursion body
  PlanNodePtr body_output;  // RecOutput root of the recursion body
};

/// Closed plan fragment with single entry and exit; "step" and "loop" ship
/// pre-certified (see docs/algebra.md for the proof sketches). The loop
/// frame's back join is the one place where both join inputs may carry the
/// union marker: the row tag keys the two sides to disjoint tag spaces.
struct TemplateInstance {
  std::string name;  // "step" | "loop"
  PlanNodePtr entry;
  PlanNodePtr exit;
  PlanNodePtr back_join;  // loop only
  bool certified_distributive = true;
};

struct RecursionBody {
  PlanNodePtr input;   // RecInput
  PlanNodePtr output;  // RecOutput
};

struct CompiledBody {
  RecursionBody body;
  std::vector<TemplateInstance> templates;
};

struct Plan {
  PlanNodePtr root;
  std::vector<TemplateInstance> templates;
};

struct CompileEnv {
  NodeStore* store = nullptr;
  DocRegistry* docs = nullptr;
  const Program* program = nullptr;
  std::string id_attribute = "id";
};

/// Compiles a whole query (functions are outside the compiled subset).
/// Raises Unsupported when the subset is exceeded; the engine then runs
/// interpreter-only with syntactic analysis.
Plan compile_query(const Program& program, CompileEnv& env);

/// Compiles a fixpoint body against the current environment: the recursion
/// variable becomes the RecInput leaf, other free variables materialize as
/// literal tables from their current bindings.
CompiledBody compile_fixpoint_body(const std::string& var, const ExprPtr& body, Env& env);

struct PlanEvalContext {
  NodeStore* store = nullptr;
  DocRegistry* docs = nullptr;
  std::string id_attribute = "id";
  std::size_t max_fixpoint_iterations = 10000;
};

using PlanBindings = std::map<const PlanNode*, Table>;

/// Bag-semantics interpretation. RecInput leaves resolve through `bindings`.
Table eval_plan(const PlanNodePtr& root, const PlanBindings& bindings, PlanEvalContext& ctx);

struct PushOutcome {
  bool distributive = false;
  std::string blocker;  // blocking operator (or non-linear join) when !distributive
  std::size_t big_steps = 0;
  std::vector<std::string> trace;
};

/// Propagates a union marker from RecInput towards RecOutput: unary
/// operators pass it, binary operators pass it around one side (certified
/// template back joins may carry it on both), blocking operators stop the
/// procedure. Succeeds iff the marker reaches RecOutput.
PushOutcome push_up_check(const CompiledBody& body);

/// Drops Distinct and RowNum operators that only implement ddo/order
/// semantics (flagged at compile time); returns a rewired copy, original
/// untouched. Never removes user-visible aggregation.
CompiledBody simplify_for_check(const CompiledBody& body);

/// Textual DAG form, one node per line: id, op, params, child ids.
std::string plan_to_text(const PlanNodePtr& root);

Sequence decode_result(const Table& table, const NodeStore& store);
Table sequence_to_table(const Sequence& s, std::int64_t iter = 1);

/// Copy of a Mu node evaluating with the delta algorithm instead.
PlanNodePtr to_mu_delta(const PlanNodePtr& mu);

/// Collects every node reachable from `root` (descending into Mu bodies).
std::vector<PlanNodePtr> collect_plan_nodes(const PlanNodePtr& root);

}  // namespace fixq

#endif  // FIXQ_ALGEBRA_HPP
