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
// The union push-up distributivity check. A marker standing for "this input
// is a union of two partitions" starts at RecInput and is propagated towards
// RecOutput as marks on the DAG (equivalent to the fragment rewriting view
// but without duplicating subtrees at binary operators):
//
//   - unary operators pass the mark through,
//   - binary operators pass it when exactly one input carries it; when both
//     do, only the back join of a certified loop-template instance may pass
//     (its row tag keys the two sides to disjoint tag spaces; see
//     docs/algebra.md), counted as a big step,
//   - blocking operators (distinct, difference, aggregation, row numbering)
//     stop the procedure and are reported,
//   - node constructors and nested fixpoints anywhere in the body reject it.
//
// The body is normally simplified first: distinct/row-number operators that
// only realize distinct-doc-order or sequence-order semantics are dropped,
// since distributivity is stated up to duplicates and order.

#include <algorithm>
#include <map>
#include <set>

#include "fixq/algebra.hpp"
#include "fixq/errors.hpp"

namespace fixq {

namespace {

// Nodes of the body DAG in children-first (topological) order.
std::vector<PlanNodePtr> topo_nodes(const PlanNodePtr& output) {
  std::vector<PlanNodePtr> order;
  std::set<const PlanNode*> done;
  auto visit = [&](auto&& self, const PlanNodePtr& n) -> void {
    if (!n || done.contains(n.get())) return;
    done.insert(n.get());
    for (const PlanNodePtr& c : n->children) self(self, c);
    order.push_back(n);
  };
  visit(visit, output);
  return order;
}

}  // namespace

PushOutcome push_up_check(const CompiledBody& body) {
  if (!body.body.input || body.body.input->op != PlanOp::RecInput || !body.body.output ||
      body.body.output->op != PlanOp::RecOutput)
    throw_error(ErrorKind::MalformedDag, "recursion body must span RecInput to RecOutput");

  PushOutcome outcome;
  std::set<const PlanNode*> back_joins;
  for (const TemplateInstance& t : body.templates) {
    if (t.certified_distributive && t.back_join) back_joins.insert(t.back_join.get());
  }

  std::vector<PlanNodePtr> order = topo_nodes(body.body.output);
  std::map<const PlanNode*, bool> marked;

  auto fail = [&](const std::string& blocker) {
    outcome.distributive = false;
    outcome.blocker = blocker;
    return outcome;
  };

  for (const PlanNodePtr& n : order) {
    if (n->op == PlanOp::NodeConstructor)
      return fail("NodeConstructor");  // a fresh identity per evaluation, anywhere
    if (n->op == PlanOp::Mu || n->op == PlanOp::MuDelta)
      return fail("nested fixpoint");
    if (n->op == PlanOp::RecInput) {
      marked[n.get()] = true;
      continue;
    }
    if (n->loop_relation) {
      // tag column only, no item data: per-iteration constants built from it
      // do not observe the input split
      marked[n.get()] = false;
      continue;
    }
    std::size_t marked_children = 0;
    for (const PlanNodePtr& c : n->children) {
      if (marked[c.get()]) ++marked_children;
    }
    if (marked_children == 0) {
      marked[n.get()] = false;
      continue;
    }
    switch (push_class(n->op)) {
      case PushClass::Unary:
        marked[n.get()] = true;
        outcome.trace.push_back(std::string(to_string(n->op)) + ": pass");
        break;
      case PushClass::Binary:
        if (marked_children > 1) {
          // Markers merge at a union: that is the goal shape of the push-up.
          // Joins may merge only at the back join of a certified loop
          // template, where the row tag keys both sides apart; any other
          // join of two marked inputs would produce cross terms.
          if (n->op == PlanOp::Union) {
            marked[n.get()] = true;
            outcome.trace.push_back("Union: markers merge");
            break;
          }
          if (back_joins.contains(n.get())) {
            marked[n.get()] = true;
            ++outcome.big_steps;
            outcome.trace.push_back("big step across a certified loop template");
            break;
          }
          return fail(std::string(to_string(n->op)) +
                      " (non-linear: both inputs depend on the recursion input)");
        }
        marked[n.get()] = true;
        outcome.trace.push_back(std::string(to_string(n->op)) + ": pass around one input");
        break;
      case PushClass::Blocking:
        return fail(to_string(n->op));
      case PushClass::Leaf:
        marked[n.get()] = false;
        break;
    }
  }
  if (!marked[body.body.output.get()])
    return fail("the recursion input does not reach the output");
  outcome.distributive = true;
  return outcome;
}

namespace {

struct Splicer {
  std::map<const PlanNode*, PlanNodePtr> cloned;

  PlanNodePtr clone(const PlanNodePtr& n) {
    if (!n) return nullptr;
    auto it = cloned.find(n.get());
    if (it != cloned.end()) return it->second;
    // ddo/order bookkeeping vanishes: the node maps to its rewired child
    if (n->order_bookkeeping && (n->op == PlanOp::Distinct || n->op == PlanOp::RowNum)) {
      PlanNodePtr spliced = clone(n->children[0]);
      cloned.emplace(n.get(), spliced);
      return spliced;
    }
    PlanNodePtr copy = std::make_shared<PlanNode>(*n);
    cloned.emplace(n.get(), copy);
    for (PlanNodePtr& c : copy->children) c = clone(c);
    if (copy->body_input) copy->body_input = clone(copy->body_input);
    if (copy->body_output) copy->body_output = clone(copy->body_output);
    return copy;
  }
};

}  // namespace

CompiledBody simplify_for_check(const CompiledBody& body) {
  Splicer splicer;
  CompiledBody out;
  out.body.output = splicer.clone(body.body.output);
  out.body.input = splicer.clone(body.body.input);
  for (const TemplateInstance& t : body.templates) {
    TemplateInstance mapped = t;
    mapped.entry = splicer.clone(t.entry);
    mapped.exit = splicer.clone(t.exit);
    mapped.back_join = splicer.clone(t.back_join);
    out.templates.push_back(std::move(mapped));
  }
  return out;
}

}  // namespace fixq
