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
// Simplified loop-lifting compiler. Every expression compiles, relative to a
// loop relation (one row per live iteration), to a plan with schema
// iter|pos|item. Iteration constructs (the general path step and for) open a
// "loop" template: rows of the outer sequence get a unique tag, the tag
// becomes the inner iteration id, a map table (inner|outer) routes results
// back through the back join. Location steps compile to the "step" template
// (step join plus distinct-doc-order bookkeeping).
//
// Exceeding the compiled subset raises Unsupported; callers fall back to the
// interpreter with syntactic analysis only.

#include <optional>
#include <set>

#include "fixq/algebra.hpp"
#include "fixq/errors.hpp"

namespace fixq {

namespace {

[[noreturn]] void unsupported(const std::string& what) {
  throw_error(ErrorKind::Unsupported, what + " is outside the compiled subset");
}

class Compiler {
 public:
  Compiler(CompileEnv env) : env_(std::move(env)) {}

  struct Scope {
    PlanNodePtr loop;  // {iter}
    std::map<std::string, PlanNodePtr> vars;
    PlanNodePtr focus;  // {iter,pos,item}, one row per iteration
  };

  std::vector<TemplateInstance> take_templates() { return std::move(templates_); }

  void scan_doc_uris(const ExprPtr& e) {
    if (e->kind == ExprKind::BuiltinCall && e->name == "doc" && e->children.size() == 1 &&
        e->children[0]->kind == ExprKind::StringLit) {
      doc_uris_.insert(e->children[0]->str_value);
    }
    for (const ExprPtr& c : e->children) scan_doc_uris(c);
    if (e->kind == ExprKind::Typeswitch) {
      for (const TypeswitchCase& c : e->cases) scan_doc_uris(c.body);
      scan_doc_uris(e->default_case);
    }
  }

  PlanNodePtr node(PlanOp op, std::vector<PlanNodePtr> children = {}) {
    auto n = std::make_shared<PlanNode>();
    n->id = next_id_++;
    n->op = op;
    n->children = std::move(children);
    return n;
  }

  PlanNodePtr project(PlanNodePtr in, std::vector<std::pair<std::string, std::string>> renamings) {
    PlanNodePtr n = node(PlanOp::Project, {std::move(in)});
    n->renamings = std::move(renamings);
    return n;
  }

  PlanNodePtr join(PlanNodePtr l, PlanNodePtr r,
                   std::vector<std::pair<std::string, std::string>> on) {
    PlanNodePtr n = node(PlanOp::Join, {std::move(l), std::move(r)});
    n->join_on = std::move(on);
    return n;
  }

  PlanNodePtr const_col(PlanNodePtr in, const std::string& out, Cell value) {
    PlanNodePtr n = node(PlanOp::MapOp, {std::move(in)});
    n->map.fn = MapSpec::Fn::Const;
    n->map.const_value = std::move(value);
    n->map.out = out;
    return n;
  }

  PlanNodePtr distinct(PlanNodePtr in, bool ddo_bookkeeping) {
    PlanNodePtr n = node(PlanOp::Distinct, {std::move(in)});
    n->order_bookkeeping = ddo_bookkeeping;
    return n;
  }

  PlanNodePtr row_num(PlanNodePtr in, const std::string& out, std::vector<std::string> order,
                      const std::string& partition, bool bookkeeping) {
    PlanNodePtr n = node(PlanOp::RowNum, {std::move(in)});
    n->column = out;
    n->order_cols = std::move(order);
    n->partition = partition;
    n->order_bookkeeping = bookkeeping;
    return n;
  }

  // Normalizes a node-set-valued plan: distinct on (iter,item), document
  // order as pos. Both operators exist only for ddo semantics.
  PlanNodePtr ddo_normalize(PlanNodePtr in) {
    PlanNodePtr d = distinct(project(std::move(in), {{"iter", "iter"}, {"item", "item"}}), true);
    return row_num(std::move(d), "pos", {"item"}, "iter", true);
  }

  // ---- iteration frame (the "loop" template) --------------------------------

  struct Frame {
    PlanNodePtr tagged;      // input rows + unique tag "inner"
    PlanNodePtr map;         // {inner, outer, opos}
    PlanNodePtr inner_loop;  // {iter}
    Scope inner;             // scope inside the iteration
  };

  // Opens an iteration frame over `input`; outer bindings free in `body_expr`
  // are routed into the inner iteration space through the map table.
  Frame open_frame(const PlanNodePtr& input, const Scope& outer, const ExprPtr& body_expr) {
    Frame f;
    PlanNodePtr tag = node(PlanOp::RowTag, {input});
    tag->column = "inner";
    f.tagged = tag;
    f.map = project(tag, {{"inner", "inner"}, {"outer", "iter"}, {"opos", "pos"}});
    f.inner_loop = project(tag, {{"iter", "inner"}});
    f.inner_loop->loop_relation = true;
    f.inner.loop = f.inner_loop;
    auto remap = [&](const PlanNodePtr& plan) {
      return project(join(f.map, plan, {{"outer", "iter"}}),
                     {{"iter", "inner"}, {"pos", "pos"}, {"item", "item"}});
    };
    for (const auto& [name, plan] : outer.vars) {
      if (body_expr->free_vars.contains(name)) f.inner.vars[name] = remap(plan);
    }
    if (outer.focus) f.inner.focus = remap(outer.focus);
    return f;
  }

  PlanNodePtr item_of_frame(Frame& f) {
    return const_col(project(f.tagged, {{"iter", "inner"}, {"item", "item"}}), "pos",
                     Cell(std::int64_t{1}));
  }

  PlanNodePtr close_frame(Frame& f, PlanNodePtr body, bool ddo, const char* template_name) {
    PlanNodePtr back = join(body, f.map, {{"iter", "inner"}});
    PlanNodePtr out;
    if (ddo) {
      out = ddo_normalize(project(back, {{"iter", "outer"}, {"item", "item"}}));
    } else {
      PlanNodePtr numbered =
          row_num(back, "pos2", {"opos", "pos"}, "outer", /*bookkeeping=*/true);
      out = project(numbered, {{"iter", "outer"}, {"pos", "pos2"}, {"item", "item"}});
    }
    templates_.push_back(TemplateInstance{template_name, f.tagged, out, back, true});
    return out;
  }

  PlanNodePtr lookup_var(Scope& scope, const std::string& name) {
    if (name == ".") {
      if (scope.focus) return scope.focus;
      unsupported("the context item here");
    }
    auto it = scope.vars.find(name);
    if (it != scope.vars.end()) return it->second;
    unsupported("free variable $" + name);
  }

  // ---- expression compilation ----------------------------------------------

  PlanNodePtr compile(const ExprPtr& e, Scope& scope) {
    switch (e->kind) {
      case ExprKind::StringLit:
        return literal_item(scope, Cell(e->str_value));
      case ExprKind::IntLit:
        return literal_item(scope, Cell(e->int_value));
      case ExprKind::EmptySeq: {
        PlanNodePtr lit = node(PlanOp::LiteralTable);
        lit->schema = {"iter", "pos", "item"};
        return lit;
      }
      case ExprKind::ContextItem:
        return lookup_var(scope, ".");
      case ExprKind::VarRef:
        return lookup_var(scope, e->name);
      case ExprKind::SeqConcat: {
        PlanNodePtr l = const_col(compile(e->children[0], scope), "ord", Cell(std::int64_t{1}));
        PlanNodePtr r = const_col(compile(e->children[1], scope), "ord", Cell(std::int64_t{2}));
        PlanNodePtr u = node(PlanOp::Union, {l, r});
        PlanNodePtr numbered = row_num(u, "pos2", {"ord", "pos"}, "iter", true);
        return project(numbered, {{"iter", "iter"}, {"pos", "pos2"}, {"item", "item"}});
      }
      case ExprKind::NodeSetOp: {
        PlanNodePtr l = project(compile(e->children[0], scope), {{"iter", "iter"}, {"item", "item"}});
        PlanNodePtr r = project(compile(e->children[1], scope), {{"iter", "iter"}, {"item", "item"}});
        if (e->set_op == SetOp::Union) {
          return ddo_normalize(node(PlanOp::Union, {l, r}));
        }
        // except: user-visible set semantics, not removable bookkeeping
        PlanNodePtr diff = node(PlanOp::DifferenceAll, {distinct(l, false), r});
        return row_num(diff, "pos", {"item"}, "iter", true);
      }
      case ExprKind::PathStep: {
        PlanNodePtr in =
            project(compile(e->children[0], scope), {{"iter", "iter"}, {"item", "item"}});
        PlanNodePtr step = node(PlanOp::StepJoin, {in});
        step->axis = e->axis;
        step->test = e->test;
        PlanNodePtr out = ddo_normalize(step);
        templates_.push_back(TemplateInstance{"step", step, out, nullptr, true});
        return out;
      }
      case ExprKind::PathExpr: {
        PlanNodePtr in = compile(e->children[0], scope);
        Frame f = open_frame(in, scope, e->children[1]);
        f.inner.focus = item_of_frame(f);
        PlanNodePtr body = compile(e->children[1], f.inner);
        return close_frame(f, body, /*ddo=*/true, "loop");
      }
      case ExprKind::Predicate:
        return compile_predicate(e, scope);
      case ExprKind::For: {
        if (!e->pos_var.empty()) unsupported("a positional for variable");
        PlanNodePtr in = compile(e->children[0], scope);
        Frame f = open_frame(in, scope, e->children[1]);
        f.inner.vars[e->name] = item_of_frame(f);
        PlanNodePtr body = compile(e->children[1], f.inner);
        return close_frame(f, body, /*ddo=*/false, "loop");
      }
      case ExprKind::Let: {
        Scope inner = scope;
        inner.vars[e->name] = compile(e->children[0], scope);
        return compile(e->children[1], inner);
      }
      case ExprKind::If:
        return compile_if(e, scope);
      case ExprKind::GeneralComparison:
      case ExprKind::ValueComparison:
        return compile_comparison_value(e, scope);
      case ExprKind::Arith: {
        PlanNodePtr l = project(compile(e->children[0], scope),
                                {{"iter", "iter"}, {"item", "item"}});
        PlanNodePtr r = project(compile(e->children[1], scope),
                                {{"iter", "iter"}, {"item_r", "item"}});
        PlanNodePtr pairs = join(l, r, {{"iter", "iter"}});
        PlanNodePtr m = node(PlanOp::MapOp, {pairs});
        m->map.fn = MapSpec::Fn::Arith;
        m->map.arith = e->arith_op;
        m->map.inputs = {"item", "item_r"};
        m->map.out = "item2";
        return const_col(project(m, {{"iter", "iter"}, {"item", "item2"}}), "pos",
                         Cell(std::int64_t{1}));
      }
      case ExprKind::BuiltinCall:
        return compile_builtin(e, scope);
      case ExprKind::Fixpoint: {
        PlanNodePtr seed = compile(e->children[0], scope);
        PlanNodePtr rec_input = node(PlanOp::RecInput);
        rec_input->schema = {"iter", "pos", "item"};
        Scope body_scope = scope;
        body_scope.vars[e->name] = rec_input;
        PlanNodePtr body = node(PlanOp::RecOutput, {compile(e->children[1], body_scope)});
        PlanNodePtr mu = node(PlanOp::Mu, {seed});
        mu->body_input = rec_input;
        mu->body_output = body;
        return mu;
      }
      case ExprKind::Closure:
        return compile(desugar(e), scope);
      case ExprKind::ElemConstructor:
      case ExprKind::TextConstructor: {
        // Analysis-only: the constructor participates in the distributivity
        // check (it blocks), but plans containing it do not execute.
        PlanNodePtr n = node(PlanOp::NodeConstructor, {compile_constructor_content(e, scope)});
        n->ctor_kind = e->kind == ExprKind::ElemConstructor ? NodeKind::Element : NodeKind::Text;
        return n;
      }
      case ExprKind::FunCall:
        unsupported("a user-defined function call");
      case ExprKind::Typeswitch:
        unsupported("typeswitch");
    }
    unsupported(std::string("construct ") + std::to_string(int(e->kind)));
  }

  PlanNodePtr compile_constructor_content(const ExprPtr& e, Scope& scope) {
    // Content that mentions variables keeps them on the marked path.
    PlanNodePtr acc;
    for (const ExprPtr& c : e->children) {
      if (c->free_vars.empty() && c->kind == ExprKind::StringLit) continue;
      PlanNodePtr part = compile(c, scope);
      acc = acc ? node(PlanOp::Union, {acc, part}) : part;
    }
    if (!acc) {
      PlanNodePtr lit = node(PlanOp::LiteralTable);
      lit->schema = {"iter", "pos", "item"};
      acc = lit;
    }
    return acc;
  }

  PlanNodePtr literal_item(Scope& scope, Cell value) {
    return const_col(const_col(scope.loop, "pos", Cell(std::int64_t{1})), "item",
                     std::move(value));
  }

  // Bag of iteration ids for which the condition is true (at least one row
  // per truthy iteration, none otherwise).
  PlanNodePtr truthy_iters(const ExprPtr& cond, Scope& scope) {
    if (cond->kind == ExprKind::BuiltinCall && cond->name == "count" &&
        cond->children.size() == 1) {
      PlanNodePtr q = project(compile(cond->children[0], scope), {{"iter", "iter"}});
      PlanNodePtr agg = node(PlanOp::CountAgg, {q});
      agg->column = "item";
      agg->group_by = "iter";
      return project(agg, {{"iter", "iter"}});
    }
    if (cond->kind == ExprKind::BuiltinCall && cond->name == "empty" &&
        cond->children.size() == 1) {
      PlanNodePtr present =
          distinct(project(compile(cond->children[0], scope), {{"iter", "iter"}}), false);
      PlanNodePtr all = distinct(project(scope.loop, {{"iter", "iter"}}), false);
      return node(PlanOp::DifferenceAll, {all, present});
    }
    if (cond->kind == ExprKind::GeneralComparison || cond->kind == ExprKind::ValueComparison) {
      return project(comparison_pairs(cond, scope), {{"iter", "iter"}});
    }
    // effective boolean value of a node sequence: any row counts; other value
    // classes (numeric predicates in particular) would change meaning here
    if (!is_node_valued(cond)) unsupported("a condition of unknown value class");
    return project(compile(cond, scope), {{"iter", "iter"}});
  }

  static bool is_node_valued(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::PathStep:
      case ExprKind::PathExpr:
      case ExprKind::NodeSetOp:
      case ExprKind::Fixpoint:
      case ExprKind::Closure:
      case ExprKind::ElemConstructor:
      case ExprKind::TextConstructor:
        return true;
      case ExprKind::Predicate:
        return is_node_valued(e->children[0]);
      case ExprKind::BuiltinCall:
        return e->name == "id" || e->name == "doc" || e->name == "root";
      default:
        return false;
    }
  }

  // Rows for which the comparison holds, one per satisfying pair.
  PlanNodePtr comparison_pairs(const ExprPtr& cmp, Scope& scope) {
    PlanNodePtr l = strval(project(compile(cmp->children[0], scope),
                                   {{"iter", "iter"}, {"item", "item"}}),
                           "item");
    PlanNodePtr r0 = project(compile(cmp->children[1], scope),
                             {{"iter", "iter"}, {"item_r", "item"}});
    PlanNodePtr r = strval(r0, "item_r");
    PlanNodePtr pairs = join(l, r, {{"iter", "iter"}});
    PlanNodePtr m = node(PlanOp::MapOp, {pairs});
    m->map.fn = MapSpec::Fn::Compare;
    m->map.comp = cmp->comp_op;
    m->map.inputs = {"item", "item_r"};
    m->map.out = "sel";
    PlanNodePtr sel = node(PlanOp::Select, {m});
    sel->column = "sel";
    return sel;
  }

  PlanNodePtr strval(PlanNodePtr in, const std::string& col) {
    PlanNodePtr m = node(PlanOp::MapOp, {std::move(in)});
    m->map.fn = MapSpec::Fn::StringValue;
    m->map.inputs = {col};
    m->map.out = col;
    return m;
  }

  PlanNodePtr compile_if(const ExprPtr& e, Scope& scope) {
    PlanNodePtr truthy = truthy_iters(e->children[0], scope);
    // The then branch evaluates in the restricted scope: every binding is
    // semijoined with the truthy iterations before use.
    Scope then_scope = restricted_scope(scope, truthy);
    PlanNodePtr then_part = compile(e->children[1], then_scope);
    if (e->children[2]->kind == ExprKind::EmptySeq) return then_part;
    PlanNodePtr all = distinct(project(scope.loop, {{"iter", "iter"}}), false);
    PlanNodePtr falsy = node(PlanOp::DifferenceAll, {all, truthy});
    Scope else_scope = restricted_scope(scope, falsy);
    PlanNodePtr else_part = compile(e->children[2], else_scope);
    return node(PlanOp::Union, {then_part, else_part});
  }

  Scope restricted_scope(const Scope& scope, const PlanNodePtr& iters) {
    Scope out;
    out.loop = join(scope.loop, iters, {{"iter", "iter"}});
    for (const auto& [name, plan] : scope.vars) {
      out.vars[name] = join(plan, iters, {{"iter", "iter"}});
    }
    if (scope.focus) out.focus = join(scope.focus, iters, {{"iter", "iter"}});
    return out;
  }

  PlanNodePtr compile_predicate(const ExprPtr& e, Scope& scope) {
    const ExprPtr& input = e->children[0];
    const ExprPtr& pred = e->children[1];
    PlanNodePtr in = compile(input, scope);
    if (pred->kind == ExprKind::IntLit) {
      // positional predicate: semantic row numbering, not removable
      PlanNodePtr ranked = row_num(in, "rank", {"pos"}, "iter", false);
      PlanNodePtr m = node(PlanOp::MapOp, {ranked});
      m->map.fn = MapSpec::Fn::Compare;
      m->map.comp = CompOp::Eq;
      m->map.inputs = {"rank"};
      m->map.const_value = Cell(pred->int_value);
      m->map.out = "sel";
      PlanNodePtr sel = node(PlanOp::Select, {m});
      sel->column = "sel";
      return project(sel, {{"iter", "iter"}, {"pos", "pos"}, {"item", "item"}});
    }
    Frame f = open_frame(in, scope, pred);
    f.inner.focus = item_of_frame(f);
    PlanNodePtr truthy = truthy_iters(pred, f.inner);  // {iter = inner tag}
    PlanNodePtr kept = join(f.tagged, truthy, {{"inner", "iter"}});
    templates_.push_back(TemplateInstance{"loop", f.tagged, kept, kept, true});
    return project(kept, {{"iter", "iter"}, {"pos", "pos"}, {"item", "item"}});
  }

  PlanNodePtr compile_comparison_value(const ExprPtr& e, Scope& scope) {
    PlanNodePtr truthy = distinct(project(comparison_pairs(e, scope), {{"iter", "iter"}}), false);
    PlanNodePtr trues = const_col(truthy, "item", Cell(true));
    PlanNodePtr all = distinct(project(scope.loop, {{"iter", "iter"}}), false);
    PlanNodePtr falsy = node(PlanOp::DifferenceAll, {all, truthy});
    PlanNodePtr falses = const_col(falsy, "item", Cell(false));
    return const_col(node(PlanOp::Union, {trues, falses}), "pos", Cell(std::int64_t{1}));
  }

  PlanNodePtr compile_builtin(const ExprPtr& e, Scope& scope) {
    const std::string& name = e->name;
    if (name == "doc") {
      if (e->children.size() != 1 || e->children[0]->kind != ExprKind::StringLit)
        unsupported("doc() with a non-literal argument");
      PlanNodePtr d = node(PlanOp::DocLookup);
      d->uri = e->children[0]->str_value;
      return node(PlanOp::Cross, {scope.loop, d});
    }
    if (name == "id") {
      if (e->children.size() != 1) unsupported("id() with a context-node argument");
      PlanNodePtr arg = strval(
          project(compile(e->children[0], scope), {{"iter", "iter"}, {"key", "item"}}), "key");
      PlanNodePtr table = node(PlanOp::IdLookup);
      table->uri = single_doc_uri();
      PlanNodePtr j = join(arg, table, {{"key", "id"}});
      return ddo_normalize(project(j, {{"iter", "iter"}, {"item", "ref"}}));
    }
    if (name == "count") {
      if (e->children.size() != 1) unsupported("count() arity");
      PlanNodePtr q = project(compile(e->children[0], scope), {{"iter", "iter"}});
      PlanNodePtr agg = node(PlanOp::CountAgg, {q});
      agg->column = "item";
      agg->group_by = "iter";
      // count over an empty group is 0, which aggregation alone cannot emit
      PlanNodePtr present = project(agg, {{"iter", "iter"}});
      PlanNodePtr all = distinct(project(scope.loop, {{"iter", "iter"}}), false);
      PlanNodePtr zero_iters = node(PlanOp::DifferenceAll, {all, present});
      PlanNodePtr zeros = const_col(zero_iters, "item", Cell(std::int64_t{0}));
      PlanNodePtr u = node(PlanOp::Union, {agg, zeros});
      return const_col(u, "pos", Cell(std::int64_t{1}));
    }
    if (name == "empty") {
      if (e->children.size() != 1) unsupported("empty() arity");
      PlanNodePtr present =
          distinct(project(compile(e->children[0], scope), {{"iter", "iter"}}), false);
      PlanNodePtr all = distinct(project(scope.loop, {{"iter", "iter"}}), false);
      PlanNodePtr empty_iters = node(PlanOp::DifferenceAll, {all, present});
      PlanNodePtr trues = const_col(empty_iters, "item", Cell(true));
      PlanNodePtr falses = const_col(present, "item", Cell(false));
      return const_col(node(PlanOp::Union, {trues, falses}), "pos", Cell(std::int64_t{1}));
    }
    if (name == "data") {
      PlanNodePtr q = compile(e->children[0], scope);
      return strval(q, "item");
    }
    unsupported("built-in " + name + "()");
  }

  std::string single_doc_uri() {
    if (doc_uris_.size() == 1) return *doc_uris_.begin();
    if (doc_uris_.empty()) return "";  // resolve to the single registered document at run time
    unsupported("id() with several candidate context documents");
  }

  CompileEnv env_;
  std::size_t next_id_ = 0;
  std::vector<TemplateInstance> templates_;
  std::set<std::string> doc_uris_;
};

}  // namespace

Plan compile_query(const Program& program, CompileEnv& env) {
  Compiler compiler(env);
  compiler.scan_doc_uris(program.main);
  Compiler::Scope top;
  PlanNodePtr loop = compiler.node(PlanOp::LiteralTable);
  loop->schema = {"iter"};
  loop->rows = {{Cell(std::int64_t{1})}};
  top.loop = loop;
  Plan plan;
  plan.root = compiler.compile(program.main, top);
  plan.templates = compiler.take_templates();
  return plan;
}

CompiledBody compile_fixpoint_body(const std::string& var, const ExprPtr& body, Env& env) {
  CompileEnv cenv;
  cenv.store = env.store;
  cenv.docs = env.docs;
  cenv.program = env.program;
  cenv.id_attribute = env.config.id_attribute;
  Compiler compiler(cenv);
  compiler.scan_doc_uris(body);
  Compiler::Scope scope;
  PlanNodePtr loop = compiler.node(PlanOp::LiteralTable);
  loop->schema = {"iter"};
  loop->rows = {{Cell(std::int64_t{1})}};
  scope.loop = loop;
  PlanNodePtr rec_input = compiler.node(PlanOp::RecInput);
  rec_input->schema = {"iter", "pos", "item"};
  scope.vars[var] = rec_input;
  // Other free variables are fixed during the fixpoint: materialize their
  // current bindings as literal tables.
  for (const std::string& free : body->free_vars) {
    if (free == var) continue;
    auto bound = env.vars.find(free);
    if (bound == env.vars.end())
      throw_error(ErrorKind::UnboundVariable, "$" + free + " in a compiled recursion body");
    Table t = sequence_to_table(bound->second);
    PlanNodePtr lit = compiler.node(PlanOp::LiteralTable);
    lit->schema = t.columns;
    lit->rows = t.rows;
    scope.vars[free] = lit;
  }
  CompiledBody out;
  out.body.input = rec_input;
  out.body.output = compiler.node(PlanOp::RecOutput, {compiler.compile(body, scope)});
  out.templates = compiler.take_templates();
  return out;
}

}  // namespace fixq
