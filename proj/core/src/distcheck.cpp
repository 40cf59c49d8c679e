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

#include "fixq/distcheck.hpp"

#include <set>

#include "fixq/errors.hpp"

#include "json.hpp"

namespace fixq {

namespace {

struct Checker {
  const std::vector<Function>& functions;
  bool reject_recursive;
  std::vector<std::string> trace;
  std::optional<DistWitness> witness;
  // pending ds[param_i](body_f) judgments, keyed by (function, param index);
  // a cycle re-derives a pending judgment and is assumed to hold.
  std::set<std::pair<std::string, std::size_t>> pending;
  // pending constructor-freedom checks for recursive expansions
  std::set<std::string> ctor_pending;

  bool fail(const ExprPtr& e, const char* rule, const std::string& premise) {
    if (!witness) witness = DistWitness{to_query_string(e), rule, premise};
    return false;
  }

  bool pass(const char* rule) {
    trace.emplace_back(rule);
    return true;
  }

  const Function* find(const std::string& name, std::size_t arity) {
    for (const Function& f : functions) {
      if (f.name == name && f.params.size() == arity) return &f;
    }
    return nullptr;
  }

  // A var-free expression behaves as a constant of the recursion variable;
  // it is safe unless it can mint node identities, directly or through a
  // called function.
  bool constant_constructs(const ExprPtr& e) {
    if (e->kind == ExprKind::ElemConstructor || e->kind == ExprKind::TextConstructor) return true;
    if (e->kind == ExprKind::FunCall) {
      const Function* f = find(e->name, e->children.size());
      if (!f) throw_error(ErrorKind::UnknownFunction, e->name);
      if (!ctor_pending.contains(f->name)) {
        ctor_pending.insert(f->name);
        bool ctor = constant_constructs(f->body);
        ctor_pending.erase(f->name);
        if (ctor) return true;
      }
    }
    for (const ExprPtr& c : e->children) {
      if (constant_constructs(c)) return true;
    }
    if (e->kind == ExprKind::Typeswitch) {
      for (const TypeswitchCase& c : e->cases) {
        if (constant_constructs(c.body)) return true;
      }
      if (constant_constructs(e->default_case)) return true;
    }
    return false;
  }

  static bool uses_focus_position(const ExprPtr& e) {
    if (e->kind == ExprKind::BuiltinCall && (e->name == "position" || e->name == "last"))
      return true;
    for (const ExprPtr& c : e->children) {
      if (uses_focus_position(c)) return true;
    }
    if (e->kind == ExprKind::Typeswitch) {
      for (const TypeswitchCase& c : e->cases) {
        if (uses_focus_position(c.body)) return true;
      }
      if (uses_focus_position(e->default_case)) return true;
    }
    return false;
  }

  // Conservative: could this expression evaluate to a number and therefore
  // act as a positional predicate?
  static bool may_be_numeric(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::IntLit:
      case ExprKind::Arith:
      case ExprKind::VarRef:   // unknown binding
      case ExprKind::FunCall:  // unknown result
        return true;
      case ExprKind::BuiltinCall:
        return e->name == "count" || e->name == "position" || e->name == "last" ||
               e->name == "data";
      case ExprKind::SeqConcat:
        return may_be_numeric(e->children[0]) || may_be_numeric(e->children[1]);
      case ExprKind::If:
        return may_be_numeric(e->children[1]) || may_be_numeric(e->children[2]);
      case ExprKind::For:
      case ExprKind::Let:
        return may_be_numeric(e->children[1]);
      case ExprKind::Typeswitch: {
        for (const TypeswitchCase& c : e->cases) {
          if (may_be_numeric(c.body)) return true;
        }
        return may_be_numeric(e->default_case);
      }
      case ExprKind::Predicate:
        return may_be_numeric(e->children[0]);
      default:
        return false;  // literals, paths, node-set ops, comparisons, constructors
    }
  }

  bool ds(const std::string& var, const ExprPtr& e) {
    // Generalized Const: no free occurrence of the variable.
    if (!e->free_vars.contains(var)) {
      if (constant_constructs(e))
        return fail(e, "Const", "a node constructor occurs in a subexpression independent of $" +
                                    var);
      return pass("Const");
    }
    switch (e->kind) {
      case ExprKind::VarRef:
        return pass("Var");
      case ExprKind::SeqConcat:
        return ds(var, e->children[0]) && ds(var, e->children[1]) && pass("Concat");
      case ExprKind::NodeSetOp:
        if (e->set_op == SetOp::Union)
          return ds(var, e->children[0]) && ds(var, e->children[1]) && pass("Concat");
        return fail(e, "none", "except inspects both operand sequences as wholes");
      case ExprKind::If:
        if (e->children[0]->free_vars.contains(var))
          return fail(e, "If", "$" + var + " must not occur free in the condition");
        return ds(var, e->children[1]) && ds(var, e->children[2]) && pass("If");
      case ExprKind::For: {
        const ExprPtr& range = e->children[0];
        const ExprPtr& ret = e->children[1];
        if (!range->free_vars.contains(var)) {
          return ds(var, ret) && pass("For1");
        }
        // For2 has no positional variable: positions are relative to the
        // whole range sequence and would observe the split.
        if (!e->pos_var.empty())
          return fail(e, "For2", "a positional variable over a $" + var + "-dependent range");
        if (ret->free_vars.contains(var))
          return fail(e, "For2", "$" + var + " must not occur free in the return clause");
        return ds(var, range) && pass("For2");
      }
      case ExprKind::Let: {
        const ExprPtr& value = e->children[0];
        const ExprPtr& body = e->children[1];
        if (!value->free_vars.contains(var)) {
          return ds(var, body) && pass("Let1");
        }
        if (body->free_vars.contains(var))
          return fail(e, "Let2", "$" + var + " must not occur free in the return clause");
        return ds(var, value) && ds(e->name, body) && pass("Let2");
      }
      case ExprKind::Typeswitch: {
        if (e->children[0]->free_vars.contains(var))
          return fail(e, "TypeSw", "$" + var + " must not occur free in the scrutinee");
        for (const TypeswitchCase& c : e->cases) {
          if (!ds(var, c.body)) return false;
        }
        return ds(var, e->default_case) && pass("TypeSw");
      }
      case ExprKind::PathStep: {
        // The step part is variable-free by construction: Rule Step2.
        return ds(var, e->children[0]) && pass("Step2");
      }
      case ExprKind::PathExpr: {
        const ExprPtr& lhs = e->children[0];
        const ExprPtr& rhs = e->children[1];
        if (!lhs->free_vars.contains(var)) {
          return ds(var, rhs) && pass("Step1");
        }
        if (rhs->free_vars.contains(var))
          return fail(e, "Step2", "$" + var + " must not occur free in the step");
        if (uses_focus_position(rhs))
          return fail(e, "Step2", "position()/last() refer to the sequence bound to $" + var);
        return ds(var, lhs) && pass("Step2");
      }
      case ExprKind::Predicate: {
        const ExprPtr& input = e->children[0];
        const ExprPtr& pred = e->children[1];
        if (pred->free_vars.contains(var))
          return fail(e, "Pred", "$" + var + " must not occur free in the predicate");
        if (input->free_vars.contains(var)) {
          if (uses_focus_position(pred))
            return fail(e, "Pred",
                        "position()/last() refer to the sequence bound to $" + var);
          if (may_be_numeric(pred))
            return fail(e, "Pred", "a possibly numeric (positional) predicate over a $" + var +
                                       "-dependent sequence");
        }
        return ds(var, input) && pass("Pred");
      }
      case ExprKind::FunCall: {
        const Function* f = find(e->name, e->children.size());
        if (!f) throw_error(ErrorKind::UnknownFunction, e->name);
        for (std::size_t i = 0; i < e->children.size(); ++i) {
          if (!e->children[i]->free_vars.contains(var)) continue;
          if (!ds(var, e->children[i])) return false;
          auto key = std::make_pair(f->name, i);
          if (pending.contains(key)) {
            if (reject_recursive)
              return fail(e, "FunCall", "recursive call cycle through " + f->name);
            continue;  // coinductive assumption: pending judgment holds
          }
          pending.insert(key);
          bool ok = ds(f->params[i], f->body);
          pending.erase(key);
          if (!ok) return false;
        }
        return pass("FunCall");
      }
      case ExprKind::GeneralComparison:
      case ExprKind::ValueComparison:
        return fail(e, "none", "a comparison inspects the sequence bound to $" + var +
                                   " as a whole");
      case ExprKind::Arith:
        return fail(e, "none", "arithmetic inspects the sequence bound to $" + var);
      case ExprKind::BuiltinCall:
        return fail(e, "none",
                    "built-in " + e->name + "() inspects the sequence bound to $" + var);
      case ExprKind::ElemConstructor:
      case ExprKind::TextConstructor:
        return fail(e, "none", "a node constructor creates a fresh identity per evaluation");
      case ExprKind::Fixpoint:
      case ExprKind::Closure:
        return fail(e, "none", "a nested fixpoint over $" + var + " is not covered by any rule");
      default:
        return fail(e, "none", "no rule matches this construct with $" + var + " free");
    }
  }
};

}  // namespace

DistVerdict dist_safe(const std::string& var, const ExprPtr& e,
                      const std::vector<Function>& functions, bool reject_recursive_functions) {
  Checker checker{functions, reject_recursive_functions, {}, {}, {}, {}};
  DistVerdict verdict;
  verdict.safe = checker.ds(var, e);
  verdict.rule_trace = std::move(checker.trace);
  if (!verdict.safe) verdict.witness = std::move(checker.witness);
  return verdict;
}

namespace {

void collect_var_names(const ExprPtr& e, std::set<std::string>& names) {
  if (e->kind == ExprKind::VarRef || e->kind == ExprKind::For || e->kind == ExprKind::Let ||
      e->kind == ExprKind::Fixpoint) {
    names.insert(e->name);
  }
  if (e->kind == ExprKind::For && !e->pos_var.empty()) names.insert(e->pos_var);
  for (const ExprPtr& c : e->children) collect_var_names(c, names);
  if (e->kind == ExprKind::Typeswitch) {
    for (const TypeswitchCase& c : e->cases) collect_var_names(c.body, names);
    collect_var_names(e->default_case, names);
  }
}

}  // namespace

ExprPtr hint_rewrite(const std::string& var, const ExprPtr& e) {
  std::set<std::string> taken;
  collect_var_names(e, taken);
  std::string fresh = var + "_item";
  while (taken.contains(fresh)) fresh += "_";
  return mk_for(fresh, "", mk_var(var), substitute_var(e, var, mk_var(fresh)));
}

std::string dist_verdict_json(const DistVerdict& v) {
  nlohmann::json j;
  j["safe"] = v.safe;
  j["rule_trace"] = v.rule_trace;
  if (v.witness) {
    j["witness"] = {
        {"expr", v.witness->expr}, {"rule", v.witness->rule}, {"premise", v.witness->premise}};
  }
  return j.dump();
}

}  // namespace fixq
