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

#include "fixq/eval.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixq/errors.hpp"
#include "fixq/fixpoint.hpp"

namespace fixq {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Naive: return "naive";
    case Strategy::Delta: return "delta";
    case Strategy::Auto: return "auto";
  }
  return "?";
}

const char* to_string(CheckMode m) {
  switch (m) {
    case CheckMode::Syntactic: return "syntactic";
    case CheckMode::Algebraic: return "algebraic";
    case CheckMode::Both: return "both";
  }
  return "?";
}

// ---- DocRegistry ------------------------------------------------------------

void DocRegistry::register_document(const std::string& name, NodeId doc) {
  by_name_[name] = doc;
  if (std::find(docs_.begin(), docs_.end(), doc) == docs_.end()) docs_.push_back(doc);
}

std::optional<NodeId> DocRegistry::single_document() const {
  if (docs_.size() == 1) return docs_[0];
  return std::nullopt;
}

NodeId DocRegistry::open(NodeStore& store, const std::string& uri) {
  auto it = by_name_.find(uri);
  if (it != by_name_.end()) return it->second;
  if (auto single = single_document()) return *single;
  std::error_code ec;
  if (std::filesystem::exists(uri, ec)) {
    std::ifstream in(uri, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    NodeId doc = store.parse_document(text.str());
    register_document(uri, doc);
    return doc;
  }
  throw_error(ErrorKind::DynamicError, "unknown document \"" + uri + "\"");
}

const DocRegistry::IdIndex& DocRegistry::id_index(const NodeStore& store, NodeId root,
                                                  const std::string& attribute) {
  auto key = std::make_pair(root, attribute);
  auto it = indexes_.find(key);
  if (it != indexes_.end()) return it->second;
  IdIndex index;
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId current = stack.back();
    stack.pop_back();
    const Node& n = store.node(current);
    if (n.kind == NodeKind::Element) {
      for (NodeId a : n.attributes) {
        const Node& attr = store.node(a);
        if (attr.name == attribute) index.emplace(attr.value, current);
      }
    }
    for (auto c = n.children.rbegin(); c != n.children.rend(); ++c) stack.push_back(*c);
  }
  return indexes_.emplace(key, std::move(index)).first->second;
}

// ---- helpers ----------------------------------------------------------------

std::optional<double> parse_number(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return std::nullopt;
  std::size_t end = text.find_last_not_of(" \t\r\n") + 1;
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data() + begin, text.data() + end, value);
  if (ec != std::errc() || ptr != text.data() + end) return std::nullopt;
  return value;
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", value);
  return buf;
}

std::string item_string_value(const NodeStore& store, const Item& item) {
  if (item.is_node()) return store.string_value(item.node_id());
  if (item.is_string()) return item.string_value();
  if (item.is_integer()) return std::to_string(item.integer_value());
  if (item.is_boolean()) return item.boolean_value() ? "true" : "false";
  return format_double(item.real_value());
}

Sequence atomize(const NodeStore& store, const Sequence& s) {
  Sequence out;
  out.reserve(s.size());
  for (const Item& item : s) {
    if (item.is_node()) {
      out.push_back(Item::string(store.string_value(item.node_id())));
    } else {
      out.push_back(item);
    }
  }
  return out;
}

bool coerced_compare(const NodeStore& store, CompOp op, const Item& lhs, const Item& rhs) {
  std::string ls = item_string_value(store, lhs);
  std::string rs = item_string_value(store, rhs);
  int cmp;
  auto ln = parse_number(ls);
  auto rn = parse_number(rs);
  if (ln && rn) {
    cmp = (*ln < *rn) ? -1 : (*ln > *rn ? 1 : 0);
  } else {
    cmp = ls.compare(rs);
    cmp = cmp < 0 ? -1 : (cmp > 0 ? 1 : 0);
  }
  switch (op) {
    case CompOp::Eq: return cmp == 0;
    case CompOp::Ne: return cmp != 0;
    case CompOp::Lt: return cmp < 0;
    case CompOp::Le: return cmp <= 0;
    case CompOp::Gt: return cmp > 0;
    case CompOp::Ge: return cmp >= 0;
  }
  return false;
}

bool effective_boolean_value(const Sequence& s) {
  if (s.empty()) return false;
  if (s.front().is_node()) return true;
  if (s.size() > 1)
    throw_error(ErrorKind::TypeErr, "effective boolean value of a multi-item atomic sequence");
  const Item& item = s.front();
  if (item.is_boolean()) return item.boolean_value();
  if (item.is_integer()) return item.integer_value() != 0;
  if (item.is_real()) return item.real_value() != 0.0 && item.real_value() == item.real_value();
  return !item.string_value().empty();
}

namespace {

Sequence require_nodes(const Sequence& s, const char* context) {
  for (const Item& item : s) {
    if (!item.is_node())
      throw_error(ErrorKind::TypeErr, std::string(context) + " requires a node-only sequence");
  }
  return s;
}

struct ScopedBinding {
  ScopedBinding(Env& env, const std::string& name, Sequence value) : env_(env), name_(name) {
    auto it = env.vars.find(name);
    if (it != env.vars.end()) saved_ = std::move(it->second);
    env.vars[name] = std::move(value);
  }
  ~ScopedBinding() {
    if (saved_) {
      env_.vars[name_] = std::move(*saved_);
    } else {
      env_.vars.erase(name_);
    }
  }
  Env& env_;
  std::string name_;
  std::optional<Sequence> saved_;
};

struct ScopedFocus {
  ScopedFocus(Env& env, Focus focus) : env_(env), saved_(env.focus) { env.focus = std::move(focus); }
  ~ScopedFocus() { env_.focus = saved_; }
  Env& env_;
  std::optional<Focus> saved_;
};

Sequence eval_builtin(const ExprPtr& e, Env& env);
Sequence eval_constructor(const ExprPtr& e, Env& env);

bool matches_sequence_type(const Env& env, const Sequence& v, SeqTypeName t) {
  switch (t) {
    case SeqTypeName::EmptySequence:
      return v.empty();
    case SeqTypeName::Node:
      return v.size() == 1 && v.front().is_node();
    case SeqTypeName::Element:
    case SeqTypeName::Attribute:
    case SeqTypeName::Text: {
      if (v.size() != 1 || !v.front().is_node()) return false;
      NodeKind want = t == SeqTypeName::Element ? NodeKind::Element
                      : t == SeqTypeName::Attribute ? NodeKind::Attribute
                                                    : NodeKind::Text;
      return env.store->node(v.front().node_id()).kind == want;
    }
    case SeqTypeName::XsString:
      return v.size() == 1 && v.front().is_string();
    case SeqTypeName::XsInteger:
      return v.size() == 1 && v.front().is_integer();
    case SeqTypeName::XsBoolean:
      return v.size() == 1 && v.front().is_boolean();
  }
  return false;
}

}  // namespace

Sequence eval(const ExprPtr& e, Env& env) {
  switch (e->kind) {
    case ExprKind::StringLit:
      return {Item::string(e->str_value)};
    case ExprKind::IntLit:
      return {Item::integer(e->int_value)};
    case ExprKind::EmptySeq:
      return {};
    case ExprKind::ContextItem:
      if (!env.focus) throw_error(ErrorKind::NoFocus, "'.' used without a focus");
      return {env.focus->item};
    case ExprKind::VarRef: {
      auto it = env.vars.find(e->name);
      if (it == env.vars.end()) throw_error(ErrorKind::UnboundVariable, "$" + e->name);
      return it->second;
    }
    case ExprKind::SeqConcat: {
      Sequence out = eval(e->children[0], env);
      Sequence rhs = eval(e->children[1], env);
      out.insert(out.end(), rhs.begin(), rhs.end());
      return out;
    }
    case ExprKind::NodeSetOp: {
      Sequence lhs = eval(e->children[0], env);
      Sequence rhs = eval(e->children[1], env);
      return e->set_op == SetOp::Union ? node_union(lhs, rhs) : node_except(lhs, rhs);
    }
    case ExprKind::PathStep: {
      Sequence input = ddo(require_nodes(eval(e->children[0], env), "a path step"));
      Sequence out;
      for (const Item& item : input) {
        Sequence stepped = env.store->axis_step(item.node_id(), e->axis, e->test);
        out.insert(out.end(), stepped.begin(), stepped.end());
      }
      return ddo(out);
    }
    case ExprKind::PathExpr: {
      Sequence input = ddo(require_nodes(eval(e->children[0], env), "a path expression"));
      Sequence out;
      std::int64_t last = static_cast<std::int64_t>(input.size());
      for (std::int64_t i = 0; i < last; ++i) {
        ScopedFocus focus(env, Focus{input[i], i + 1, last});
        Sequence mapped = eval(e->children[1], env);
        out.insert(out.end(), mapped.begin(), mapped.end());
      }
      return ddo(out);
    }
    case ExprKind::Predicate: {
      Sequence input = eval(e->children[0], env);
      Sequence out;
      std::int64_t last = static_cast<std::int64_t>(input.size());
      for (std::int64_t i = 0; i < last; ++i) {
        ScopedFocus focus(env, Focus{input[i], i + 1, last});
        Sequence value = eval(e->children[1], env);
        bool keep;
        if (value.size() == 1 && value.front().is_integer()) {
          keep = value.front().integer_value() == i + 1;  // numeric predicate = position
        } else {
          keep = effective_boolean_value(value);
        }
        if (keep) out.push_back(input[i]);
      }
      return out;
    }
    case ExprKind::For: {
      Sequence range = eval(e->children[0], env);
      Sequence out;
      std::int64_t position = 0;
      for (const Item& item : range) {
        ++position;
        ScopedBinding bind_var(env, e->name, Sequence{item});
        std::optional<ScopedBinding> bind_pos;
        if (!e->pos_var.empty())
          bind_pos.emplace(env, e->pos_var, Sequence{Item::integer(position)});
        Sequence mapped = eval(e->children[1], env);
        out.insert(out.end(), mapped.begin(), mapped.end());
      }
      return out;
    }
    case ExprKind::Let: {
      ScopedBinding bind(env, e->name, eval(e->children[0], env));
      return eval(e->children[1], env);
    }
    case ExprKind::If:
      return effective_boolean_value(eval(e->children[0], env)) ? eval(e->children[1], env)
                                                                : eval(e->children[2], env);
    case ExprKind::Typeswitch: {
      Sequence value = eval(e->children[0], env);
      for (const TypeswitchCase& c : e->cases) {
        if (matches_sequence_type(env, value, c.type)) return eval(c.body, env);
      }
      return eval(e->default_case, env);
    }
    case ExprKind::GeneralComparison: {
      Sequence lhs = eval(e->children[0], env);
      Sequence rhs = eval(e->children[1], env);
      for (const Item& l : lhs) {
        for (const Item& r : rhs) {
          if (coerced_compare(*env.store, e->comp_op, l, r)) return {Item::boolean(true)};
        }
      }
      return {Item::boolean(false)};
    }
    case ExprKind::ValueComparison: {
      Sequence lhs = atomize(*env.store, eval(e->children[0], env));
      Sequence rhs = atomize(*env.store, eval(e->children[1], env));
      if (lhs.empty() || rhs.empty()) return {};
      if (lhs.size() > 1 || rhs.size() > 1)
        throw_error(ErrorKind::TypeErr, "value comparison over a multi-item sequence");
      return {Item::boolean(coerced_compare(*env.store, e->comp_op, lhs.front(), rhs.front()))};
    }
    case ExprKind::Arith: {
      Sequence lhs = atomize(*env.store, eval(e->children[0], env));
      Sequence rhs = atomize(*env.store, eval(e->children[1], env));
      if (lhs.empty() || rhs.empty()) return {};
      if (lhs.size() > 1 || rhs.size() > 1)
        throw_error(ErrorKind::TypeErr, "arithmetic over a multi-item sequence");
      auto numeric = [&](const Item& item) -> double {
        if (item.is_integer()) return double(item.integer_value());
        if (item.is_real()) return item.real_value();
        auto parsed = parse_number(item_string_value(*env.store, item));
        if (!parsed) throw_error(ErrorKind::TypeErr, "non-numeric operand in arithmetic");
        return *parsed;
      };
      bool integral = [&](const Item& item) {
        if (item.is_integer()) return true;
        if (item.is_real() || item.is_boolean()) return false;
        double v = numeric(item);
        return v == std::int64_t(v);
      }(lhs.front()) && [&](const Item& item) {
        if (item.is_integer()) return true;
        if (item.is_real() || item.is_boolean()) return false;
        double v = numeric(item);
        return v == std::int64_t(v);
      }(rhs.front());
      double l = numeric(lhs.front());
      double r = numeric(rhs.front());
      switch (e->arith_op) {
        case ArithOp::Add:
          return {integral ? Item::integer(std::int64_t(l) + std::int64_t(r)) : Item::real(l + r)};
        case ArithOp::Sub:
          return {integral ? Item::integer(std::int64_t(l) - std::int64_t(r)) : Item::real(l - r)};
        case ArithOp::Mul:
          return {integral ? Item::integer(std::int64_t(l) * std::int64_t(r)) : Item::real(l * r)};
        case ArithOp::IDiv:
          if (r == 0) throw_error(ErrorKind::DynamicError, "idiv by zero");
          return {Item::integer(std::int64_t(l / r))};
      }
      return {};
    }
    case ExprKind::FunCall: {
      const Function* f = env.program ? env.program->find_function(e->name, e->children.size())
                                      : nullptr;
      if (!f) throw_error(ErrorKind::UnknownFunction, e->name);
      Env call_env;
      call_env.store = env.store;
      call_env.docs = env.docs;
      call_env.program = env.program;
      call_env.config = env.config;
      call_env.log = env.log;
      for (std::size_t i = 0; i < f->params.size(); ++i) {
        call_env.vars[f->params[i]] = eval(e->children[i], env);
      }
      return eval(f->body, call_env);
    }
    case ExprKind::BuiltinCall:
      return eval_builtin(e, env);
    case ExprKind::ElemConstructor:
    case ExprKind::TextConstructor:
      return eval_constructor(e, env);
    case ExprKind::Fixpoint: {
      FixpointSpec spec{e->name, e->children[0], e->children[1], &env};
      switch (env.config.strategy) {
        case Strategy::Naive: {
          auto [result, stats] = run_naive(spec);
          log_fixpoint_run(env, std::move(stats), std::nullopt);
          return result;
        }
        case Strategy::Delta: {
          auto [result, stats] = run_delta(spec);
          log_fixpoint_run(env, std::move(stats), std::nullopt);
          return result;
        }
        case Strategy::Auto: {
          auto [result, stats, decision] = run_auto(spec, env.config.check);
          log_fixpoint_run(env, std::move(stats), std::move(decision));
          return result;
        }
      }
      return {};
    }
    case ExprKind::Closure:
      return eval(desugar(e), env);
  }
  throw_error(ErrorKind::Unsupported, "eval: unknown expression kind");
}

namespace {

// Splits on XML whitespace.
std::vector<std::string> whitespace_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

NodeId context_document(Env& env) {
  if (env.focus && env.focus->item.is_node())
    return env.store->root_of(env.focus->item.node_id());
  if (auto single = env.docs ? env.docs->single_document() : std::nullopt) return *single;
  throw_error(ErrorKind::DynamicError,
              "id() has no unambiguous context document (no focus, several documents)");
}

Sequence eval_builtin(const ExprPtr& e, Env& env) {
  const std::string& name = e->name;
  auto arg = [&](std::size_t i) { return eval(e->children[i], env); };
  auto require_arity = [&](std::size_t lo, std::size_t hi) {
    if (e->children.size() < lo || e->children.size() > hi)
      throw_error(ErrorKind::TypeErr, name + ": wrong number of arguments");
  };
  if (name == "count") {
    require_arity(1, 1);
    return {Item::integer(std::int64_t(arg(0).size()))};
  }
  if (name == "empty") {
    require_arity(1, 1);
    return {Item::boolean(arg(0).empty())};
  }
  if (name == "data") {
    require_arity(1, 1);
    return atomize(*env.store, arg(0));
  }
  if (name == "doc") {
    require_arity(1, 1);
    Sequence uri = arg(0);
    if (uri.size() != 1 || !uri.front().is_string())
      throw_error(ErrorKind::TypeErr, "doc() expects one string");
    if (!env.docs) throw_error(ErrorKind::DynamicError, "no document registry");
    return {Item::node(env.docs->open(*env.store, uri.front().string_value()))};
  }
  if (name == "id") {
    require_arity(1, 2);
    Sequence values = arg(0);
    NodeId doc;
    if (e->children.size() == 2) {
      Sequence ctx = arg(1);
      if (ctx.size() != 1 || !ctx.front().is_node())
        throw_error(ErrorKind::TypeErr, "id(): second argument must be one node");
      doc = env.store->root_of(ctx.front().node_id());
    } else {
      doc = context_document(env);
    }
    const auto& index = env.docs->id_index(*env.store, doc, env.config.id_attribute);
    Sequence out;
    for (const Item& item : values) {
      for (const std::string& token : whitespace_tokens(item_string_value(*env.store, item))) {
        auto [begin, end] = index.equal_range(token);
        for (auto it = begin; it != end; ++it) out.push_back(Item::node(it->second));
      }
    }
    return ddo(out);
  }
  if (name == "position") {
    require_arity(0, 0);
    if (!env.focus) throw_error(ErrorKind::NoFocus, "position() used without a focus");
    return {Item::integer(env.focus->position)};
  }
  if (name == "last") {
    require_arity(0, 0);
    if (!env.focus) throw_error(ErrorKind::NoFocus, "last() used without a focus");
    return {Item::integer(env.focus->last)};
  }
  if (name == "root") {
    require_arity(0, 1);
    Item target = [&]() -> Item {
      if (e->children.empty()) {
        if (!env.focus) throw_error(ErrorKind::NoFocus, "root() used without a focus");
        return env.focus->item;
      }
      Sequence s = arg(0);
      if (s.size() != 1) throw_error(ErrorKind::TypeErr, "root() expects one node");
      return s.front();
    }();
    if (!target.is_node()) throw_error(ErrorKind::TypeErr, "root() expects a node");
    return {Item::node(env.store->root_of(target.node_id()))};
  }
  if (name == "deep-equal") {
    require_arity(2, 2);
    Sequence lhs = arg(0);
    Sequence rhs = arg(1);
    if (lhs.size() != rhs.size()) return {Item::boolean(false)};
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      const Item& l = lhs[i];
      const Item& r = rhs[i];
      if (l.is_node() != r.is_node()) return {Item::boolean(false)};
      if (l.is_node()) {
        if (!deep_equal_nodes(*env.store, l.node_id(), r.node_id()))
          return {Item::boolean(false)};
      } else if (!(l == r)) {
        return {Item::boolean(false)};
      }
    }
    return {Item::boolean(true)};
  }
  throw_error(ErrorKind::UnknownFunction, name);
}

Sequence eval_constructor(const ExprPtr& e, Env& env) {
  if (e->kind == ExprKind::TextConstructor) {
    Sequence content = eval(e->children[0], env);
    std::string text;
    bool first = true;
    for (const Item& item : content) {
      if (!first) text += " ";
      first = false;
      text += item_string_value(*env.store, item);
    }
    return {Item::node(env.store->construct_node(NodeKind::Text, std::nullopt, text, {}))};
  }
  // Element constructor: literal attributes, then content; runs of adjacent
  // atomics merge into one text node separated by single spaces.
  Sequence children;
  for (const auto& [attr_name, attr_value] : e->attrs) {
    children.push_back(Item::node(
        env.store->construct_node(NodeKind::Attribute, attr_name, attr_value, {})));
  }
  std::string pending_text;
  bool has_pending = false;
  auto flush = [&] {
    if (!has_pending) return;
    children.push_back(Item::node(
        env.store->construct_node(NodeKind::Text, std::nullopt, pending_text, {})));
    pending_text.clear();
    has_pending = false;
  };
  for (const ExprPtr& piece : e->children) {
    Sequence part = eval(piece, env);
    for (const Item& item : part) {
      if (item.is_node()) {
        flush();
        children.push_back(item);
      } else {
        if (has_pending) pending_text += " ";
        pending_text += item_string_value(*env.store, item);
        has_pending = true;
      }
    }
  }
  flush();
  return {Item::node(
      env.store->construct_node(NodeKind::Element, e->name, std::nullopt, children))};
}

}  // namespace

}  // namespace fixq
