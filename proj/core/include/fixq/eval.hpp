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
// Dynamic semantics: evaluates an expression against a NodeStore and
// environment, with XQuery-style focus, distinct-doc-order path results,
// existential general comparison, the built-in function set, and node
// construction. Evaluation is reentrant and pure except for node
// construction, which mutates the store.

#ifndef FIXQ_EVAL_HPP
#define FIXQ_EVAL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fixq/ast.hpp"
#include "fixq/xdm.hpp"

namespace fixq {

enum class Strategy { Naive, Delta, Auto };
enum class CheckMode { Syntactic, Algebraic, Both };

const char* to_string(Strategy s);
const char* to_string(CheckMode m);

struct Focus {
  Item item;
  std::int64_t position = 1;
  std::int64_t last = 1;
};

struct EvalConfig {
  std::string id_attribute = "id";
  std::size_t max_fixpoint_iterations = 10000;
  Strategy strategy = Strategy::Naive;
  CheckMode check = CheckMode::Both;
  bool reject_recursive_functions = false;
};

/// Documents known to a query run, plus the per-run index of ID-typed
/// attribute values. Lookup order for doc(uri): exact registration, the
/// single registered document (implementation-defined fallback, see README),
/// then the filesystem.
class DocRegistry {
 public:
  using IdIndex = std::multimap<std::string, NodeId>;

  void register_document(const std::string& name, NodeId doc);
  NodeId open(NodeStore& store, const std::string& uri);
  std::optional<NodeId> single_document() const;
  const std::vector<NodeId>& documents() const { return docs_; }

  const IdIndex& id_index(const NodeStore& store, NodeId root, const std::string& attribute);

 private:
  std::map<std::string, NodeId> by_name_;
  std::vector<NodeId> docs_;
  std::map<std::pair<NodeId, std::string>, IdIndex> indexes_;
};

struct FixpointLog;  // defined in fixq/fixpoint.hpp

struct Env {
  NodeStore* store = nullptr;
  DocRegistry* docs = nullptr;
  const Program* program = nullptr;
  EvalConfig config;
  std::map<std::string, Sequence> vars;
  std::optional<Focus> focus;
  FixpointLog* log = nullptr;
};

Sequence eval(const ExprPtr& e, Env& env);

/// (): false; any sequence starting with a node: true; singleton atomic by
/// value; multi-item atomic-first sequences are a type error.
bool effective_boolean_value(const Sequence& s);

/// Untyped string value of an item (nodes via their text content).
std::string item_string_value(const NodeStore& store, const Item& item);

/// data(): nodes become untyped strings, atomics pass through.
Sequence atomize(const NodeStore& store, const Sequence& s);

/// Comparison with untyped coercion: numeric when both sides parse as
/// numbers, string comparison otherwise. Shared by the plan interpreter.
bool coerced_compare(const NodeStore& store, CompOp op, const Item& lhs, const Item& rhs);

std::optional<double> parse_number(const std::string& text);
std::string format_double(double value);

}  // namespace fixq

#endif  // FIXQ_EVAL_HPP
