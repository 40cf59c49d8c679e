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
// In-memory XML data model: identity-bearing tree nodes with a global
// document order, axis navigation, and the node-set operations (ddo, union,
// except) plus the relaxed set-equality that the fixpoint semantics is
// defined over.
//
// Node identity doubles as document order: a NodeStore assigns ids from a
// single store-wide counter in preorder at parse/construction time, with
// attributes ranked directly after their owner element and before its
// children. Cross-document (and cross-fragment) order is therefore creation
// order, which keeps the order total, stable, and cheap to compare.

#ifndef FIXQ_XDM_HPP
#define FIXQ_XDM_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fixq/errors.hpp"

namespace fixq {

/// Opaque node handle; never reused within one NodeStore. The numeric value
/// is the node's global document-order rank.
struct NodeId {
  std::uint64_t value = 0;

  friend bool operator==(NodeId a, NodeId b) = default;
  friend auto operator<=>(NodeId a, NodeId b) = default;
};

enum class NodeKind { Document, Element, Attribute, Text };

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::Element;
  std::string name;                  // elements and attributes
  std::string value;                 // attributes and text
  std::optional<NodeId> parent;
  std::vector<NodeId> attributes;    // elements only, insertion order
  std::vector<NodeId> children;      // strictly increasing in document order
};

/// One item of the evaluation currency: a node reference or an atomic value.
class Item {
 public:
  static Item node(NodeId id) { return Item(id); }
  static Item string(std::string s) { return Item(std::move(s)); }
  static Item integer(std::int64_t i) { return Item(i); }
  static Item boolean(bool b) { return Item(b); }
  static Item real(double d) { return Item(d); }

  bool is_node() const { return std::holds_alternative<NodeId>(value_); }
  bool is_string() const { return std::holds_alternative<std::string>(value_); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(value_); }
  bool is_boolean() const { return std::holds_alternative<bool>(value_); }
  bool is_real() const { return std::holds_alternative<double>(value_); }
  bool is_atomic() const { return !is_node(); }
  bool is_numeric() const { return is_integer() || is_real(); }

  NodeId node_id() const { return std::get<NodeId>(value_); }
  const std::string& string_value() const { return std::get<std::string>(value_); }
  std::int64_t integer_value() const { return std::get<std::int64_t>(value_); }
  bool boolean_value() const { return std::get<bool>(value_); }
  double real_value() const { return std::get<double>(value_); }
  double as_double() const { return is_integer() ? double(integer_value()) : real_value(); }

  friend bool operator==(const Item& a, const Item& b) = default;

 private:
  template <typename T>
  explicit Item(T v) : value_(std::move(v)) {}

  std::variant<NodeId, std::string, std::int64_t, bool, double> value_;
};

using Sequence = std::vector<Item>;

enum class Axis {
  Child,
  Descendant,
  DescendantOrSelf,
  Parent,
  Ancestor,
  Self,
  FollowingSibling,
  Attribute,
};

const char* to_string(Axis axis);

/// Node test of an axis step: a name test, the wildcard `*`, or a kind test
/// (`node()`, `element()`, `attribute()`, `text()`).
struct NodeTest {
  enum class Kind { Name, Wildcard, AnyKind, SpecificKind };

  static NodeTest name(std::string n) { return {Kind::Name, std::move(n), NodeKind::Element}; }
  static NodeTest wildcard() { return {Kind::Wildcard, "", NodeKind::Element}; }
  static NodeTest any_node() { return {Kind::AnyKind, "", NodeKind::Element}; }
  static NodeTest kind(NodeKind k) { return {Kind::SpecificKind, "", k}; }

  Kind kind_tag = Kind::Wildcard;
  std::string name_value;
  NodeKind node_kind = NodeKind::Element;

  friend bool operator==(const NodeTest&, const NodeTest&) = default;
};

std::string to_string(const NodeTest& test);

/// Single-writer arena of nodes. Parsing and construction mutate it, all
/// other operations are pure reads; a store with no in-flight mutation may
/// be shared read-only across threads.
class NodeStore {
 public:
  /// Parses an XML document in the supported subset (elements, attributes,
  /// text; comments and a DOCTYPE are skipped; no namespaces or processing
  /// instructions) and returns the document node.
  NodeId parse_document(std::string_view xml);

  /// Creates a fresh node. Child nodes are deep-copied so the new tree is
  /// independent of existing query context; copies get fresh ids.
  NodeId construct_node(NodeKind kind, std::optional<std::string> name,
                        std::optional<std::string> value, std::span<const Item> children);

  const Node& node(NodeId id) const;
  bool contains(NodeId id) const { return id.value < nodes_.size(); }
  std::size_t size() const { return nodes_.size(); }

  /// Strict total order: preorder within a tree, creation order across trees.
  bool doc_order_less(NodeId a, NodeId b) const;

  /// All nodes reachable from `context` via `axis` that satisfy `test`, in
  /// document order and duplicate-free.
  Sequence axis_step(NodeId context, Axis axis, const NodeTest& test) const;

  NodeId root_of(NodeId id) const;
  /// Concatenated text content (elements, documents) or the node's own value.
  std::string string_value(NodeId id) const;
  std::string serialize(NodeId id) const;

 private:
  friend class XmlParser;

  NodeId append_node(NodeKind kind, std::string name, std::string value,
                     std::optional<NodeId> parent);
  NodeId deep_copy(NodeId source, std::optional<NodeId> parent);

  std::vector<Node> nodes_;
};

/// Distinct-doc-order normalization: duplicates (by node id) removed, result
/// sorted ascending by document order. Rejects atomic items.
Sequence ddo(const Sequence& s);
Sequence node_union(const Sequence& s1, const Sequence& s2);
Sequence node_except(const Sequence& s1, const Sequence& s2);

/// Relaxed equality over item sequences: disregards duplicates and order,
/// comparing nodes by identity and atomics by type and value.
bool set_equal(const Sequence& s1, const Sequence& s2);

bool deep_equal_nodes(const NodeStore& store, NodeId a, NodeId b);

std::string escape_text(std::string_view text);
std::string escape_attribute(std::string_view text);

}  // namespace fixq

#endif  // FIXQ_XDM_HPP
