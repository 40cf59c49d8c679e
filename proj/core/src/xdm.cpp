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

#include "fixq/xdm.hpp"

#include <algorithm>

namespace fixq {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedXml: return "MalformedXml";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::TypeErr: return "TypeErr";
    case ErrorKind::DynamicError: return "DynamicError";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::NoFocus: return "NoFocus";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::FixpointDivergence: return "FixpointDivergence";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::MalformedDag: return "MalformedDag";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "EngineError";
}

const char* to_string(Axis axis) {
  switch (axis) {
    case Axis::Child: return "child";
    case Axis::Descendant: return "descendant";
    case Axis::DescendantOrSelf: return "descendant-or-self";
    case Axis::Parent: return "parent";
    case Axis::Ancestor: return "ancestor";
    case Axis::Self: return "self";
    case Axis::FollowingSibling: return "following-sibling";
    case Axis::Attribute: return "attribute";
  }
  return "?";
}

std::string to_string(const NodeTest& test) {
  switch (test.kind_tag) {
    case NodeTest::Kind::Name: return test.name_value;
    case NodeTest::Kind::Wildcard: return "*";
    case NodeTest::Kind::AnyKind: return "node()";
    case NodeTest::Kind::SpecificKind:
      switch (test.node_kind) {
        case NodeKind::Document: return "document-node()";
        case NodeKind::Element: return "element()";
        case NodeKind::Attribute: return "attribute()";
        case NodeKind::Text: return "text()";
      }
  }
  return "?";
}

NodeId NodeStore::append_node(NodeKind kind, std::string name, std::string value,
                              std::optional<NodeId> parent) {
  NodeId id{nodes_.size()};
  Node n;
  n.id = id;
  n.kind = kind;
  n.name = std::move(name);
  n.value = std::move(value);
  n.parent = parent;
  nodes_.push_back(std::move(n));
  return id;
}

const Node& NodeStore::node(NodeId id) const {
  if (!contains(id)) throw_error(ErrorKind::UnknownNode, "node id " + std::to_string(id.value));
  return nodes_[id.value];
}

bool NodeStore::doc_order_less(NodeId a, NodeId b) const {
  if (!contains(a) || !contains(b))
    throw_error(ErrorKind::UnknownNode, "doc_order_less on unknown node");
  return a.value < b.value;
}

NodeId NodeStore::deep_copy(NodeId source, std::optional<NodeId> parent) {
  const Node& src = node(source);
  NodeId copy = append_node(src.kind, src.name, src.value, parent);
  for (NodeId attr : std::vector<NodeId>(src.attributes)) {
    NodeId attr_copy = deep_copy(attr, copy);
    nodes_[copy.value].attributes.push_back(attr_copy);
  }
  for (NodeId child : std::vector<NodeId>(src.children)) {
    NodeId child_copy = deep_copy(child, copy);
    nodes_[copy.value].children.push_back(child_copy);
  }
  return copy;
}

NodeId NodeStore::construct_node(NodeKind kind, std::optional<std::string> name,
                                 std::optional<std::string> value,
                                 std::span<const Item> children) {
  switch (kind) {
    case NodeKind::Element:
      if (!name || name->empty())
        throw_error(ErrorKind::TypeErr, "element constructor requires a name");
      break;
    case NodeKind::Attribute:
      if (!name || !value)
        throw_error(ErrorKind::TypeErr, "attribute constructor requires name and value");
      if (!children.empty())
        throw_error(ErrorKind::TypeErr, "attribute node cannot have children");
      break;
    case NodeKind::Text:
      if (!value) throw_error(ErrorKind::TypeErr, "text constructor requires a value");
      break;
    case NodeKind::Document:
      break;
  }
  for (const Item& item : children) {
    if (!item.is_node())
      throw_error(ErrorKind::TypeErr, "constructor content requires nodes, got an atomic");
  }
  NodeId id = append_node(kind, name.value_or(""), value.value_or(""), std::nullopt);
  for (const Item& item : children) {
    const Node& child = node(item.node_id());
    NodeId copy = deep_copy(child.id, id);
    if (child.kind == NodeKind::Attribute) {
      nodes_[id.value].attributes.push_back(copy);
    } else {
      nodes_[id.value].children.push_back(copy);
    }
  }
  return id;
}

NodeId NodeStore::root_of(NodeId id) const {
  const Node* n = &node(id);
  while (n->parent) n = &node(*n->parent);
  return n->id;
}

std::string NodeStore::string_value(NodeId id) const {
  const Node& n = node(id);
  switch (n.kind) {
    case NodeKind::Attribute:
    case NodeKind::Text:
      return n.value;
    case NodeKind::Document:
    case NodeKind::Element: {
      std::string out;
      for (NodeId child : n.children) out += string_value(child);
      return out;
    }
  }
  return {};
}

namespace {

bool matches(const Node& n, Axis axis, const NodeTest& test) {
  switch (test.kind_tag) {
    case NodeTest::Kind::AnyKind:
      return true;
    case NodeTest::Kind::SpecificKind:
      return n.kind == test.node_kind;
    case NodeTest::Kind::Wildcard:
      // The wildcard matches the axis' principal node kind.
      return n.kind == (axis == Axis::Attribute ? NodeKind::Attribute : NodeKind::Element);
    case NodeTest::Kind::Name:
      return n.kind == (axis == Axis::Attribute ? NodeKind::Attribute : NodeKind::Element) &&
             n.name == test.name_value;
  }
  return false;
}

}  // namespace

Sequence NodeStore::axis_step(NodeId context, Axis axis, const NodeTest& test) const {
  const Node& ctx = node(context);
  Sequence out;
  auto emit = [&](NodeId id) {
    if (matches(node(id), axis, test)) out.push_back(Item::node(id));
  };
  switch (axis) {
    case Axis::Child:
      for (NodeId c : ctx.children) emit(c);
      break;
    case Axis::Attribute:
      for (NodeId a : ctx.attributes) emit(a);
      break;
    case Axis::Self:
      emit(context);
      break;
    case Axis::Parent:
      if (ctx.parent) emit(*ctx.parent);
      break;
    case Axis::Ancestor: {
      std::vector<NodeId> chain;
      for (std::optional<NodeId> p = ctx.parent; p; p = node(*p).parent) chain.push_back(*p);
      std::reverse(chain.begin(), chain.end());  // document order = root first
      for (NodeId a : chain) emit(a);
      break;
    }
    case Axis::FollowingSibling: {
      if (!ctx.parent) break;
      const Node& parent = node(*ctx.parent);
      auto it = std::find(parent.children.begin(), parent.children.end(), context);
      if (it != parent.children.end()) {
        for (++it; it != parent.children.end(); ++it) emit(*it);
      }
      break;
    }
    case Axis::Descendant:
    case Axis::DescendantOrSelf: {
      std::vector<NodeId> stack;
      if (axis == Axis::DescendantOrSelf) emit(context);
      // preorder walk; children pushed in reverse so the leftmost pops first
      for (auto it = ctx.children.rbegin(); it != ctx.children.rend(); ++it) stack.push_back(*it);
      while (!stack.empty()) {
        NodeId current = stack.back();
        stack.pop_back();
        emit(current);
        const Node& c = node(current);
        for (auto it = c.children.rbegin(); it != c.children.rend(); ++it) stack.push_back(*it);
      }
      break;
    }
  }
  return out;
}

std::string escape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string escape_attribute(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

namespace {

void serialize_node(const NodeStore& store, NodeId id, std::string& out) {
  const Node& n = store.node(id);
  switch (n.kind) {
    case NodeKind::Document:
      for (NodeId c : n.children) serialize_node(store, c, out);
      break;
    case NodeKind::Text:
      out += escape_text(n.value);
      break;
    case NodeKind::Attribute:
      out += n.name + "=\"" + escape_attribute(n.value) + "\"";
      break;
    case NodeKind::Element: {
      out += "<" + n.name;
      for (NodeId a : n.attributes) {
        out += " ";
        serialize_node(store, a, out);
      }
      if (n.children.empty()) {
        out += "/>";
      } else {
        out += ">";
        for (NodeId c : n.children) serialize_node(store, c, out);
        out += "</" + n.name + ">";
      }
      break;
    }
  }
}

}  // namespace

std::string NodeStore::serialize(NodeId id) const {
  std::string out;
  serialize_node(*this, id, out);
  return out;
}

Sequence ddo(const Sequence& s) {
  std::vector<NodeId> ids;
  ids.reserve(s.size());
  for (const Item& item : s) {
    if (!item.is_node()) throw_error(ErrorKind::TypeErr, "ddo requires a node-only sequence");
    ids.push_back(item.node_id());
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  Sequence out;
  out.reserve(ids.size());
  for (NodeId id : ids) out.push_back(Item::node(id));
  return out;
}

Sequence node_union(const Sequence& s1, const Sequence& s2) {
  Sequence joined = s1;
  joined.insert(joined.end(), s2.begin(), s2.end());
  return ddo(joined);
}

Sequence node_except(const Sequence& s1, const Sequence& s2) {
  Sequence right = ddo(s2);
  std::vector<NodeId> exclude;
  exclude.reserve(right.size());
  for (const Item& item : right) exclude.push_back(item.node_id());
  Sequence kept;
  for (const Item& item : s1) {
    if (!item.is_node()) throw_error(ErrorKind::TypeErr, "except requires node-only sequences");
    if (!std::binary_search(exclude.begin(), exclude.end(), item.node_id())) kept.push_back(item);
  }
  return ddo(kept);
}

namespace {

// Total order over items used only to canonicalize for set comparison.
bool item_less(const Item& a, const Item& b) {
  auto rank = [](const Item& i) {
    if (i.is_node()) return 0;
    if (i.is_string()) return 1;
    if (i.is_integer()) return 2;
    if (i.is_boolean()) return 3;
    return 4;
  };
  if (rank(a) != rank(b)) return rank(a) < rank(b);
  if (a.is_node()) return a.node_id() < b.node_id();
  if (a.is_string()) return a.string_value() < b.string_value();
  if (a.is_integer()) return a.integer_value() < b.integer_value();
  if (a.is_boolean()) return a.boolean_value() < b.boolean_value();
  return a.real_value() < b.real_value();
}

Sequence canonical_set(const Sequence& s) {
  Sequence out = s;
  std::sort(out.begin(), out.end(), item_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

bool set_equal(const Sequence& s1, const Sequence& s2) {
  return canonical_set(s1) == canonical_set(s2);
}

bool deep_equal_nodes(const NodeStore& store, NodeId a, NodeId b) {
  const Node& na = store.node(a);
  const Node& nb = store.node(b);
  if (na.kind != nb.kind || na.name != nb.name) return false;
  if ((na.kind == NodeKind::Attribute || na.kind == NodeKind::Text) && na.value != nb.value)
    return false;
  if (na.attributes.size() != nb.attributes.size() || na.children.size() != nb.children.size())
    return false;
  // Attributes compare as a name->value map, children positionally.
  for (NodeId attr_a : na.attributes) {
    const Node& aa = store.node(attr_a);
    bool found = false;
    for (NodeId attr_b : nb.attributes) {
      const Node& ab = store.node(attr_b);
      if (aa.name == ab.name && aa.value == ab.value) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  for (std::size_t i = 0; i < na.children.size(); ++i) {
    if (!deep_equal_nodes(store, na.children[i], nb.children[i])) return false;
  }
  return true;
}

}  // namespace fixq
