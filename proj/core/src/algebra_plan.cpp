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

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "fixq/algebra.hpp"
#include "fixq/errors.hpp"

namespace fixq {

std::string cell_to_string(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell)) return "null";
  if (const auto* n = std::get_if<NodeId>(&cell)) return "#" + std::to_string(n->value);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
  return "\"" + std::get<std::string>(cell) + "\"";
}

Item cell_to_item(const Cell& cell) {
  if (const auto* n = std::get_if<NodeId>(&cell)) return Item::node(*n);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return Item::integer(*i);
  if (const auto* d = std::get_if<double>(&cell)) return Item::real(*d);
  if (const auto* b = std::get_if<bool>(&cell)) return Item::boolean(*b);
  if (const auto* s = std::get_if<std::string>(&cell)) return Item::string(*s);
  throw_error(ErrorKind::SchemaMismatch, "null cell where an item was expected");
}

Cell item_to_cell(const Item& item) {
  if (item.is_node()) return item.node_id();
  if (item.is_integer()) return item.integer_value();
  if (item.is_real()) return item.real_value();
  if (item.is_boolean()) return item.boolean_value();
  return item.string_value();
}

std::size_t Table::col(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw_error(ErrorKind::SchemaMismatch, "no column " + name);
}

bool Table::has_col(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

const char* to_string(PlanOp op) {
  switch (op) {
    case PlanOp::Project: return "Project";
    case PlanOp::Select: return "Select";
    case PlanOp::Join: return "Join";
    case PlanOp::Cross: return "Cross";
    case PlanOp::Distinct: return "Distinct";
    case PlanOp::Union: return "Union";
    case PlanOp::DifferenceAll: return "DifferenceAll";
    case PlanOp::CountAgg: return "CountAgg";
    case PlanOp::MapOp: return "MapOp";
    case PlanOp::RowTag: return "RowTag";
    case PlanOp::RowNum: return "RowNum";
    case PlanOp::StepJoin: return "StepJoin";
    case PlanOp::DocLookup: return "DocLookup";
    case PlanOp::IdLookup: return "IdLookup";
    case PlanOp::NodeConstructor: return "NodeConstructor";
    case PlanOp::LiteralTable: return "LiteralTable";
    case PlanOp::RecInput: return "RecInput";
    case PlanOp::RecOutput: return "RecOutput";
    case PlanOp::Mu: return "Mu";
    case PlanOp::MuDelta: return "MuDelta";
  }
  return "?";
}

PushClass push_class(PlanOp op) {
  switch (op) {
    case PlanOp::Project:
    case PlanOp::Select:
    case PlanOp::MapOp:
    case PlanOp::RowTag:
    case PlanOp::StepJoin:
    case PlanOp::RecOutput:
    case PlanOp::Mu:
    case PlanOp::MuDelta:
      return PushClass::Unary;
    case PlanOp::Join:
    case PlanOp::Cross:
    case PlanOp::Union:
      return PushClass::Binary;
    case PlanOp::Distinct:
    case PlanOp::DifferenceAll:
    case PlanOp::CountAgg:
    case PlanOp::RowNum:
    case PlanOp::NodeConstructor:
      return PushClass::Blocking;
    case PlanOp::DocLookup:
    case PlanOp::IdLookup:
    case PlanOp::LiteralTable:
    case PlanOp::RecInput:
      return PushClass::Leaf;
  }
  return PushClass::Leaf;
}

std::vector<PlanNodePtr> collect_plan_nodes(const PlanNodePtr& root) {
  std::vector<PlanNodePtr> out;
  std::set<const PlanNode*> seen;
  std::vector<PlanNodePtr> stack{root};
  while (!stack.empty()) {
    PlanNodePtr node = stack.back();
    stack.pop_back();
    if (!node || seen.contains(node.get())) continue;
    seen.insert(node.get());
    out.push_back(node);
    for (const PlanNodePtr& c : node->children) stack.push_back(c);
    if (node->body_output) stack.push_back(node->body_output);
    if (node->body_input) stack.push_back(node->body_input);
  }
  return out;
}

namespace {

std::string params_text(const PlanNode& n) {
  std::ostringstream out;
  switch (n.op) {
    case PlanOp::Project: {
      bool first = true;
      for (const auto& [to, from] : n.renamings) {
        if (!first) out << ",";
        first = false;
        out << to;
        if (to != from) out << ":" << from;
      }
      break;
    }
    case PlanOp::Select:
      out << n.column;
      break;
    case PlanOp::Join: {
      bool first = true;
      for (const auto& [l, r] : n.join_on) {
        if (!first) out << ",";
        first = false;
        out << l << "=" << r;
      }
      break;
    }
    case PlanOp::CountAgg:
      out << n.column << "/" << n.group_by;
      break;
    case PlanOp::MapOp: {
      switch (n.map.fn) {
        case MapSpec::Fn::Compare: out << "cmp"; break;
        case MapSpec::Fn::Arith: out << "arith"; break;
        case MapSpec::Fn::StringValue: out << "strval"; break;
        case MapSpec::Fn::Const: out << "const " << cell_to_string(n.map.const_value); break;
      }
      out << "->" << n.map.out;
      break;
    }
    case PlanOp::RowTag:
      out << n.column;
      break;
    case PlanOp::RowNum: {
      out << n.column << ":<";
      for (std::size_t i = 0; i < n.order_cols.size(); ++i)
        out << (i ? "," : "") << n.order_cols[i];
      out << ">/" << n.partition;
      if (n.order_bookkeeping) out << " ddo";
      break;
    }
    case PlanOp::Distinct:
      if (n.order_bookkeeping) out << "ddo";
      break;
    case PlanOp::StepJoin:
      out << to_string(n.axis) << "::" << to_string(n.test);
      break;
    case PlanOp::DocLookup:
    case PlanOp::IdLookup:
      out << (n.uri.empty() ? "<default>" : n.uri);
      break;
    case PlanOp::LiteralTable: {
      for (std::size_t i = 0; i < n.schema.size(); ++i) out << (i ? "|" : "") << n.schema[i];
      out << " rows=" << n.rows.size();
      break;
    }
    case PlanOp::Mu:
    case PlanOp::MuDelta:
      out << "input=" << n.body_input->id << " output=" << n.body_output->id;
      break;
    default:
      break;
  }
  return out.str();
}

}  // namespace

std::string plan_to_text(const PlanNodePtr& root) {
  // stable ids: topological numbering, leaves first
  std::vector<PlanNodePtr> nodes = collect_plan_nodes(root);
  std::map<const PlanNode*, std::size_t> order;
  std::vector<const PlanNode*> sorted;
  // post-order from root for a deterministic layout
  std::set<const PlanNode*> visited;
  auto visit = [&](auto&& self, const PlanNodePtr& n) -> void {
    if (!n || visited.contains(n.get())) return;
    visited.insert(n.get());
    for (const PlanNodePtr& c : n->children) self(self, c);
    if (n->body_input) self(self, n->body_input);
    if (n->body_output) self(self, n->body_output);
    order[n.get()] = sorted.size();
    sorted.push_back(n.get());
  };
  visit(visit, root);
  std::ostringstream out;
  for (const PlanNode* n : sorted) {
    const_cast<PlanNode*>(n)->id = order[n];
  }
  for (const PlanNode* n : sorted) {
    out << order[n] << " " << to_string(n->op);
    std::string params = params_text(*n);
    if (!params.empty()) out << " " << params;
    if (!n->children.empty()) {
      out << " <-";
      for (const PlanNodePtr& c : n->children) out << " " << order[c.get()];
    }
    out << "\n";
  }
  return out.str();
}

Sequence decode_result(const Table& table, const NodeStore& store) {
  (void)store;
  std::size_t item_col = table.col("item");
  std::size_t iter_col = table.has_col("iter") ? table.col("iter") : item_col;
  std::size_t pos_col = table.has_col("pos") ? table.col("pos") : item_col;
  std::vector<std::vector<Cell>> rows = table.rows;
  std::sort(rows.begin(), rows.end(),
            [&](const std::vector<Cell>& a, const std::vector<Cell>& b) {
              if (a[iter_col] != b[iter_col]) return a[iter_col] < b[iter_col];
              if (a[pos_col] != b[pos_col]) return a[pos_col] < b[pos_col];
              return a[item_col] < b[item_col];
            });
  Sequence out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(cell_to_item(row[item_col]));
  return out;
}

Table sequence_to_table(const Sequence& s, std::int64_t iter) {
  Table t;
  t.columns = {"iter", "pos", "item"};
  std::int64_t pos = 0;
  for (const Item& item : s) {
    t.rows.push_back({Cell(iter), Cell(++pos), item_to_cell(item)});
  }
  return t;
}

PlanNodePtr to_mu_delta(const PlanNodePtr& mu) {
  if (mu->op != PlanOp::Mu) throw_error(ErrorKind::MalformedDag, "to_mu_delta expects a Mu node");
  auto copy = std::make_shared<PlanNode>(*mu);
  copy->op = PlanOp::MuDelta;
  return copy;
}

}  // namespace fixq
