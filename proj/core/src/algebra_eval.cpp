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
// Bag interpreter for the plan dialect. Shared subplans evaluate once per
// run (memoized per node); fixpoint bodies re-evaluate per iteration with a
// fresh memo, since their RecInput binding changes.

#include <algorithm>
#include <map>
#include <set>

#include "fixq/algebra.hpp"
#include "fixq/errors.hpp"

namespace fixq {

namespace {

using Row = std::vector<Cell>;

bool cell_truthy(const Cell& cell) {
  if (const auto* b = std::get_if<bool>(&cell)) return *b;
  throw_error(ErrorKind::SchemaMismatch, "Select on a non-boolean column");
}

// (iter,item) pairs as a set, for fixpoint termination checks.
std::set<std::pair<Cell, Cell>> iter_item_set(const Table& t) {
  std::size_t ic = t.col("iter");
  std::size_t vc = t.col("item");
  std::set<std::pair<Cell, Cell>> out;
  for (const Row& row : t.rows) out.emplace(row[ic], row[vc]);
  return out;
}

Table from_iter_item_set(const std::set<std::pair<Cell, Cell>>& set) {
  Table t;
  t.columns = {"iter", "pos", "item"};
  std::map<Cell, std::int64_t> pos_within;
  for (const auto& [iter, item] : set) {  // set order: iter, then item (document order)
    t.rows.push_back({iter, Cell(++pos_within[iter]), item});
  }
  return t;
}

class Interpreter {
 public:
  Interpreter(const PlanBindings& bindings, PlanEvalContext& ctx)
      : bindings_(bindings), ctx_(ctx) {}

  Table eval(const PlanNodePtr& node) {
    auto cached = memo_.find(node.get());
    if (cached != memo_.end()) return cached->second;
    Table result = compute(node);
    memo_.emplace(node.get(), result);
    return result;
  }

 private:
  Table child(const PlanNodePtr& node, std::size_t i) { return eval(node->children.at(i)); }

  Table compute(const PlanNodePtr& node) {
    switch (node->op) {
      case PlanOp::LiteralTable: {
        auto bound = bindings_.find(node.get());  // callers may override literals
        if (bound != bindings_.end()) return bound->second;
        Table t;
        t.columns = node->schema;
        t.rows = node->rows;
        return t;
      }
      case PlanOp::RecInput: {
        auto it = bindings_.find(node.get());
        if (it == bindings_.end())
          throw_error(ErrorKind::MalformedDag, "unbound RecInput leaf");
        return it->second;
      }
      case PlanOp::RecOutput:
        return child(node, 0);
      case PlanOp::Project: {
        Table in = child(node, 0);
        Table out;
        std::vector<std::size_t> sources;
        for (const auto& [to, from] : node->renamings) {
          out.columns.push_back(to);
          sources.push_back(in.col(from));
        }
        out.rows.reserve(in.rows.size());
        for (const Row& row : in.rows) {
          Row mapped;
          mapped.reserve(sources.size());
          for (std::size_t s : sources) mapped.push_back(row[s]);
          out.rows.push_back(std::move(mapped));
        }
        return out;
      }
      case PlanOp::Select: {
        Table in = child(node, 0);
        std::size_t c = in.col(node->column);
        Table out;
        out.columns = in.columns;
        for (const Row& row : in.rows) {
          if (cell_truthy(row[c])) out.rows.push_back(row);
        }
        return out;
      }
      case PlanOp::Join: {
        Table l = child(node, 0);
        Table r = child(node, 1);
        std::vector<std::size_t> lcols, rcols;
        for (const auto& [lc, rc] : node->join_on) {
          lcols.push_back(l.col(lc));
          rcols.push_back(r.col(rc));
        }
        std::vector<std::size_t> r_keep;
        Table out;
        out.columns = l.columns;
        for (std::size_t i = 0; i < r.columns.size(); ++i) {
          if (std::find(rcols.begin(), rcols.end(), i) != rcols.end()) continue;
          if (std::find(out.columns.begin(), out.columns.end(), r.columns[i]) !=
              out.columns.end())
            throw_error(ErrorKind::SchemaMismatch, "join column clash on " + r.columns[i]);
          r_keep.push_back(i);
          out.columns.push_back(r.columns[i]);
        }
        std::multimap<Row, const Row*> index;
        for (const Row& row : r.rows) {
          Row key;
          for (std::size_t c : rcols) key.push_back(row[c]);
          index.emplace(std::move(key), &row);
        }
        for (const Row& row : l.rows) {
          Row key;
          for (std::size_t c : lcols) key.push_back(row[c]);
          auto [begin, end] = index.equal_range(key);
          for (auto it = begin; it != end; ++it) {
            Row combined = row;
            for (std::size_t c : r_keep) combined.push_back((*it->second)[c]);
            out.rows.push_back(std::move(combined));
          }
        }
        return out;
      }
      case PlanOp::Cross: {
        Table l = child(node, 0);
        Table r = child(node, 1);
        Table out;
        out.columns = l.columns;
        for (const std::string& c : r.columns) {
          if (std::find(out.columns.begin(), out.columns.end(), c) != out.columns.end())
            throw_error(ErrorKind::SchemaMismatch, "cross column clash on " + c);
          out.columns.push_back(c);
        }
        for (const Row& lr : l.rows) {
          for (const Row& rr : r.rows) {
            Row combined = lr;
            combined.insert(combined.end(), rr.begin(), rr.end());
            out.rows.push_back(std::move(combined));
          }
        }
        return out;
      }
      case PlanOp::Distinct: {
        Table in = child(node, 0);
        std::sort(in.rows.begin(), in.rows.end());
        in.rows.erase(std::unique(in.rows.begin(), in.rows.end()), in.rows.end());
        return in;
      }
      case PlanOp::Union: {
        Table l = child(node, 0);
        Table r = child(node, 1);
        if (l.columns.size() != r.columns.size())
          throw_error(ErrorKind::SchemaMismatch, "union over different schemas");
        std::vector<std::size_t> order;
        for (const std::string& c : l.columns) order.push_back(r.col(c));
        for (const Row& row : r.rows) {
          Row mapped;
          mapped.reserve(order.size());
          for (std::size_t c : order) mapped.push_back(row[c]);
          l.rows.push_back(std::move(mapped));
        }
        return l;
      }
      case PlanOp::DifferenceAll: {
        Table l = child(node, 0);
        Table r = child(node, 1);
        std::vector<std::size_t> order;
        for (const std::string& c : l.columns) order.push_back(r.col(c));
        std::map<Row, std::size_t> budget;
        for (const Row& row : r.rows) {
          Row mapped;
          for (std::size_t c : order) mapped.push_back(row[c]);
          ++budget[mapped];
        }
        Table out;
        out.columns = l.columns;
        for (const Row& row : l.rows) {
          auto it = budget.find(row);
          if (it != budget.end() && it->second > 0) {
            --it->second;  // EXCEPT ALL removes one occurrence per right row
            continue;
          }
          out.rows.push_back(row);
        }
        return out;
      }
      case PlanOp::CountAgg: {
        Table in = child(node, 0);
        std::size_t g = in.col(node->group_by);
        std::map<Cell, std::int64_t> counts;
        for (const Row& row : in.rows) ++counts[row[g]];
        Table out;
        out.columns = {node->group_by, node->column};
        for (const auto& [key, count] : counts) out.rows.push_back({key, Cell(count)});
        return out;
      }
      case PlanOp::MapOp:
        return eval_map(node);
      case PlanOp::RowTag: {
        Table in = child(node, 0);
        in.columns.push_back(node->column);
        for (Row& row : in.rows) row.push_back(Cell(std::int64_t(++tag_counter_)));
        return in;
      }
      case PlanOp::RowNum: {
        Table in = child(node, 0);
        std::size_t p = in.col(node->partition);
        std::vector<std::size_t> order;
        for (const std::string& c : node->order_cols) order.push_back(in.col(c));
        std::vector<std::size_t> idx(in.rows.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
          if (in.rows[a][p] != in.rows[b][p]) return in.rows[a][p] < in.rows[b][p];
          for (std::size_t c : order) {
            if (in.rows[a][c] != in.rows[b][c]) return in.rows[a][c] < in.rows[b][c];
          }
          return false;
        });
        std::map<Cell, std::int64_t> counter;
        std::vector<std::int64_t> ranks(idx.size());
        for (std::size_t i : idx) ranks[i] = ++counter[in.rows[i][p]];
        in.columns.push_back(node->column);
        for (std::size_t i = 0; i < in.rows.size(); ++i) in.rows[i].push_back(Cell(ranks[i]));
        return in;
      }
      case PlanOp::StepJoin: {
        Table in = child(node, 0);
        std::size_t item = in.col("item");
        Table out;
        out.columns = in.columns;
        for (const Row& row : in.rows) {
          const auto* id = std::get_if<NodeId>(&row[item]);
          if (!id) throw_error(ErrorKind::TypeErr, "step join over an atomic item");
          for (const Item& target : ctx_.store->axis_step(*id, node->axis, node->test)) {
            Row mapped = row;
            mapped[item] = target.node_id();
            out.rows.push_back(std::move(mapped));
          }
        }
        return out;
      }
      case PlanOp::DocLookup: {
        NodeId doc = resolve_doc(node->uri);
        Table out;
        out.columns = {"pos", "item"};
        out.rows.push_back({Cell(std::int64_t{1}), Cell(doc)});
        return out;
      }
      case PlanOp::IdLookup: {
        NodeId doc = resolve_doc(node->uri);
        const auto& index = ctx_.docs->id_index(*ctx_.store, doc, ctx_.id_attribute);
        Table out;
        out.columns = {"id", "ref"};
        for (const auto& [value, element] : index) out.rows.push_back({Cell(value), Cell(element)});
        return out;
      }
      case PlanOp::NodeConstructor:
        throw_error(ErrorKind::Unsupported,
                    "node constructors execute only in the interpreter");
      case PlanOp::Mu:
      case PlanOp::MuDelta:
        return eval_fixpoint(node);
    }
    throw_error(ErrorKind::MalformedDag, "unknown plan operator");
  }

  Table eval_map(const PlanNodePtr& node) {
    Table in = child(node, 0);
    const MapSpec& spec = node->map;
    std::vector<std::size_t> inputs;
    for (const std::string& c : spec.inputs) inputs.push_back(in.col(c));
    std::optional<std::size_t> replace;
    if (std::find(in.columns.begin(), in.columns.end(), spec.out) != in.columns.end())
      replace = in.col(spec.out);
    if (!replace) in.columns.push_back(spec.out);
    for (Row& row : in.rows) {
      Cell value;
      switch (spec.fn) {
        case MapSpec::Fn::Const:
          value = spec.const_value;
          break;
        case MapSpec::Fn::StringValue: {
          Item item = cell_to_item(row[inputs.at(0)]);
          value = Cell(item_string_value(*ctx_.store, item));
          break;
        }
        case MapSpec::Fn::Compare: {
          Item lhs = cell_to_item(row[inputs.at(0)]);
          Item rhs = inputs.size() > 1 ? cell_to_item(row[inputs[1]])
                                       : cell_to_item(spec.const_value);
          value = Cell(coerced_compare(*ctx_.store, spec.comp, lhs, rhs));
          break;
        }
        case MapSpec::Fn::Arith: {
          auto num = [&](const Cell& cell) -> double {
            if (const auto* i = std::get_if<std::int64_t>(&cell)) return double(*i);
            if (const auto* d = std::get_if<double>(&cell)) return *d;
            if (const auto* s = std::get_if<std::string>(&cell)) {
              if (auto parsed = parse_number(*s)) return *parsed;
            }
            if (const auto* n = std::get_if<NodeId>(&cell)) {
              if (auto parsed = parse_number(ctx_.store->string_value(*n))) return *parsed;
            }
            throw_error(ErrorKind::TypeErr, "non-numeric cell in arithmetic");
          };
          double l = num(row[inputs.at(0)]);
          double r = num(inputs.size() > 1 ? row[inputs[1]] : spec.const_value);
          double v = 0;
          switch (spec.arith) {
            case ArithOp::Add: v = l + r; break;
            case ArithOp::Sub: v = l - r; break;
            case ArithOp::Mul: v = l * r; break;
            case ArithOp::IDiv:
              if (r == 0) throw_error(ErrorKind::DynamicError, "idiv by zero");
              v = std::int64_t(l / r);
              break;
          }
          if (v == std::int64_t(v)) {
            value = Cell(std::int64_t(v));
          } else {
            value = Cell(v);
          }
          break;
        }
      }
      if (replace) {
        row[*replace] = std::move(value);
      } else {
        row.push_back(std::move(value));
      }
    }
    return in;
  }

  // Recomputes pos as the per-iteration rank by item order.
  static Table with_positions(const std::set<std::pair<Cell, Cell>>& set) {
    return from_iter_item_set(set);
  }

  Table eval_body(const PlanNodePtr& node, const Table& input) {
    PlanBindings bindings = bindings_;
    bindings[node->body_input.get()] = input;
    Interpreter sub(bindings, ctx_);
    return sub.eval(node->body_output);
  }

  Table eval_fixpoint(const PlanNodePtr& node) {
    Table seed = child(node, 0);
    std::set<std::pair<Cell, Cell>> seed_set = iter_item_set(seed);
    std::size_t iterations = 0;
    auto guard = [&] {
      if (iterations >= ctx_.max_fixpoint_iterations)
        throw FixpointDivergenceError(ctx_.max_fixpoint_iterations);
      ++iterations;
    };
    guard();
    std::set<std::pair<Cell, Cell>> res = iter_item_set(eval_body(node, with_positions(seed_set)));
    if (node->op == PlanOp::Mu) {
      for (;;) {
        guard();
        std::set<std::pair<Cell, Cell>> next = iter_item_set(eval_body(node, with_positions(res)));
        next.insert(res.begin(), res.end());
        if (next == res) break;
        res = std::move(next);
      }
    } else {
      std::set<std::pair<Cell, Cell>> delta = res;
      while (!delta.empty()) {
        guard();
        std::set<std::pair<Cell, Cell>> fed =
            iter_item_set(eval_body(node, with_positions(delta)));
        delta.clear();
        for (const auto& pair : fed) {
          if (!res.contains(pair)) delta.insert(pair);
        }
        res.insert(delta.begin(), delta.end());
      }
    }
    return with_positions(res);
  }

  NodeId resolve_doc(const std::string& uri) {
    if (!ctx_.docs) throw_error(ErrorKind::DynamicError, "no document registry");
    if (uri.empty()) {
      if (auto single = ctx_.docs->single_document()) return *single;
      throw_error(ErrorKind::DynamicError, "no unambiguous default document");
    }
    return ctx_.docs->open(*ctx_.store, uri);
  }

  const PlanBindings& bindings_;
  PlanEvalContext& ctx_;
  std::map<const PlanNode*, Table> memo_;
  std::uint64_t tag_counter_ = 0;
};

}  // namespace

Table eval_plan(const PlanNodePtr& root, const PlanBindings& bindings, PlanEvalContext& ctx) {
  Interpreter interp(bindings, ctx);
  return interp.eval(root);
}

}  // namespace fixq
