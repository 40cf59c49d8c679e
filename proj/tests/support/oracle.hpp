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
// Test-side oracles, independent of every engine code path they check:
// plain BFS reachability over edge lists.

#ifndef FIXQ_TESTS_SUPPORT_ORACLE_HPP
#define FIXQ_TESTS_SUPPORT_ORACLE_HPP

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace testsupport {

class Graph {
 public:
  void add_edge(const std::string& from, const std::string& to) {
    adjacency_[from].push_back(to);
  }

  /// Nodes reachable from `start` by one or more edges (the start itself is
  /// included only if it lies on a cycle through itself).
  std::set<std::string> forward_closure(const std::string& start) const {
    std::set<std::string> seen;
    std::deque<std::string> frontier;
    auto expand = [&](const std::string& node) {
      auto it = adjacency_.find(node);
      if (it == adjacency_.end()) return;
      for (const std::string& next : it->second) {
        if (seen.insert(next).second) frontier.push_back(next);
      }
    };
    expand(start);
    while (!frontier.empty()) {
      std::string node = frontier.front();
      frontier.pop_front();
      expand(node);
    }
    return seen;
  }

  /// Longest directed path length (number of nodes) in an edge-list viewed
  /// as successor chains; used for planted dialog runs. Assumes chains
  /// (out-degree <= 1) and no cycles.
  std::size_t longest_chain() const {
    std::set<std::string> targets;
    for (const auto& [from, tos] : adjacency_) {
      for (const std::string& to : tos) targets.insert(to);
    }
    std::size_t best = 1;
    for (const auto& [from, tos] : adjacency_) {
      if (targets.contains(from)) continue;  // not a chain head
      std::size_t len = 1;
      std::string cur = from;
      while (true) {
        auto it = adjacency_.find(cur);
        if (it == adjacency_.end() || it->second.empty()) break;
        cur = it->second.front();
        ++len;
      }
      best = std::max(best, len);
    }
    return best;
  }

  const std::map<std::string, std::vector<std::string>>& adjacency() const { return adjacency_; }

 private:
  std::map<std::string, std::vector<std::string>> adjacency_;
};

}  // namespace testsupport

#endif  // FIXQ_TESTS_SUPPORT_ORACLE_HPP
