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
// The inflationary fixpoint operator over the evaluator:
//
//   res_0     = body(seed-value)
//   res_{i+1} = body(res_i) union res_i      until res stops growing
//
// Note that the seed value itself is not implicitly part of the result; it
// enters only if the body reaches it. The naive algorithm iterates exactly
// the recurrence; the delta algorithm feeds only the newly discovered nodes
// into the body per round, which is equivalent whenever the body is
// distributive for its recursion variable. Termination is set-equality of
// consecutive results (naive) or delta emptiness (delta), with a hard
// iteration bound so an undefined fixpoint surfaces as an error, not a hang.

#ifndef FIXQ_FIXPOINT_HPP
#define FIXQ_FIXPOINT_HPP

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fixq/distcheck.hpp"
#include "fixq/eval.hpp"

namespace fixq {

struct FixpointSpec {
  std::string var;
  ExprPtr seed;
  ExprPtr body;
  Env* env = nullptr;
};

struct FixpointStats {
  std::string algorithm;                        // "naive" | "delta"
  std::size_t iterations = 0;                   // number of body evaluations
  std::vector<std::size_t> fed_per_iteration;   // sizes passed to the body, seed call included
  std::size_t total_fed = 0;
  std::size_t result_size = 0;
  double wall_ms = 0.0;
};

std::string fixpoint_stats_json(const FixpointStats& stats);

/// Algebraic analyzer verdict as consumed by the auto strategy; `available`
/// is false when the body is outside the compilable subset.
struct AlgebraicVerdict {
  bool available = false;
  bool distributive = false;
  std::string blocker;
  std::size_t big_steps = 0;
  std::string note;
};

struct AutoDecision {
  Strategy chosen = Strategy::Naive;
  std::optional<DistVerdict> syntactic;
  std::optional<AlgebraicVerdict> algebraic;
  std::string reason;
};

struct FixpointRunRecord {
  FixpointStats stats;
  std::optional<AutoDecision> decision;
};

struct FixpointLog {
  std::vector<FixpointRunRecord> runs;
};

void log_fixpoint_run(Env& env, FixpointStats stats, std::optional<AutoDecision> decision);

std::pair<Sequence, FixpointStats> run_naive(const FixpointSpec& spec);
std::pair<Sequence, FixpointStats> run_delta(const FixpointSpec& spec);

/// Runs delta iff the selected analyzer(s) certify the body distributive for
/// the recursion variable (either certificate suffices; both are sound),
/// naive otherwise. The decision records which rule or operator decided.
std::tuple<Sequence, FixpointStats, AutoDecision> run_auto(const FixpointSpec& spec,
                                                           CheckMode check);

/// Compiles the body and runs the union push-up check on the plan.
AlgebraicVerdict algebraic_distributivity(const FixpointSpec& spec);

/// Transitive closure of a step expression from a context item: the
/// fixpoint of `$fresh/step` seeded by `.`, evaluated with the given focus.
Sequence transitive_closure(const ExprPtr& step, const Item& context, Env& env);

}  // namespace fixq

#endif  // FIXQ_FIXPOINT_HPP
