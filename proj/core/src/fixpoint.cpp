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

#include "fixq/fixpoint.hpp"

#include <chrono>

#include "fixq/algebra.hpp"
#include "fixq/errors.hpp"

#include "json.hpp"

namespace fixq {

std::string fixpoint_stats_json(const FixpointStats& stats) {
  nlohmann::json j;
  j["algorithm"] = stats.algorithm;
  j["iterations"] = stats.iterations;
  j["fed_per_iteration"] = stats.fed_per_iteration;
  j["total_fed"] = stats.total_fed;
  j["result_size"] = stats.result_size;
  j["wall_ms"] = stats.wall_ms;
  return j.dump();
}

void log_fixpoint_run(Env& env, FixpointStats stats, std::optional<AutoDecision> decision) {
  if (!env.log) return;
  env.log->runs.push_back({std::move(stats), std::move(decision)});
}

namespace {

class Clock {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct BodyRunner {
  const FixpointSpec& spec;
  FixpointStats& stats;

  Sequence seed_value() const {
    Sequence value = eval(spec.seed, *spec.env);
    for (const Item& item : value) {
      if (!item.is_node())
        throw_error(ErrorKind::TypeErr, "fixpoint seed must evaluate to nodes only");
    }
    return ddo(value);
  }

  Sequence operator()(const Sequence& input) {
    if (stats.iterations >= spec.env->config.max_fixpoint_iterations)
      throw FixpointDivergenceError(spec.env->config.max_fixpoint_iterations);
    ++stats.iterations;
    stats.fed_per_iteration.push_back(input.size());
    Env& env = *spec.env;
    auto saved = env.vars.find(spec.var) != env.vars.end()
                     ? std::optional<Sequence>(env.vars[spec.var])
                     : std::nullopt;
    env.vars[spec.var] = input;
    Sequence out;
    try {
      out = eval(spec.body, env);
    } catch (...) {
      restore(env, saved);
      throw;
    }
    restore(env, saved);
    for (const Item& item : out) {
      if (!item.is_node())
        throw_error(ErrorKind::TypeErr, "fixpoint body produced an atomic item");
    }
    return out;
  }

 private:
  void restore(Env& env, std::optional<Sequence>& saved) {
    if (saved) {
      env.vars[spec.var] = std::move(*saved);
    } else {
      env.vars.erase(spec.var);
    }
  }
};

void finish(FixpointStats& stats, const Sequence& result, const Clock& clock) {
  stats.total_fed = 0;
  for (std::size_t fed : stats.fed_per_iteration) stats.total_fed += fed;
  stats.result_size = result.size();
  stats.wall_ms = clock.elapsed_ms();
}

}  // namespace

std::pair<Sequence, FixpointStats> run_naive(const FixpointSpec& spec) {
  Clock clock;
  FixpointStats stats;
  stats.algorithm = "naive";
  BodyRunner body{spec, stats};
  Sequence res = ddo(body(body.seed_value()));
  for (;;) {
    Sequence next = node_union(body(res), res);
    bool done = set_equal(next, res);
    res = std::move(next);
    if (done) break;
  }
  res = ddo(res);
  finish(stats, res, clock);
  return {std::move(res), std::move(stats)};
}

std::pair<Sequence, FixpointStats> run_delta(const FixpointSpec& spec) {
  Clock clock;
  FixpointStats stats;
  stats.algorithm = "delta";
  BodyRunner body{spec, stats};
  Sequence res = ddo(body(body.seed_value()));
  Sequence delta = res;
  do {
    delta = node_except(body(delta), res);
    res = node_union(delta, res);
  } while (!delta.empty());
  res = ddo(res);
  finish(stats, res, clock);
  return {std::move(res), std::move(stats)};
}

AlgebraicVerdict algebraic_distributivity(const FixpointSpec& spec) {
  AlgebraicVerdict verdict;
  try {
    CompiledBody compiled = compile_fixpoint_body(spec.var, spec.body, *spec.env);
    PushOutcome outcome = push_up_check(simplify_for_check(compiled));
    verdict.available = true;
    verdict.distributive = outcome.distributive;
    verdict.blocker = outcome.blocker;
    verdict.big_steps = outcome.big_steps;
  } catch (const EngineError& e) {
    if (e.kind() != ErrorKind::Unsupported) throw;
    verdict.available = false;
    verdict.note = e.what();
  }
  return verdict;
}

std::tuple<Sequence, FixpointStats, AutoDecision> run_auto(const FixpointSpec& spec,
                                                           CheckMode check) {
  AutoDecision decision;
  bool certified = false;
  std::string reason;
  if (check == CheckMode::Syntactic || check == CheckMode::Both) {
    const std::vector<Function> no_functions;
    const std::vector<Function>& functions =
        spec.env->program ? spec.env->program->functions : no_functions;
    decision.syntactic = dist_safe(spec.var, spec.body, functions,
                                   spec.env->config.reject_recursive_functions);
    if (decision.syntactic->safe) {
      certified = true;
      reason = "syntactic rules certify distributivity";
      if (!decision.syntactic->rule_trace.empty())
        reason += " (" + decision.syntactic->rule_trace.back() + ")";
    }
  }
  if (check == CheckMode::Algebraic || check == CheckMode::Both) {
    decision.algebraic = algebraic_distributivity(spec);
    if (decision.algebraic->available && decision.algebraic->distributive && !certified) {
      certified = true;
      reason = "union push-up reaches the recursion output (" +
               std::to_string(decision.algebraic->big_steps) + " big steps)";
    }
  }
  if (!certified) {
    if (decision.algebraic && decision.algebraic->available && !decision.algebraic->blocker.empty())
      reason = decision.algebraic->blocker + " blocks the union push-up";
    else if (decision.syntactic && decision.syntactic->witness)
      reason = "rule " + decision.syntactic->witness->rule + ": " +
               decision.syntactic->witness->premise;
    else
      reason = "no analyzer certified the body";
  }
  decision.chosen = certified ? Strategy::Delta : Strategy::Naive;
  decision.reason = reason;
  auto [result, stats] = certified ? run_delta(spec) : run_naive(spec);
  return {std::move(result), std::move(stats), std::move(decision)};
}

Sequence transitive_closure(const ExprPtr& step, const Item& context, Env& env) {
  ExprPtr fixpoint = desugar(mk_closure(step));
  std::optional<Focus> saved = env.focus;
  env.focus = Focus{context, 1, 1};
  try {
    Sequence result = eval(fixpoint, env);
    env.focus = saved;
    return result;
  } catch (...) {
    env.focus = saved;
    throw;
  }
}

}  // namespace fixq
