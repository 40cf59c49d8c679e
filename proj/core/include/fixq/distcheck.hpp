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
// Syntactic distributivity-safety judgment ds[$x](e): a sound, incomplete,
// bottom-up approximation of the distributivity property
//
//     e(X1 union X2)  is set-equal to  e(X1) union e(X2)
//
// for the recursion variable $x. Whatever construct no rule matches is
// conservatively unsafe when $x occurs free inside it; expressions without
// free $x are safe exactly when they cannot construct nodes (constructors
// mint a fresh identity per evaluation).

#ifndef FIXQ_DISTCHECK_HPP
#define FIXQ_DISTCHECK_HPP

#include <optional>
#include <string>
#include <vector>

#include "fixq/ast.hpp"

namespace fixq {

struct DistWitness {
  std::string expr;     // rendering of the innermost node that failed
  std::string rule;     // the rule whose precondition failed
  std::string premise;  // the failed precondition
};

struct DistVerdict {
  bool safe = false;
  std::optional<DistWitness> witness;       // present iff !safe
  std::vector<std::string> rule_trace;      // rules applied, bottom-up
};

/// Judges distributivity safety of `e` for variable `var`. Function calls
/// recurse into the callee body; recursive call cycles are cut by assuming
/// the pending judgment true (set `reject_recursive_functions` to fail them
/// instead).
DistVerdict dist_safe(const std::string& var, const ExprPtr& e,
                      const std::vector<Function>& functions,
                      bool reject_recursive_functions = false);

/// The distributivity hint: `for $fresh in $var return e[$var := $fresh]`,
/// which Rule For2 certifies whenever the rewritten body no longer mentions
/// `var`. Set-equal to `e` precisely when `e` was distributive for `var`.
ExprPtr hint_rewrite(const std::string& var, const ExprPtr& e);

std::string dist_verdict_json(const DistVerdict& v);

}  // namespace fixq

#endif  // FIXQ_DISTCHECK_HPP
