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

#ifndef FIXQ_PARSER_HPP
#define FIXQ_PARSER_HPP

#include <string_view>

#include "fixq/ast.hpp"

namespace fixq {

/// Parses a query: optional leading function declarations, then one main
/// expression. Throws QuerySyntaxError with position and expectation.
Program parse_query(std::string_view text);

/// Parses a single expression (no function declarations).
ExprPtr parse_expression(std::string_view text);

}  // namespace fixq

#endif  // FIXQ_PARSER_HPP
