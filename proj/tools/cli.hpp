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

#ifndef FIXQ_CLI_HPP
#define FIXQ_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fixq::cli {

// Exit codes (stable, see README): 0 success, 1 usage, 2 query error,
// 3 fixpoint divergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitQueryError = 2;
inline constexpr int kExitDivergence = 3;

struct RunOptions {
  std::string query_path;
  std::string doc_path;  // optional
  std::string strategy = "naive";
  std::string check = "both";
  std::size_t max_iterations = 10000;
  std::string id_attribute = "id";
  std::string stats_path;  // optional: one JSON report
  std::string out_path;    // optional: full result serialization
};

struct AnalyzeOptions {
  std::string query_path;
  std::string emit_plan_path;  // optional
  std::string id_attribute = "id";
};

struct GenOptions {
  std::string family;
  std::string out_path;
  std::string oracle_path;  // optional sidecar
  std::optional<std::uint64_t> seed;
  std::size_t size = 0;  // courses/persons/speeches/patients, family-dependent
  std::string topology = "random";
  std::size_t fanout = 3;
  std::size_t window = 0;  // 0 = derived from size
  double cycle_probability = 0.0;
  std::size_t max_run = 7;
  std::size_t depth = 5;
  std::string id_attribute;  // curriculum only; default per family
  std::string preset;        // chain36 | medium | large | cycle3 (curriculum)
};

struct BenchOptions {
  std::string family = "curriculum";
  std::vector<std::size_t> sizes;
  std::size_t repeat = 1;
  std::string out_path;  // CSV
  std::string work_dir;  // where generated documents land; default: temp
  std::optional<std::uint64_t> seed;
  std::size_t max_iterations = 100000;
};

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err);
int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);

/// Full argv interface (CLI11).
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fixq::cli

#endif  // FIXQ_CLI_HPP
