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

#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "fixq/algebra.hpp"
#include "fixq/datagen.hpp"
#include "fixq/distcheck.hpp"
#include "fixq/errors.hpp"
#include "fixq/eval.hpp"
#include "fixq/fixpoint.hpp"
#include "fixq/parser.hpp"
#include "fixq/queries.hpp"
#include "fixq/xdm.hpp"

#include "CLI11.hpp"
#include "json.hpp"

namespace fixq::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorKind::DynamicError, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_error(ErrorKind::DynamicError, "cannot write " + path);
  out << content;
}

int exit_code_for(const EngineError& e) {
  return e.kind() == ErrorKind::FixpointDivergence ? kExitDivergence : kExitQueryError;
}

Strategy strategy_from(const std::string& name) {
  if (name == "naive") return Strategy::Naive;
  if (name == "delta") return Strategy::Delta;
  if (name == "auto") return Strategy::Auto;
  throw_error(ErrorKind::DynamicError, "unknown strategy " + name);
}

CheckMode check_from(const std::string& name) {
  if (name == "syntactic") return CheckMode::Syntactic;
  if (name == "algebraic") return CheckMode::Algebraic;
  if (name == "both") return CheckMode::Both;
  throw_error(ErrorKind::DynamicError, "unknown check mode " + name);
}

void collect_fixpoints(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (e->kind == ExprKind::Fixpoint) out.push_back(e);
  for (const ExprPtr& c : e->children) collect_fixpoints(c, out);
  if (e->kind == ExprKind::Typeswitch) {
    for (const TypeswitchCase& c : e->cases) collect_fixpoints(c.body, out);
    collect_fixpoints(e->default_case, out);
  }
}

/// Order-insensitive digest: item count plus a commutative hash over the
/// items' serialized forms (stable across runs and stores).
struct Digest {
  std::size_t count = 0;
  std::uint64_t hash = 0;
};

Digest digest_sequence(const NodeStore& store, const Sequence& s) {
  Digest d;
  d.count = s.size();
  for (const Item& item : s) {
    std::string repr = item.is_node() ? store.serialize(item.node_id())
                                      : item_string_value(store, item);
    d.hash += std::hash<std::string>{}(repr) | 1;
  }
  return d;
}

std::string serialize_sequence(const NodeStore& store, const Sequence& s) {
  std::string out;
  for (const Item& item : s) {
    if (item.is_node()) {
      out += store.serialize(item.node_id());
    } else {
      out += escape_text(item_string_value(store, item));
    }
    out += "\n";
  }
  return out;
}

nlohmann::json decision_json(const AutoDecision& d) {
  nlohmann::json j;
  j["chosen"] = to_string(d.chosen);
  j["reason"] = d.reason;
  if (d.syntactic) j["syntactic"] = nlohmann::json::parse(dist_verdict_json(*d.syntactic));
  if (d.algebraic) {
    nlohmann::json a;
    a["available"] = d.algebraic->available;
    a["distributive"] = d.algebraic->distributive;
    if (!d.algebraic->blocker.empty()) a["blocker"] = d.algebraic->blocker;
    a["big_steps"] = d.algebraic->big_steps;
    if (!d.algebraic->note.empty()) a["note"] = d.algebraic->note;
    j["algebraic"] = a;
  }
  return j;
}

struct LoadedQuery {
  Program program;
  NodeStore store;
  DocRegistry docs;
  Env env;
  FixpointLog log;
};

}  // namespace

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    auto query_text = read_file(options.query_path);
    Program program = desugar(parse_query(query_text));

    NodeStore store;
    DocRegistry docs;
    if (!options.doc_path.empty()) {
      NodeId doc = store.parse_document(read_file(options.doc_path));
      docs.register_document(options.doc_path, doc);
      docs.register_document(std::filesystem::path(options.doc_path).filename().string(), doc);
    }

    FixpointLog log;
    Env env;
    env.store = &store;
    env.docs = &docs;
    env.program = &program;
    env.config.id_attribute = options.id_attribute;
    env.config.max_fixpoint_iterations = options.max_iterations;
    env.config.strategy = strategy_from(options.strategy);
    env.config.check = check_from(options.check);
    env.log = &log;

    // Expert override: a forced delta run still reports uncertified bodies.
    if (env.config.strategy == Strategy::Delta) {
      std::vector<ExprPtr> fixpoints;
      collect_fixpoints(program.main, fixpoints);
      for (const Function& f : program.functions) collect_fixpoints(f.body, fixpoints);
      for (const ExprPtr& fp : fixpoints) {
        bool certified = false;
        if (env.config.check == CheckMode::Syntactic || env.config.check == CheckMode::Both) {
          certified = dist_safe(fp->name, fp->children[1], program.functions).safe;
        }
        if (!certified &&
            (env.config.check == CheckMode::Algebraic || env.config.check == CheckMode::Both)) {
          FixpointSpec spec{fp->name, fp->children[0], fp->children[1], &env};
          try {
            AlgebraicVerdict algebraic = algebraic_distributivity(spec);
            certified = algebraic.available && algebraic.distributive;
          } catch (const EngineError&) {
          }
        }
        if (!certified)
          err << "warning: recursion body for $" << fp->name
              << " is not certified distributive; delta may under-compute\n";
      }
    }

    auto started = std::chrono::steady_clock::now();
    Sequence result = eval(program.main, env);
    double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();

    Digest digest = digest_sequence(store, result);
    if (!options.out_path.empty()) {
      write_file(options.out_path, serialize_sequence(store, result));
    }
    if (!options.stats_path.empty()) {
      nlohmann::json report;
      report["query"] = options.query_path;
      report["doc"] = options.doc_path;
      report["strategy"] = options.strategy;
      report["result_count"] = digest.count;
      report["result_digest"] = digest.hash;
      report["wall_ms"] = wall_ms;
      nlohmann::json runs = nlohmann::json::array();
      for (const FixpointRunRecord& run : log.runs) {
        nlohmann::json r;
        r["stats"] = nlohmann::json::parse(fixpoint_stats_json(run.stats));
        if (run.decision) r["decision"] = decision_json(*run.decision);
        runs.push_back(r);
      }
      report["fixpoints"] = runs;
      write_file(options.stats_path, report.dump(2) + "\n");
    }
    out << "strategy: " << options.strategy << "\n";
    out << "items: " << digest.count << "\n";
    out << "digest: " << std::hex << digest.hash << std::dec << "\n";
    out << "wall_ms: " << wall_ms << "\n";
    for (std::size_t i = 0; i < log.runs.size(); ++i) {
      const FixpointRunRecord& run = log.runs[i];
      out << "fixpoint[" << i << "]: " << fixpoint_stats_json(run.stats) << "\n";
      if (run.decision)
        out << "decision[" << i << "]: " << decision_json(*run.decision).dump() << "\n";
    }
    if (result.size() <= 10000 && options.out_path.empty()) {
      out << serialize_sequence(store, result);
    }
    return kExitOk;
  } catch (const EngineError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
  try {
    Program program = desugar(parse_query(read_file(options.query_path)));
    NodeStore store;
    DocRegistry docs;
    Env env;
    env.store = &store;
    env.docs = &docs;
    env.program = &program;
    env.config.id_attribute = options.id_attribute;

    std::vector<ExprPtr> fixpoints;
    collect_fixpoints(program.main, fixpoints);
    for (const Function& f : program.functions) collect_fixpoints(f.body, fixpoints);
    if (fixpoints.empty()) out << "no fixpoint expressions\n";
    for (std::size_t i = 0; i < fixpoints.size(); ++i) {
      const ExprPtr& fp = fixpoints[i];
      out << "fixpoint[" << i << "] over $" << fp->name << ":\n";
      DistVerdict syntactic = dist_safe(fp->name, fp->children[1], program.functions);
      out << "  syntactic: " << (syntactic.safe ? "safe" : "unsafe");
      if (syntactic.safe) {
        out << " (rules:";
        for (const std::string& rule : syntactic.rule_trace) out << " " << rule;
        out << ")";
      } else if (syntactic.witness) {
        out << " (rule " << syntactic.witness->rule << ": " << syntactic.witness->premise
            << " | at " << syntactic.witness->expr << ")";
      }
      out << "\n";
      FixpointSpec spec{fp->name, fp->children[0], fp->children[1], &env};
      AlgebraicVerdict algebraic;
      try {
        algebraic = algebraic_distributivity(spec);
      } catch (const EngineError& e) {
        algebraic.available = false;
        algebraic.note = e.what();
      }
      out << "  algebraic: ";
      if (!algebraic.available) {
        out << "unavailable (" << algebraic.note << ")";
      } else if (algebraic.distributive) {
        out << "safe (push reaches the recursion output, " << algebraic.big_steps
            << " big steps)";
      } else {
        out << "unsafe (blocker: " << algebraic.blocker << ")";
      }
      out << "\n";
    }

    if (!options.emit_plan_path.empty()) {
      std::string text;
      CompileEnv cenv;
      cenv.store = &store;
      cenv.docs = &docs;
      cenv.program = &program;
      cenv.id_attribute = options.id_attribute;
      try {
        Plan plan = compile_query(program, cenv);
        text = plan_to_text(plan.root);
      } catch (const EngineError& whole) {
        if (whole.kind() != ErrorKind::Unsupported) throw;
        // fall back to the recursion bodies
        for (const ExprPtr& fp : fixpoints) {
          try {
            CompiledBody body = compile_fixpoint_body(fp->name, fp->children[1], env);
            text += "# body of fixpoint over $" + fp->name + "\n";
            text += plan_to_text(body.body.output);
          } catch (const EngineError& inner) {
            text += "# body of fixpoint over $" + fp->name + ": " + inner.what() + "\n";
          }
        }
        if (text.empty()) text = "# " + std::string(whole.what()) + "\n";
      }
      write_file(options.emit_plan_path, text);
      out << "plan written to " << options.emit_plan_path << "\n";
    }
    return kExitOk;
  } catch (const EngineError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

namespace {

std::uint64_t default_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  if (const char* env_seed = std::getenv("FIXQ_SEED")) {
    return std::strtoull(env_seed, nullptr, 10);
  }
  return 1;
}

GenSpec spec_from_options(const GenOptions& options) {
  GenSpec spec;
  spec.family = family_from_name(options.family);
  spec.rng_seed = default_seed(options.seed);
  switch (spec.family) {
    case GenFamily::Curriculum: {
      if (options.preset == "medium") {
        spec = curriculum_random(800);
      } else if (options.preset == "large") {
        spec = curriculum_random(4000);
      } else if (options.preset == "chain36") {
        spec = curriculum_chain(36);
      } else if (options.preset == "cycle3") {
        spec = curriculum_cycle3();
      } else {
        spec.courses = options.size ? options.size : 3;
        if (options.topology == "chain") spec.topology = CurriculumTopology::Chain;
        else if (options.topology == "cycle") spec.topology = CurriculumTopology::Cycle;
        else spec.topology = CurriculumTopology::Random;
        spec.fanout = options.fanout;
        spec.window = options.window ? options.window
                                     : std::max<std::size_t>(4, spec.courses / 25);
        spec.cycle_probability = options.cycle_probability;
      }
      spec.rng_seed = default_seed(options.seed);
      if (!options.id_attribute.empty()) spec.id_attribute = options.id_attribute;
      break;
    }
    case GenFamily::Auction:
      spec.persons = options.size ? options.size : 10;
      spec.auctions = spec.persons + spec.persons / 2;
      break;
    case GenFamily::Dialog:
      spec.speeches = options.size ? options.size : 40;
      spec.max_run = options.max_run;
      break;
    case GenFamily::Ancestry:
      spec.patients = options.size ? options.size : 100;
      spec.depth = options.depth;
      break;
  }
  return spec;
}

}  // namespace

int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err) {
  try {
    GenSpec spec = spec_from_options(options);
    GeneratedData data = generate(spec);
    write_file(options.out_path, data.xml);
    if (!options.oracle_path.empty()) write_file(options.oracle_path, data.sidecar);
    out << "wrote " << options.out_path;
    if (!options.oracle_path.empty()) out << " and " << options.oracle_path;
    out << "\n";
    return kExitOk;
  } catch (const EngineError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

namespace {

struct BenchCell {
  FixpointStats stats;
  Sequence result;
  double wall_ms = 0;
};

BenchCell bench_run(const Program& program, NodeStore& store, DocRegistry& docs,
                    Strategy strategy, const std::string& id_attribute,
                    std::size_t max_iterations) {
  FixpointLog log;
  Env env;
  env.store = &store;
  env.docs = &docs;
  env.program = &program;
  env.config.id_attribute = id_attribute;
  env.config.max_fixpoint_iterations = max_iterations;
  env.config.strategy = strategy;
  env.log = &log;
  auto started = std::chrono::steady_clock::now();
  Sequence result = eval(program.main, env);
  BenchCell cell;
  cell.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  cell.result = std::move(result);
  if (!log.runs.empty()) {
    cell.stats = log.runs.front().stats;
    for (std::size_t i = 1; i < log.runs.size(); ++i) {
      const FixpointStats& extra = log.runs[i].stats;
      cell.stats.iterations += extra.iterations;
      cell.stats.total_fed += extra.total_fed;
    }
  }
  return cell;
}

struct FamilySetup {
  std::string doc_name;
  std::string query;
  std::string id_attribute;
};

FamilySetup family_setup(GenFamily family) {
  switch (family) {
    case GenFamily::Curriculum:
      return {"curriculum.xml", queries::kCurriculumClosure, "code"};
    case GenFamily::Auction:
      return {"auction.xml", queries::kBidderNetwork, "id"};
    case GenFamily::Dialog:
      return {"dialog.xml", queries::kDialogRuns, "id"};
    case GenFamily::Ancestry:
      return {"ancestry.xml", queries::kAncestryDepth, "id"};
  }
  throw_error(ErrorKind::DynamicError, "unknown family");
}

GenSpec bench_spec(GenFamily family, std::size_t size, std::uint64_t seed) {
  switch (family) {
    case GenFamily::Curriculum: return curriculum_random(size, seed);
    case GenFamily::Auction: return auction_preset(size, seed);
    case GenFamily::Dialog: return dialog_preset(size, std::max<std::size_t>(3, size / 6), seed);
    case GenFamily::Ancestry: return ancestry_preset(size, 5, seed);
  }
  throw_error(ErrorKind::DynamicError, "unknown family");
}

}  // namespace

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err) {
  try {
    GenFamily family = family_from_name(options.family);
    FamilySetup setup = family_setup(family);
    Program program = desugar(parse_query(setup.query));
    std::uint64_t seed = default_seed(options.seed);

    std::filesystem::path work = options.work_dir.empty()
                                     ? std::filesystem::temp_directory_path() / "fixq_bench"
                                     : std::filesystem::path(options.work_dir);
    std::filesystem::create_directories(work);

    struct BenchRow {
      std::size_t size;
      std::string strategy;
      double wall_ms;
      std::size_t iterations, total_fed, result_size;
    };
    std::vector<BenchRow> rows;
    std::ostringstream csv;
    csv << "family,size,strategy,wall_ms,iterations,total_fed,result_size\n";
    for (std::size_t size : options.sizes) {
      try {
        GeneratedData data = generate(bench_spec(family, size, seed));
        std::filesystem::path doc_path =
            work / (options.family + "_" + std::to_string(size) + ".xml");
        write_file(doc_path.string(), data.xml);

        NodeStore store;
        DocRegistry docs;
        NodeId doc = store.parse_document(data.xml);
        docs.register_document(setup.doc_name, doc);

        for (Strategy strategy : {Strategy::Naive, Strategy::Delta}) {
          BenchCell best;
          for (std::size_t r = 0; r < std::max<std::size_t>(1, options.repeat); ++r) {
            BenchCell cell = bench_run(program, store, docs, strategy, setup.id_attribute,
                                       options.max_iterations);
            if (r == 0 || cell.wall_ms < best.wall_ms) best = std::move(cell);
          }
          if (strategy == Strategy::Delta) {
            BenchCell naive_again = bench_run(program, store, docs, Strategy::Naive,
                                              setup.id_attribute, options.max_iterations);
            if (!set_equal(naive_again.result, best.result))
              throw_error(ErrorKind::DynamicError,
                          "naive and delta disagree on " + options.family + " size " +
                              std::to_string(size));
          }
          csv << options.family << "," << size << "," << to_string(strategy) << ","
              << best.wall_ms << "," << best.stats.iterations << "," << best.stats.total_fed
              << "," << best.result.size() << "\n";
          rows.push_back({size, to_string(strategy), best.wall_ms, best.stats.iterations,
                          best.stats.total_fed, best.result.size()});
        }
      } catch (const EngineError& e) {
        csv << "# error," << options.family << "," << size << "," << e.what() << "\n";
        err << "error on size " << size << ": " << e.what() << "\n";
      }
    }
    if (options.out_path.empty()) {
      out << csv.str();
    } else if (options.out_path.ends_with(".json")) {
      nlohmann::json report = nlohmann::json::array();
      for (const BenchRow& row : rows) {
        report.push_back({{"family", options.family},
                          {"size", row.size},
                          {"strategy", row.strategy},
                          {"wall_ms", row.wall_ms},
                          {"iterations", row.iterations},
                          {"total_fed", row.total_fed},
                          {"result_size", row.result_size}});
      }
      write_file(options.out_path, report.dump(2) + "\n");
      out << "wrote " << options.out_path << "\n";
    } else {
      write_file(options.out_path, csv.str());
      out << "wrote " << options.out_path << "\n";
    }
    return kExitOk;
  } catch (const EngineError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fixq: a fixpoint-enabled mini-XQuery engine"};
  app.require_subcommand(1);

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "evaluate a query against a document");
  run_cmd->add_option("--query", run.query_path, "query file")->required();
  run_cmd->add_option("--doc", run.doc_path, "XML document file");
  run_cmd->add_option("--strategy", run.strategy, "naive|delta|auto")
      ->check(CLI::IsMember({"naive", "delta", "auto"}));
  run_cmd->add_option("--check", run.check, "syntactic|algebraic|both")
      ->check(CLI::IsMember({"syntactic", "algebraic", "both"}));
  run_cmd->add_option("--max-iter", run.max_iterations, "fixpoint iteration bound");
  run_cmd->add_option("--id-attr", run.id_attribute, "attribute treated as ID-typed");
  run_cmd->add_option("--stats", run.stats_path, "write a JSON run report");
  run_cmd->add_option("--out", run.out_path, "write the full result serialization");

  AnalyzeOptions analyze;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "distributivity analysis per fixpoint");
  analyze_cmd->add_option("--query", analyze.query_path, "query file")->required();
  analyze_cmd->add_option("--emit-plan", analyze.emit_plan_path, "write the plan DAG");
  analyze_cmd->add_option("--id-attr", analyze.id_attribute, "attribute treated as ID-typed");

  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate benchmark documents");
  gen_cmd->add_option("family", gen.family, "curriculum|auction|dialog|ancestry")->required();
  gen_cmd->add_option("--out", gen.out_path, "output XML file")->required();
  gen_cmd->add_option("--oracle", gen.oracle_path, "sidecar edge/answer file");
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt = gen_cmd->add_option("--seed", seed_value, "rng seed");
  gen_cmd->add_option("--size", gen.size, "courses/persons/speeches/patients");
  gen_cmd->add_option("--topology", gen.topology, "curriculum: chain|random|cycle");
  gen_cmd->add_option("--fanout", gen.fanout, "curriculum: max prerequisites per course");
  gen_cmd->add_option("--window", gen.window, "curriculum: forward window for prerequisites");
  gen_cmd->add_option("--cycle-prob", gen.cycle_probability, "curriculum: back-edge probability");
  gen_cmd->add_option("--max-run", gen.max_run, "dialog: planted longest run");
  gen_cmd->add_option("--depth", gen.depth, "ancestry: nesting depth");
  gen_cmd->add_option("--id-attr", gen.id_attribute, "curriculum: ID attribute name");
  gen_cmd->add_option("--preset", gen.preset, "curriculum: chain36|medium|large|cycle3");

  BenchOptions bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "naive vs delta benchmark matrix");
  bench_cmd->add_option("--family", bench.family, "curriculum|auction|dialog|ancestry");
  bench_cmd->add_option("--sizes", bench.sizes, "instance sizes")->delimiter(',')->required();
  bench_cmd->add_option("--repeat", bench.repeat, "timing repetitions per cell");
  bench_cmd->add_option("--out", bench.out_path, "CSV output path");
  bench_cmd->add_option("--workdir", bench.work_dir, "directory for generated documents");
  std::uint64_t bench_seed_value = 0;
  CLI::Option* bench_seed_opt = bench_cmd->add_option("--seed", bench_seed_value, "rng seed");
  bench_cmd->add_option("--max-iter", bench.max_iterations, "fixpoint iteration bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << "\n";
    return kExitUsage;
  }

  if (seed_opt->count() > 0) gen.seed = seed_value;
  if (bench_seed_opt->count() > 0) bench.seed = bench_seed_value;

  if (run_cmd->parsed()) return cmd_run(run, out, err);
  if (analyze_cmd->parsed()) return cmd_analyze(analyze, out, err);
  if (gen_cmd->parsed()) return cmd_gen(gen, out, err);
  if (bench_cmd->parsed()) return cmd_bench(bench, out, err);
  return kExitUsage;
}

}  // namespace fixq::cli
