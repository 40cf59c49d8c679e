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

#include <random>

#include "doctest.h"
#include "fixq/algebra.hpp"
#include "fixq/fixpoint.hpp"
#include "fixq/parser.hpp"

#include "support/genexpr.hpp"

using namespace fixq;

namespace {

struct Fixture {
  NodeStore store;
  DocRegistry docs;
  Program program;
  Env env;
  PlanEvalContext ctx;

  Fixture() {
    env.store = &store;
    env.docs = &docs;
    env.program = &program;
    ctx.store = &store;
    ctx.docs = &docs;
  }

  NodeId load(const std::string& name, const std::string& xml) {
    NodeId doc = store.parse_document(xml);
    docs.register_document(name, doc);
    return doc;
  }

  CompiledBody compile_body(const std::string& var, const std::string& body) {
    return compile_fixpoint_body(var, desugar(parse_expression(body)), env);
  }

  PushOutcome check_body(const std::string& var, const std::string& body) {
    return push_up_check(simplify_for_check(compile_body(var, body)));
  }

  Table run_body(const CompiledBody& body, const Sequence& input) {
    PlanBindings bindings;
    bindings[body.body.input.get()] = sequence_to_table(input);
    return eval_plan(body.body.output, bindings, ctx);
  }

  Sequence interp(const std::string& text) {
    ExprPtr e = desugar(parse_expression(text));
    return eval(e, env);
  }
};

std::size_t count_ops(const PlanNodePtr& root, PlanOp op) {
  std::size_t n = 0;
  for (const PlanNodePtr& node : collect_plan_nodes(root)) {
    if (node->op == op) ++n;
  }
  return n;
}

const char* kChain3 =
    "<curriculum>"
    "<course code=\"c1\"><prerequisites><pre_code>c2</pre_code></prerequisites></course>"
    "<course code=\"c2\"><prerequisites><pre_code>c3</pre_code></prerequisites></course>"
    "<course code=\"c3\"><prerequisites/></course>"
    "</curriculum>";

}  // namespace

TEST_CASE("operator semantics: distinct, difference, aggregation") {
  Fixture fx;
  auto lit = std::make_shared<PlanNode>();
  lit->op = PlanOp::LiteralTable;
  lit->schema = {"iter", "item"};
  lit->rows = {{Cell(std::int64_t{1}), Cell(std::string("a"))},
               {Cell(std::int64_t{1}), Cell(std::string("a"))},
               {Cell(std::int64_t{1}), Cell(std::string("b"))}};

  auto distinct = std::make_shared<PlanNode>();
  distinct->op = PlanOp::Distinct;
  distinct->children = {lit};
  CHECK(eval_plan(distinct, {}, fx.ctx).rows.size() == 2);

  auto rhs = std::make_shared<PlanNode>();
  rhs->op = PlanOp::LiteralTable;
  rhs->schema = {"iter", "item"};
  rhs->rows = {{Cell(std::int64_t{1}), Cell(std::string("a"))}};
  auto diff = std::make_shared<PlanNode>();
  diff->op = PlanOp::DifferenceAll;
  diff->children = {lit, rhs};
  // bag semantics: one occurrence of (1,a) is removed, the other stays
  Table diffed = eval_plan(diff, {}, fx.ctx);
  REQUIRE(diffed.rows.size() == 2);

  auto agg = std::make_shared<PlanNode>();
  agg->op = PlanOp::CountAgg;
  agg->children = {lit};
  agg->column = "cnt";
  agg->group_by = "iter";
  Table counted = eval_plan(agg, {}, fx.ctx);
  REQUIRE(counted.rows.size() == 1);
  CHECK(std::get<std::int64_t>(counted.rows[0][counted.col("cnt")]) == 3);
}

TEST_CASE("compiling the bare variable projects the recursion input") {
  Fixture fx;
  CompiledBody body = fx.compile_body("x", "$x");
  REQUIRE(body.body.output->op == PlanOp::RecOutput);
  const PlanNodePtr& inner = body.body.output->children[0];
  CHECK(inner->op == PlanOp::RecInput);
  PushOutcome outcome = push_up_check(simplify_for_check(body));
  CHECK(outcome.distributive);
}

TEST_CASE("lookup-closure body compiles to the loop shape") {
  Fixture fx;
  fx.load("curriculum.xml", kChain3);
  fx.env.config.id_attribute = "code";
  CompiledBody body = fx.compile_body("x", "$x/id(./prerequisites/pre_code)");
  const PlanNodePtr& root = body.body.output;
  // peripheral projections, a loop template with the two steps, the id join
  CHECK(count_ops(root, PlanOp::StepJoin) == 2);
  CHECK(count_ops(root, PlanOp::IdLookup) == 1);
  CHECK(count_ops(root, PlanOp::RowTag) == 1);
  CHECK(count_ops(root, PlanOp::Join) >= 2);
  CHECK(count_ops(root, PlanOp::Project) >= 2);
  bool has_loop = false;
  for (const TemplateInstance& t : body.templates) has_loop |= (t.name == "loop");
  CHECK(has_loop);

  std::vector<Axis> axes;
  std::vector<std::string> tests;
  for (const PlanNodePtr& n : collect_plan_nodes(root)) {
    if (n->op == PlanOp::StepJoin) {
      axes.push_back(n->axis);
      tests.push_back(to_string(n->test));
    }
  }
  CHECK(std::count(tests.begin(), tests.end(), "prerequisites") == 1);
  CHECK(std::count(tests.begin(), tests.end(), "pre_code") == 1);
}

TEST_CASE("count-guarded body compiles to the branch-and-join shape") {
  Fixture fx;
  CompiledBody body = fx.compile_body("x", "if (count($x/self::a)) then $x/* else ()");
  const PlanNodePtr& root = body.body.output;
  CHECK(count_ops(root, PlanOp::CountAgg) == 1);
  CHECK(count_ops(root, PlanOp::StepJoin) == 2);  // self::a and child::*
  CHECK(count_ops(root, PlanOp::Join) == 1);      // the guard semijoin
}

TEST_CASE("push-up verdicts on the canonical bodies") {
  Fixture fx;
  fx.load("curriculum.xml", kChain3);
  fx.env.config.id_attribute = "code";

  PushOutcome closure = fx.check_body("x", "$x/id(./prerequisites/pre_code)");
  CHECK(closure.distributive);
  CHECK(closure.big_steps >= 1);  // across the lookup loop template

  PushOutcome guarded = fx.check_body("x", "if (count($x/self::a)) then $x/* else ()");
  CHECK_FALSE(guarded.distributive);
  CHECK(guarded.blocker == "CountAgg");

  PushOutcome positional = fx.check_body("x", "$x[1]");
  CHECK_FALSE(positional.distributive);
  CHECK(positional.blocker == "RowNum");

  // the unfolded lookup: a join carries the comparison, so the push succeeds
  PushOutcome unfolded = fx.check_body(
      "x",
      "for $c in doc(\"curriculum.xml\")/curriculum/course "
      "return if ($c/@code = $x/prerequisites/pre_code) then $c else ()");
  CHECK(unfolded.distributive);

  // as does the lookup with the variable free in its argument
  PushOutcome lookup_arg = fx.check_body("x", "id($x/prerequisites/pre_code)");
  CHECK(lookup_arg.distributive);

  // constructors block even off the marked path
  PushOutcome ctor = fx.check_body("x", "($x/child::*, element a {})");
  CHECK_FALSE(ctor.distributive);
  CHECK(ctor.blocker == "NodeConstructor");

  // nested fixpoints are rejected pending clarification
  PushOutcome nested =
      fx.check_body("x", "with $y seeded by $x recurse $y/child::*");
  CHECK_FALSE(nested.distributive);
  CHECK(nested.blocker == "nested fixpoint");

  // markers merge at unions (the goal shape of the push-up)
  PushOutcome self_union = fx.check_body("x", "$x/child::a union $x/child::b");
  CHECK(self_union.distributive);

  // but a join of two marked inputs conservatively fails
  PushOutcome nonlinear = fx.check_body("x", "$x[. = $x]");
  CHECK_FALSE(nonlinear.distributive);
  CHECK(nonlinear.blocker.find("non-linear") != std::string::npos);
}

TEST_CASE("simplify_for_check drops only ddo bookkeeping") {
  Fixture fx;
  CompiledBody body = fx.compile_body("x", "$x/child::a");
  std::size_t distinct_before = count_ops(body.body.output, PlanOp::Distinct);
  std::size_t rownum_before = count_ops(body.body.output, PlanOp::RowNum);
  CHECK(distinct_before >= 1);
  CHECK(rownum_before >= 1);
  CompiledBody simplified = simplify_for_check(body);
  CHECK(count_ops(simplified.body.output, PlanOp::Distinct) == 0);
  CHECK(count_ops(simplified.body.output, PlanOp::RowNum) == 0);
  // the original is untouched
  CHECK(count_ops(body.body.output, PlanOp::Distinct) == distinct_before);

  // a plan without bookkeeping is unchanged
  CompiledBody bare = fx.compile_body("x", "$x");
  CompiledBody bare_simplified = simplify_for_check(bare);
  CHECK(collect_plan_nodes(bare_simplified.body.output).size() ==
        collect_plan_nodes(bare.body.output).size());

  // user-visible aggregation is never removed
  CompiledBody guarded = fx.compile_body("x", "if (count($x/self::a)) then $x/* else ()");
  CHECK(count_ops(simplify_for_check(guarded).body.output, PlanOp::CountAgg) == 1);
}

TEST_CASE("positional predicates keep their semantic row numbering") {
  Fixture fx;
  CompiledBody body = fx.compile_body("x", "$x[1]");
  CompiledBody simplified = simplify_for_check(body);
  CHECK(count_ops(simplified.body.output, PlanOp::RowNum) == 1);
}

TEST_CASE("plans serialize one node per line") {
  Fixture fx;
  CompiledBody body = fx.compile_body("x", "$x/child::a");
  std::string text = plan_to_text(body.body.output);
  CHECK(text.find("RecInput") != std::string::npos);
  CHECK(text.find("StepJoin child::a") != std::string::npos);
  CHECK(text.find("RecOutput") != std::string::npos);
  // id, op, params, children on each line
  CHECK(text.find("<- ") != std::string::npos);

  // golden shape for the guard body
  CompiledBody guarded = fx.compile_body("x", "if (count($x/self::a)) then $x/* else ()");
  std::string guarded_text = plan_to_text(guarded.body.output);
  CHECK(guarded_text.find("CountAgg item/iter") != std::string::npos);
  CHECK(guarded_text.find("StepJoin self::a") != std::string::npos);
  CHECK(guarded_text.find("StepJoin child::*") != std::string::npos);
}

TEST_CASE("fixpoint over tables matches the interpreter on the chain") {
  Fixture fx;
  fx.load("curriculum.xml", kChain3);
  fx.env.config.id_attribute = "code";
  fx.ctx.id_attribute = "code";

  Program q = desugar(parse_query(
      "with $x seeded by doc(\"curriculum.xml\")/curriculum/course[@code = \"c1\"] "
      "recurse $x/id(./prerequisites/pre_code)"));
  fx.program = q;

  CompileEnv cenv;
  cenv.store = &fx.store;
  cenv.docs = &fx.docs;
  cenv.program = &fx.program;
  cenv.id_attribute = "code";
  Plan plan = compile_query(q, cenv);
  Table table = eval_plan(plan.root, {}, fx.ctx);
  Sequence from_plan = decode_result(table, fx.store);

  Sequence from_interp = fx.interp(
      "with $x seeded by doc(\"curriculum.xml\")/curriculum/course[@code = \"c1\"] "
      "recurse $x/id(./prerequisites/pre_code)");
  CHECK(set_equal(from_plan, from_interp));
  CHECK(from_interp.size() == 2);  // c2 and c3
}

TEST_CASE("mu and mu-delta agree on push-certified bodies") {
  Fixture fx;
  fx.load("curriculum.xml", kChain3);
  fx.env.config.id_attribute = "code";
  fx.ctx.id_attribute = "code";

  Program q = desugar(parse_query(
      "with $x seeded by doc(\"curriculum.xml\")/curriculum/course[@code = \"c1\"] "
      "recurse $x/id(./prerequisites/pre_code)"));
  fx.program = q;
  CompileEnv cenv;
  cenv.store = &fx.store;
  cenv.docs = &fx.docs;
  cenv.program = &fx.program;
  cenv.id_attribute = "code";
  Plan plan = compile_query(q, cenv);
  REQUIRE(plan.root->op == PlanOp::Mu);
  PlanNodePtr mu_delta = to_mu_delta(plan.root);
  Table naive = eval_plan(plan.root, {}, fx.ctx);
  Table delta = eval_plan(mu_delta, {}, fx.ctx);
  CHECK(set_equal(decode_result(naive, fx.store), decode_result(delta, fx.store)));
}

TEST_CASE("differential: compiled plans match the interpreter across the subset") {
  Fixture fx;
  fx.load("t.xml",
          "<root><a k=\"1\"><b/><c/></a><a k=\"2\"><b><c/></b></a><d>txt</d></root>");
  const char* corpus[] = {
      "doc(\"t.xml\")/root/a",
      "doc(\"t.xml\")//c",
      "doc(\"t.xml\")/root/a[@k = \"2\"]/descendant::*",
      "for $v in doc(\"t.xml\")/root/a return $v/child::*",
      "let $v := doc(\"t.xml\")//b return $v/parent::*",
      "doc(\"t.xml\")//b union doc(\"t.xml\")//c",
      "doc(\"t.xml\")//* except doc(\"t.xml\")//c",
      "if (count(doc(\"t.xml\")//c)) then doc(\"t.xml\")//b else ()",
      "if (empty(doc(\"t.xml\")//nope)) then doc(\"t.xml\")//b else doc(\"t.xml\")//c",
      "(doc(\"t.xml\")//b)[1]",
      "doc(\"t.xml\")//a[child::b]",
  };
  for (const char* text : corpus) {
    CAPTURE(text);
    Program q = desugar(parse_query(text));
    fx.program = q;
    CompileEnv cenv;
    cenv.store = &fx.store;
    cenv.docs = &fx.docs;
    cenv.program = &fx.program;
    Plan plan = compile_query(q, cenv);
    Sequence from_plan = decode_result(eval_plan(plan.root, {}, fx.ctx), fx.store);
    Sequence from_interp = fx.interp(text);
    CHECK(set_equal(from_plan, from_interp));
  }
}

TEST_CASE("exceeding the subset raises Unsupported") {
  Fixture fx;
  CompileEnv cenv;
  cenv.store = &fx.store;
  cenv.docs = &fx.docs;
  auto expect_unsupported = [&](const std::string& text) {
    Program q = desugar(parse_query(text));
    cenv.program = &q;
    try {
      compile_query(q, cenv);
      FAIL_CHECK("expected Unsupported for: " << text);
    } catch (const EngineError& e) {
      CHECK(e.kind() == ErrorKind::Unsupported);
    }
  };
  expect_unsupported("declare function f($v) { $v }; f(doc(\"t.xml\"))");
  expect_unsupported("for $v at $p in doc(\"t.xml\")//a return $v");
  expect_unsupported("typeswitch (doc(\"t.xml\")) case node() return 1 default return 2");
}

TEST_CASE("push soundness: certified plans satisfy the union splitting equality") {
  Fixture fx;
  std::mt19937_64 doc_rng(5);
  NodeId doc = fx.load("t.xml", testsupport::random_tree_xml(doc_rng));
  std::vector<NodeId> pool;
  for (const Item& item : fx.store.axis_step(doc, Axis::DescendantOrSelf, NodeTest::any_node()))
    pool.push_back(item.node_id());

  testsupport::SafeBodyGen gen(17, "x", /*compilable_only=*/true);
  std::mt19937_64& rng = gen.rng();
  std::size_t passed = 0;
  std::size_t attempts = 0;
  while (passed < 60 && attempts < 600) {
    ++attempts;
    ExprPtr body_expr = gen.gen(2);
    CompiledBody body;
    try {
      body = compile_fixpoint_body("x", desugar(body_expr), fx.env);
    } catch (const EngineError&) {
      continue;
    }
    PushOutcome outcome = push_up_check(simplify_for_check(body));
    if (!outcome.distributive) continue;
    ++passed;

    Sequence whole;
    std::size_t len = 1 + rng() % 5;
    for (std::size_t i = 0; i < len; ++i) whole.push_back(Item::node(pool[rng() % pool.size()]));
    std::size_t cut = rng() % (whole.size() + 1);
    Sequence left(whole.begin(), whole.begin() + cut);
    Sequence right(whole.begin() + cut, whole.end());

    Table on_whole = fx.run_body(body, ddo(whole));
    Table on_left = fx.run_body(body, left.empty() ? Sequence{} : ddo(left));
    Table on_right = fx.run_body(body, right.empty() ? Sequence{} : ddo(right));
    Sequence split = decode_result(on_left, fx.store);
    Sequence rest = decode_result(on_right, fx.store);
    split.insert(split.end(), rest.begin(), rest.end());
    CHECK_MESSAGE(set_equal(decode_result(on_whole, fx.store), split),
                  "plan split equality failed for: ", to_query_string(body_expr));

    // and the two fixpoint operators agree over this certified body
    auto seed = std::make_shared<PlanNode>();
    seed->op = PlanOp::LiteralTable;
    seed->schema = {"iter", "pos", "item"};
    seed->rows = sequence_to_table(ddo(whole)).rows;
    auto mu = std::make_shared<PlanNode>();
    mu->op = PlanOp::Mu;
    mu->children = {seed};
    mu->body_input = body.body.input;
    mu->body_output = body.body.output;
    Sequence mu_result = decode_result(eval_plan(mu, {}, fx.ctx), fx.store);
    Sequence mu_delta_result = decode_result(eval_plan(to_mu_delta(mu), {}, fx.ctx), fx.store);
    CHECK_MESSAGE(set_equal(mu_result, mu_delta_result),
                  "Mu and MuDelta disagree on certified body: ", to_query_string(body_expr));
  }
  CHECK(passed >= 60);
}

TEST_CASE("node constructors refuse to execute at the plan level") {
  Fixture fx;
  CompiledBody body = fx.compile_body("x", "($x/child::*, element a {})");
  PlanBindings bindings;
  bindings[body.body.input.get()] = sequence_to_table({});
  CHECK_THROWS_AS(eval_plan(body.body.output, bindings, fx.ctx), EngineError);
}
