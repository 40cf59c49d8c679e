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

#include "doctest.h"
#include "fixq/datagen.hpp"
#include "fixq/eval.hpp"
#include "fixq/fixpoint.hpp"
#include "fixq/parser.hpp"
#include "fixq/queries.hpp"

#include "support/oracle.hpp"

using namespace fixq;

namespace {

testsupport::Graph graph_of(const GeneratedData& data) {
  testsupport::Graph g;
  for (const auto& [from, to] : parse_sidecar(data.sidecar).edges) g.add_edge(from, to);
  return g;
}

// Edges as the document actually encodes them, independent of the sidecar.
testsupport::Graph curriculum_graph_from_xml(const std::string& xml) {
  NodeStore store;
  NodeId doc = store.parse_document(xml);
  testsupport::Graph g;
  for (const Item& course :
       store.axis_step(store.node(doc).children[0], Axis::Child, NodeTest::name("course"))) {
    const Node& c = store.node(course.node_id());
    std::string code;
    for (NodeId a : c.attributes) {
      if (store.node(a).name == "code") code = store.node(a).value;
    }
    for (const Item& pre :
         store.axis_step(course.node_id(), Axis::Descendant, NodeTest::name("pre_code"))) {
      g.add_edge(code, store.string_value(pre.node_id()));
    }
  }
  return g;
}

}  // namespace

TEST_CASE("identical specs generate identical bytes") {
  for (GenSpec spec : {curriculum_random(50, 9), auction_preset(12, 4),
                       dialog_preset(30, 5, 2), ancestry_preset(40, 4, 8)}) {
    GeneratedData first = generate(spec);
    GeneratedData second = generate(spec);
    CHECK(first.xml == second.xml);
    CHECK(first.sidecar == second.sidecar);
  }
  // different seeds differ
  CHECK(generate(curriculum_random(50, 9)).xml != generate(curriculum_random(50, 10)).xml);
}

TEST_CASE("chain curriculum is the expected chain") {
  GeneratedData data = gen_curriculum(curriculum_chain(3));
  testsupport::Graph g = graph_of(data);
  CHECK(g.forward_closure("c1") == std::set<std::string>{"c2", "c3"});
  CHECK(g.forward_closure("c3").empty());
  // document edges agree with the sidecar
  testsupport::Graph from_xml = curriculum_graph_from_xml(data.xml);
  CHECK(from_xml.adjacency() == g.adjacency());
}

TEST_CASE("cycle preset puts every course on the cycle") {
  GeneratedData data = gen_curriculum(curriculum_cycle3());
  testsupport::Graph g = graph_of(data);
  auto closure = g.forward_closure("c1");
  CHECK(closure == std::set<std::string>{"c1", "c2", "c3"});
}

TEST_CASE("random curriculum sidecar matches the document") {
  GeneratedData data = gen_curriculum(curriculum_random(120, 5));
  testsupport::Graph sidecar = graph_of(data);
  testsupport::Graph from_xml = curriculum_graph_from_xml(data.xml);
  CHECK(from_xml.adjacency() == sidecar.adjacency());
}

TEST_CASE("curriculum generator honors the configured id attribute") {
  GenSpec spec = curriculum_chain(2);
  spec.id_attribute = "id";
  GeneratedData data = gen_curriculum(spec);
  CHECK(data.xml.find("<course id=\"c1\">") != std::string::npos);
}

TEST_CASE("auction reachability matches the adjacency oracle") {
  GenSpec spec = auction_preset(10, 1);
  GeneratedData data = gen_auction(spec);
  testsupport::Graph g = graph_of(data);

  NodeStore store;
  DocRegistry docs;
  docs.register_document("auction.xml", store.parse_document(data.xml));
  Program q = desugar(parse_query(queries::kBidderNetwork));
  Env env;
  env.store = &store;
  env.docs = &docs;
  env.program = &q;
  Sequence reached = eval(q.main, env);

  std::set<std::string> ids;
  for (const Item& item : reached) {
    for (NodeId a : store.node(item.node_id()).attributes) {
      if (store.node(a).name == "id") ids.insert(store.node(a).value);
    }
  }
  CHECK(ids == g.forward_closure("p0"));
}

TEST_CASE("dialog plants the longest alternating run") {
  GeneratedData data = gen_dialog(dialog_preset(40, 7, 11));
  Sidecar sidecar = parse_sidecar(data.sidecar);
  CHECK(sidecar.answers.at("max_run") == "7");
  testsupport::Graph g = graph_of(data);
  CHECK(g.longest_chain() == 7);

  // the engine agrees: productive iterations equal the planted answer
  NodeStore store;
  DocRegistry docs;
  docs.register_document("dialog.xml", store.parse_document(data.xml));
  Program q = desugar(parse_query(queries::kDialogRuns));
  FixpointLog log;
  Env env;
  env.store = &store;
  env.docs = &docs;
  env.program = &q;
  env.log = &log;
  eval(q.main, env);
  REQUIRE(log.runs.size() == 1);
  // a run of 7 speeches walks 6 edges: 6 productive passes plus the
  // confirming one, so the iteration count equals the planted run length
  CHECK(log.runs[0].stats.iterations == 7);
}

TEST_CASE("ancestry nests to the configured depth") {
  GeneratedData data = gen_ancestry(ancestry_preset(60, 5, 3));
  CHECK(parse_sidecar(data.sidecar).answers.at("depth") == "5");

  NodeStore store;
  DocRegistry docs;
  docs.register_document("ancestry.xml", store.parse_document(data.xml));
  Program q = desugar(parse_query(queries::kAncestryDepth));
  FixpointLog log;
  Env env;
  env.store = &store;
  env.docs = &docs;
  env.program = &q;
  env.log = &log;
  eval(q.main, env);
  REQUIRE(log.runs.size() == 1);
  CHECK(log.runs[0].stats.iterations - 1 == 5);  // five productive passes
}

TEST_CASE("generators validate their parameters") {
  GenSpec bad;
  bad.family = GenFamily::Curriculum;
  bad.courses = 0;
  CHECK_THROWS_AS(gen_curriculum(bad), EngineError);
  GenSpec dialog_bad = dialog_preset(3, 7);
  CHECK_THROWS_AS(gen_dialog(dialog_bad), EngineError);
}
