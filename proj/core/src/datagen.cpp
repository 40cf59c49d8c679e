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

#include "fixq/datagen.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "fixq/errors.hpp"

namespace fixq {

GenFamily family_from_name(const std::string& name) {
  if (name == "curriculum") return GenFamily::Curriculum;
  if (name == "auction") return GenFamily::Auction;
  if (name == "dialog") return GenFamily::Dialog;
  if (name == "ancestry") return GenFamily::Ancestry;
  throw_error(ErrorKind::DynamicError, "unknown generator family " + name);
}

const char* to_string(GenFamily family) {
  switch (family) {
    case GenFamily::Curriculum: return "curriculum";
    case GenFamily::Auction: return "auction";
    case GenFamily::Dialog: return "dialog";
    case GenFamily::Ancestry: return "ancestry";
  }
  return "?";
}

namespace {

struct SidecarBuilder {
  std::ostringstream out;

  void edge(const std::string& from, const std::string& to) { out << from << "\t" << to << "\n"; }
  void answer(const std::string& key, const std::string& value) {
    out << "# " << key << "\t" << value << "\n";
  }
  std::string str() const { return out.str(); }
};

std::string course_code(std::size_t i) { return "c" + std::to_string(i); }

}  // namespace

GeneratedData gen_curriculum(const GenSpec& spec) {
  if (spec.courses < 1) throw_error(ErrorKind::DynamicError, "curriculum needs courses >= 1");
  Rng rng(spec.rng_seed);
  std::size_t n = spec.courses;
  std::vector<std::vector<std::size_t>> prereqs(n + 1);
  switch (spec.topology) {
    case CurriculumTopology::Chain:
      for (std::size_t i = 1; i < n; ++i) prereqs[i] = {i + 1};
      break;
    case CurriculumTopology::Cycle:
      for (std::size_t i = 1; i <= n; ++i) prereqs[i] = {i % n + 1};
      break;
    case CurriculumTopology::Random: {
      for (std::size_t i = 1; i <= n; ++i) {
        if (i == n) break;  // the last course has no prerequisites
        std::size_t budget = rng.between(1, std::max<std::size_t>(1, spec.fanout));
        std::size_t hi = std::min(n, i + std::max<std::size_t>(1, spec.window));
        std::set<std::size_t> picks;
        for (std::size_t k = 0; k < budget; ++k) picks.insert(rng.between(i + 1, hi));
        prereqs[i].assign(picks.begin(), picks.end());
        if (spec.cycle_probability > 0 && i > 1 && rng.chance(spec.cycle_probability)) {
          prereqs[i].push_back(rng.between(1, i - 1));
        }
      }
      break;
    }
  }
  std::ostringstream xml;
  SidecarBuilder sidecar;
  xml << "<curriculum>\n";
  for (std::size_t i = 1; i <= n; ++i) {
    xml << "  <course " << spec.id_attribute << "=\"" << course_code(i) << "\">\n";
    xml << "    <prerequisites>";
    if (!prereqs[i].empty()) {
      xml << "\n";
      for (std::size_t p : prereqs[i]) {
        xml << "      <pre_code>" << course_code(p) << "</pre_code>\n";
        sidecar.edge(course_code(i), course_code(p));
      }
      xml << "    ";
    }
    xml << "</prerequisites>\n";
    xml << "  </course>\n";
  }
  xml << "</curriculum>\n";
  return {xml.str(), sidecar.str()};
}

GeneratedData gen_auction(const GenSpec& spec) {
  if (spec.persons < 2) throw_error(ErrorKind::DynamicError, "auction needs persons >= 2");
  Rng rng(spec.rng_seed);
  auto person = [](std::size_t i) { return "p" + std::to_string(i); };
  std::ostringstream xml;
  SidecarBuilder sidecar;
  xml << "<site>\n  <people>\n";
  for (std::size_t i = 0; i < spec.persons; ++i) {
    xml << "    <person id=\"" << person(i) << "\"/>\n";
  }
  xml << "  </people>\n  <open_auctions>\n";
  for (std::size_t a = 0; a < spec.auctions; ++a) {
    std::size_t seller = rng.below(spec.persons);
    std::size_t bidders = rng.between(1, std::max<std::size_t>(1, spec.max_bidders));
    xml << "    <open_auction>\n";
    xml << "      <seller person=\"" << person(seller) << "\"/>\n";
    std::set<std::size_t> chosen;
    for (std::size_t b = 0; b < bidders; ++b) {
      std::size_t bidder = rng.below(spec.persons);
      if (bidder == seller || !chosen.insert(bidder).second) continue;
      xml << "      <bidder><personref person=\"" << person(bidder) << "\"/></bidder>\n";
      sidecar.edge(person(seller), person(bidder));
    }
    xml << "    </open_auction>\n";
  }
  xml << "  </open_auctions>\n</site>\n";
  return {xml.str(), sidecar.str()};
}

GeneratedData gen_dialog(const GenSpec& spec) {
  if (spec.max_run < 1 || spec.speeches < spec.max_run)
    throw_error(ErrorKind::DynamicError, "dialog needs speeches >= max_run >= 1");
  Rng rng(spec.rng_seed);
  std::size_t speaker_count = std::max<std::size_t>(2, spec.speakers);
  auto speaker = [](std::size_t i) { return "SPEAKER_" + std::to_string(i); };

  // Plan maximal alternating runs: one of exactly max_run (planted first so
  // it always fits), the rest shorter. A run starts with the same speaker
  // that ended the previous run, which breaks alternation at the boundary.
  std::vector<std::size_t> run_lengths;
  std::size_t remaining = spec.speeches;
  run_lengths.push_back(spec.max_run);
  remaining -= spec.max_run;
  while (remaining > 0) {
    std::size_t len = std::min(remaining, rng.between(1, std::max<std::size_t>(1, spec.max_run - 1)));
    run_lengths.push_back(len);
    remaining -= len;
  }

  std::ostringstream xml;
  SidecarBuilder sidecar;
  xml << "<PLAY>\n";
  std::size_t speech_index = 0;
  std::size_t previous_speaker = 0;
  bool first_run = true;
  for (std::size_t len : run_lengths) {
    std::size_t a = first_run ? rng.below(speaker_count) : previous_speaker;
    std::size_t b = (a + 1 + rng.below(speaker_count - 1)) % speaker_count;
    for (std::size_t j = 0; j < len; ++j) {
      std::size_t who = (j % 2 == 0) ? a : b;
      ++speech_index;
      xml << "  <SPEECH id=\"s" << speech_index << "\"><SPEAKER>" << speaker(who)
          << "</SPEAKER><LINE>line " << speech_index << "</LINE></SPEECH>\n";
      if (j + 1 < len) {
        sidecar.edge("s" + std::to_string(speech_index), "s" + std::to_string(speech_index + 1));
      }
      previous_speaker = who;
    }
    first_run = false;
  }
  xml << "</PLAY>\n";
  sidecar.answer("max_run", std::to_string(spec.max_run));
  return {xml.str(), sidecar.str()};
}

namespace {

struct AncestryWriter {
  Rng& rng;
  const GenSpec& spec;
  std::ostringstream xml;
  SidecarBuilder sidecar;
  std::size_t emitted = 0;
  std::size_t next_id = 0;

  std::string indent(std::size_t level) { return std::string(2 * (level + 1), ' '); }

  // Writes one patient subtree; `force_depth` plants a chain reaching the
  // spec's maximum depth exactly once.
  void patient(std::size_t level, bool force_depth) {
    std::string id = "t" + std::to_string(++next_id);
    ++emitted;
    xml << indent(level) << "<patient id=\"" << id << "\">";
    bool want_children = level < spec.depth && (force_depth || emitted < spec.patients);
    if (!want_children) {
      xml << "<parents/></patient>\n";
      return;
    }
    xml << "\n" << indent(level + 1) << "<parents>\n";
    std::size_t parents = force_depth ? std::max<std::size_t>(1, rng.between(1, 2))
                                      : rng.between(0, 2);
    if (parents == 0 && force_depth) parents = 1;
    std::size_t descend = rng.below(std::max<std::size_t>(1, parents));
    for (std::size_t i = 0; i < parents; ++i) {
      std::size_t child_id = next_id + 1;
      sidecar.edge(id, "t" + std::to_string(child_id));
      patient(level + 1, force_depth && i == descend);
    }
    xml << indent(level + 1) << "</parents>\n" << indent(level) << "</patient>\n";
  }
};

}  // namespace

GeneratedData gen_ancestry(const GenSpec& spec) {
  if (spec.depth < 1 || spec.patients < spec.depth + 1)
    throw_error(ErrorKind::DynamicError, "ancestry needs patients > depth >= 1");
  Rng rng(spec.rng_seed);
  AncestryWriter writer{rng, spec, {}, {}, 0, 0};
  writer.xml << "<hospital>\n";
  bool forced = true;  // exactly one planted chain of full depth
  while (writer.emitted < spec.patients) {
    writer.patient(0, forced);
    forced = false;
  }
  writer.xml << "</hospital>\n";
  writer.sidecar.answer("depth", std::to_string(spec.depth));
  return {writer.xml.str(), writer.sidecar.str()};
}

GeneratedData generate(const GenSpec& spec) {
  switch (spec.family) {
    case GenFamily::Curriculum: return gen_curriculum(spec);
    case GenFamily::Auction: return gen_auction(spec);
    case GenFamily::Dialog: return gen_dialog(spec);
    case GenFamily::Ancestry: return gen_ancestry(spec);
  }
  throw_error(ErrorKind::DynamicError, "unknown generator family");
}

Sidecar parse_sidecar(const std::string& text) {
  Sidecar out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (line.starts_with("# ")) {
      std::string key = line.substr(2, tab - 2);
      out.answers[key] = line.substr(tab + 1);
    } else if (tab != std::string::npos) {
      out.edges.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
  }
  return out;
}

GenSpec curriculum_chain(std::size_t courses) {
  GenSpec spec;
  spec.family = GenFamily::Curriculum;
  spec.topology = CurriculumTopology::Chain;
  spec.courses = courses;
  return spec;
}

GenSpec curriculum_random(std::size_t courses, std::uint64_t seed) {
  GenSpec spec;
  spec.family = GenFamily::Curriculum;
  spec.topology = CurriculumTopology::Random;
  spec.courses = courses;
  spec.rng_seed = seed;
  spec.fanout = 3;
  spec.window = std::max<std::size_t>(4, courses / 25);
  return spec;
}

GenSpec curriculum_cycle3() {
  GenSpec spec;
  spec.family = GenFamily::Curriculum;
  spec.topology = CurriculumTopology::Cycle;
  spec.courses = 3;
  return spec;
}

GenSpec auction_preset(std::size_t persons, std::uint64_t seed) {
  GenSpec spec;
  spec.family = GenFamily::Auction;
  spec.persons = persons;
  spec.auctions = persons + persons / 2;
  spec.max_bidders = 3;
  spec.rng_seed = seed;
  return spec;
}

GenSpec dialog_preset(std::size_t speeches, std::size_t max_run, std::uint64_t seed) {
  GenSpec spec;
  spec.family = GenFamily::Dialog;
  spec.speeches = speeches;
  spec.max_run = max_run;
  spec.rng_seed = seed;
  return spec;
}

GenSpec ancestry_preset(std::size_t patients, std::size_t depth, std::uint64_t seed) {
  GenSpec spec;
  spec.family = GenFamily::Ancestry;
  spec.patients = patients;
  spec.depth = depth;
  spec.rng_seed = seed;
  return spec;
}

}  // namespace fixq
