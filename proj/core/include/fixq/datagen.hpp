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
// Deterministic benchmark-document generators: curriculum prerequisite
// graphs, auction bidder networks, alternating-speaker dialogs, and nested
// ancestry records. Identical GenSpec values produce byte-identical output.
// Each generator also emits a sidecar answer file: one edge per line
// ("from<TAB>to"), plus "# key<TAB>value" lines for planted answers, so
// tests can check engine results against graph oracles that never touch the
// engine.

#ifndef FIXQ_DATAGEN_HPP
#define FIXQ_DATAGEN_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace fixq {

/// Deterministic random source (the mt19937_64 stream is pinned by the
/// standard, and bounded draws avoid distribution objects, which are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// uniform-ish draw in [0, n)
  std::size_t below(std::size_t n) { return n == 0 ? 0 : std::size_t(next() % n); }
  /// draw in [lo, hi]
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return double(next() >> 11) / double(1ull << 53) < p; }

 private:
  std::mt19937_64 engine_;
};

enum class GenFamily { Curriculum, Auction, Dialog, Ancestry };
enum class CurriculumTopology { Chain, Random, Cycle };

GenFamily family_from_name(const std::string& name);
const char* to_string(GenFamily family);

struct GenSpec {
  GenFamily family = GenFamily::Curriculum;
  std::uint64_t rng_seed = 1;

  // curriculum
  std::size_t courses = 3;
  CurriculumTopology topology = CurriculumTopology::Random;
  std::size_t fanout = 3;   // max prerequisites per course
  std::size_t window = 40;  // prerequisites drawn from the next `window` courses
  double cycle_probability = 0.0;
  std::string id_attribute = "code";  // the DTD-style ID attribute on course

  // auction
  std::size_t persons = 10;
  std::size_t auctions = 15;
  std::size_t max_bidders = 3;

  // dialog
  std::size_t speeches = 40;
  std::size_t speakers = 6;
  std::size_t max_run = 7;  // planted longest alternating run

  // ancestry
  std::size_t patients = 100;
  std::size_t depth = 5;
};

struct GeneratedData {
  std::string xml;
  std::string sidecar;
};

GeneratedData gen_curriculum(const GenSpec& spec);
GeneratedData gen_auction(const GenSpec& spec);
GeneratedData gen_dialog(const GenSpec& spec);
GeneratedData gen_ancestry(const GenSpec& spec);
GeneratedData generate(const GenSpec& spec);

struct Sidecar {
  std::vector<std::pair<std::string, std::string>> edges;
  std::map<std::string, std::string> answers;
};

Sidecar parse_sidecar(const std::string& text);

// Fixed-seed presets used by the benchmark harness and the acceptance suite.
GenSpec curriculum_chain(std::size_t courses);
GenSpec curriculum_random(std::size_t courses, std::uint64_t seed = 7);
GenSpec curriculum_cycle3();
GenSpec auction_preset(std::size_t persons = 10, std::uint64_t seed = 1);
GenSpec dialog_preset(std::size_t speeches = 40, std::size_t max_run = 7,
                      std::uint64_t seed = 11);
GenSpec ancestry_preset(std::size_t patients = 100, std::size_t depth = 5,
                        std::uint64_t seed = 3);

}  // namespace fixq

#endif  // FIXQ_DATAGEN_HPP
