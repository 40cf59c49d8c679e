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
// Canonical queries used by the benchmark harness, the acceptance suite,
// and the examples under queries/ (kept in sync by a test). See
// docs/queries.md for commentary.

#ifndef FIXQ_QUERIES_HPP
#define FIXQ_QUERIES_HPP

namespace fixq::queries {

/// All prerequisite courses, direct or indirect, of course c1.
/// Run with --id-attr code on generated curriculum documents.
inline constexpr const char* kCurriculumClosure = R"q((: prerequisites of course c1, direct or indirect :)
with $x seeded by doc("curriculum.xml")/curriculum/course[@code = "c1"]
recurse $x/id(./prerequisites/pre_code)
)q";

/// Same closure with the recursion variable free inside the lookup argument.
/// The syntactic analyzer rejects this body; the algebraic analyzer does not.
inline constexpr const char* kCurriculumClosureLookupArg = R"q(with $x seeded by doc("curriculum.xml")/curriculum/course[@code = "c1"]
recurse id($x/prerequisites/pre_code)
)q";

/// The lookup-argument variant with id() unfolded into an explicit
/// comparison against every course.
inline constexpr const char* kCurriculumClosureInlineId = R"q(with $x seeded by doc("curriculum.xml")/curriculum/course[@code = "c1"]
recurse for $c in doc("curriculum.xml")/curriculum/course
        return if ($c/@code = $x/prerequisites/pre_code) then $c else ()
)q";

/// Courses that are among their own prerequisites (consistency check over
/// possibly cyclic curricula).
inline constexpr const char* kSelfPrerequisites = R"q(for $c in doc("curriculum.xml")/curriculum/course
return if ((with $x seeded by $c recurse $x/id(./prerequisites/pre_code))/@code = $c/@code)
       then $c else ()
)q";

/// Count-guarded recursion: the guard sees the whole sequence bound to $x,
/// so naive and delta genuinely diverge ({a,b,c,d} vs {a,b,c}). The seed is
/// a wrapper element so the first body application already yields (a, b).
inline constexpr const char* kCountGuarded = R"q(let $seed := <r><a/><b><c><d/></c></b></r>
return with $x seeded by $seed
       recurse if (count($x/self::a union $x/self::r))
               then $x/* else ()
)q";

/// The same guard pattern applied directly to a two-element seed: the first
/// body application maps (a, b) to (c) and the recursion converges at once,
/// so both algorithms agree here. Kept as a semantics regression probe (the
/// seed is never implicitly part of the result).
inline constexpr const char* kCountGuardedFlat = R"q(let $seed := (<a/>,<b><c><d/></c></b>)
return with $x seeded by $seed
       recurse if (count($x/self::a))
               then $x/* else ()
)q";

/// Bidder network from person p0: sellers reach the bidders of their
/// auctions, transitively.
inline constexpr const char* kBidderNetwork = R"q(with $x seeded by doc("auction.xml")/site/people/person[@id = "p0"]
recurse for $p in $x
        return doc("auction.xml")/site/open_auctions/open_auction[seller/@person = $p/@id]
               /bidder/personref/id(@person)
)q";

/// Walks maximal alternating-speaker runs: seeded with the run heads, each
/// round adds the next speech of a run, so the productive iteration count
/// equals the longest uninterrupted dialog.
inline constexpr const char* kDialogRuns = R"q(let $all := doc("dialog.xml")/PLAY/SPEECH
return with $x seeded by
         ($all except (for $s in $all
                       return $s/following-sibling::SPEECH[1][data(child::SPEAKER) != data($s/child::SPEAKER)]))
       recurse for $s in $x
               return $s/following-sibling::SPEECH[1][data(child::SPEAKER) != data($s/child::SPEAKER)]
)q";

/// Vertical structural recursion into nested patient records.
inline constexpr const char* kAncestryDepth = R"q(with $x seeded by doc("ancestry.xml")/hospital/patient
recurse $x/parents/patient
)q";

}  // namespace fixq::queries

#endif  // FIXQ_QUERIES_HPP
