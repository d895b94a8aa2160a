// Copyright 2026 The cps-hier Authors
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
// Acceptance suite: eight desk-scale properties checked with exact
// arithmetic (tolerance 0 throughout). Prints one PASS/FAIL line per
// criterion and exits with the number of failures.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cpshier/cpshier.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/run_cli.hpp"

using namespace cpshier;
using namespace cpshier::testing;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok,
            const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << name
            << " (" << detail << ")\n";
  if (!ok) ++failures;
}

// 1. validate_cps agrees with the brute-force subset-triple checker on
//    >= 1000 fuzzed arrays over spaces with <= 5 atoms, <= 4 events.
void criterion_1() {
  Rng rng(101);
  int runs = 1200, disagreements = 0, valid_seen = 0, invalid_seen = 0;
  for (int it = 0; it < runs; ++it) {
    FiniteSpace space = random_space(rng, 5, "a");
    ConditioningFamily family = random_family(rng, space, 4, it % 2 == 0);
    Cps c = random_measure_array(rng, space, family, it % 4);
    bool validator = validate_cps(c).ok();
    bool oracle = brute_force_cps_valid(c);
    if (validator != oracle) ++disagreements;
    (oracle ? valid_seen : invalid_seen)++;
  }
  std::ostringstream detail;
  detail << runs << " arrays, " << valid_seen << " valid / " << invalid_seen
         << " invalid, " << disagreements << " disagreements";
  report(1, "CPS validator matches brute-force subset enumeration",
         disagreements == 0 && valid_seen > 0 && invalid_seen > 0,
         detail.str());
}

// 2. The pushforward of a valid CPS along an admissible map is a valid CPS.
void criterion_2() {
  Rng rng(202);
  int runs = 600, failures_here = 0;
  for (int it = 0; it < runs; ++it) {
    AdmissibleMapCase c = random_admissible_map_case(rng);
    if (!validate_cps(c.source).ok()) {
      ++failures_here;
      continue;
    }
    Cps image = pushforward_cps(c.source, c.f, c.target_family);
    if (!validate_cps(image).ok()) ++failures_here;
  }
  std::ostringstream detail;
  detail << runs << " pushforwards, " << failures_here << " invalid images";
  report(2, "pushforward-CPS well-definedness, exact", failures_here == 0,
         detail.str());
}

// 3. Every unfold of every fuzzed structure is coherent up to order 4.
void criterion_3(const std::vector<TypeStructure>& corpus) {
  int checked = 0, incoherent = 0;
  for (const TypeStructure& ts : corpus) {
    HierarchyInterner interner;
    for (int n = 1; n <= 4; ++n) {
      auto pts = unfold_all(interner, ts, n);
      for (int i = 0; i < 2; ++i)
        for (const HierarchyPoint* p : pts[i]) {
          ++checked;
          if (!check_coherence(p).ok()) ++incoherent;
        }
    }
  }
  std::ostringstream detail;
  detail << corpus.size() << " structures, " << checked << " unfolds, "
         << incoherent << " incoherent";
  report(3, "unfolded hierarchies are coherent", incoherent == 0, detail.str());
}

// 4. Refinement cells equal literal unfold-equality classes for n <= 3.
void criterion_4(const std::vector<TypeStructure>& corpus) {
  int comparisons = 0, mismatches = 0;
  for (const TypeStructure& ts : corpus) {
    for (int n = 0; n <= 3; ++n) {
      ++comparisons;
      if (refine(ts, n) != classes_by_unfold(ts, n)) ++mismatches;
    }
  }
  std::ostringstream detail;
  detail << comparisons << " partition comparisons, " << mismatches
         << " mismatches";
  report(4, "refinement equals the unfold oracle", mismatches == 0,
         detail.str());
}

// 5. The fixpoint partition equals the refinement and the unfold classes at
//    order depth+3, and the depth respects the |T_1|+|T_2|-1 bound.
void criterion_5(const std::vector<TypeStructure>& corpus) {
  int bad = 0;
  for (const TypeStructure& ts : corpus) {
    FixpointResult fix = refine_to_fixpoint(ts);
    int probe_order = fix.depth + 3;
    bool ok = fix.partition == refine(ts, probe_order) &&
              fix.partition == classes_by_unfold(ts, probe_order) &&
              fix.depth <= ts.player(0).types.size() +
                               ts.player(1).types.size() - 1;
    if (!ok) ++bad;
  }
  std::ostringstream detail;
  detail << corpus.size() << " structures, " << bad << " fixpoint defects";
  report(5, "fixpoint partitions decide full-hierarchy equality", bad == 0,
         detail.str());
}

// 6. terminal_over(T, T) matches every type; a verified duplicate/quotient
//    morphism makes terminal_over(target, source) match each source type to
//    its image.
void criterion_6(const std::vector<TypeStructure>& corpus) {
  Rng rng(606);
  int reflexive_bad = 0;
  for (const TypeStructure& ts : corpus)
    if (!terminal_over(ts, ts).all_matched()) ++reflexive_bad;

  int expansions = 60, morphism_bad = 0, coverage_bad = 0;
  for (int it = 0; it < expansions; ++it) {
    const TypeStructure& target = corpus[it % corpus.size()];
    ExpansionCase expansion = duplicate_expansion(rng, target);
    if (!verify_type_morphism(expansion.source, target, expansion.collapse)
             .preserving) {
      ++morphism_bad;
      continue;
    }
    TerminalityReport full = terminal_over(target, expansion.source);
    if (!full.all_matched()) {
      ++coverage_bad;
      continue;
    }
    for (int i = 0; i < 2; ++i)
      for (const auto& row : full.rows[i]) {
        const std::string& image = expansion.collapse.maps[i].at(row.type);
        bool found = false;
        for (const auto& m : row.matched)
          if (m == image) { found = true; break; }
        if (!found) ++coverage_bad;
      }
  }
  std::ostringstream detail;
  detail << corpus.size() << " reflexivity runs (" << reflexive_bad
         << " bad), " << expansions << " verified morphisms ("
         << morphism_bad << " broken, " << coverage_bad
         << " uncovered images)";
  report(6, "terminality is reflexive and covers morphism images",
         reflexive_bad == 0 && morphism_bad == 0 && coverage_bad == 0,
         detail.str());
}

// 7. Completeness is decided by the singleton-codomain test, and every
//    Incomplete verdict ships a valid witness outside the belief image.
void criterion_7(const std::vector<TypeStructure>& corpus) {
  std::vector<TypeStructure> pool = corpus;
  for (int i = 0; i < 20; ++i) pool.push_back(singleton_structure());

  int wrong_verdicts = 0, bad_witnesses = 0, complete_seen = 0;
  for (const TypeStructure& ts : pool) {
    bool expect_complete =
        ts.s.size() * ts.player(1).types.size() == 1 &&
        ts.s.size() * ts.player(0).types.size() == 1;
    CompletenessStatus st = completeness_status(ts);
    if (st.complete != expect_complete) {
      ++wrong_verdicts;
      continue;
    }
    if (st.complete) {
      ++complete_seen;
      continue;
    }
    if (!st.witness || !validate_cps(*st.witness).ok()) {
      ++bad_witnesses;
      continue;
    }
    for (const Cps& b : ts.player(st.witness_player).beliefs)
      if (b == *st.witness) ++bad_witnesses;
  }
  std::ostringstream detail;
  detail << pool.size() << " structures, " << complete_seen << " complete, "
         << wrong_verdicts << " wrong verdicts, " << bad_witnesses
         << " defective witnesses";
  report(7, "completeness decision with certified witnesses",
         wrong_verdicts == 0 && bad_witnesses == 0 && complete_seen >= 20,
         detail.str());
}

// 8. parse . serialize is the identity on the corpus, and every CLI
//    subcommand is byte-deterministic across two runs.
void criterion_8(const std::vector<TypeStructure>& corpus) {
  int roundtrip_bad = 0;
  for (const TypeStructure& ts : corpus) {
    std::string canon = serialize_structure(ts);
    TypeStructure back = parse_structure(canon);
    if (back != ts || serialize_structure(back) != canon) ++roundtrip_bad;
  }

  write_file("acceptance_a.txt", serialize_structure(corpus[0]));
  write_file("acceptance_b.txt", serialize_structure(corpus[1]));
  DisjointUnion self_union = disjoint_union(corpus[0], corpus[0]);
  write_file("acceptance_u.txt", serialize_structure(self_union.structure));

  const std::string& first_type = corpus[0].player(0).types.atom(0);
  std::vector<std::string> cmds = {
      "validate acceptance_a.txt",
      "validate acceptance_a.txt --format records",
      "unfold acceptance_a.txt --player 1 --type " + first_type + " --order 4",
      "partition acceptance_a.txt --format records",
      "partition acceptance_u.txt",
      "terminal acceptance_a.txt acceptance_a.txt --format records",
      "terminal acceptance_u.txt acceptance_a.txt",
      "compare acceptance_a.txt acceptance_u.txt --format records",
  };
  int nondeterministic = 0;
  for (const auto& cmd : cmds) {
    RunResult a = run_cli(CPS_HIER_BIN, cmd);
    RunResult b = run_cli(CPS_HIER_BIN, cmd);
    if (a.out != b.out || a.exit_code != b.exit_code) ++nondeterministic;
  }
  std::ostringstream detail;
  detail << corpus.size() << " round trips (" << roundtrip_bad << " bad), "
         << cmds.size() << " commands x2 (" << nondeterministic
         << " nondeterministic)";
  report(8, "round-trip identity and CLI determinism",
         roundtrip_bad == 0 && nondeterministic == 0, detail.str());
}

}  // namespace

int main() {
  Rng corpus_rng(0xC0FFEE);
  std::vector<TypeStructure> corpus;
  corpus.reserve(220);
  for (int i = 0; i < 220; ++i)
    corpus.push_back(random_structure(corpus_rng, 3, 4, 3));

  criterion_1();
  criterion_2();
  criterion_3(corpus);
  criterion_4(corpus);
  criterion_5(corpus);
  criterion_6(corpus);
  criterion_7(corpus);
  criterion_8(corpus);

  if (failures == 0)
    std::cout << "all acceptance criteria passed\n";
  else
    std::cout << failures << " acceptance criteria FAILED\n";
  return failures;
}
