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
// Test-only reference checkers, written against the definitions directly
// and kept independent of the library's validation code paths.

#ifndef CPSHIER_TESTS_SUPPORT_ORACLES_HPP_
#define CPSHIER_TESTS_SUPPORT_ORACLES_HPP_

#include <vector>

#include "cpshier/cps.hpp"
#include "cpshier/hierarchy.hpp"
#include "cpshier/structure.hpp"

namespace cpshier::testing {

// Decides whether `c` is a conditional probability system by enumerating
// every subset triple A c B c C over the family: condition (i) on every
// event and the chain rule for every subset A of every nested pair,
// including B = C. Events are walked as bitmasks and masses summed
// directly from the stored vectors.
inline bool brute_force_cps_valid(const Cps& c) {
  int n = c.space.size();
  int nf = c.family.size();

  std::vector<unsigned long> family_bits(nf, 0);
  for (int k = 0; k < nf; ++k)
    for (int atom : c.family.event(k).members())
      family_bits[k] |= 1ul << atom;

  auto mass_of_bits = [&](int k, unsigned long bits) {
    Rational sum;
    for (int atom = 0; atom < n; ++atom)
      if (bits & (1ul << atom)) sum += c.conditional(k).mass(atom);
    return sum;
  };

  for (int k = 0; k < nf; ++k)
    if (mass_of_bits(k, family_bits[k]) != Rational(1)) return false;

  for (int kc = 0; kc < nf; ++kc) {
    for (int kb = 0; kb < nf; ++kb) {
      unsigned long b = family_bits[kb], cbits = family_bits[kc];
      if ((b & ~cbits) != 0) continue;  // B not a subset of C
      Rational b_given_c = mass_of_bits(kc, b);
      // All subsets of B, the empty set included.
      for (unsigned long a = b;; a = (a - 1) & b) {
        if (mass_of_bits(kb, a) * b_given_c != mass_of_bits(kc, a)) return false;
        if (a == 0) break;
      }
    }
  }
  return true;
}

// Groups type labels by interned unfold points, in first-occurrence order.
// This is the brute-force side of the refinement oracle: it materializes
// the order-n points and compares them literally, where refine only ever
// looks at one level of pushforwards.
inline Partition classes_by_unfold(const TypeStructure& ts, int n) {
  Partition out;
  if (n == 0) {
    for (int i = 0; i < 2; ++i)
      out.cells[i].push_back(ts.player(i).types.atoms());
    return out;
  }
  HierarchyInterner interner;
  auto pts = unfold_all(interner, ts, n);
  for (int i = 0; i < 2; ++i) {
    std::vector<const HierarchyPoint*> reps;
    for (int t = 0; t < ts.player(i).types.size(); ++t) {
      size_t r = 0;
      for (; r < reps.size(); ++r)
        if (reps[r] == pts[i][t]) break;
      if (r == reps.size()) {
        reps.push_back(pts[i][t]);
        out.cells[i].emplace_back();
      }
      out.cells[i][r].push_back(ts.player(i).types.atom(t));
    }
  }
  return out;
}

}  // namespace cpshier::testing

#endif  // CPSHIER_TESTS_SUPPORT_ORACLES_HPP_
