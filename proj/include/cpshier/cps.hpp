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
// Conditional probability systems on finite spaces: an array of measures
// indexed by a family of conditioning events, subject to two conditions:
//
//   (i)  mu(B|B) = 1 for every conditioning event B, and
//   (ii) the chain rule: mu(A|B) * mu(B|C) = mu(A|C) whenever A c B c C
//        with B and C conditioning events.
//
// Both are decided exactly. A conditioning event with zero probability
// under every larger hypothesis keeps its conditional as first-class data;
// nothing here tries to derive it from a prior.

#ifndef CPSHIER_CPS_HPP_
#define CPSHIER_CPS_HPP_

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cpshier/error.hpp"
#include "cpshier/measure.hpp"
#include "cpshier/rational.hpp"

namespace cpshier {

// Ordered list of distinct, non-empty conditioning events over one space.
class ConditioningFamily {
 public:
  ConditioningFamily(FiniteSpace space, std::vector<Event> events)
      : space_(std::move(space)), events_(std::move(events)) {
    if (events_.empty())
      fail(Errc::empty_family, "a conditioning family needs at least one event");
    for (size_t i = 0; i < events_.size(); ++i) {
      if (events_[i].space() != space_)
        fail(Errc::space_mismatch, "family event over a different space");
      if (events_[i].empty())
        fail(Errc::empty_conditioning_event,
             "the empty set cannot be a conditioning event");
      for (size_t j = 0; j < i; ++j)
        if (events_[j] == events_[i])
          fail(Errc::duplicate_event,
               "event " + events_[i].label_string() + " listed twice");
    }
  }

  const FiniteSpace& space() const { return space_; }
  const std::vector<Event>& events() const { return events_; }
  int size() const { return static_cast<int>(events_.size()); }
  const Event& event(int k) const { return events_.at(k); }

  // Position of an event equal (as a member set) to `e`, or -1.
  int index_of(const Event& e) const {
    for (size_t k = 0; k < events_.size(); ++k)
      if (events_[k] == e) return static_cast<int>(k);
    return -1;
  }

  friend bool operator==(const ConditioningFamily& a,
                         const ConditioningFamily& b) {
    return a.space_ == b.space_ && a.events_ == b.events_;
  }
  friend bool operator!=(const ConditioningFamily& a,
                         const ConditioningFamily& b) {
    return !(a == b);
  }

 private:
  FiniteSpace space_;
  std::vector<Event> events_;
};

// Array of probability measures, one per conditioning event, in family
// order. Construction checks structure only; conditions (i) and (ii) are
// validate_cps's concern, and candidates that fail them are representable.
struct Cps {
  FiniteSpace space;
  ConditioningFamily family;
  std::vector<FiniteMeasure> conditionals;

  const FiniteMeasure& conditional(int k) const { return conditionals.at(k); }

  const FiniteMeasure& conditional_at(const Event& b) const {
    int k = family.index_of(b);
    if (k < 0)
      fail(Errc::unknown_event,
           "no conditional for event " + b.label_string());
    return conditionals[k];
  }

  friend bool operator==(const Cps& a, const Cps& b) {
    return a.space == b.space && a.family == b.family &&
           a.conditionals == b.conditionals;
  }
  friend bool operator!=(const Cps& a, const Cps& b) { return !(a == b); }
};

inline Cps make_cps(FiniteSpace space, ConditioningFamily family,
                    std::vector<FiniteMeasure> conditionals) {
  if (family.space() != space)
    fail(Errc::space_mismatch, "family is not over the system's space");
  if (static_cast<int>(conditionals.size()) != family.size())
    fail(Errc::family_mismatch, "need exactly one conditional per family event");
  for (const auto& m : conditionals)
    if (m.space() != space)
      fail(Errc::space_mismatch, "conditional measure over a different space");
  return Cps{std::move(space), std::move(family), std::move(conditionals)};
}

// One failed check: either mu(B|B) != 1, or a nested triple A c B c C with
// mu(A|B) * mu(B|C) != mu(A|C).
struct CpsViolation {
  enum class Kind { certainty, chain_rule };

  Kind kind;
  Event b;                 // the conditioning event (middle event for chain rule)
  std::optional<Event> a;  // chain rule only
  std::optional<Event> c;  // chain rule only
  Rational lhs;            // mu(B|B), resp. mu(A|B) * mu(B|C)
  Rational rhs;            // 1, resp. mu(A|C)

  std::string describe() const {
    std::ostringstream os;
    if (kind == Kind::certainty) {
      os << "certainty violated at B=" << b.label_string() << ": mu(B|B) = "
         << lhs.str();
    } else {
      os << "chain rule violated at A=" << a->label_string()
         << " B=" << b.label_string() << " C=" << c->label_string()
         << ": mu(A|B)*mu(B|C) = " << lhs.str() << ", mu(A|C) = " << rhs.str();
    }
    return os.str();
  }
};

struct ValidationReport {
  std::vector<CpsViolation> violations;

  bool ok() const { return violations.empty(); }

  std::string describe() const {
    std::string out;
    for (const auto& v : violations) {
      out += v.describe();
      out += '\n';
    }
    return out;
  }
};

struct ValidateOptions {
  // Up to this many atoms in the space, the chain rule is checked for every
  // subset A of B. Beyond it, A ranges over the singletons of B and the
  // family events contained in B. On finite spaces with atomic measures the
  // two searches accept the same systems (subset masses are sums of
  // singleton masses); the exhaustive mode also enumerates every violating
  // triple.
  int exhaustive_atom_bound = 12;
};

// Checks conditions (i) and (ii) on `c` and reports every violation found;
// an empty report means the array is a conditional probability system.
// Triples with B = C are skipped: they reduce to condition (i).
inline ValidationReport validate_cps(const Cps& c,
                                     const ValidateOptions& options = {}) {
  ValidationReport report;

  for (int k = 0; k < c.family.size(); ++k) {
    const Event& b = c.family.event(k);
    Rational got = measure_of(c.conditional(k), b);
    if (got != Rational(1))
      report.violations.push_back(CpsViolation{
          CpsViolation::Kind::certainty, b, std::nullopt, std::nullopt, got,
          Rational(1)});
  }

  bool exhaustive = c.space.size() <= options.exhaustive_atom_bound;
  for (int kc = 0; kc < c.family.size(); ++kc) {
    const Event& ev_c = c.family.event(kc);
    const FiniteMeasure& mu_c = c.conditional(kc);
    for (int kb = 0; kb < c.family.size(); ++kb) {
      if (kb == kc) continue;
      const Event& ev_b = c.family.event(kb);
      if (!ev_b.subset_of(ev_c)) continue;
      const FiniteMeasure& mu_b = c.conditional(kb);
      Rational b_given_c = measure_of(mu_c, ev_b);

      auto check = [&](const Event& ev_a) {
        Rational lhs = measure_of(mu_b, ev_a) * b_given_c;
        Rational rhs = measure_of(mu_c, ev_a);
        if (lhs != rhs)
          report.violations.push_back(CpsViolation{
              CpsViolation::Kind::chain_rule, ev_b, ev_a, ev_c, lhs, rhs});
      };

      if (exhaustive) {
        const auto& members = ev_b.members();
        // Subsets of B in mask order; the empty set never violates.
        for (unsigned long mask = 1; mask < (1ul << members.size()); ++mask) {
          std::vector<int> atoms;
          for (size_t i = 0; i < members.size(); ++i)
            if (mask & (1ul << i)) atoms.push_back(members[i]);
          check(Event::of_indices(c.space, std::move(atoms)));
        }
      } else {
        for (int atom : ev_b.members())
          check(Event::of_indices(c.space, {atom}));
        for (int ka = 0; ka < c.family.size(); ++ka)
          if (ka != kb && c.family.event(ka).subset_of(ev_b))
            check(c.family.event(ka));
      }
    }
  }
  return report;
}

// Bayes conditioning of a prior on every family event; requires the prior
// to give each event positive mass. The result always validates: Bayes
// updating implies the chain rule.
inline Cps cps_from_prior(const FiniteMeasure& prior,
                          const ConditioningFamily& family) {
  if (prior.space() != family.space())
    fail(Errc::space_mismatch, "prior is not over the family's space");
  std::vector<FiniteMeasure> conditionals;
  conditionals.reserve(family.size());
  for (const Event& b : family.events()) {
    Rational pb = measure_of(prior, b);
    if (pb.is_zero())
      fail(Errc::zero_mass_condition,
           "prior gives zero mass to conditioning event " + b.label_string());
    std::vector<Rational> masses(prior.space().size());
    for (int atom : b.members()) masses[atom] = prior.mass(atom) / pb;
    conditionals.push_back(measure_from_masses(prior.space(), std::move(masses)));
  }
  return make_cps(prior.space(), family, std::move(conditionals));
}

// Image of a CPS under an atom map whose event preimages carry the target
// family exactly onto the source family: the conditional at B becomes the
// pushforward of the conditional at f^-1(B).
inline Cps pushforward_cps(const Cps& c, const AtomMap& f,
                           const ConditioningFamily& target_family) {
  if (f.from() != c.space)
    fail(Errc::space_mismatch, "map domain differs from the system's space");
  if (target_family.space() != f.to())
    fail(Errc::space_mismatch, "target family is not over the map's codomain");
  f.require_total();

  // f^-1(target family) must equal the source family as a set of events.
  std::vector<Event> preimages;
  preimages.reserve(target_family.size());
  for (const Event& e : target_family.events()) {
    Event pre = f.preimage(e);
    if (c.family.index_of(pre) < 0)
      fail(Errc::family_mismatch,
           "preimage " + pre.label_string() + " of " + e.label_string() +
               " is not a source conditioning event");
    preimages.push_back(std::move(pre));
  }
  for (const Event& b : c.family.events()) {
    bool covered = false;
    for (const Event& pre : preimages)
      if (pre == b) { covered = true; break; }
    if (!covered)
      fail(Errc::family_mismatch,
           "source conditioning event " + b.label_string() +
               " is not the preimage of any target event");
  }

  std::vector<FiniteMeasure> conditionals;
  conditionals.reserve(target_family.size());
  for (int k = 0; k < target_family.size(); ++k)
    conditionals.push_back(pushforward(c.conditional_at(preimages[k]), f));
  return make_cps(f.to(), target_family, std::move(conditionals));
}

// A conditioning family on X lifted to X x Y: the cylinders B x Y in base
// order, together with the product bookkeeping.
struct CylinderFamily {
  ConditioningFamily base;
  ProductSpace prod;
  ConditioningFamily lifted;
};

inline CylinderFamily lift_family(const ConditioningFamily& base,
                                  const FiniteSpace& y_space) {
  ProductSpace prod(base.space(), y_space);
  std::vector<Event> cylinders;
  cylinders.reserve(base.size());
  for (const Event& b : base.events()) cylinders.push_back(prod.cylinder(b));
  ConditioningFamily lifted(prod.space(), std::move(cylinders));
  return CylinderFamily{base, std::move(prod), std::move(lifted)};
}

// Marginal on the left factor of a CPS over a product space whose family
// consists of cylinders B x Y: each conditional is summed over Y fibers and
// the family drops to the base events. Computed by direct fiber summation;
// it must agree with pushforward_cps under the left projection.
inline Cps marginal_cps(const Cps& c, const ProductSpace& prod) {
  if (c.space != prod.space())
    fail(Errc::space_mismatch, "system is not over the given product space");

  std::vector<Event> base_events;
  base_events.reserve(c.family.size());
  for (const Event& e : c.family.events()) {
    std::vector<int> base_members;
    for (int atom : e.members()) {
      int x = prod.split(atom).first;
      if (base_members.empty() || base_members.back() != x)
        base_members.push_back(x);
    }
    Event base = Event::of_indices(prod.left(), std::move(base_members));
    if (e != prod.cylinder(base))
      fail(Errc::not_cylinder_family,
           "conditioning event " + e.label_string() + " is not a cylinder");
    base_events.push_back(std::move(base));
  }
  ConditioningFamily base_family(prod.left(), std::move(base_events));

  std::vector<FiniteMeasure> conditionals;
  conditionals.reserve(c.family.size());
  for (int k = 0; k < c.family.size(); ++k) {
    std::vector<Rational> masses(prod.left().size());
    for (int atom = 0; atom < prod.space().size(); ++atom)
      masses[prod.split(atom).first] += c.conditional(k).mass(atom);
    conditionals.push_back(measure_from_masses(prod.left(), std::move(masses)));
  }
  return make_cps(prod.left(), std::move(base_family), std::move(conditionals));
}

}  // namespace cpshier

#endif  // CPSHIER_CPS_HPP_
