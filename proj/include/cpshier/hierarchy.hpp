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
// Explicit finite-order hierarchies of conditional beliefs.
//
// A type's order-1 belief is the marginal on S of its belief CPS. Its
// order-(k+1) belief is the pushforward of that CPS under the map sending
// each co-player type to that type's order-k hierarchy point. Points are
// represented sparsely - a level-k conditional is a finite map from
// (s, co-player point) pairs to positive masses - so a point does not
// depend on which ambient structure produced it, only on its content.
// Points are hash-consed: structurally equal points are the same object,
// and hierarchy equality is pointer equality within one interner.
//
// Hierarchy equality across whole structures is decided by partition
// refinement over the type sets, splitting cells by pushforwards onto
// cell labels; round-n cells coincide with order-n hierarchy equality,
// and the fixpoint decides equality of full hierarchies. Finite
// terminality and terminality between two structures reduce to running
// the refinement on their disjoint union.

#ifndef CPSHIER_HIERARCHY_HPP_
#define CPSHIER_HIERARCHY_HPP_

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cpshier/cps.hpp"
#include "cpshier/error.hpp"
#include "cpshier/measure.hpp"
#include "cpshier/rational.hpp"
#include "cpshier/structure.hpp"

namespace cpshier {

class HierarchyInterner;

// One interned point: the first (order-1) levels live in the prefix chain,
// the top level is this node's conditional array. Immutable; created only
// by a HierarchyInterner.
class HierarchyPoint {
 public:
  struct Entry {
    int s_atom;                 // index into s_space()
    const HierarchyPoint* co;   // co-player point of order()-1; null at order 1
    Rational mass;              // strictly positive
  };
  // Sorted by (s_atom, structural order of co); one entry per key.
  using Conditional = std::vector<Entry>;

  int order() const { return order_; }
  const HierarchyPoint* prefix() const { return prefix_; }
  const FiniteSpace& s_space() const { return s_space_; }
  const ConditioningFamily& family() const { return family_; }
  const std::vector<Conditional>& top() const { return top_; }

  // The order-k truncation of this point, k <= order().
  const HierarchyPoint* at_order(int k) const {
    const HierarchyPoint* p = this;
    while (p->order_ > k) p = p->prefix_;
    return p;
  }

 private:
  friend class HierarchyInterner;
  HierarchyPoint(int order, const HierarchyPoint* prefix, FiniteSpace s_space,
                 ConditioningFamily family, std::vector<Conditional> top,
                 uint64_t uid)
      : order_(order),
        prefix_(prefix),
        s_space_(std::move(s_space)),
        family_(std::move(family)),
        top_(std::move(top)),
        uid_(uid) {}

  int order_;
  const HierarchyPoint* prefix_;
  FiniteSpace s_space_;
  ConditioningFamily family_;
  std::vector<Conditional> top_;
  uint64_t uid_;  // interner-local, used for hash keys only
};

namespace detail {

inline int cmp_rational(const Rational& a, const Rational& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

template <typename T>
int cmp_vectors(const std::vector<T>& a, const std::vector<T>& b,
                int (*cmp)(const T&, const T&)) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i)
    if (int c = cmp(a[i], b[i])) return c;
  return a.size() < b.size() ? -1 : (a.size() > b.size() ? 1 : 0);
}

}  // namespace detail

// Total structural order on points, independent of interner identities;
// 0 exactly on structural equality. Within one interner that coincides
// with pointer equality.
inline int hierarchy_compare(const HierarchyPoint* x, const HierarchyPoint* y) {
  if (x == y) return 0;
  if (x == nullptr) return -1;
  if (y == nullptr) return 1;
  if (x->order() != y->order()) return x->order() < y->order() ? -1 : 1;

  if (x->order() == 1) {
    auto cmp_str = [](const std::string& a, const std::string& b) {
      return a.compare(b) < 0 ? -1 : (a == b ? 0 : 1);
    };
    if (int c = detail::cmp_vectors(x->s_space().atoms(), y->s_space().atoms(),
                                    +cmp_str))
      return c;
    auto cmp_event = [](const Event& a, const Event& b) {
      return detail::cmp_vectors(a.members(), b.members(),
                                 +[](const int& u, const int& v) {
                                   return u < v ? -1 : (u > v ? 1 : 0);
                                 });
    };
    if (int c = detail::cmp_vectors(x->family().events(), y->family().events(),
                                    +cmp_event))
      return c;
  } else {
    if (int c = hierarchy_compare(x->prefix(), y->prefix())) return c;
  }

  auto cmp_cond = [](const HierarchyPoint::Conditional& a,
                     const HierarchyPoint::Conditional& b) {
    return detail::cmp_vectors(
        a, b,
        +[](const HierarchyPoint::Entry& u, const HierarchyPoint::Entry& v) {
          if (u.s_atom != v.s_atom) return u.s_atom < v.s_atom ? -1 : 1;
          if (int c = hierarchy_compare(u.co, v.co)) return c;
          return detail::cmp_rational(u.mass, v.mass);
        });
  };
  return detail::cmp_vectors(x->top(), y->top(), +cmp_cond);
}

struct HierarchyPointLess {
  bool operator()(const HierarchyPoint* a, const HierarchyPoint* b) const {
    return hierarchy_compare(a, b) < 0;
  }
};

// Append-only hash-consing table. Interning identical content returns the
// same pointer; insertion is serialized by a mutex, so concurrent interns
// of equal keys get a single winner. Points live as long as the interner.
class HierarchyInterner {
 public:
  // Interns the order-1 point carrying a CPS on (S, B_i), stored sparsely.
  const HierarchyPoint* level_one(const Cps& marginal) {
    std::vector<HierarchyPoint::Conditional> top(marginal.family.size());
    for (int k = 0; k < marginal.family.size(); ++k) {
      const FiniteMeasure& m = marginal.conditional(k);
      for (int atom = 0; atom < m.space().size(); ++atom)
        if (!m.mass(atom).is_zero())
          top[k].push_back(HierarchyPoint::Entry{atom, nullptr, m.mass(atom)});
    }

    std::string key = "1|S=";
    for (const auto& a : marginal.space.atoms()) {
      key += a;
      key += ',';
    }
    key += "|F=";
    for (const Event& e : marginal.family.events()) {
      for (int m : e.members()) {
        key += std::to_string(m);
        key += '.';
      }
      key += ';';
    }
    append_top_key(&key, top);

    std::scoped_lock lock(mu_);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second.get();
    auto node = std::unique_ptr<HierarchyPoint>(
        new HierarchyPoint(1, nullptr, marginal.space, marginal.family,
                           std::move(top), next_uid_++));
    return table_.emplace(std::move(key), std::move(node)).first->second.get();
  }

  // Interns the point extending `prefix` by one level. Entries may arrive
  // unsorted; co points must be order prefix->order() points from this
  // interner. Masses must be positive and keys distinct.
  const HierarchyPoint* extend(const HierarchyPoint* prefix,
                               std::vector<HierarchyPoint::Conditional> top) {
    if (prefix == nullptr)
      fail(Errc::validation_error, "extend needs an order-n prefix");
    if (static_cast<int>(top.size()) != prefix->family().size())
      fail(Errc::family_mismatch,
           "top level needs one conditional per conditioning event");
    for (auto& cond : top) {
      for (const auto& e : cond) {
        if (e.co == nullptr || e.co->order() != prefix->order())
          fail(Errc::validation_error,
               "level-" + std::to_string(prefix->order() + 1) +
                   " entries must cite co-player points of order " +
                   std::to_string(prefix->order()));
        if (e.mass.is_zero() || e.mass.is_negative())
          fail(Errc::negative_mass, "sparse entries must have positive mass");
      }
      std::sort(cond.begin(), cond.end(),
                [](const HierarchyPoint::Entry& x, const HierarchyPoint::Entry& y) {
                  if (x.s_atom != y.s_atom) return x.s_atom < y.s_atom;
                  return hierarchy_compare(x.co, y.co) < 0;
                });
      for (size_t i = 1; i < cond.size(); ++i)
        if (cond[i - 1].s_atom == cond[i].s_atom && cond[i - 1].co == cond[i].co)
          fail(Errc::duplicate_label, "duplicate sparse key in conditional");
    }

    std::string key = std::to_string(prefix->order() + 1) + "|p" +
                      std::to_string(prefix->uid_) + "|";
    append_top_key(&key, top);

    std::scoped_lock lock(mu_);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second.get();
    auto node = std::unique_ptr<HierarchyPoint>(
        new HierarchyPoint(prefix->order() + 1, prefix, prefix->s_space(),
                           prefix->family(), std::move(top), next_uid_++));
    return table_.emplace(std::move(key), std::move(node)).first->second.get();
  }

  size_t size() const {
    std::scoped_lock lock(mu_);
    return table_.size();
  }

 private:
  static void append_top_key(std::string* key,
                             const std::vector<HierarchyPoint::Conditional>& top) {
    for (const auto& cond : top) {
      for (const auto& e : cond) {
        *key += std::to_string(e.s_atom);
        if (e.co != nullptr) {
          *key += '@';
          *key += std::to_string(e.co->uid_);
        }
        *key += '=';
        *key += e.mass.str();
        *key += ',';
      }
      *key += '|';
    }
  }

  mutable std::mutex mu_;
  std::unordered_map<std::string, std::unique_ptr<HierarchyPoint>> table_;
  uint64_t next_uid_ = 0;
};

// ---------------------------------------------------------------------------
// Unfolding

// Order-n points of every type of both players. Level 1 is the marginal on
// S of each belief; level k+1 pushes each belief forward along
// (id_S, order-k point of the co-player type).
inline std::array<std::vector<const HierarchyPoint*>, 2> unfold_all(
    HierarchyInterner& interner, const TypeStructure& ts, int order) {
  if (order < 1)
    fail(Errc::non_positive_order, "hierarchy order must be at least 1");

  std::array<std::vector<const HierarchyPoint*>, 2> cur;
  for (int i = 0; i < 2; ++i) {
    const PlayerData& p = ts.player(i);
    cur[i].reserve(p.types.size());
    for (int t = 0; t < p.types.size(); ++t)
      cur[i].push_back(
          interner.level_one(marginal_cps(p.beliefs[t], p.belief_space)));
  }

  for (int level = 2; level <= order; ++level) {
    std::array<std::vector<const HierarchyPoint*>, 2> next;
    for (int i = 0; i < 2; ++i) {
      int co = TypeStructure::co(i);
      const PlayerData& p = ts.player(i);
      next[i].reserve(p.types.size());
      for (int t = 0; t < p.types.size(); ++t) {
        std::vector<HierarchyPoint::Conditional> top(p.family.size());
        for (int k = 0; k < p.family.size(); ++k) {
          const FiniteMeasure& m = p.beliefs[t].conditional(k);
          std::map<std::pair<int, const HierarchyPoint*>, Rational,
                   decltype([](const std::pair<int, const HierarchyPoint*>& a,
                               const std::pair<int, const HierarchyPoint*>& b) {
                     if (a.first != b.first) return a.first < b.first;
                     return hierarchy_compare(a.second, b.second) < 0;
                   })>
              acc;
          for (int atom = 0; atom < m.space().size(); ++atom) {
            if (m.mass(atom).is_zero()) continue;
            auto [si, ti] = p.belief_space.split(atom);
            acc[{si, cur[co][ti]}] += m.mass(atom);
          }
          top[k].reserve(acc.size());
          for (auto& [sk, mass] : acc)
            top[k].push_back(
                HierarchyPoint::Entry{sk.first, sk.second, std::move(mass)});
        }
        next[i].push_back(interner.extend(cur[i][t], std::move(top)));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

inline const HierarchyPoint* unfold(HierarchyInterner& interner,
                                    const TypeStructure& ts, int player,
                                    std::string_view type_label, int order) {
  int t = ts.type_index(player, type_label);
  return unfold_all(interner, ts, order)[player][t];
}

// ---------------------------------------------------------------------------
// Coherence

struct CoherenceReport {
  struct Violation {
    int level;                // the higher level whose marginal is wrong
    Event conditioning_event; // base event on S
    std::string key;          // offending (s) or (s, co-point) key
    Rational upper;           // marginalized level-`level` mass
    Rational lower;           // level-(level-1) mass
  };
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  std::string describe() const {
    std::string out;
    for (const auto& v : violations) {
      out += "level " + std::to_string(v.level) + " given " +
             v.conditioning_event.label_string() + " at " + v.key +
             ": marginal " + v.upper.str() + " vs " + v.lower.str() + "\n";
    }
    return out;
  }
};

// Exact coherence: for every adjacent pair of levels, pushing the higher
// conditional down (truncating the co-player point by one order) must
// reproduce the lower conditional. Holds by construction for unfold
// output; hand-built points can fail.
inline CoherenceReport check_coherence(const HierarchyPoint* hp) {
  CoherenceReport report;
  using Key = std::pair<int, const HierarchyPoint*>;
  auto key_less = [](const Key& a, const Key& b) {
    if (a.first != b.first) return a.first < b.first;
    return hierarchy_compare(a.second, b.second) < 0;
  };
  auto key_name = [&](const Key& k) {
    const std::string& s = hp->s_space().atom(k.first);
    if (k.second == nullptr) return s;
    std::ostringstream os;
    os << "(" << s << ",order-" << k.second->order() << " point)";
    return os.str();
  };

  for (const HierarchyPoint* node = hp; node->order() >= 2;
       node = node->prefix()) {
    for (int k = 0; k < node->family().size(); ++k) {
      std::map<Key, Rational, decltype(key_less)> truncated(key_less);
      for (const auto& e : node->top()[k]) {
        const HierarchyPoint* dropped =
            e.co->order() == 1 ? nullptr : e.co->prefix();
        truncated[{e.s_atom, dropped}] += e.mass;
      }
      std::map<Key, Rational, decltype(key_less)> lower(key_less);
      for (const auto& e : node->prefix()->top()[k]) lower[{e.s_atom, e.co}] += e.mass;

      for (const auto& [key, mass] : truncated) {
        auto it = lower.find(key);
        Rational want = it == lower.end() ? Rational(0) : it->second;
        if (mass != want)
          report.violations.push_back(CoherenceReport::Violation{
              node->order(), node->family().event(k), key_name(key), mass, want});
      }
      for (const auto& [key, mass] : lower) {
        if (!truncated.count(key))
          report.violations.push_back(CoherenceReport::Violation{
              node->order(), node->family().event(k), key_name(key), Rational(0),
              mass});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Partition refinement

// Per-player grouping of type labels; cells ordered by their smallest
// member's declared position, members in declared order.
struct Partition {
  std::array<std::vector<std::vector<std::string>>, 2> cells;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.cells == b.cells;
  }
  friend bool operator!=(const Partition& a, const Partition& b) {
    return !(a == b);
  }
};

// The refinement engine. Round 0 is the trivial partition; each round
// splits types by the pushforward of their beliefs onto the co-player's
// current cell labels, which mirrors appending one hierarchy level.
// Cell ids are canonical (first occurrence in declared type order), so
// per-player id vectors are equal exactly when the partitions agree.
class RefinementRun {
 public:
  explicit RefinementRun(const TypeStructure& ts) : ts_(&ts) {
    rounds_.push_back({std::vector<int>(ts.player(0).types.size(), 0),
                       std::vector<int>(ts.player(1).types.size(), 0)});
  }

  // Computes rounds through `n` (or stops early at the fixpoint).
  void ensure(int n) {
    while (static_cast<int>(rounds_.size()) - 1 < n && fixpoint_ < 0) step();
  }

  void ensure_fixpoint() {
    while (fixpoint_ < 0) step();
  }

  int fixpoint_depth() const { return fixpoint_; }

  // Cell ids at `round`, clamped to the fixpoint once reached.
  const std::array<std::vector<int>, 2>& cells(int round) const {
    int last = static_cast<int>(rounds_.size()) - 1;
    return rounds_[std::min(round, last)];
  }

  Partition partition(int round) const {
    const auto& ids = cells(round);
    Partition out;
    for (int i = 0; i < 2; ++i) {
      int ncells = 0;
      for (int id : ids[i]) ncells = std::max(ncells, id + 1);
      std::vector<std::vector<std::string>> cells(ncells);
      for (int t = 0; t < static_cast<int>(ids[i].size()); ++t)
        cells[ids[i][t]].push_back(ts_->player(i).types.atom(t));
      // First-occurrence ids already order cells by smallest member.
      out.cells[i] = std::move(cells);
    }
    return out;
  }

 private:
  // One sparse pushforward signature per type: per conditioning event, the
  // (s, co-cell) masses.
  using Signature = std::vector<std::vector<std::pair<std::pair<int, int>, Rational>>>;

  void step() {
    const auto& prev = rounds_.back();
    std::array<std::vector<int>, 2> next;
    bool changed = false;
    for (int i = 0; i < 2; ++i) {
      int co = TypeStructure::co(i);
      const PlayerData& p = ts_->player(i);
      std::vector<Signature> sigs;
      sigs.reserve(p.types.size());
      for (int t = 0; t < p.types.size(); ++t) {
        Signature sig(p.family.size());
        for (int k = 0; k < p.family.size(); ++k) {
          const FiniteMeasure& m = p.beliefs[t].conditional(k);
          std::map<std::pair<int, int>, Rational> acc;
          for (int atom = 0; atom < m.space().size(); ++atom) {
            if (m.mass(atom).is_zero()) continue;
            auto [si, ti] = p.belief_space.split(atom);
            acc[{si, prev[co][ti]}] += m.mass(atom);
          }
          sig[k].assign(acc.begin(), acc.end());
        }
        sigs.push_back(std::move(sig));
      }

      std::vector<int> ids(p.types.size(), -1);
      std::vector<int> reps;
      for (int t = 0; t < p.types.size(); ++t) {
        for (size_t r = 0; r < reps.size(); ++r)
          if (sigs[reps[r]] == sigs[t]) {
            ids[t] = static_cast<int>(r);
            break;
          }
        if (ids[t] < 0) {
          ids[t] = static_cast<int>(reps.size());
          reps.push_back(t);
        }
      }
      if (ids != prev[i]) changed = true;
      next[i] = std::move(ids);
    }

    if (!changed) {
      fixpoint_ = static_cast<int>(rounds_.size()) - 1;
      return;
    }
    rounds_.push_back(std::move(next));
  }

  const TypeStructure* ts_;
  std::vector<std::array<std::vector<int>, 2>> rounds_;
  int fixpoint_ = -1;
};

// Cells of the order-n hierarchy equality relation (n = 0 is trivial).
inline Partition refine(const TypeStructure& ts, int order) {
  if (order < 0) fail(Errc::non_positive_order, "refinement order must be >= 0");
  RefinementRun run(ts);
  run.ensure(order);
  return run.partition(order);
}

struct FixpointResult {
  Partition partition;
  int depth;  // first k with the round-(k+1) partition equal to round k
};

// Runs the refinement until it stabilizes; at the fixpoint, cells coincide
// with full-hierarchy equality classes. The depth is bounded by
// |T_1| + |T_2| - 1.
inline FixpointResult refine_to_fixpoint(const TypeStructure& ts) {
  RefinementRun run(ts);
  run.ensure_fixpoint();
  return FixpointResult{run.partition(run.fixpoint_depth()), run.fixpoint_depth()};
}

// ---------------------------------------------------------------------------
// Terminality between finite structures

// For each probe type: the target types generating the same hierarchy (at
// the queried order, or at every order), or the first order at which no
// target type matches.
struct TerminalityReport {
  struct Row {
    std::string type;                  // probe type label
    std::vector<std::string> matched;  // target type labels, declared order
    std::optional<int> fail_order;     // set iff matched is empty
  };
  std::array<std::vector<Row>, 2> rows;
  bool finite;      // true when checked at a fixed order
  int order;        // the queried order (finite mode)
  int union_depth;  // refinement depth used on the disjoint union

  bool all_matched() const {
    for (const auto& per_player : rows)
      for (const auto& row : per_player)
        if (row.fail_order) return false;
    return true;
  }
};

namespace detail {

inline TerminalityReport terminality_check(const TypeStructure& target,
                                           const TypeStructure& probe,
                                           std::optional<int> order) {
  DisjointUnion u = disjoint_union(target, probe);
  RefinementRun run(u.structure);
  int upto;
  if (order) {
    run.ensure(*order);
    upto = *order;
  } else {
    run.ensure_fixpoint();
    upto = run.fixpoint_depth();
  }

  TerminalityReport report;
  report.finite = order.has_value();
  report.order = order.value_or(-1);
  report.union_depth = upto;

  for (int i = 0; i < 2; ++i) {
    int n_target = target.player(i).types.size();
    const auto& union_types = u.structure.player(i).types;
    std::vector<int> target_idx(n_target);
    for (int s = 0; s < n_target; ++s)
      target_idx[s] = union_types.require(
          u.embed_left.maps[i].at(target.player(i).types.atom(s)));

    for (int t = 0; t < probe.player(i).types.size(); ++t) {
      const std::string& label = probe.player(i).types.atom(t);
      int probe_idx = union_types.require(u.embed_right.maps[i].at(label));

      TerminalityReport::Row row;
      row.type = label;
      const auto& final_cells = run.cells(upto)[i];
      for (int s = 0; s < n_target; ++s)
        if (final_cells[target_idx[s]] == final_cells[probe_idx])
          row.matched.push_back(target.player(i).types.atom(s));

      if (row.matched.empty()) {
        // Match sets shrink as rounds refine; find the first empty round.
        for (int r = 1; r <= upto; ++r) {
          const auto& cells = run.cells(r)[i];
          bool any = false;
          for (int s = 0; s < n_target; ++s)
            if (cells[target_idx[s]] == cells[probe_idx]) {
              any = true;
              break;
            }
          if (!any) {
            row.fail_order = r;
            break;
          }
        }
        if (!row.fail_order) row.fail_order = upto;  // unmatched at the horizon
      }
      report.rows[i].push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace detail

// Does `target` generate every order-n hierarchy that `probe` does? The
// containment is checked per type by refining the disjoint union to round
// n; both structures must share (S, B_1, B_2).
inline TerminalityReport finitely_terminal_at(const TypeStructure& target,
                                              const TypeStructure& probe,
                                              int order) {
  if (order < 1)
    fail(Errc::non_positive_order, "terminality order must be at least 1");
  return detail::terminality_check(target, probe, order);
}

// Same containment for full hierarchies, decided at the refinement
// fixpoint of the disjoint union.
inline TerminalityReport terminal_over(const TypeStructure& target,
                                       const TypeStructure& probe) {
  return detail::terminality_check(target, probe, std::nullopt);
}

// ---------------------------------------------------------------------------
// Canonical serialization

// Canonical text for a hierarchy point. The point's levels are printed in
// order; co-player points are referenced as @k against a definitions table
// sorted by (order, structure), so equal points serialize byte-identically
// regardless of how they were produced.
inline std::string serialize_hierarchy(const HierarchyPoint* root) {
  // Closure of co-point references, including their prefix chains.
  std::vector<const HierarchyPoint*> defs;
  std::map<const HierarchyPoint*, int, HierarchyPointLess> index;
  auto add = [&](const HierarchyPoint* p, auto&& self) -> void {
    if (index.count(p)) return;
    index.emplace(p, -1);
    if (p->prefix()) self(p->prefix(), self);
    for (const HierarchyPoint* node = p; node; node = node->prefix())
      for (const auto& cond : node->top())
        for (const auto& e : cond)
          if (e.co) self(e.co, self);
  };
  for (const HierarchyPoint* node = root; node; node = node->prefix())
    for (const auto& cond : node->top())
      for (const auto& e : cond)
        if (e.co) add(e.co, add);

  int next = 0;
  for (auto& [p, idx] : index) idx = next++;  // map order = canonical order

  auto entry_text = [&](const HierarchyPoint::Entry& e,
                        const FiniteSpace& s_space) {
    std::string out;
    if (e.co == nullptr) {
      out = s_space.atom(e.s_atom);
    } else {
      out = "(" + s_space.atom(e.s_atom) + ",@" + std::to_string(index.at(e.co)) +
            ")";
    }
    out += "=" + e.mass.str();
    return out;
  };

  std::ostringstream os;
  os << "cps-hier hierarchy v1\n";
  os << "S:";
  for (const auto& a : root->s_space().atoms()) os << ' ' << a;
  os << '\n';
  os << "B:";
  for (const Event& e : root->family().events()) os << ' ' << e.label_string(' ');
  os << '\n';
  os << "order: " << root->order() << '\n';

  os << "points:\n";
  for (const auto& [p, idx] : index) {
    os << "point " << idx << " order " << p->order();
    if (p->prefix()) os << " prefix @" << index.at(p->prefix());
    os << '\n';
    if (p->order() == 1) {
      os << "family:";
      for (const Event& e : p->family().events()) os << ' ' << e.label_string(' ');
      os << '\n';
    }
    for (int k = 0; k < p->family().size(); ++k) {
      os << p->family().event(k).label_string(' ') << ":";
      for (const auto& e : p->top()[k]) os << ' ' << entry_text(e, p->s_space());
      os << '\n';
    }
  }

  os << "levels:\n";
  std::vector<const HierarchyPoint*> chain;
  for (const HierarchyPoint* node = root; node; node = node->prefix())
    chain.push_back(node);
  std::reverse(chain.begin(), chain.end());
  for (const HierarchyPoint* node : chain) {
    for (int k = 0; k < node->family().size(); ++k) {
      os << "level " << node->order() << " | "
         << node->family().event(k).label_string(' ') << ":";
      for (const auto& e : node->top()[k]) os << ' ' << entry_text(e, node->s_space());
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace cpshier

#endif  // CPSHIER_HIERARCHY_HPP_
