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
// Exact finite probability measures over labeled finite spaces: spaces,
// events, measures, atom maps and pushforwards. All values are immutable
// after construction and safe to share across threads.

#ifndef CPSHIER_MEASURE_HPP_
#define CPSHIER_MEASURE_HPP_

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cpshier/error.hpp"
#include "cpshier/rational.hpp"

namespace cpshier {

// A finite labeled space. Atoms keep their declared order; that order fixes
// every serialization and report. Copies share storage; equality is by the
// atom list, not by identity.
class FiniteSpace {
 public:
  explicit FiniteSpace(std::vector<std::string> atoms) {
    if (atoms.empty()) fail(Errc::empty_space, "a space needs at least one atom");
    auto data = std::make_shared<Data>();
    for (int i = 0; i < static_cast<int>(atoms.size()); ++i) {
      auto [it, inserted] = data->index.emplace(atoms[i], i);
      if (!inserted)
        fail(Errc::duplicate_label, "duplicate atom '" + atoms[i] + "'");
    }
    data->atoms = std::move(atoms);
    data_ = std::move(data);
  }

  int size() const { return static_cast<int>(data_->atoms.size()); }
  const std::vector<std::string>& atoms() const { return data_->atoms; }
  const std::string& atom(int i) const { return data_->atoms.at(i); }

  // Index of `label`, or -1 when absent.
  int index_of(std::string_view label) const {
    auto it = data_->index.find(std::string(label));
    return it == data_->index.end() ? -1 : it->second;
  }

  int require(std::string_view label) const {
    int i = index_of(label);
    if (i < 0) fail(Errc::unknown_atom, "unknown atom '" + std::string(label) + "'");
    return i;
  }

  bool contains(std::string_view label) const { return index_of(label) >= 0; }

  friend bool operator==(const FiniteSpace& a, const FiniteSpace& b) {
    return a.data_ == b.data_ || a.data_->atoms == b.data_->atoms;
  }
  friend bool operator!=(const FiniteSpace& a, const FiniteSpace& b) {
    return !(a == b);
  }

 private:
  struct Data {
    std::vector<std::string> atoms;
    std::unordered_map<std::string, int> index;
  };
  std::shared_ptr<const Data> data_;
};

// A subset of a space's atoms, stored as sorted atom indices. Events compare
// by member set (given equal spaces), never by identity.
class Event {
 public:
  Event(FiniteSpace space, const std::vector<std::string>& members)
      : space_(std::move(space)) {
    members_.reserve(members.size());
    for (const auto& label : members) members_.push_back(space_.require(label));
    std::sort(members_.begin(), members_.end());
    auto dup = std::adjacent_find(members_.begin(), members_.end());
    if (dup != members_.end())
      fail(Errc::duplicate_label,
           "atom '" + space_.atom(*dup) + "' listed twice in event");
  }

  static Event of_indices(FiniteSpace space, std::vector<int> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (!members.empty() && (members.front() < 0 || members.back() >= space.size()))
      fail(Errc::unknown_atom, "event member index out of range");
    Event e(std::move(space));
    e.members_ = std::move(members);
    return e;
  }

  static Event full(FiniteSpace space) {
    std::vector<int> all(space.size());
    for (int i = 0; i < static_cast<int>(all.size()); ++i) all[i] = i;
    return of_indices(std::move(space), std::move(all));
  }

  const FiniteSpace& space() const { return space_; }
  const std::vector<int>& members() const { return members_; }
  bool empty() const { return members_.empty(); }
  int size() const { return static_cast<int>(members_.size()); }

  bool contains(int atom) const {
    return std::binary_search(members_.begin(), members_.end(), atom);
  }

  bool subset_of(const Event& other) const {
    return std::includes(other.members_.begin(), other.members_.end(),
                         members_.begin(), members_.end());
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(members_.size());
    for (int m : members_) out.push_back(space_.atom(m));
    return out;
  }

  // "{a,b}" with `sep` between labels; used in reports and file output.
  std::string label_string(char sep = ',') const {
    std::string out = "{";
    for (size_t i = 0; i < members_.size(); ++i) {
      if (i) out += sep;
      out += space_.atom(members_[i]);
    }
    out += '}';
    return out;
  }

  friend bool operator==(const Event& a, const Event& b) {
    return a.space_ == b.space_ && a.members_ == b.members_;
  }
  friend bool operator!=(const Event& a, const Event& b) { return !(a == b); }

 private:
  explicit Event(FiniteSpace space) : space_(std::move(space)) {}

  FiniteSpace space_;
  std::vector<int> members_;
};

// Probability measure on a finite space. Stores one exact mass per atom,
// explicit zeros included; masses are nonnegative and sum to exactly 1.
class FiniteMeasure {
 public:
  const FiniteSpace& space() const { return space_; }
  const std::vector<Rational>& masses() const { return mass_; }
  const Rational& mass(int atom) const { return mass_.at(atom); }
  const Rational& mass(std::string_view label) const {
    return mass_.at(space_.require(label));
  }

  std::vector<int> support() const {
    std::vector<int> s;
    for (int i = 0; i < static_cast<int>(mass_.size()); ++i)
      if (!mass_[i].is_zero()) s.push_back(i);
    return s;
  }

  friend bool operator==(const FiniteMeasure& a, const FiniteMeasure& b) {
    return a.space_ == b.space_ && a.mass_ == b.mass_;
  }
  friend bool operator!=(const FiniteMeasure& a, const FiniteMeasure& b) {
    return !(a == b);
  }

  friend FiniteMeasure measure_from_masses(FiniteSpace space,
                                           std::vector<Rational> masses);

 private:
  FiniteMeasure(FiniteSpace space, std::vector<Rational> mass)
      : space_(std::move(space)), mass_(std::move(mass)) {}

  FiniteSpace space_;
  std::vector<Rational> mass_;
};

// Index-aligned constructor; checks nonnegativity and exact normalization.
inline FiniteMeasure measure_from_masses(FiniteSpace space,
                                         std::vector<Rational> masses) {
  if (static_cast<int>(masses.size()) != space.size())
    fail(Errc::space_mismatch, "mass vector does not match space size");
  Rational total;
  for (int i = 0; i < static_cast<int>(masses.size()); ++i) {
    if (masses[i].is_negative())
      fail(Errc::negative_mass,
           "negative mass " + masses[i].str() + " at atom '" + space.atom(i) + "'");
    total += masses[i];
  }
  if (total != Rational(1))
    fail(Errc::not_normalized, "masses sum to " + total.str() + ", expected 1");
  return FiniteMeasure(std::move(space), std::move(masses));
}

// Builds a measure from labeled weights; atoms not listed get mass 0.
inline FiniteMeasure make_measure(
    const FiniteSpace& space,
    const std::vector<std::pair<std::string, Rational>>& weights) {
  std::vector<Rational> masses(space.size());
  std::vector<bool> seen(space.size(), false);
  for (const auto& [label, w] : weights) {
    int i = space.require(label);
    if (seen[i])
      fail(Errc::duplicate_label, "weight for atom '" + label + "' given twice");
    seen[i] = true;
    masses[i] = w;
  }
  return measure_from_masses(space, std::move(masses));
}

inline FiniteMeasure point_mass(const FiniteSpace& space,
                                std::string_view atom) {
  std::vector<Rational> masses(space.size());
  masses[space.require(atom)] = Rational(1);
  return measure_from_masses(space, std::move(masses));
}

// mu(e) = sum of the masses of e's members.
inline Rational measure_of(const FiniteMeasure& m, const Event& e) {
  if (m.space() != e.space())
    fail(Errc::space_mismatch, "event space differs from measure space");
  Rational sum;
  for (int atom : e.members()) sum += m.mass(atom);
  return sum;
}

// A map between the atoms of two spaces. May be partial while being built
// from pairs; pushforward and preimage require totality.
class AtomMap {
 public:
  AtomMap(FiniteSpace from, FiniteSpace to)
      : from_(std::move(from)), to_(std::move(to)), image_(from_.size(), -1) {}

  static AtomMap identity(const FiniteSpace& space) {
    AtomMap f(space, space);
    for (int i = 0; i < space.size(); ++i) f.image_[i] = i;
    return f;
  }

  static AtomMap from_pairs(
      FiniteSpace from, FiniteSpace to,
      const std::vector<std::pair<std::string, std::string>>& pairs) {
    AtomMap f(std::move(from), std::move(to));
    for (const auto& [a, b] : pairs) f.image_[f.from_.require(a)] = f.to_.require(b);
    return f;
  }

  static AtomMap from_function(
      FiniteSpace from, FiniteSpace to,
      const std::function<std::string(const std::string&)>& fn) {
    AtomMap f(std::move(from), std::move(to));
    for (int i = 0; i < f.from_.size(); ++i)
      f.image_[i] = f.to_.require(fn(f.from_.atom(i)));
    return f;
  }

  const FiniteSpace& from() const { return from_; }
  const FiniteSpace& to() const { return to_; }

  // Image index of `atom`, or -1 when unmapped.
  int apply(int atom) const { return image_.at(atom); }

  bool total() const {
    return std::find(image_.begin(), image_.end(), -1) == image_.end();
  }

  void require_total() const {
    for (int i = 0; i < static_cast<int>(image_.size()); ++i)
      if (image_[i] < 0)
        fail(Errc::partial_map, "atom '" + from_.atom(i) + "' has no image");
  }

  Event preimage(const Event& e) const {
    if (e.space() != to_)
      fail(Errc::space_mismatch, "event is not over the map's codomain");
    require_total();
    std::vector<int> members;
    for (int i = 0; i < from_.size(); ++i)
      if (e.contains(image_[i])) members.push_back(i);
    return Event::of_indices(from_, std::move(members));
  }

 private:
  FiniteSpace from_;
  FiniteSpace to_;
  std::vector<int> image_;
};

// g after f.
inline AtomMap compose(const AtomMap& g, const AtomMap& f) {
  if (f.to() != g.from())
    fail(Errc::space_mismatch, "composition domains do not line up");
  f.require_total();
  g.require_total();
  return AtomMap::from_function(f.from(), g.to(), [&](const std::string& a) {
    return g.to().atom(g.apply(f.apply(f.from().require(a))));
  });
}

// Image measure: mass(y) = sum of mass(x) over f(x) = y.
inline FiniteMeasure pushforward(const FiniteMeasure& m, const AtomMap& f) {
  if (m.space() != f.from())
    fail(Errc::space_mismatch, "measure space differs from map domain");
  f.require_total();
  std::vector<Rational> masses(f.to().size());
  for (int i = 0; i < m.space().size(); ++i) masses[f.apply(i)] += m.mass(i);
  return measure_from_masses(f.to(), std::move(masses));
}

// The product X x Y with atoms "(x,y)" in row-major declared order.
class ProductSpace {
 public:
  ProductSpace(FiniteSpace left, FiniteSpace right)
      : left_(std::move(left)),
        right_(std::move(right)),
        product_(make_product(left_, right_)) {}

  const FiniteSpace& left() const { return left_; }
  const FiniteSpace& right() const { return right_; }
  const FiniteSpace& space() const { return product_; }

  int fuse(int li, int ri) const { return li * right_.size() + ri; }
  std::pair<int, int> split(int atom) const {
    return {atom / right_.size(), atom % right_.size()};
  }

  static std::string pair_label(const std::string& l, const std::string& r) {
    return "(" + l + "," + r + ")";
  }

  // B x Y for an event B on the left factor.
  Event cylinder(const Event& base) const {
    if (base.space() != left_)
      fail(Errc::space_mismatch, "cylinder base is not over the left factor");
    std::vector<int> members;
    members.reserve(base.size() * right_.size());
    for (int b : base.members())
      for (int r = 0; r < right_.size(); ++r) members.push_back(fuse(b, r));
    return Event::of_indices(product_, std::move(members));
  }

  AtomMap left_projection() const {
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(product_.size());
    for (int i = 0; i < product_.size(); ++i)
      pairs.emplace_back(product_.atom(i), left_.atom(split(i).first));
    return AtomMap::from_pairs(product_, left_, pairs);
  }

 private:
  static FiniteSpace make_product(const FiniteSpace& l, const FiniteSpace& r) {
    std::vector<std::string> atoms;
    atoms.reserve(static_cast<size_t>(l.size()) * r.size());
    for (const auto& a : l.atoms())
      for (const auto& b : r.atoms()) atoms.push_back(pair_label(a, b));
    return FiniteSpace(std::move(atoms));
  }

  FiniteSpace left_;
  FiniteSpace right_;
  FiniteSpace product_;
};

}  // namespace cpshier

#endif  // CPSHIER_MEASURE_HPP_
