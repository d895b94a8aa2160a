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
// Finite two-player conditional type structures over a common space S:
// per player, a conditioning family on S, a finite type set, and a belief
// map assigning each type a CPS on S x T_co with the family lifted to
// cylinders. Includes the text file format, completeness, disjoint unions
// for cross-structure comparison, and type-morphism verification.

#ifndef CPSHIER_STRUCTURE_HPP_
#define CPSHIER_STRUCTURE_HPP_

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cpshier/cps.hpp"
#include "cpshier/error.hpp"
#include "cpshier/measure.hpp"
#include "cpshier/rational.hpp"

namespace cpshier {

// Everything one player contributes: the family B_i on S, the type set T_i,
// and one belief CPS per type on S x T_co with family = cylinders of B_i.
struct PlayerData {
  ConditioningFamily family;
  FiniteSpace types;
  ProductSpace belief_space;   // S x T_co
  ConditioningFamily lifted;   // cylinders B x T_co, in family order
  std::vector<Cps> beliefs;    // indexed like `types`
};

struct TypeStructure {
  FiniteSpace s;
  std::array<PlayerData, 2> players;
  // Inert flags (e.g. topological properties); kept sorted, no semantics.
  std::vector<std::pair<std::string, std::string>> metadata;

  const PlayerData& player(int i) const { return players.at(i); }
  static int co(int i) { return 1 - i; }

  int type_index(int i, std::string_view label) const {
    int t = players.at(i).types.index_of(label);
    if (t < 0)
      fail(Errc::unknown_type, "player " + std::to_string(i + 1) +
                                   " has no type '" + std::string(label) + "'");
    return t;
  }

  const Cps& belief(int i, int type_idx) const {
    return players.at(i).beliefs.at(type_idx);
  }
  const Cps& belief(int i, std::string_view label) const {
    return belief(i, type_index(i, label));
  }

  friend bool operator==(const TypeStructure& a, const TypeStructure& b) {
    for (int i = 0; i < 2; ++i) {
      if (a.players[i].family != b.players[i].family) return false;
      if (a.players[i].types != b.players[i].types) return false;
      if (a.players[i].beliefs != b.players[i].beliefs) return false;
    }
    return a.s == b.s && a.metadata == b.metadata;
  }
  friend bool operator!=(const TypeStructure& a, const TypeStructure& b) {
    return !(a == b);
  }
};

// Structural assembly. Belief CPSs must live on S x T_co with the lifted
// family; chain-rule validity is validate_structure's concern, not a
// construction requirement.
inline TypeStructure make_type_structure(
    FiniteSpace s, std::array<ConditioningFamily, 2> families,
    std::array<FiniteSpace, 2> types, std::array<std::vector<Cps>, 2> beliefs,
    std::vector<std::pair<std::string, std::string>> metadata = {}) {
  for (int i = 0; i < 2; ++i) {
    if (families[i].space() != s)
      fail(Errc::space_mismatch,
           "player " + std::to_string(i + 1) + " family is not over S");
    for (const auto& label : types[i].atoms())
      if (s.contains(label))
        fail(Errc::duplicate_label,
             "type label '" + label + "' collides with an atom of S");
    if (beliefs[i].size() != static_cast<size_t>(types[i].size()))
      fail(Errc::unknown_type,
           "player " + std::to_string(i + 1) + " needs exactly one belief per type");
  }

  std::array<std::optional<PlayerData>, 2> players;
  for (int i = 0; i < 2; ++i) {
    CylinderFamily lift = lift_family(families[i], types[TypeStructure::co(i)]);
    for (size_t t = 0; t < beliefs[i].size(); ++t) {
      const Cps& c = beliefs[i][t];
      if (c.space != lift.prod.space())
        fail(Errc::space_mismatch,
             "belief of type '" + types[i].atom(static_cast<int>(t)) +
                 "' is not over S x T_" + std::to_string(TypeStructure::co(i) + 1));
      if (c.family != lift.lifted)
        fail(Errc::family_mismatch,
             "belief of type '" + types[i].atom(static_cast<int>(t)) +
                 "' does not use the lifted conditioning family");
    }
    players[i] = PlayerData{families[i], types[i], lift.prod, lift.lifted,
                            std::move(beliefs[i])};
  }

  std::sort(metadata.begin(), metadata.end());
  return TypeStructure{std::move(s),
                       {std::move(*players[0]), std::move(*players[1])},
                       std::move(metadata)};
}

// ---------------------------------------------------------------------------
// Validation

struct StructureReport {
  struct Item {
    int player;  // 0-based
    std::string type;
    CpsViolation violation;
  };
  std::vector<Item> items;

  bool ok() const { return items.empty(); }

  std::string describe() const {
    std::string out;
    for (const auto& it : items) {
      out += "player " + std::to_string(it.player + 1) + " type " + it.type +
             ": " + it.violation.describe() + "\n";
    }
    return out;
  }
};

// Runs the CPS validator over every belief of both players.
inline StructureReport validate_structure(const TypeStructure& ts,
                                          const ValidateOptions& options = {}) {
  StructureReport report;
  for (int i = 0; i < 2; ++i) {
    const PlayerData& p = ts.player(i);
    for (int t = 0; t < p.types.size(); ++t) {
      ValidationReport r = validate_cps(p.beliefs[t], options);
      for (auto& v : r.violations)
        report.items.push_back(StructureReport::Item{i, p.types.atom(t), std::move(v)});
    }
  }
  return report;
}

// Shared-base precondition for every cross-structure operation: identical S
// and identical conditioning families, compared by value.
inline void require_same_base(const TypeStructure& a, const TypeStructure& b) {
  auto atoms_line = [](const std::vector<std::string>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) out += ' ';
      out += v[i];
    }
    return out;
  };
  if (a.s != b.s)
    fail(Errc::base_mismatch, "S differs: [" + atoms_line(a.s.atoms()) +
                                  "] vs [" + atoms_line(b.s.atoms()) + "]");
  for (int i = 0; i < 2; ++i) {
    if (a.player(i).family == b.player(i).family) continue;
    std::string lhs, rhs;
    for (const Event& e : a.player(i).family.events()) lhs += e.label_string() + " ";
    for (const Event& e : b.player(i).family.events()) rhs += e.label_string() + " ";
    fail(Errc::base_mismatch, "B_" + std::to_string(i + 1) + " differs: " + lhs +
                                  "vs " + rhs);
  }
}

// ---------------------------------------------------------------------------
// File format
//
//   cps-hier v1
//   meta <key> <value>          (optional, canonical form sorts by key)
//   S: <atom> ...
//   player 1
//   B: {<atom> ...} ...
//   T: <type> ...
//   belief <type> | {<event>}: (<s>,<t_co>)=<p/q> ...
//   player 2
//   ...
//
// Omitted (s,t) pairs mean mass 0; canonical output lists only positive
// masses, in product atom order. '#' starts a comment.

namespace detail {

inline bool is_label_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '\'' ||
         c == '+' || c == '-' || c == '/';
}

inline bool is_file_label(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_label_char(c) || c == '/') return false;
  return true;
}

struct Token {
  std::string text;
  bool punct;
};

inline std::vector<Token> tokenize_line(const std::string& line, int lineno) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '{' || c == '}' || c == '(' || c == ')' || c == ',' || c == '=' ||
        c == ':' || c == '|') {
      out.push_back(Token{std::string(1, c), true});
      ++i;
      continue;
    }
    if (!is_label_char(c))
      fail(Errc::syntax_error, "line " + std::to_string(lineno) +
                                   ": unexpected character '" + std::string(1, c) + "'");
    size_t j = i;
    while (j < line.size() && is_label_char(line[j])) ++j;
    out.push_back(Token{line.substr(i, j - i), false});
    i = j;
  }
  return out;
}

// Cursor over one line's tokens with located errors.
class LineCursor {
 public:
  LineCursor(const std::vector<Token>* toks, int lineno)
      : toks_(toks), lineno_(lineno) {}

  bool done() const { return pos_ >= toks_->size(); }

  const Token& peek() const {
    if (done()) err("unexpected end of line");
    return (*toks_)[pos_];
  }

  std::string word(const char* what) {
    const Token& t = peek();
    if (t.punct) err(std::string("expected ") + what + ", found '" + t.text + "'");
    ++pos_;
    return t.text;
  }

  void punct(char c) {
    const Token& t = peek();
    if (!t.punct || t.text[0] != c)
      err(std::string("expected '") + c + "', found '" + t.text + "'");
    ++pos_;
  }

  bool try_punct(char c) {
    if (done() || !(*toks_)[pos_].punct || (*toks_)[pos_].text[0] != c) return false;
    ++pos_;
    return true;
  }

  void end() const {
    if (!done()) err("trailing tokens starting at '" + (*toks_)[pos_].text + "'");
  }

  [[noreturn]] void err(const std::string& message) const {
    fail(Errc::syntax_error, "line " + std::to_string(lineno_) + ": " + message);
  }

  int lineno() const { return lineno_; }

 private:
  const std::vector<Token>* toks_;
  int lineno_;
  size_t pos_ = 0;
};

}  // namespace detail

inline std::string serialize_structure(const TypeStructure& ts) {
  auto check_label = [](const std::string& l) {
    if (!detail::is_file_label(l))
      fail(Errc::syntax_error,
           "label '" + l + "' cannot be written in the structure format");
  };
  std::ostringstream os;
  os << "cps-hier v1\n";
  for (const auto& [k, v] : ts.metadata) os << "meta " << k << " " << v << "\n";
  os << "S:";
  for (const auto& a : ts.s.atoms()) {
    check_label(a);
    os << ' ' << a;
  }
  os << '\n';
  for (int i = 0; i < 2; ++i) {
    const PlayerData& p = ts.player(i);
    os << "player " << (i + 1) << '\n';
    os << "B:";
    for (const Event& e : p.family.events()) os << ' ' << e.label_string(' ');
    os << '\n';
    os << "T:";
    for (const auto& t : p.types.atoms()) {
      check_label(t);
      os << ' ' << t;
    }
    os << '\n';
    for (int t = 0; t < p.types.size(); ++t) {
      const Cps& c = p.beliefs[t];
      for (int k = 0; k < p.family.size(); ++k) {
        os << "belief " << p.types.atom(t) << " | "
           << p.family.event(k).label_string(' ') << ":";
        const FiniteMeasure& m = c.conditional(k);
        for (int atom = 0; atom < m.space().size(); ++atom) {
          if (m.mass(atom).is_zero()) continue;
          os << ' ' << m.space().atom(atom) << '=' << m.mass(atom).str();
        }
        os << '\n';
      }
    }
  }
  return os.str();
}

// Parses the structure format without checking the chain rule, so that
// invalid-but-well-formed inputs can be loaded and reported on.
inline TypeStructure parse_structure_raw(const std::string& text) {
  using detail::LineCursor;
  using detail::Token;

  struct RawBelief {
    std::string type;
    std::vector<std::string> event_labels;
    std::vector<std::pair<std::pair<std::string, std::string>, Rational>> entries;
    int lineno;
  };
  struct RawPlayer {
    std::vector<std::vector<std::string>> family_events;
    std::vector<std::string> types;
    std::vector<RawBelief> beliefs;
    bool have_b = false, have_t = false;
    int lineno = 0;
  };

  std::vector<std::string> s_atoms;
  bool have_header = false, have_s = false;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::array<RawPlayer, 2> raw;
  int current_player = -1;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<Token> toks = detail::tokenize_line(line, lineno);
    if (toks.empty()) continue;
    LineCursor cur(&toks, lineno);

    if (!have_header) {
      std::string a = cur.word("format name");
      std::string b = cur.word("format version");
      cur.end();
      if (a != "cps-hier" || b != "v1")
        cur.err("expected header 'cps-hier v1'");
      have_header = true;
      continue;
    }

    std::string head = cur.word("section keyword");
    if (head == "meta") {
      if (have_s) cur.err("meta lines must precede the S section");
      std::string key = cur.word("meta key");
      std::string value = cur.word("meta value");
      while (!cur.done()) value += " " + cur.word("meta value");
      metadata.emplace_back(key, value);
    } else if (head == "S") {
      cur.punct(':');
      if (have_s) cur.err("duplicate S section");
      while (!cur.done()) s_atoms.push_back(cur.word("atom label"));
      if (s_atoms.empty()) cur.err("S needs at least one atom");
      have_s = true;
    } else if (head == "player") {
      if (!have_s) cur.err("player section before S");
      std::string which = cur.word("player number");
      cur.end();
      int want = current_player + 1;
      if (want > 1) cur.err("only players 1 and 2 are supported");
      if (which != std::to_string(want + 1))
        cur.err("expected 'player " + std::to_string(want + 1) + "'");
      current_player = want;
      raw[current_player].lineno = lineno;
    } else if (head == "B") {
      cur.punct(':');
      if (current_player < 0) cur.err("B section outside a player section");
      RawPlayer& p = raw[current_player];
      if (p.have_b) cur.err("duplicate B section");
      while (!cur.done()) {
        cur.punct('{');
        std::vector<std::string> members;
        while (!cur.try_punct('}')) members.push_back(cur.word("atom label"));
        p.family_events.push_back(std::move(members));
      }
      if (p.family_events.empty()) cur.err("B needs at least one event");
      p.have_b = true;
    } else if (head == "T") {
      cur.punct(':');
      if (current_player < 0) cur.err("T section outside a player section");
      RawPlayer& p = raw[current_player];
      if (p.have_t) cur.err("duplicate T section");
      while (!cur.done()) p.types.push_back(cur.word("type label"));
      if (p.types.empty()) cur.err("T needs at least one type");
      p.have_t = true;
    } else if (head == "belief") {
      if (current_player < 0) cur.err("belief line outside a player section");
      RawBelief b;
      b.lineno = lineno;
      b.type = cur.word("type label");
      cur.punct('|');
      cur.punct('{');
      while (!cur.try_punct('}')) b.event_labels.push_back(cur.word("atom label"));
      cur.punct(':');
      while (!cur.done()) {
        cur.punct('(');
        std::string s_label = cur.word("S atom");
        cur.punct(',');
        std::string t_label = cur.word("co-player type");
        cur.punct(')');
        cur.punct('=');
        std::string value = cur.word("rational");
        Rational r;
        try {
          r = Rational::parse(value);
        } catch (const Error&) {
          cur.err("malformed rational '" + value + "'");
        }
        b.entries.push_back({{s_label, t_label}, r});
      }
      raw[current_player].beliefs.push_back(std::move(b));
    } else {
      cur.err("unknown section '" + head + "'");
    }
  }

  if (!have_header) fail(Errc::syntax_error, "missing 'cps-hier v1' header");
  if (!have_s) fail(Errc::syntax_error, "missing S section");
  for (int i = 0; i < 2; ++i) {
    if (raw[i].lineno == 0)
      fail(Errc::syntax_error, "missing 'player " + std::to_string(i + 1) + "' section");
    if (!raw[i].have_b || !raw[i].have_t)
      fail(Errc::syntax_error,
           "player " + std::to_string(i + 1) + " needs both a B and a T section");
  }

  // Semantic assembly; construction failures surface as ValidationError
  // except label duplication, which keeps its own code.
  auto wrap = [](int lineno, const std::string& context,
                 auto&& fn) -> decltype(fn()) {
    try {
      return fn();
    } catch (const Error& e) {
      if (e.code() == Errc::duplicate_label) throw;
      fail(Errc::validation_error,
           "line " + std::to_string(lineno) + ": " + context + ": " + e.what());
    }
  };

  FiniteSpace s = [&] {
    try {
      return FiniteSpace(s_atoms);
    } catch (const Error& e) {
      fail(e.code(), "S section: " + std::string(e.what()));
    }
  }();

  std::array<std::optional<FiniteSpace>, 2> types;
  std::array<std::optional<ConditioningFamily>, 2> families;
  for (int i = 0; i < 2; ++i) {
    int at = raw[i].lineno;
    types[i] = [&]() -> FiniteSpace {
      try {
        return FiniteSpace(raw[i].types);
      } catch (const Error& e) {
        fail(e.code(), "player " + std::to_string(i + 1) + " types: " + e.what());
      }
    }();
    families[i] = wrap(at, "player " + std::to_string(i + 1) + " family", [&] {
      std::vector<Event> events;
      events.reserve(raw[i].family_events.size());
      for (const auto& labels : raw[i].family_events) events.emplace_back(s, labels);
      return ConditioningFamily(s, std::move(events));
    });
  }

  std::array<std::vector<Cps>, 2> beliefs;
  for (int i = 0; i < 2; ++i) {
    int co = TypeStructure::co(i);
    CylinderFamily lift = lift_family(*families[i], *types[co]);
    const FiniteSpace& prod = lift.prod.space();

    // type index -> family index -> weights plus the source line
    struct Slot {
      std::vector<std::pair<std::string, Rational>> weights;
      int lineno;
    };
    std::vector<std::vector<std::optional<Slot>>> slots(
        types[i]->size(), std::vector<std::optional<Slot>>(families[i]->size()));

    for (const RawBelief& b : raw[i].beliefs) {
      int t = types[i]->index_of(b.type);
      if (t < 0)
        fail(Errc::syntax_error, "line " + std::to_string(b.lineno) +
                                     ": belief for unknown type '" + b.type + "'");
      Event ev = wrap(b.lineno, "conditioning event", [&] { return Event(s, b.event_labels); });
      int k = families[i]->index_of(ev);
      if (k < 0)
        fail(Errc::validation_error,
             "line " + std::to_string(b.lineno) + ": event " + ev.label_string() +
                 " is not in player " + std::to_string(i + 1) + "'s family");
      if (slots[t][k])
        fail(Errc::syntax_error, "line " + std::to_string(b.lineno) +
                                     ": duplicate belief line for type '" + b.type +
                                     "' and event " + ev.label_string());
      std::vector<std::pair<std::string, Rational>> weights;
      weights.reserve(b.entries.size());
      for (const auto& [pair_labels, r] : b.entries)
        weights.emplace_back(
            ProductSpace::pair_label(pair_labels.first, pair_labels.second), r);
      slots[t][k] = Slot{std::move(weights), b.lineno};
    }

    for (int t = 0; t < types[i]->size(); ++t) {
      std::vector<FiniteMeasure> conditionals;
      conditionals.reserve(families[i]->size());
      for (int k = 0; k < families[i]->size(); ++k) {
        if (!slots[t][k])
          fail(Errc::validation_error,
               "missing belief for player " + std::to_string(i + 1) + " type '" +
                   types[i]->atom(t) + "' given " +
                   families[i]->event(k).label_string());
        conditionals.push_back(
            wrap(slots[t][k]->lineno,
                 "belief of type '" + types[i]->atom(t) + "' given " +
                     families[i]->event(k).label_string(),
                 [&] { return make_measure(prod, slots[t][k]->weights); }));
      }
      beliefs[i].push_back(make_cps(prod, lift.lifted, std::move(conditionals)));
    }
  }

  return make_type_structure(std::move(s), {std::move(*families[0]), std::move(*families[1])},
                             {std::move(*types[0]), std::move(*types[1])},
                             std::move(beliefs), std::move(metadata));
}

// Fully validated parse: raw parse plus the chain-rule check on every
// belief; throws ValidationError carrying the violation report.
inline TypeStructure parse_structure(const std::string& text,
                                     const ValidateOptions& options = {}) {
  TypeStructure ts = parse_structure_raw(text);
  StructureReport report = validate_structure(ts, options);
  if (!report.ok())
    fail(Errc::validation_error, "structure fails validation:\n" + report.describe());
  return ts;
}

// ---------------------------------------------------------------------------
// Completeness

struct CompletenessStatus {
  bool complete;
  int witness_player = -1;      // 0-based; set when incomplete
  std::optional<Cps> witness;   // a CPS outside that player's belief image
};

// A finite structure is complete iff each belief codomain is a singleton,
// which happens exactly when every conditioning event of the lifted family
// is a single product atom: then each conditional is a forced point mass.
// Any event with two or more atoms gives a continuum of CPSs, which a
// finite type set cannot cover; a witness outside the image is produced by
// perturbing a full-support prior.
inline CompletenessStatus completeness_status(const TypeStructure& ts) {
  for (int i = 0; i < 2; ++i) {
    const PlayerData& p = ts.player(i);
    int wide = -1;
    for (int k = 0; k < p.lifted.size(); ++k)
      if (p.lifted.event(k).size() >= 2) {
        wide = k;
        break;
      }
    if (wide < 0) continue;  // this codomain is a singleton

    // Candidate CPSs from priors that tilt the first atom of the wide
    // event; their conditionals there are pairwise distinct, so at most
    // |T_i| of the |T_i|+1 candidates can be belief images.
    const FiniteSpace& prod = p.belief_space.space();
    int tilted_atom = p.lifted.event(wide).members().front();
    for (int k = 1; k <= p.types.size() + 1; ++k) {
      Rational total(prod.size() + k);
      std::vector<Rational> masses(prod.size());
      for (int a = 0; a < prod.size(); ++a)
        masses[a] = (a == tilted_atom ? Rational(1 + k) : Rational(1)) / total;
      Cps candidate =
          cps_from_prior(measure_from_masses(prod, std::move(masses)), p.lifted);
      bool in_image = false;
      for (const Cps& b : p.beliefs)
        if (b == candidate) {
          in_image = true;
          break;
        }
      if (!in_image)
        return CompletenessStatus{false, i, std::move(candidate)};
    }
    fail(Errc::validation_error, "witness search exhausted; unreachable");
  }
  return CompletenessStatus{true, -1, std::nullopt};
}

// ---------------------------------------------------------------------------
// Disjoint union and morphisms

// Per-player total maps between type labels of two structures.
struct MorphismCandidate {
  std::array<std::map<std::string, std::string>, 2> maps;
};

struct DisjointUnion {
  TypeStructure structure;
  // Hierarchy-preserving embeddings of the left/right operand's types.
  MorphismCandidate embed_left;
  MorphismCandidate embed_right;
};

// Tagged union of the type sets over a shared base. Each belief keeps its
// masses on its own structure's types and gives zero mass to the other
// side's, so embedded types unfold to the same hierarchies as before.
inline DisjointUnion disjoint_union(const TypeStructure& a,
                                    const TypeStructure& b) {
  require_same_base(a, b);

  // Tag prefixes must not make a union type label collide with an S atom;
  // bump a counter until the smallest safe pair is found.
  std::string tag_a = "a.", tag_b = "b.";
  for (int k = 0;; ++k) {
    if (k > 0) {
      tag_a = "a" + std::to_string(k) + ".";
      tag_b = "b" + std::to_string(k) + ".";
    }
    bool clash = false;
    for (int i = 0; i < 2 && !clash; ++i) {
      for (const auto& t : a.player(i).types.atoms())
        if (a.s.contains(tag_a + t)) { clash = true; break; }
      for (const auto& t : b.player(i).types.atoms())
        if (a.s.contains(tag_b + t)) { clash = true; break; }
    }
    if (!clash) break;
  }

  std::array<FiniteSpace, 2> union_types = [&] {
    std::array<std::optional<FiniteSpace>, 2> out;
    for (int i = 0; i < 2; ++i) {
      std::vector<std::string> labels;
      for (const auto& t : a.player(i).types.atoms()) labels.push_back(tag_a + t);
      for (const auto& t : b.player(i).types.atoms()) labels.push_back(tag_b + t);
      out[i] = FiniteSpace(std::move(labels));
    }
    return std::array<FiniteSpace, 2>{std::move(*out[0]), std::move(*out[1])};
  }();

  std::array<std::vector<Cps>, 2> beliefs;
  for (int i = 0; i < 2; ++i) {
    int co = TypeStructure::co(i);
    CylinderFamily lift = lift_family(a.player(i).family, union_types[co]);
    auto embed = [&](const TypeStructure& src, const std::string& tag) {
      const PlayerData& p = src.player(i);
      for (int t = 0; t < p.types.size(); ++t) {
        std::vector<FiniteMeasure> conditionals;
        conditionals.reserve(p.family.size());
        for (int k = 0; k < p.family.size(); ++k) {
          const FiniteMeasure& m = p.beliefs[t].conditional(k);
          std::vector<Rational> masses(lift.prod.space().size());
          for (int atom = 0; atom < m.space().size(); ++atom) {
            if (m.mass(atom).is_zero()) continue;
            auto [si, ti] = p.belief_space.split(atom);
            int u = union_types[co].require(tag + src.player(co).types.atom(ti));
            masses[lift.prod.fuse(si, u)] = m.mass(atom);
          }
          conditionals.push_back(
              measure_from_masses(lift.prod.space(), std::move(masses)));
        }
        beliefs[i].push_back(make_cps(lift.prod.space(), lift.lifted,
                                      std::move(conditionals)));
      }
    };
    embed(a, tag_a);
    embed(b, tag_b);
  }

  MorphismCandidate left, right;
  for (int i = 0; i < 2; ++i) {
    for (const auto& t : a.player(i).types.atoms()) left.maps[i][t] = tag_a + t;
    for (const auto& t : b.player(i).types.atoms()) right.maps[i][t] = tag_b + t;
  }

  TypeStructure u = make_type_structure(
      a.s, {a.player(0).family, a.player(1).family}, std::move(union_types),
      std::move(beliefs));
  return DisjointUnion{std::move(u), std::move(left), std::move(right)};
}

struct MorphismCheck {
  bool preserving;
  // First failing tuple, in (player, source type, family order, atom) order.
  struct Witness {
    int player;               // 0-based
    std::string source_type;
    Event base_event;         // conditioning event on S
    std::string atom;         // product atom of the target structure
    Rational pushed;          // mass under the pushed-forward source belief
    Rational direct;          // mass under the target belief
  };
  std::optional<Witness> witness;
};

// Checks that phi commutes with the belief maps: pushing each source belief
// forward along (id_S, phi_co) must give exactly the target belief of the
// mapped type. This is the certificate form of a hierarchy morphism; it
// implies preservation of every unfolded hierarchy.
inline MorphismCheck verify_type_morphism(const TypeStructure& src,
                                          const TypeStructure& dst,
                                          const MorphismCandidate& phi) {
  require_same_base(src, dst);
  for (int i = 0; i < 2; ++i) {
    for (const auto& t : src.player(i).types.atoms())
      if (!phi.maps[i].count(t))
        fail(Errc::unknown_type, "morphism leaves source type '" + t + "' unmapped");
    for (const auto& [t, u] : phi.maps[i]) {
      src.type_index(i, t);
      dst.type_index(i, u);
    }
  }

  for (int i = 0; i < 2; ++i) {
    int co = TypeStructure::co(i);
    const PlayerData& ps = src.player(i);
    const PlayerData& pd = dst.player(i);

    // (s, t_co) -> (s, phi_co(t_co))
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(ps.belief_space.space().size());
    for (int atom = 0; atom < ps.belief_space.space().size(); ++atom) {
      auto [si, ti] = ps.belief_space.split(atom);
      const std::string& mapped = phi.maps[co].at(src.player(co).types.atom(ti));
      pairs.emplace_back(
          ps.belief_space.space().atom(atom),
          pd.belief_space.space().atom(
              pd.belief_space.fuse(si, dst.type_index(co, mapped))));
    }
    AtomMap g = AtomMap::from_pairs(ps.belief_space.space(),
                                    pd.belief_space.space(), pairs);

    for (int t = 0; t < ps.types.size(); ++t) {
      Cps pushed = pushforward_cps(ps.beliefs[t], g, pd.lifted);
      const Cps& direct = dst.belief(i, phi.maps[i].at(ps.types.atom(t)));
      for (int k = 0; k < pd.lifted.size(); ++k) {
        for (int atom = 0; atom < pd.belief_space.space().size(); ++atom) {
          const Rational& x = pushed.conditional(k).mass(atom);
          const Rational& y = direct.conditional(k).mass(atom);
          if (x != y)
            return MorphismCheck{
                false,
                MorphismCheck::Witness{i, ps.types.atom(t), ps.family.event(k),
                                       pd.belief_space.space().atom(atom), x, y}};
        }
      }
    }
  }
  return MorphismCheck{true, std::nullopt};
}

}  // namespace cpshier

#endif  // CPSHIER_STRUCTURE_HPP_
