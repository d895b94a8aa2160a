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
// Command-line front end: validation, hierarchy unfolding, partitioning,
// cross-structure comparison, terminality and morphism checks over
// structure files.
//
// Exit codes: 0 success / valid / all matched, 1 domain failure,
// 2 usage, I/O or syntax errors.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _WIN32
#include <io.h>
#define CPS_HIER_ISATTY _isatty(_fileno(stdout))
#else
#include <unistd.h>
#define CPS_HIER_ISATTY isatty(fileno(stdout))
#endif

#include <CLI11.hpp>

#include "cpshier/cpshier.hpp"

namespace {

using namespace cpshier;

enum class Format { human, records };

Format parse_format(const std::string& f) {
  return f == "records" ? Format::records : Format::human;
}

// CPS_HIER_COLOR = auto | always | never; auto means "stdout is a tty".
bool use_color() {
  const char* env = std::getenv("CPS_HIER_COLOR");
  std::string v = env ? env : "auto";
  if (v == "always") return true;
  if (v == "never") return false;
  return CPS_HIER_ISATTY;
}

std::string paint(const std::string& text, const char* code) {
  if (!use_color()) return text;
  return std::string("\x1b[") + code + "m" + text + "\x1b[0m";
}
std::string good(const std::string& t) { return paint(t, "32"); }
std::string bad(const std::string& t) { return paint(t, "31"); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::syntax_error, "cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Full parse including chain-rule validation; every subcommand except
// `validate` (which wants to report on broken files) loads through this.
TypeStructure load(const std::string& path) {
  return parse_structure(read_file(path));
}

TypeStructure load_raw(const std::string& path) {
  return parse_structure_raw(read_file(path));
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

int cmd_validate(const std::string& file, Format format) {
  TypeStructure ts = load_raw(file);
  StructureReport report = validate_structure(ts);
  if (format == Format::records) {
    for (const auto& item : report.items) {
      const CpsViolation& v = item.violation;
      std::cout << "violation player=" << item.player + 1 << " type=" << item.type
                << " kind="
                << (v.kind == CpsViolation::Kind::certainty ? "certainty"
                                                            : "chain_rule");
      if (v.a) std::cout << " A=" << v.a->label_string();
      std::cout << " B=" << v.b.label_string();
      if (v.c) std::cout << " C=" << v.c->label_string();
      std::cout << " lhs=" << v.lhs.str() << " rhs=" << v.rhs.str() << "\n";
    }
    std::cout << "result=" << (report.ok() ? "valid" : "invalid") << "\n";
  } else {
    std::cout << report.describe();
    if (report.ok())
      std::cout << good("OK") << "\n";
    else
      std::cout << bad("INVALID") << " (" << report.items.size()
                << (report.items.size() == 1 ? " violation)" : " violations)")
                << "\n";
  }
  return report.ok() ? 0 : 1;
}

int cmd_unfold(const std::string& file, int player, const std::string& type,
               int order, const std::string& out_path) {
  TypeStructure ts = load(file);
  HierarchyInterner interner;
  const HierarchyPoint* point = unfold(interner, ts, player - 1, type, order);
  std::string text = serialize_hierarchy(point);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) fail(Errc::syntax_error, "cannot write file '" + out_path + "'");
    out << text;
  }
  return 0;
}

void print_partition_human(const Partition& p) {
  for (int i = 0; i < 2; ++i) {
    std::cout << "player " << i + 1 << ":\n";
    for (size_t c = 0; c < p.cells[i].size(); ++c)
      std::cout << "  cell " << c << ": " << join(p.cells[i][c], " ") << "\n";
  }
}

void print_partition_records(const Partition& p) {
  for (int i = 0; i < 2; ++i)
    for (size_t c = 0; c < p.cells[i].size(); ++c)
      for (const auto& t : p.cells[i][c])
        std::cout << "cell player=" << i + 1 << " type=" << t << " cell=" << c
                  << "\n";
}

int cmd_partition(const std::string& file, std::optional<int> order,
                  Format format) {
  TypeStructure ts = load(file);
  if (order) {
    if (*order < 0) fail(Errc::non_positive_order, "--order must be >= 0");
    Partition p = refine(ts, *order);
    if (format == Format::records)
      print_partition_records(p);
    else
      print_partition_human(p);
  } else {
    FixpointResult r = refine_to_fixpoint(ts);
    if (format == Format::records) {
      print_partition_records(r.partition);
      std::cout << "depth=" << r.depth << "\n";
    } else {
      print_partition_human(r.partition);
      std::cout << "depth: " << r.depth << "\n";
    }
  }
  return 0;
}

void print_terminality(const TerminalityReport& report, Format format,
                       const std::string& dir_tag) {
  for (int i = 0; i < 2; ++i) {
    if (format == Format::human) std::cout << "player " << i + 1 << ":\n";
    for (const auto& row : report.rows[i]) {
      if (format == Format::records) {
        std::cout << "match";
        if (!dir_tag.empty()) std::cout << " dir=" << dir_tag;
        std::cout << " player=" << i + 1 << " type=" << row.type;
        if (row.fail_order)
          std::cout << " unmatched fail_order=" << *row.fail_order << "\n";
        else
          std::cout << " matched=" << join(row.matched, ",") << "\n";
      } else {
        std::cout << "  " << row.type << " -> ";
        if (row.fail_order)
          std::cout << bad("unmatched") << " at order " << *row.fail_order << "\n";
        else
          std::cout << join(row.matched, " ") << "\n";
      }
    }
  }
}

int cmd_terminal(const std::string& target_file, const std::string& probe_file,
                 std::optional<int> order, Format format) {
  TypeStructure target = load(target_file);
  TypeStructure probe = load(probe_file);
  TerminalityReport report = order ? finitely_terminal_at(target, probe, *order)
                                   : terminal_over(target, probe);
  print_terminality(report, format, "");
  bool ok = report.all_matched();
  if (format == Format::records) {
    if (!order) std::cout << "depth=" << report.union_depth << "\n";
    std::cout << "all_matched=" << (ok ? "true" : "false") << "\n";
  } else {
    if (!order) std::cout << "fixpoint depth: " << report.union_depth << "\n";
    std::cout << "all matched: " << (ok ? good("yes") : bad("no")) << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_compare(const std::string& left_file, const std::string& right_file,
                std::optional<int> order, Format format) {
  TypeStructure left = load(left_file);
  TypeStructure right = load(right_file);
  auto check = [&](const TypeStructure& target, const TypeStructure& probe) {
    return order ? finitely_terminal_at(target, probe, *order)
                 : terminal_over(target, probe);
  };
  // probe `left` against `right` and vice versa
  TerminalityReport left_in_right = check(right, left);
  TerminalityReport right_in_left = check(left, right);
  if (format == Format::human) {
    std::cout << "[left in right] left=" << left_file << " right=" << right_file
              << "\n";
    print_terminality(left_in_right, format, "");
    std::cout << "[right in left]\n";
    print_terminality(right_in_left, format, "");
  } else {
    print_terminality(left_in_right, format, "left-in-right");
    print_terminality(right_in_left, format, "right-in-left");
  }
  bool equivalent = left_in_right.all_matched() && right_in_left.all_matched();
  if (format == Format::records)
    std::cout << "equivalent=" << (equivalent ? "true" : "false") << "\n";
  else
    std::cout << "equivalent: " << (equivalent ? good("yes") : bad("no")) << "\n";
  return equivalent ? 0 : 1;
}

std::map<std::string, std::string> parse_map_flag(const std::string& text,
                                                  const std::string& flag) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string pair;
  while (std::getline(ss, pair, ',')) {
    auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size())
      fail(Errc::syntax_error,
           flag + " entries must look like src=dst, got '" + pair + "'");
    std::string src = pair.substr(0, eq), dst = pair.substr(eq + 1);
    if (out.count(src))
      fail(Errc::syntax_error, flag + " maps type '" + src + "' twice");
    out[src] = dst;
  }
  if (out.empty()) fail(Errc::syntax_error, flag + " needs at least one pair");
  return out;
}

int cmd_morphism(const std::string& src_file, const std::string& dst_file,
                 const std::string& map1, const std::string& map2,
                 Format format) {
  TypeStructure src = load(src_file);
  TypeStructure dst = load(dst_file);
  MorphismCandidate phi;
  phi.maps[0] = parse_map_flag(map1, "--map1");
  phi.maps[1] = parse_map_flag(map2, "--map2");
  MorphismCheck check = verify_type_morphism(src, dst, phi);
  if (check.preserving) {
    std::cout << (format == Format::records ? "preserving=true"
                                            : good("preserving"))
              << "\n";
    return 0;
  }
  const auto& w = *check.witness;
  if (format == Format::records) {
    std::cout << "broken player=" << w.player + 1 << " type=" << w.source_type
              << " B=" << w.base_event.label_string() << " atom=" << w.atom
              << " pushed=" << w.pushed.str() << " target=" << w.direct.str()
              << "\npreserving=false\n";
  } else {
    std::cout << bad("broken") << ": player " << w.player + 1 << " type "
              << w.source_type << " given " << w.base_event.label_string()
              << " at " << w.atom << ": pushed " << w.pushed.str() << ", target "
              << w.direct.str() << "\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite conditional type structures: validation, hierarchy "
               "unfolding, partitioning, and terminality checks."};
  app.require_subcommand(1);
  argv = app.ensure_utf8(argv);

  std::string format_str = "human";
  std::string file, file2, type, out_path, map1, map2;
  int player = 0;
  int order_flag = -1;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format_str, "Output format")
        ->check(CLI::IsMember({"human", "records"}))
        ->capture_default_str();
  };

  CLI::App* validate = app.add_subcommand("validate", "Check a structure file");
  validate->add_option("file", file, "structure file")->required();
  add_format(validate);

  CLI::App* unfold_cmd =
      app.add_subcommand("unfold", "Unfold a type into an order-n hierarchy");
  unfold_cmd->add_option("file", file, "structure file")->required();
  unfold_cmd->add_option("--player", player, "player (1 or 2)")->required();
  unfold_cmd->add_option("--type", type, "type label")->required();
  unfold_cmd->add_option("--order", order_flag, "hierarchy order (>= 1)")
      ->required();
  unfold_cmd->add_option("--out", out_path, "write to file instead of stdout");

  CLI::App* partition =
      app.add_subcommand("partition", "Group types by hierarchy equality");
  partition->add_option("file", file, "structure file")->required();
  partition->add_option("--order", order_flag,
                        "refinement order (default: run to fixpoint)");
  add_format(partition);

  CLI::App* compare = app.add_subcommand(
      "compare", "Check hierarchy equivalence of two structures");
  compare->add_option("left", file, "structure file")->required();
  compare->add_option("right", file2, "structure file")->required();
  compare->add_option("--order", order_flag, "compare at a fixed order");
  add_format(compare);

  CLI::App* terminal = app.add_subcommand(
      "terminal", "Check that target covers probe's hierarchies");
  terminal->add_option("target", file, "target structure file")->required();
  terminal->add_option("probe", file2, "probe structure file")->required();
  terminal->add_option("--order", order_flag,
                       "finite order (default: full hierarchies)");
  add_format(terminal);

  CLI::App* morphism =
      app.add_subcommand("morphism", "Verify a hierarchy morphism candidate");
  morphism->add_option("source", file, "source structure file")->required();
  morphism->add_option("target", file2, "target structure file")->required();
  morphism->add_option("--map1", map1, "player-1 type map, e.g. a=x,b=y")
      ->required();
  morphism->add_option("--map2", map2, "player-2 type map")->required();
  add_format(morphism);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Format format = parse_format(format_str);
  auto given_order = [&](CLI::App* cmd, int min_value) -> std::optional<int> {
    if (!cmd->count("--order")) return std::nullopt;
    if (order_flag < min_value)
      fail(Errc::non_positive_order,
           "--order must be at least " + std::to_string(min_value));
    return order_flag;
  };

  try {
    if (validate->parsed()) return cmd_validate(file, format);
    if (unfold_cmd->parsed()) {
      if (player != 1 && player != 2)
        fail(Errc::unknown_type, "--player must be 1 or 2");
      if (order_flag < 1)
        fail(Errc::non_positive_order, "--order must be at least 1");
      return cmd_unfold(file, player, type, order_flag, out_path);
    }
    if (partition->parsed())
      return cmd_partition(file, given_order(partition, 0), format);
    if (compare->parsed())
      return cmd_compare(file, file2, given_order(compare, 1), format);
    if (terminal->parsed())
      return cmd_terminal(file, file2, given_order(terminal, 1), format);
    if (morphism->parsed()) return cmd_morphism(file, file2, map1, map2, format);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::syntax_error ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
