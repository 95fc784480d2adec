// clph: run, check and solve CLP programs over hedges.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "clph/modes.hpp"
#include "clph/oracle.hpp"
#include "clph/parse.hpp"
#include "clph/print.hpp"
#include "clph/solver.hpp"

using namespace clph;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kAnalysis = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Program load_files(const std::vector<std::string>& files, Program p = {}) {
  for (const auto& f : files) p = parse_program(slurp(f), std::move(p));
  return p;
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::Solved: return "solved";
    case Classification::PartiallySolved: return "partially solved";
    case Classification::Active: return "active";
    case Classification::Failed: return "failed";
  }
  return "?";
}

enum class TraceLevel { Off, Rules, Full };

TraceLevel parse_trace(const std::string& s) {
  if (s.empty() || s == "off") return TraceLevel::Off;
  if (s == "full") return TraceLevel::Full;
  if (s == "on" || s == "rules") return TraceLevel::Rules;
  throw UsageError("--trace takes no value or =full");
}

std::function<void(const TraceEvent&)> rule_printer(TraceLevel level, std::ostream& out) {
  if (level == TraceLevel::Off) return {};
  return [level, &out](const TraceEvent& e) {
    out << "% " << rule_name(e.rule) << " @ disjunct=" << e.disjunct << " literal=" << e.literal << "\n";
    if (level == TraceLevel::Full)
      out << "%   " << to_string(e.before) << "\n%   => " << to_string(e.after) << "\n";
  };
}

std::string binding_text(const Binding& b) {
  if (b.value) return to_string(b.var) + " = " + to_string(*b.value);
  if (b.residual.empty()) return to_string(b.var) + " unconstrained";
  std::string s = to_string(b.var) + " with ";
  for (std::size_t i = 0; i < b.residual.size(); ++i) s += (i ? " & " : "") + to_string(b.residual[i]);
  return s;
}

json answer_json(const Answer& a, const Signature& sig) {
  json bindings = json::object();
  json residual = json::object();
  for (const auto& b : a.bindings) {
    if (b.value) {
      bindings[to_string(b.var)] = to_string(*b.value);
    } else if (!b.residual.empty()) {
      json lits = json::array();
      for (const auto& l : b.residual) lits.push_back(to_string(l));
      residual[to_string(b.var)] = lits;
    }
  }
  return {{"answer", "yes"},
          {"bindings", bindings},
          {"residual", residual},
          {"store", to_string(a.store)},
          {"class", classification_name(classify(a.store, sig))}};
}

struct RunOptions {
  std::string query;
  bool all = false;
  std::size_t count = 1;
  std::size_t max_depth = 10000;
  TraceLevel trace = TraceLevel::Off;
  bool json = false;
};

int run_query(const Program& p, const RunOptions& o, std::ostream& out) {
  Signature sig = p.sig;
  Goal goal = parse_query(o.query, sig);
  Program prog = p;
  prog.sig = sig;
  EngineOptions eo;
  eo.max_depth = o.max_depth;
  eo.max_answers = o.all ? 0 : o.count;
  eo.solver_trace = rule_printer(o.trace, out);
  if (o.trace != TraceLevel::Off)
    eo.on_reduce = [&out](const State*, const State& s) { out << "% state " << to_string(s) << "\n"; };
  Search search(prog, goal, eo);
  std::size_t answers = 0;
  bool cut = false;
  while (auto r = search.next()) {
    if (r->kind == Outcome::Kind::DepthExceeded) {
      cut = true;
      if (o.json) out << json{{"answer", "depth-exceeded"}, {"depth", r->depth}}.dump() << "\n";
      else out << "% depth limit " << o.max_depth << " reached on one branch\n";
      continue;
    }
    ++answers;
    if (o.json) {
      out << answer_json(r->answer, prog.sig).dump() << "\n";
      continue;
    }
    if (answers > 1) out << ";\n";
    bool any = false;
    for (const auto& b : r->answer.bindings) {
      out << binding_text(b) << "\n";
      any = true;
    }
    if (!any) out << "yes\n";
    if (classify(r->answer.store, prog.sig) == Classification::PartiallySolved)
      out << "% partially solved store: " << to_string(r->answer.store) << "\n";
  }
  if (answers == 0) {
    if (o.json) out << json{{"answer", "no"}}.dump() << "\n";
    else out << (cut ? "no answer within the depth limit\n" : "no\n");
  }
  return kOk;
}

int check_program(const Program& p, bool modes, bool kif, std::ostream& out) {
  if (!modes && !kif) modes = kif = true;
  bool ok = true;
  if (modes) {
    ModeReport r = check_wellmoded_program(p);
    for (const auto& w : r.warnings) out << "warning: " << w << "\n";
    if (r.ok) {
      out << "well-moded\n";
    } else {
      out << "not well-moded: " << r.message << "\n";
      ok = false;
    }
  }
  if (kif) {
    bool k = true;
    for (std::size_t i = 0; i < p.clauses.size(); ++i)
      if (!is_kif_clause(p.clauses[i], p.sig)) {
        out << "not KIF: clause " << (i + 1) << ": " << to_string(p.clauses[i]) << "\n";
        k = false;
      }
    if (k) out << "KIF\n";
    ok = ok && k;
  }
  return ok ? kOk : kAnalysis;
}

Signature with_unordered(Signature sig, const std::vector<std::string>& unordered) {
  for (const auto& f : unordered)
    if (!sig.declare(f, true)) throw UsageError(f + " is already ordered");
  return sig;
}

int solve_constraint(const std::string& text, Signature sig, TraceLevel trace, bool as_json,
                     std::ostream& out) {
  Formula f = parse_constraint(text, sig);
  SolveOptions opt;
  opt.observer = rule_printer(trace, out);
  Constraint c = sol(f, sig, opt);
  Classification k = classify(c, sig);
  if (as_json) {
    json ds = json::array();
    for (const auto& d : c.disjuncts) ds.push_back(to_string(d));
    out << json{{"result", to_string(c)}, {"disjuncts", ds}, {"class", classification_name(k)}}.dump()
        << "\n";
  } else {
    out << to_string(c) << "\n% " << classification_name(k) << "\n";
  }
  return kOk;
}

void repl(Program p, std::istream& in, std::ostream& out) {
  TraceLevel trace = TraceLevel::Off;
  std::string line;
  auto prompt = [&] { out << "?- " << std::flush; };
  prompt();
  while (std::getline(in, line)) {
    std::string cmd = line.substr(0, line.find(' '));
    std::string arg = line.find(' ') == std::string::npos ? "" : line.substr(line.find(' ') + 1);
    try {
      if (line.find_first_not_of(" \t") == std::string::npos) {
      } else if (cmd == ":quit" || cmd == ":q") {
        break;
      } else if (cmd == ":load") {
        p = load_files({arg}, std::move(p));
        out << "loaded " << arg << "\n";
      } else if (cmd == ":modes") {
        check_program(p, true, false, out);
      } else if (cmd == ":kif") {
        check_program(p, false, true, out);
      } else if (cmd == ":trace") {
        trace = arg == "on" ? TraceLevel::Rules : arg == "full" ? TraceLevel::Full : TraceLevel::Off;
      } else if (cmd == ":solve") {
        solve_constraint(arg, p.sig, trace, false, out);
      } else if (cmd == ":program") {
        out << to_string(p);
      } else if (cmd == ":help") {
        out << ":load FILE  :modes  :kif  :trace on|full|off  :solve CONSTRAINT  :program  :quit\n";
      } else if (!cmd.empty() && cmd[0] == ':') {
        out << "unknown command " << cmd << "\n";
      } else {
        RunOptions o;
        o.query = line;
        o.all = true;
        o.trace = trace;
        run_query(p, o, out);
      }
    } catch (const ParseError& e) {
      out << "parse error: " << e.what() << "\n";
    } catch (const std::exception& e) {
      out << "error: " << e.what() << "\n";
    }
    prompt();
  }
  out << "\n";
}

// Oracle helpers for debugging.
int dev_enum(const std::vector<std::string>& syms, const std::vector<std::string>& unordered,
             const Bounds& b, std::ostream& out) {
  Signature sig;
  for (const auto& s : syms) sig.declare(s, false);
  for (const auto& s : unordered) {
    sig.ordered.erase(s);
    sig.declare(s, true);
  }
  for (const auto& h : enum_ground(sig, b)) out << (h.empty() ? "()" : to_string(h)) << "\n";
  return kOk;
}

int dev_lang(const std::string& text, std::size_t n, const std::vector<std::string>& unordered,
             std::ostream& out) {
  Signature sig;
  for (const auto& s : unordered) sig.declare(s, true);
  for (const auto& h : lang_enumerate(parse_regex(text), sig, n)) out << (h.empty() ? "()" : to_string(h)) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clph: constraint logic programming over hedges"};
  app.require_subcommand(1);

  RunOptions ro;
  std::string run_file, trace_run, format_run = "text";
  std::size_t n_answers = 1;
  auto* run = app.add_subcommand("run", "Run a query against a program");
  run->add_option("file", run_file, "Program file")->required();
  run->add_option("-q,--query", ro.query, "Query")->required();
  auto* all_opt = run->add_flag("--all", ro.all, "All answers");
  run->add_option("-n", n_answers, "At most K answers")->excludes(all_opt);
  run->add_option("--max-depth", ro.max_depth, "Derivation depth limit");
  run->add_option("--trace", trace_run, "Print reductions and solver rules (=full adds constraints)")
      ->expected(0, 1)
      ->default_str("rules");
  run->add_option("--format", format_run, "text or json")->check(CLI::IsMember({"text", "json"}));

  bool modes = false, kif = false;
  std::string check_file;
  auto* check = app.add_subcommand("check", "Mode and KIF analysis");
  check->add_flag("--modes", modes, "Well-modedness");
  check->add_flag("--kif", kif, "KIF form");
  check->add_option("file", check_file, "Program file")->required();

  std::string constraint, trace_solve, format_solve = "text";
  std::vector<std::string> unordered;
  auto* solve = app.add_subcommand("solve", "Solve a constraint");
  solve->add_option("constraint", constraint, "Constraint")->required();
  solve->add_option("-u,--unordered", unordered, "Unordered symbols")->delimiter(',');
  solve->add_option("--trace", trace_solve, "Print solver rules (=full adds constraints)")
      ->expected(0, 1)
      ->default_str("rules");
  solve->add_option("--format", format_solve, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::vector<std::string> repl_files;
  auto* rp = app.add_subcommand("repl", "Interactive session");
  rp->add_option("files", repl_files, "Programs to load");

  auto* dev = app.add_subcommand("dev", "Oracle helpers");
  dev->require_subcommand(1);
  std::vector<std::string> dev_syms{"a", "b"}, dev_unordered;
  Bounds dev_bounds{1, 2, 4};
  auto* de = dev->add_subcommand("enum", "Ground hedges within bounds");
  de->add_option("-s,--symbols", dev_syms)->delimiter(',');
  de->add_option("-u,--unordered", dev_unordered)->delimiter(',');
  de->add_option("--depth", dev_bounds.max_depth);
  de->add_option("--width", dev_bounds.max_width);
  de->add_option("--size", dev_bounds.max_total_size);
  std::string dev_regex;
  std::size_t dev_n = 4;
  auto* dl = dev->add_subcommand("lang", "Hedges of a regular expression up to a size");
  dl->add_option("regex", dev_regex)->required();
  dl->add_option("--size", dev_n);
  dl->add_option("-u,--unordered", dev_unordered)->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) {
      if (run->count("-n")) ro.count = n_answers;
      ro.trace = run->count("--trace") ? parse_trace(trace_run.empty() ? "rules" : trace_run) : TraceLevel::Off;
      ro.json = format_run == "json";
      return run_query(load_files({run_file}), ro, std::cout);
    }
    if (*check) return check_program(load_files({check_file}), modes, kif, std::cout);
    if (*solve) {
      TraceLevel t = solve->count("--trace") ? parse_trace(trace_solve.empty() ? "rules" : trace_solve)
                                             : TraceLevel::Off;
      return solve_constraint(constraint, with_unordered({}, unordered), t, format_solve == "json", std::cout);
    }
    if (*rp) {
      repl(load_files(repl_files), std::cin, std::cout);
      return kOk;
    }
    if (*de) return dev_enum(dev_syms, dev_unordered, dev_bounds, std::cout);
    if (*dl) return dev_lang(dev_regex, dev_n, dev_unordered, std::cout);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}
