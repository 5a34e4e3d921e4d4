#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gr1/forklift/harness.hpp"
#include "gr1/pattern/templates.hpp"
#include "gr1/playout/service.hpp"
#include "gr1/spec/json.hpp"
#include "gr1/spec/parser.hpp"
#include "gr1/strategy/export.hpp"
#include "gr1/strategy/extract.hpp"
#include "gr1/strategy/verify.hpp"
#include "gr1/synth/solver.hpp"

using namespace gr1;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kSpecError = 1, kUnrealizable = 2, kInternal = 3 };

/// Errors the user can fix: bad paths, bad input files, bad flags.
struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Stopwatch {
 public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct Phase {
  std::string name;
  double seconds;
};

/// Everything one pipeline run produced.
struct Run {
  std::string path;
  spec::SpecDocument doc;
  std::shared_ptr<synth::Game> game;
  pattern::Accounting acc;
  synth::Realizability result;
  std::optional<strategy::Strategy> strategy;
  std::vector<Phase> phases;
};

void require_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError(path + ": cannot open file");
}

Run solve(const std::string& path, bool build_controller, bool build_counter) {
  require_file(path);
  Run r;
  r.path = path;
  Stopwatch sw;
  r.doc = spec::parse_file(path);
  r.phases.push_back({"parse", sw.lap()});
  auto ns = pattern::normalize(r.doc);
  r.acc = pattern::account(ns);
  r.phases.push_back({"normalize", sw.lap()});
  r.game = std::make_shared<synth::Game>(synth::build_game(ns));
  if (auto err = synth::validate_aux(*r.game)) throw synth::AuxValidationError(*err);
  r.phases.push_back({"encode", sw.lap()});
  r.result = synth::check_realizability(*r.game);
  r.phases.push_back({"realizability", sw.lap()});
  if (r.result.realizable && build_controller) {
    r.strategy = strategy::extract_controller(*r.game, r.result.mem);
    r.phases.push_back({"construction", sw.lap()});
  } else if (!r.result.realizable && build_counter) {
    r.strategy = strategy::extract_counterstrategy(*r.game, *r.result.dual);
    r.phases.push_back({"construction", sw.lap()});
  }
  return r;
}

// "1 safety, 5 times P26, P15"
std::string kinds_text(const pattern::Accounting::SideCounts& c) {
  std::vector<std::string> parts;
  auto plain = [&](std::size_t n, const char* kind) {
    if (n) parts.push_back(std::to_string(n) + " " + kind);
  };
  auto pattern = [&](std::size_t n, const char* id) {
    if (n == 1) parts.push_back(id);
    else if (n > 1) parts.push_back(std::to_string(n) + " times " + id);
  };
  plain(c.initial, "initial");
  plain(c.safety, "safety");
  plain(c.justice, "justice");
  pattern(c.p26, "P26");
  pattern(c.p15, "P15");
  pattern(c.p09, "P09");
  pattern(c.p20, "P20");
  if (parts.empty()) return "none";
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ", ") + p;
  return out;
}

json counts_json(const pattern::Accounting::SideCounts& c) {
  return {{"initial", c.initial}, {"safety", c.safety}, {"justice", c.justice}, {"P09", c.p09},
          {"P15", c.p15},         {"P20", c.p20},       {"P26", c.p26}};
}

/// Report row.  Timing lives under "times" only so the rest is reproducible.
json report_json(const Run& r) {
  const auto& a = r.acc;
  json times = json::object();
  for (const auto& p : r.phases) times[p.name] = p.seconds;
  json out{{"schema", "gr1-report/1"},
           {"spec", r.doc.name},
           {"verdict", r.result.realizable ? "realizable" : "unrealizable"},
           {"assumptions", counts_json(a.assumptions)},
           {"guarantees", counts_json(a.guarantees)},
           {"aux_definitions", a.aux_definitions},
           {"variables",
            {{"env", a.env_bits},
             {"sys", a.sys_bits},
             {"manual_aux", a.manual_aux_bits},
             {"pattern_aux", a.pattern_aux_bits},
             {"past_aux", a.past_aux_bits}}},
           {"justice", {{"n", a.sys_justice}, {"m", a.env_justice}}},
           {"outer_iterations", r.result.stats.outer_iterations},
           {"times", times}};
  if (r.strategy) {
    out["strategy"] = {{"kind", r.strategy->is_controller() ? "controller" : "counterstrategy"},
                       {"states", r.strategy->states.size()},
                       {"transitions", r.strategy->transitions.size()}};
  } else {
    out["strategy"] = nullptr;
  }
  return out;
}

std::string seconds(double s) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << s << " sec";
  return os.str();
}

void print_report(const Run& r, std::ostream& os) {
  const auto& a = r.acc;
  auto row = [&](const std::string& k, const std::string& v) { os << "  " << std::left << std::setw(24) << k << v << '\n'; };
  os << r.doc.name << ": " << (r.result.realizable ? "realizable" : "unrealizable") << '\n';
  row("assumptions", kinds_text(a.assumptions));
  row("guarantees", kinds_text(a.guarantees));
  row("variables", std::to_string(a.env_bits) + " environment, " + std::to_string(a.sys_bits) + " system");
  row("auxiliary", std::to_string(a.manual_aux_bits) + " manual, " + std::to_string(a.pattern_aux_bits) + " pattern" +
                       (a.past_aux_bits ? ", " + std::to_string(a.past_aux_bits) + " past" : ""));
  row("justice", "n=" + std::to_string(a.sys_justice) + " m=" + std::to_string(a.env_justice));
  for (const auto& p : r.phases) row(p.name, seconds(p.seconds));
  if (r.strategy)
    row(r.strategy->is_controller() ? "controller states" : "counter-strategy states",
        std::to_string(r.strategy->states.size()));
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UserError(path + ": cannot write file");
  out << text;
}

void write_strategy(const strategy::Strategy& s, const std::string& out, const std::string& dot) {
  if (!out.empty()) write_file(out, strategy::to_json(s).dump(2) + "\n");
  if (!dot.empty()) write_file(dot, strategy::to_dot(s));
}

int emit(const Run& r, bool as_json) {
  if (as_json) std::cout << report_json(r).dump(2) << '\n';
  else print_report(r, std::cout);
  return kOk;
}

int cmd_check(const std::string& path, bool as_json, bool ast, bool states) {
  if (ast) {
    require_file(path);
    auto doc = spec::parse_file(path);
    spec::require_typed(doc);
    std::cout << spec::document_to_json(doc).dump(2) << '\n';
    return kOk;
  }
  Run r = solve(path, states, false);
  emit(r, as_json);
  return r.result.realizable ? kOk : kUnrealizable;
}

int cmd_synth(const std::string& path, bool as_json, const std::string& out, const std::string& dot, bool verify) {
  Run r = solve(path, true, false);
  if (!r.result.realizable) {
    emit(r, as_json);
    std::cerr << path << ": unrealizable, no controller written\n";
    return kUnrealizable;
  }
  if (verify) {
    if (auto v = strategy::verify_controller(*r.strategy, *r.game)) {
      std::cerr << path << ": controller failed verification\n";
      return kInternal;
    }
  }
  write_strategy(*r.strategy, out, dot);
  return emit(r, as_json);
}

int cmd_counter(const std::string& path, bool as_json, const std::string& out, const std::string& dot) {
  Run r = solve(path, false, true);
  if (r.result.realizable) {
    emit(r, as_json);
    std::cerr << path << ": realizable, no counter-strategy exists\n";
    return kUnrealizable;
  }
  write_strategy(*r.strategy, out, dot);
  return emit(r, as_json);
}

struct SimOptions {
  std::string spec, script, schedule = "auto", report;
  std::size_t steps = 10000;
  unsigned k = 3;
  bool trace = false;
};

int cmd_sim(const SimOptions& o, bool as_json) {
  require_file(o.spec);
  require_file(o.script);
  forklift::Script script;
  try {
    script = forklift::load_script(o.script);
  } catch (const std::exception& e) {
    throw UserError(o.script + ": " + e.what());
  }
  if (script.name == "script") {
    script.name = o.script.substr(o.script.find_last_of('/') + 1);
    script.name = script.name.substr(0, script.name.find('.'));
  }
  auto doc = spec::parse_file(o.spec);
  auto art = playout::make_artifact(doc.name, doc);
  if (!art->realizable) {
    std::cerr << o.spec << ": unrealizable, nothing to simulate\n";
    return kUnrealizable;
  }
  forklift::Schedule schedule;
  if (o.schedule == "delayed") schedule = forklift::Schedule::Delayed;
  else if (o.schedule == "continuous") schedule = forklift::Schedule::Continuous;
  else schedule = art->game->enc.find("liftAck") ? forklift::Schedule::Continuous : forklift::Schedule::Delayed;
  forklift::RunReport rep;
  try {
    rep = forklift::run_closed_loop(art, script, schedule, {o.steps, o.k, o.trace});
  } catch (const std::invalid_argument& e) {
    throw UserError(e.what());
  }
  json j = forklift::to_json(rep);
  if (!o.report.empty()) write_file(o.report, j.dump(2) + "\n");
  if (as_json) {
    std::cout << j.dump(2) << '\n';
    return kOk;
  }
  std::cout << rep.spec << " on " << rep.script << " (" << forklift::schedule_name(rep.schedule);
  if (rep.schedule == forklift::Schedule::Continuous) std::cout << ", k=" << rep.k;
  std::cout << "): " << rep.steps << " steps, " << rep.deliveries << " deliveries\n";
  for (const auto& [kind, n] : j["event_counts"].items())
    if (kind != "delivery") std::cout << "  " << kind << ": " << n << '\n';
  std::cout << "  emergency steps: " << rep.emergency_steps << ", moving during emergency: "
            << rep.motion_during_emergency << '\n';
  for (const auto& h : rep.assumption_violations)
    std::cout << "  assumption " << h.label << " violated at step " << h.step << '\n';
  for (const auto& h : rep.guarantee_violations)
    std::cout << "  guarantee " << h.label << " violated at step " << h.step << '\n';
  if (rep.unspecified_from) std::cout << "  controller unspecified from step " << *rep.unspecified_from << '\n';
  return kOk;
}

httplib::Server* g_server = nullptr;

int cmd_serve(const std::vector<std::string>& paths, const std::string& host, int port) {
  playout::Service service;
  for (const auto& p : paths) {
    require_file(p);
    auto doc = spec::parse_file(p);
    auto art = playout::make_artifact(doc.name, doc);
    std::cerr << "loaded " << art->name << " (" << (art->realizable ? "controller" : "counter-strategy") << ")\n";
    service.add_artifact(art);
  }
  httplib::Server server;
  service.mount(server);
  if (port == 0) port = server.bind_to_any_port(host);
  else if (!server.bind_to_port(host, port)) throw UserError("cannot bind " + host + ":" + std::to_string(port));
  if (port < 0) throw UserError("cannot bind " + host);
  std::cout << "listening on http://" << host << ':' << port << std::endl;
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  server.listen_after_bind();
  return kOk;
}

int cmd_patterns(bool as_json) {
  if (as_json) {
    json out = json::array();
    for (const auto& e : pattern::catalog())
      out.push_back({{"id", spec::to_string(e.id)},
                     {"name", e.name},
                     {"syntax", e.syntax},
                     {"ltl", e.ltl},
                     {"monitor", e.monitor}});
    std::cout << out.dump(2) << '\n';
    return kOk;
  }
  for (const auto& e : pattern::catalog()) {
    std::cout << spec::to_string(e.id) << "  " << e.name << '\n'
              << "    syntax   " << e.syntax << '\n'
              << "    ltl      " << e.ltl << '\n'
              << "    monitor  " << e.monitor << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GR(1) synthesis toolchain"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  std::string spec_path, out, dot;
  bool ast = false, no_states = false, verify = false;

  auto* check = app.add_subcommand("check", "decide realizability and print the report row");
  check->add_option("spec", spec_path, "specification file")->required();
  check->add_flag("--ast", ast, "dump the parsed document as JSON instead");
  check->add_flag("--no-states", no_states, "skip controller construction");
  check->add_flag("--json", as_json, "machine-readable output");

  auto* synth = app.add_subcommand("synth", "synthesize a controller");
  synth->add_option("spec", spec_path, "specification file")->required();
  synth->add_option("--out", out, "write the controller as JSON");
  synth->add_option("--dot", dot, "write the controller as Graphviz");
  synth->add_flag("--verify", verify, "model-check the controller against the game");
  synth->add_flag("--json", as_json, "machine-readable output");

  auto* counter = app.add_subcommand("counter", "compute a counter-strategy for an unrealizable spec");
  counter->add_option("spec", spec_path, "specification file")->required();
  counter->add_option("--out", out, "write the counter-strategy as JSON");
  counter->add_option("--dot", dot, "write the counter-strategy as Graphviz");
  counter->add_flag("--json", as_json, "machine-readable output");

  SimOptions sim_opt;
  auto* sim = app.add_subcommand("sim", "run a controller against the simulated forklift");
  sim->add_option("--spec", sim_opt.spec, "specification file")->required();
  sim->add_option("--script", sim_opt.script, "world script")->required();
  sim->add_option("--steps", sim_opt.steps, "number of steps")->capture_default_str();
  sim->add_option("--schedule", sim_opt.schedule, "delayed, continuous or auto")
      ->check(CLI::IsMember({"auto", "delayed", "continuous"}))
      ->capture_default_str();
  sim->add_option("--k", sim_opt.k, "ticks a fork action takes under continuous scheduling")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--out,--report", sim_opt.report, "write the run report as JSON");
  sim->add_flag("--trace", sim_opt.trace, "include the step trace in the report");
  sim->add_flag("--json", as_json, "machine-readable output");

  auto* playout_cmd = app.add_subcommand("playout", "interactive play-out");
  playout_cmd->require_subcommand(1);
  std::vector<std::string> serve_specs;
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = playout_cmd->add_subcommand("serve", "serve play-out sessions over HTTP");
  serve->add_option("specs", serve_specs, "specification files")->required();
  serve->add_option("--port", port, "port, 0 picks a free one")->capture_default_str();
  serve->add_option("--host", host, "address to bind")->capture_default_str();

  auto* patterns = app.add_subcommand("patterns", "specification pattern catalog");
  patterns->require_subcommand(1);
  auto* list = patterns->add_subcommand("list", "print the supported patterns");
  list->add_flag("--json", as_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kSpecError;
  }

  try {
    if (check->parsed()) return cmd_check(spec_path, as_json, ast, !no_states);
    if (synth->parsed()) return cmd_synth(spec_path, as_json, out, dot, verify);
    if (counter->parsed()) return cmd_counter(spec_path, as_json, out, dot);
    if (sim->parsed()) return cmd_sim(sim_opt, as_json);
    if (serve->parsed()) return cmd_serve(serve_specs, host, port);
    if (list->parsed()) return cmd_patterns(as_json);
  } catch (const UserError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSpecError;
  } catch (const spec::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kSpecError;
  } catch (const spec::SpecError& e) {
    std::cerr << e.what() << '\n';
    return kSpecError;
  } catch (const synth::AuxValidationError& e) {
    std::cerr << e.what() << '\n';
    return kSpecError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
