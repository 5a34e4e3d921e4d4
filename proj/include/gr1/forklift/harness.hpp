#pragma once

#include <json.hpp>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gr1/forklift/world.hpp"
#include "gr1/playout/session.hpp"

namespace gr1::forklift {

inline constexpr const char* kRunSchema = "gr1-run/1";

struct MonitorHit {
  std::size_t step = 0;
  std::string label;
  std::string kind;
};

struct RunStep {
  std::size_t step = 0;
  Reading reading;
  Action action;
  std::size_t position = 0;
  int heading = 1;
  std::optional<strategy::Annotation> annotation;
};

struct RunReport {
  std::string spec;
  std::string script;
  Schedule schedule = Schedule::Delayed;
  unsigned k = 3;
  std::size_t steps = 0;
  std::size_t deliveries = 0;
  std::vector<MonitorHit> assumption_violations;  // first hit per label
  std::vector<MonitorHit> guarantee_violations;
  std::vector<WorldEvent> events;
  // Step from which the controller's behaviour is unspecified because the
  // world broke an assumption the controller cannot react to.
  std::optional<std::size_t> unspecified_from;
  std::size_t motion_during_emergency = 0;
  std::size_t emergency_steps = 0;
  std::vector<RunStep> trace;

  [[nodiscard]] std::size_t count(const std::string& kind) const {
    std::size_t n = 0;
    for (const auto& e : events) n += e.kind == kind;
    return n;
  }
};

namespace detail {

inline Motion motion_of(const std::string& left, const std::string& right) {
  if (left == "FWD" && right == "FWD") return Motion::Forward;
  if (left == "BWD" && right == "BWD") return Motion::Backward;
  if (left == "STOP" && right == "STOP") return Motion::Stop;
  if ((left == "FWD" && right == "BWD") || (left == "BWD" && right == "FWD")) return Motion::Turn;
  return Motion::Other;
}

inline ForkCommand fork_of(const std::string& lift) {
  if (lift == "LIFT") return ForkCommand::Lift;
  if (lift == "DROP") return ForkCommand::Drop;
  return ForkCommand::Nil;
}

inline const char* motion_name(Motion m) {
  switch (m) {
    case Motion::Forward: return "forward";
    case Motion::Backward: return "backward";
    case Motion::Turn: return "turn";
    case Motion::Stop: return "stop";
    case Motion::Other: return "other";
  }
  return "?";
}

}  // namespace detail

struct RunOptions {
  std::size_t steps = 10000;
  unsigned k = 3;
  bool keep_trace = false;
};

/// Runs the artifact's controller against the world.  The controller reads
/// the world's sensors through a play-out session in human-env mode, which
/// also monitors every source assumption and guarantee.
inline RunReport run_closed_loop(const std::shared_ptr<const playout::Artifact>& art, const Script& script,
                                 Schedule schedule, const RunOptions& opt = {}) {
  if (!art->controller) throw std::invalid_argument("'" + art->name + "' has no controller");
  const auto& enc = art->game->enc;
  for (const char* v : {"station", "distSense", "cargoSense", "emgOff", "mLeft", "mRight", "lift"})
    if (!enc.find(v)) throw std::invalid_argument("'" + art->name + "' lacks forklift variable " + std::string(v));

  RunReport rep;
  rep.spec = art->name;
  rep.script = script.name;
  rep.schedule = schedule;
  rep.k = opt.k;
  World world(script, schedule, opt.k);
  playout::Session session(art, playout::Mode::HumanEnv, playout::Policy::Accept);
  const std::size_t m_left = enc.index_of("mLeft"), m_right = enc.index_of("mRight"), lift = enc.index_of("lift");
  std::set<std::pair<std::string, std::string>> seen;

  for (std::size_t t = 0; t < opt.steps; ++t) {
    Reading r = world.sense();
    nlohmann::json move{{"station", r.station},
                        {"distSense", r.dist_blocked ? "BLOCKED" : "CLEAR"},
                        {"cargoSense", r.cargo_blocked ? "BLOCKED" : "CLEAR"},
                        {"emgOff", r.emg_off}};
    if (enc.find("liftAck")) move["liftAck"] = r.lift_ack;
    const auto& st = session.step(session.parse_move(move));
    for (const auto& v : st.violations) {
      if (!seen.insert({v.side, v.label}).second) continue;
      (v.side == "assumption" ? rep.assumption_violations : rep.guarantee_violations).push_back({t, v.label, v.kind});
    }
    rep.steps = t + 1;
    if (session.status() != playout::Status::Running) {
      rep.unspecified_from = t;
      break;
    }
    Action a{detail::motion_of(enc.value_name(m_left, st.state[m_left]), enc.value_name(m_right, st.state[m_right])),
             detail::fork_of(enc.value_name(lift, st.state[lift]))};
    if (r.emg_off) {
      ++rep.emergency_steps;
      rep.motion_during_emergency += a.motion != Motion::Stop;
    }
    if (opt.keep_trace) rep.trace.push_back({t, r, a, world.position(), world.heading(), st.annotation});
    world.actuate(a);
  }
  rep.events = world.events();
  rep.deliveries = rep.count("delivery");
  return rep;
}

inline nlohmann::json to_json(const RunReport& r) {
  auto hits = [](const std::vector<MonitorHit>& hs) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& h : hs) out.push_back({{"step", h.step}, {"label", h.label}, {"kind", h.kind}});
    return out;
  };
  std::map<std::string, std::size_t> counts;
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : r.events) {
    ++counts[e.kind];
    if (e.kind != "delivery" && e.kind != "lift") events.push_back({{"step", e.step}, {"kind", e.kind}, {"cell", e.cell}});
  }
  nlohmann::json out{{"schema", kRunSchema},
                     {"spec", r.spec},
                     {"script", r.script},
                     {"schedule", schedule_name(r.schedule)},
                     {"k", r.k},
                     {"steps", r.steps},
                     {"deliveries", r.deliveries},
                     {"assumption_violations", hits(r.assumption_violations)},
                     {"guarantee_violations", hits(r.guarantee_violations)},
                     {"event_counts", counts},
                     {"events", events},
                     {"emergency_steps", r.emergency_steps},
                     {"motion_during_emergency", r.motion_during_emergency}};
  out["unspecified_from"] = r.unspecified_from ? nlohmann::json(*r.unspecified_from) : nlohmann::json(nullptr);
  if (!r.trace.empty()) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& s : r.trace) {
      nlohmann::json step{{"step", s.step},
                          {"position", s.position},
                          {"heading", s.heading},
                          {"station", s.reading.station},
                          {"distBlocked", s.reading.dist_blocked},
                          {"cargoBlocked", s.reading.cargo_blocked},
                          {"emgOff", s.reading.emg_off},
                          {"liftAck", s.reading.lift_ack},
                          {"motion", detail::motion_name(s.action.motion)},
                          {"fork", s.action.fork == ForkCommand::Lift ? "LIFT" : s.action.fork == ForkCommand::Drop ? "DROP" : "NIL"}};
      if (s.annotation) step["annotation"] = std::string(strategy::reason_name(s.annotation->kind)) + "(" + s.annotation->label + ")";
      trace.push_back(step);
    }
    out["trace"] = trace;
  }
  return out;
}

}  // namespace gr1::forklift
