#pragma once

#include <httplib.h>

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <regex>
#include <string>
#include <utility>

#include "gr1/playout/session.hpp"

namespace gr1::playout {

/// Response of the service: HTTP status and JSON body.
struct Reply {
  int status = 200;
  nlohmann::json body;
};

inline nlohmann::json annotation_json(const Annotation& a) {
  return {{"kind", strategy::reason_name(a.kind)}, {"index", a.index}, {"constraint_label", a.label}};
}

inline nlohmann::json violations_json(const std::vector<ViolationRef>& vs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : vs) out.push_back({{"side", v.side}, {"label", v.label}, {"kind", v.kind}});
  return out;
}

inline nlohmann::json legal_moves_json(const Session& s, std::size_t cap = 64) {
  auto lm = s.legal_moves(cap);
  nlohmann::json moves = nlohmann::json::array();
  for (const auto& m : lm.moves) moves.push_back(s.move_json(m));
  return {{"moves", moves}, {"total", lm.total}, {"truncated", lm.total > static_cast<double>(lm.moves.size())}};
}

inline nlohmann::json step_json(const Session& s, std::size_t index) {
  const TraceStep& t = s.trace()[index];
  nlohmann::json out{{"index", index},
                     {"move", s.move_json(t.move)},
                     {"state", s.assignment_json(t.state)},
                     {"violations", violations_json(t.violations)},
                     {"status", status_name(t.status)}};
  out["annotation"] = t.annotation ? annotation_json(*t.annotation) : nlohmann::json(nullptr);
  if (t.purpose) out["purpose"] = annotation_json(*t.purpose);
  out["strategy_state"] = t.strategy_state ? nlohmann::json(*t.strategy_state) : nlohmann::json(nullptr);
  return out;
}

inline nlohmann::json session_json(const std::string& id, const Session& s) {
  nlohmann::json human = nlohmann::json::array();
  for (std::size_t v : s.human_vars()) human.push_back(s.game().enc.vars()[v].name);
  nlohmann::json score = nlohmann::json::array();
  for (const auto& e : s.scoreboard()) score.push_back({{"side", e.side}, {"label", e.label}, {"since", e.since}});
  nlohmann::json out{{"schema", kPlayoutSchema},
                     {"id", id},
                     {"spec", s.artifact().name},
                     {"mode", mode_name(s.mode())},
                     {"policy", policy_name(s.policy())},
                     {"status", status_name(s.status())},
                     {"human_vars", human},
                     {"steps", s.trace().size()},
                     {"scoreboard", score},
                     {"violations", violations_json({s.violations().begin(), s.violations().end()})},
                     {"legal_moves", legal_moves_json(s)}};
  out["state"] = s.state() ? s.assignment_json(*s.state()) : nlohmann::json(nullptr);
  out["strategy_state"] = s.strategy_state() ? nlohmann::json(*s.strategy_state()) : nlohmann::json(nullptr);
  if (auto e = s.pending_env_move()) out["pending_env_move"] = s.env_json(*e);
  return out;
}

inline nlohmann::json trace_json(const std::string& id, const Session& s) {
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t i = 0; i < s.trace().size(); ++i) steps.push_back(step_json(s, i));
  return {{"schema", kPlayoutSchema},
          {"id", id},
          {"spec", s.artifact().name},
          {"mode", mode_name(s.mode())},
          {"policy", policy_name(s.policy())},
          {"steps", steps}};
}

/// Sessions over a fixed set of artifacts, addressed by JSON requests.
class Service {
 public:
  void add_artifact(std::shared_ptr<Artifact> a) {
    std::lock_guard lock(mutex_);
    artifacts_[a->name] = std::move(a);
  }

  void add_spec(const std::string& name, const spec::SpecDocument& doc) { add_artifact(make_artifact(name, doc)); }

  /// Routes one request; `query` holds the URL parameters.
  Reply handle(const std::string& method, const std::string& path, const std::string& body = "",
               const std::map<std::string, std::string>& query = {}) {
    static const std::regex session_re("^/sessions/([^/]+)$");
    static const std::regex step_re("^/sessions/([^/]+)/step$");
    static const std::regex trace_re("^/sessions/([^/]+)/trace$");
    static const std::regex graph_re("^/artifacts/([^/]+)/graph$");
    std::smatch m;
    try {
      if (method == "POST" && path == "/sessions") return create(parse(body));
      if (method == "GET" && path == "/sessions") return list_sessions();
      if (method == "GET" && path == "/artifacts") return list_artifacts();
      if (method == "GET" && std::regex_match(path, m, session_re)) return with_session(m[1], [&](auto& slot) {
          return Reply{200, session_json(slot.id, slot.session)};
        });
      if (method == "GET" && std::regex_match(path, m, trace_re)) return with_session(m[1], [&](auto& slot) {
          return Reply{200, trace_json(slot.id, slot.session)};
        });
      if (method == "POST" && std::regex_match(path, m, step_re)) {
        auto req = parse(body);
        return with_session(m[1], [&](Slot& slot) {
          if (!req.contains("assignment")) return error(400, "bad_request", "missing 'assignment'");
          try {
            std::size_t idx = slot.session.trace().size();
            slot.session.step(slot.session.parse_move(req["assignment"]));
            auto out = session_json(slot.id, slot.session);
            out["step"] = step_json(slot.session, idx);
            return Reply{200, out};
          } catch (const IllegalMove& e) {
            return error(400, "illegal_move", e.what());
          }
        });
      }
      if (method == "GET" && std::regex_match(path, m, graph_re)) return graph(m[1], query);
      return error(404, "not_found", "no route for " + method + " " + path);
    } catch (const nlohmann::json::exception& e) {
      return error(400, "bad_request", e.what());
    } catch (const std::invalid_argument& e) {
      return error(400, "bad_request", e.what());
    }
  }

  /// Registers the routes on an httplib server.
  void mount(httplib::Server& server) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
      std::map<std::string, std::string> query;
      for (const auto& [k, v] : req.params) query[k] = v;
      Reply r = handle(req.method, req.path, req.body, query);
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json");
    };
    server.Get(".*", forward);
    server.Post(".*", forward);
  }

 private:
  struct Slot {
    std::string id;
    std::shared_ptr<Artifact> artifact;
    Session session;
    std::mutex mutex;
  };

  static nlohmann::json parse(const std::string& body) {
    return body.empty() ? nlohmann::json::object() : nlohmann::json::parse(body);
  }

  static Reply error(int status, const std::string& code, const std::string& message) {
    return {status, {{"schema", kPlayoutSchema}, {"error", {{"code", code}, {"message", message}}}}};
  }

  std::shared_ptr<Artifact> find_artifact(const std::string& name) {
    std::lock_guard lock(mutex_);
    auto it = artifacts_.find(name);
    return it == artifacts_.end() ? nullptr : it->second;
  }

  // Session mutex first, then the artifact's (shared BDD manager).
  template <class F>
  Reply with_session(const std::string& id, F&& f) {
    std::shared_ptr<Slot> slot;
    {
      std::lock_guard lock(mutex_);
      auto it = sessions_.find(id);
      if (it == sessions_.end()) return error(404, "not_found", "unknown session '" + id + "'");
      slot = it->second;
    }
    std::lock_guard session_lock(slot->mutex);
    std::lock_guard artifact_lock(slot->artifact->mutex);
    return f(*slot);
  }

  Reply create(const nlohmann::json& req) {
    std::string name = req.at("spec").get<std::string>();
    auto art = find_artifact(name);
    if (!art) return error(404, "not_found", "unknown artifact '" + name + "'");
    auto mode = parse_mode(req.value("mode", std::string("free")));
    if (!mode) return error(400, "bad_request", "unknown mode '" + req.value("mode", std::string()) + "'");
    std::optional<Policy> policy;
    if (req.contains("policy")) {
      policy = parse_policy(req["policy"].get<std::string>());
      if (!policy) return error(400, "bad_request", "unknown policy");
    }
    std::string id = "s" + std::to_string(++next_id_);
    std::shared_ptr<Slot> slot;
    try {
      std::lock_guard artifact_lock(art->mutex);
      slot = std::shared_ptr<Slot>(new Slot{id, art, Session(art, *mode, policy), {}});
    } catch (const ModeMismatch& e) {
      return error(400, "mode_mismatch", e.what());
    }
    {
      std::lock_guard lock(mutex_);
      sessions_[id] = slot;
    }
    std::lock_guard session_lock(slot->mutex);
    std::lock_guard artifact_lock(art->mutex);
    return {201, session_json(id, slot->session)};
  }

  Reply list_sessions() {
    std::map<std::string, std::shared_ptr<Slot>> copy;
    {
      std::lock_guard lock(mutex_);
      copy = sessions_;
    }
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [id, slot] : copy) {
      std::lock_guard session_lock(slot->mutex);
      out.push_back({{"id", id},
                     {"spec", slot->artifact->name},
                     {"mode", mode_name(slot->session.mode())},
                     {"status", status_name(slot->session.status())},
                     {"steps", slot->session.trace().size()}});
    }
    return {200, {{"schema", kPlayoutSchema}, {"sessions", out}}};
  }

  Reply list_artifacts() {
    std::map<std::string, std::shared_ptr<Artifact>> copy;
    {
      std::lock_guard lock(mutex_);
      copy = artifacts_;
    }
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [name, a] : copy) {
      nlohmann::json constraints = nlohmann::json::array();
      if (const auto& ns = a->game->spec)
        for (const auto& o : ns->origins)
          constraints.push_back({{"side", spec::to_string(o.side)},
                                 {"label", o.label},
                                 {"kind", spec::to_string(o.kind)},
                                 {"text", o.text},
                                 {"aux_definition", o.aux_definition}});
      const Strategy* s = a->controller ? &*a->controller : a->counter ? &*a->counter : nullptr;
      nlohmann::json entry{{"name", name}, {"realizable", a->realizable}, {"constraints", constraints}};
      if (s)
        entry["strategy"] = {{"kind", s->is_controller() ? "controller" : "counterstrategy"},
                             {"states", s->states.size()},
                             {"transitions", s->transitions.size()}};
      else entry["strategy"] = nullptr;
      out.push_back(entry);
    }
    return {200, {{"schema", kPlayoutSchema}, {"artifacts", out}}};
  }

  Reply graph(const std::string& name, const std::map<std::string, std::string>& query) {
    auto a = find_artifact(name);
    if (!a) return error(404, "not_found", "unknown artifact '" + name + "'");
    const Strategy* s = a->controller ? &*a->controller : a->counter ? &*a->counter : nullptr;
    if (!s) return error(404, "not_found", "artifact '" + name + "' has no strategy");
    auto number = [&](const char* key, std::size_t dflt) -> std::size_t {
      auto it = query.find(key);
      return it == query.end() ? dflt : std::stoul(it->second);
    };
    std::size_t offset = number("offset", 0), limit = std::min<std::size_t>(number("limit", 100), 1000);
    std::optional<strategy::ReasonKind> kind;
    if (auto it = query.find("kind"); it != query.end()) {
      kind = strategy::parse_reason(it->second);
      if (!kind) return error(400, "bad_request", "unknown annotation kind '" + it->second + "'");
    }
    std::size_t end = std::min(s->states.size(), offset + limit);
    nlohmann::json nodes = nlohmann::json::array(), edges = nlohmann::json::array();
    for (std::size_t i = offset; i < end; ++i) nodes.push_back(strategy::state_json(*s, i));
    for (const auto& t : s->transitions)
      if (t.from >= offset && t.from < end && (!kind || t.annotation.kind == *kind)) edges.push_back(strategy::transition_json(*s, t));
    return {200,
            {{"schema", kPlayoutSchema},
             {"artifact", name},
             {"kind", s->is_controller() ? "controller" : "counterstrategy"},
             {"total_nodes", s->states.size()},
             {"offset", offset},
             {"limit", limit},
             {"initial", s->initial},
             {"nodes", nodes},
             {"edges", edges}}};
  }

  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Artifact>> artifacts_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::atomic<std::size_t> next_id_{0};
};

}  // namespace gr1::playout
