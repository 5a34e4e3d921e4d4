#pragma once

#include <json.hpp>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gr1::forklift {

/// How fork actions are scheduled.  Delayed: a lift/drop completes within
/// the step that issues it.  Continuous: it completes `k` ticks later and
/// liftAck is true for exactly that tick.
enum class Schedule { Delayed, Continuous };

inline const char* schedule_name(Schedule s) { return s == Schedule::Delayed ? "delayed" : "continuous"; }

struct Cell {
  bool station = false;
  bool cargo = false;
  bool obstacle = false;      // tall: seen by the distance sensor
  bool low_obstacle = false;  // low: seen by the cargo sensor only
};

enum class Fork { Down, UpEmpty, UpLoaded };

/// Scripted change applied before sensing at `step`.
struct Event {
  std::size_t step = 0;
  std::optional<bool> emg_off;
  std::map<std::string, std::string> flicker;  // one-step sensor overrides
  std::optional<std::size_t> place_obstacle, remove_obstacle;
  std::optional<std::size_t> place_low_obstacle, remove_low_obstacle;
  std::optional<std::size_t> place_cargo;
};

struct Script {
  std::string name;
  std::size_t cells = 12;
  std::vector<std::size_t> stations, cargo, obstacles, low_obstacles;
  std::size_t start = 0;
  int heading = 1;
  std::vector<Event> events;
  std::uint64_t seed = 0;
  // Random emergency presses: each step starts one with this probability.
  double emergency_rate = 0;
  std::size_t emergency_length = 5;
};

inline Script parse_script(const nlohmann::json& j) {
  Script s;
  s.name = j.value("name", std::string("script"));
  const auto& track = j.at("track");
  s.cells = track.at("cells").get<std::size_t>();
  s.stations = track.value("stations", std::vector<std::size_t>{});
  s.cargo = track.value("cargo", std::vector<std::size_t>{});
  s.obstacles = track.value("obstacles", std::vector<std::size_t>{});
  s.low_obstacles = track.value("low_obstacles", std::vector<std::size_t>{});
  if (j.contains("robot")) {
    s.start = j["robot"].value("position", std::size_t{0});
    s.heading = j["robot"].value("heading", 1);
  }
  if (s.cells < 3) throw std::invalid_argument("track needs at least 3 cells");
  if (s.heading != 1 && s.heading != -1) throw std::invalid_argument("heading must be 1 or -1");
  for (const auto* list : {&s.stations, &s.cargo, &s.obstacles, &s.low_obstacles})
    for (std::size_t c : *list)
      if (c >= s.cells) throw std::invalid_argument("cell " + std::to_string(c) + " is off the track");
  if (s.start >= s.cells) throw std::invalid_argument("robot is off the track");
  s.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("random_emergency")) {
    s.emergency_rate = j["random_emergency"].value("probability", 0.0);
    s.emergency_length = j["random_emergency"].value("length", std::size_t{5});
  }
  for (const auto& e : j.value("events", nlohmann::json::array())) {
    Event ev;
    ev.step = e.at("step").get<std::size_t>();
    if (e.contains("emgOff")) ev.emg_off = e["emgOff"].get<bool>();
    if (e.contains("flicker"))
      for (const auto& [k, v] : e["flicker"].items()) ev.flicker[k] = v.is_boolean() ? (v.get<bool>() ? "true" : "false") : v.get<std::string>();
    auto cell = [&](const char* key, std::optional<std::size_t>& into) {
      if (!e.contains(key)) return;
      into = e[key].get<std::size_t>();
      if (*into >= s.cells) throw std::invalid_argument(std::string(key) + " is off the track");
    };
    cell("place_obstacle", ev.place_obstacle);
    cell("remove_obstacle", ev.remove_obstacle);
    cell("place_low_obstacle", ev.place_low_obstacle);
    cell("remove_low_obstacle", ev.remove_low_obstacle);
    cell("place_cargo", ev.place_cargo);
    s.events.push_back(std::move(ev));
  }
  return s;
}

inline Script load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open script " + path);
  return parse_script(nlohmann::json::parse(in));
}

/// Sensor readings, named after the forklift env variables.
struct Reading {
  bool station = false;
  bool dist_blocked = false;
  bool cargo_blocked = false;
  bool emg_off = false;
  bool lift_ack = false;
};

enum class Motion { Forward, Backward, Turn, Stop, Other };
enum class ForkCommand { Nil, Lift, Drop };

struct Action {
  Motion motion = Motion::Stop;
  ForkCommand fork = ForkCommand::Nil;
};

struct WorldEvent {
  std::size_t step = 0;
  std::string kind;  // delivery, lift, cargo_overrun, collision, lift_failed, drop_failed, fork_aborted
  std::size_t cell = 0;
};

/// Circular track with one forklift.
class World {
 public:
  World(const Script& script, Schedule schedule, unsigned k = 3)
      : script_(script), schedule_(schedule), k_(k), rng_(script.seed) {
    if (k_ < 1) throw std::invalid_argument("fork duration must be at least one tick");
    cells_.resize(script.cells);
    for (std::size_t c : script.stations) cells_[c].station = true;
    for (std::size_t c : script.cargo) cells_[c].cargo = true;
    for (std::size_t c : script.obstacles) cells_[c].obstacle = true;
    for (std::size_t c : script.low_obstacles) cells_[c].low_obstacle = true;
    pos_ = script.start;
    heading_ = script.heading;
    apply_events();
  }

  [[nodiscard]] std::size_t step() const { return step_; }
  [[nodiscard]] std::size_t position() const { return pos_; }
  [[nodiscard]] int heading() const { return heading_; }
  [[nodiscard]] Fork fork() const { return fork_; }
  [[nodiscard]] const std::vector<Cell>& cells() const { return cells_; }
  [[nodiscard]] const std::vector<WorldEvent>& events() const { return events_; }
  [[nodiscard]] bool fork_busy() const { return pending_.has_value(); }
  [[nodiscard]] std::size_t ahead() const { return wrap(static_cast<long>(pos_) + heading_); }
  [[nodiscard]] std::size_t behind() const { return wrap(static_cast<long>(pos_) - heading_); }

  /// Sensor values at the current step.  The cargo sensor sits on the fork
  /// and reads nothing while a fork action is under way.
  [[nodiscard]] Reading sense() const {
    Reading r;
    r.station = cells_[pos_].station;
    r.dist_blocked = cells_[ahead()].obstacle;
    r.cargo_blocked = !pending_ && (cells_[ahead()].cargo || cells_[ahead()].low_obstacle);
    r.emg_off = emg_off_;
    r.lift_ack = ack_;
    for (const auto& [name, value] : flicker_) {
      bool v = value == "true" || value == "BLOCKED";
      if (name == "station") r.station = v;
      else if (name == "distSense") r.dist_blocked = v;
      else if (name == "cargoSense") r.cargo_blocked = v;
      else if (name == "emgOff") r.emg_off = v;
      else if (name == "liftAck") r.lift_ack = v;
    }
    return r;
  }

  /// Executes the controller's output for this step and advances time.
  void actuate(const Action& a) {
    if (a.fork != ForkCommand::Nil) start_fork(a.fork);
    switch (a.motion) {
      case Motion::Forward: move(ahead()); break;
      case Motion::Backward: move(behind()); break;
      case Motion::Turn: heading_ = -heading_; break;
      case Motion::Stop:
      case Motion::Other: break;
    }
    ++step_;
    ack_ = false;
    if (pending_ && pending_->done_at == step_) finish_fork();
    apply_events();
  }

 private:
  struct Pending {
    ForkCommand command;
    std::size_t done_at;
    std::size_t pos;
    int heading;
  };

  [[nodiscard]] std::size_t wrap(long c) const {
    long n = static_cast<long>(cells_.size());
    return static_cast<std::size_t>(((c % n) + n) % n);
  }

  void log(const std::string& kind, std::size_t cell) { events_.push_back({step_, kind, cell}); }

  void move(std::size_t to) {
    Cell& c = cells_[to];
    if (c.obstacle || c.low_obstacle) {
      log("collision", to);
      return;
    }
    if (c.cargo) log("cargo_overrun", to);
    pos_ = to;
  }

  void start_fork(ForkCommand cmd) {
    if (schedule_ == Schedule::Delayed) {
      apply_fork(cmd, pos_, ahead());
      return;
    }
    if (pending_) {
      log("fork_busy", pos_);
      return;
    }
    pending_ = Pending{cmd, step_ + k_, pos_, heading_};
  }

  void finish_fork() {
    Pending p = *pending_;
    pending_.reset();
    ack_ = true;
    if (pos_ != p.pos || heading_ != p.heading) {
      log("fork_aborted", pos_);
      return;
    }
    apply_fork(p.command, p.pos, ahead());
  }

  void apply_fork(ForkCommand cmd, std::size_t at, std::size_t target) {
    Cell& t = cells_[target];
    if (cmd == ForkCommand::Lift) {
      if (cells_[at].station && t.cargo && fork_ != Fork::UpLoaded) {
        t.cargo = false;
        fork_ = Fork::UpLoaded;
        lifted_at_ = at;
        left_station_ = false;
        log("lift", at);
      } else {
        if (fork_ == Fork::Down) fork_ = Fork::UpEmpty;
        log("lift_failed", at);
      }
    } else {
      if (cells_[at].station && fork_ == Fork::UpLoaded && !t.cargo && !t.obstacle && !t.low_obstacle) {
        t.cargo = true;
        fork_ = Fork::Down;
        log("delivery", at);
        if (lifted_at_ == at && !left_station_) log("same_station_drop", at);
      } else {
        log("drop_failed", at);
      }
    }
  }

  void apply_events() {
    flicker_.clear();
    if (!cells_[pos_].station) left_station_ = true;
    for (const auto& e : script_.events) {
      if (e.step != step_) continue;
      if (e.emg_off) emg_off_ = *e.emg_off;
      for (const auto& [k, v] : e.flicker) flicker_[k] = v;
      if (e.place_obstacle) cells_[*e.place_obstacle].obstacle = true;
      if (e.remove_obstacle) cells_[*e.remove_obstacle].obstacle = false;
      if (e.place_low_obstacle) cells_[*e.place_low_obstacle].low_obstacle = true;
      if (e.remove_low_obstacle) cells_[*e.remove_low_obstacle].low_obstacle = false;
      if (e.place_cargo) cells_[*e.place_cargo].cargo = true;
    }
    if (script_.emergency_rate > 0) {
      if (random_press_left_ > 0 && --random_press_left_ == 0) emg_off_ = false;
      if (random_press_left_ == 0 && std::bernoulli_distribution(script_.emergency_rate)(rng_)) {
        emg_off_ = true;
        random_press_left_ = script_.emergency_length;
      }
    }
  }

  Script script_;
  Schedule schedule_;
  unsigned k_;
  std::mt19937_64 rng_;
  std::vector<Cell> cells_;
  std::size_t pos_ = 0;
  int heading_ = 1;
  Fork fork_ = Fork::Down;
  std::optional<Pending> pending_;
  bool ack_ = false;
  bool emg_off_ = false;
  std::size_t step_ = 0;
  std::map<std::string, std::string> flicker_;
  std::vector<WorldEvent> events_;
  std::optional<std::size_t> lifted_at_;
  bool left_station_ = false;
  std::size_t random_press_left_ = 0;
};

}  // namespace gr1::forklift
