#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "gr1/synth/game.hpp"

namespace gr1::synth {

/// Fixpoint sets kept for strategy extraction.  y[j][r] is the r-th ring of
/// the least fixpoint for sys justice j (increasing in r, last ring = z);
/// x[j][r][i] the greatest fixpoint for env justice i computed for ring r.
struct FixpointMemory {
  Bdd z;
  std::vector<std::vector<Bdd>> y;
  std::vector<std::vector<std::vector<Bdd>>> x;
};

/// Sets of the env's winning computation, the negation of the sys winning
/// region.  level[k] is the k-th approximation of the outer least fixpoint
/// (level[0] = false).  For each level k >= 1 and sys justice j: y[k][j] is
/// the greatest fixpoint reached with level[k-1] as the escape set and
/// x[k][j][i][t] the rings of the least fixpoint for env justice i.
struct DualMemory {
  std::vector<Bdd> level;
  std::vector<std::vector<Bdd>> y;
  std::vector<std::vector<std::vector<std::vector<Bdd>>>> x;
  [[nodiscard]] Bdd losing() const { return level.back(); }
};

struct SolveStats {
  std::size_t outer_iterations = 0;
  double seconds = 0;
};

struct Realizability {
  bool realizable = false;
  FixpointMemory mem;
  std::optional<DualMemory> dual;  // filled when unrealizable
  SolveStats stats;
};

/// Controllable predecessor: states from which, for every env move allowed
/// by rho_e, sys has a move allowed by rho_s into s.
inline Bdd cpre(const Game& g, const Bdd& s) {
  Manager& M = *g.mgr;
  Bdd sys_can = M.and_exists(g.rho_s, g.prime(s), g.sys_next_cube);
  return !M.and_exists(g.rho_e, !sys_can, g.env_next_cube);
}

/// Env's controllable predecessor: some env move allowed by rho_e after
/// which every sys move allowed by rho_s lands in s.
inline Bdd cpre_env(const Game& g, const Bdd& s) {
  Manager& M = *g.mgr;
  Bdd sys_escapes = M.and_exists(g.rho_s, !g.prime(s), g.sys_next_cube);
  return M.and_exists(g.rho_e, !sys_escapes, g.env_next_cube);
}

namespace detail {

// One application of the sys formula for justice j with z fixed; records
// rings when `mem` is non-null.
inline Bdd sys_y(const Game& g, const Bdd& z, std::size_t j, FixpointMemory* mem) {
  Manager& M = *g.mgr;
  Bdd goal = g.js[j] & cpre(g, z);
  Bdd y = M.bdd_false();
  std::vector<Bdd> rings;
  std::vector<std::vector<Bdd>> xs;
  while (true) {
    Bdd start = goal | cpre(g, y);
    Bdd next_y = M.bdd_false();
    std::vector<Bdd> xr;
    for (std::size_t i = 0; i < g.m(); ++i) {
      Bdd x = z;
      while (true) {
        Bdd nx = start | ((!g.je[i]) & cpre(g, x));
        if (nx == x) break;
        x = nx;
      }
      next_y |= x;
      xr.push_back(x);
    }
    if (next_y == y) break;
    y = next_y;
    rings.push_back(y);
    xs.push_back(std::move(xr));
  }
  if (mem) {
    mem->y.push_back(std::move(rings));
    mem->x.push_back(std::move(xs));
  }
  return y;
}

inline Bdd env_y(const Game& g, const Bdd& lower, std::size_t j, DualMemory* mem) {
  Manager& M = *g.mgr;
  Bdd escape = (!g.js[j]) | cpre_env(g, lower);
  Bdd y = M.bdd_true();
  std::vector<std::vector<Bdd>> rings;
  while (true) {
    Bdd next_y = M.bdd_true();
    Bdd stay = cpre_env(g, y);
    rings.clear();
    for (std::size_t i = 0; i < g.m(); ++i) {
      Bdd x = M.bdd_false();
      std::vector<Bdd> xr;
      while (true) {
        Bdd nx = escape & stay & (g.je[i] | cpre_env(g, x));
        if (nx == x) break;
        x = nx;
        xr.push_back(x);
      }
      next_y &= x;
      rings.push_back(std::move(xr));
    }
    if (next_y == y) break;
    y = next_y;
  }
  if (mem) {
    mem->y.back().push_back(y);
    mem->x.back().push_back(std::move(rings));
  }
  return y;
}

}  // namespace detail

/// Sys winning region only.
inline Bdd winning_region(const Game& g, std::size_t* iterations = nullptr) {
  Manager& M = *g.mgr;
  Bdd z = M.bdd_true();
  std::size_t it = 0;
  while (true) {
    ++it;
    Bdd nz = z;
    for (std::size_t j = 0; j < g.n(); ++j) nz &= detail::sys_y(g, nz, j, nullptr);
    if (nz == z) break;
    z = nz;
  }
  if (iterations) *iterations = it;
  return z;
}

/// Env winning region computed by its own fixpoint, with memory.
inline DualMemory env_winning(const Game& g) {
  Manager& M = *g.mgr;
  DualMemory d;
  d.level.push_back(M.bdd_false());
  d.y.emplace_back();
  d.x.emplace_back();
  while (true) {
    d.y.emplace_back();
    d.x.emplace_back();
    Bdd nl = M.bdd_false();
    for (std::size_t j = 0; j < g.n(); ++j) nl |= detail::env_y(g, d.level.back(), j, &d);
    if (nl == d.level.back()) {
      d.y.pop_back();
      d.x.pop_back();
      break;
    }
    d.level.push_back(nl);
  }
  return d;
}

/// Every initial env choice admits an initial sys choice inside `z`.
inline bool initially_winning(const Game& g, const Bdd& z) {
  Manager& M = *g.mgr;
  Bdd sys_ok = M.exists(g.theta_s & z, g.sys_cur_cube);
  return M.forall(g.theta_e.implies(sys_ok), g.env_cur_cube).is_true();
}

inline Realizability check_realizability(const Game& g) {
  auto t0 = std::chrono::steady_clock::now();
  Realizability r;
  Bdd z = winning_region(g, &r.stats.outer_iterations);
  r.mem.z = z;
  for (std::size_t j = 0; j < g.n(); ++j) detail::sys_y(g, z, j, &r.mem);
  r.realizable = initially_winning(g, z);
  if (!r.realizable) r.dual = env_winning(g);
  r.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Result of the well-separation diagnostic.
struct WellSeparation {
  bool well_separated = true;
  std::optional<std::size_t> justice;  // env justice sys can block, if any
  std::string label;                   // its source label
  bool deadlock = false;               // sys can force an env deadlock instead
  std::optional<Assignment> witness;   // reachable state where it starts
  std::string sketch;
};

/// Looks for a reachable state from which sys, obeying rho_s, can force
/// rho_e to become unsatisfiable or keep some env justice false forever.
inline WellSeparation check_well_separation(const Game& g) {
  Manager& M = *g.mgr;
  WellSeparation out;
  // Only states from which env and sys together can still satisfy every
  // assumption count: elsewhere the env has already defeated itself.
  Bdd trans = g.rho_e & g.rho_s;
  auto ex = [&](const Bdd& s) { return M.and_exists(trans, g.prime(s), g.next_cube); };
  Bdd fair = M.bdd_true();
  while (true) {
    Bdd nf = fair;
    for (std::size_t i = 0; i < g.m(); ++i) {
      Bdd target = fair & g.je[i];
      Bdd eu = M.bdd_false();
      while (true) {  // E[fair U target], then one step into it
        Bdd ne = target | (fair & ex(eu));
        if (ne == eu) break;
        eu = ne;
      }
      nf &= ex(eu);
    }
    if (nf == fair) break;
    fair = nf;
  }
  // Reachable states under all moves of both players.
  Bdd reach = g.theta_e & g.theta_s & fair;
  while (true) {
    Bdd img = g.unprime(M.and_exists(reach, trans, g.cur_cube));
    Bdd nr = reach | (img & fair);
    if (nr == reach) break;
    reach = nr;
  }
  Bdd env_dead = !M.exists(g.rho_e, g.env_next_cube);
  auto first_state = [&](const Bdd& s) { return g.enc.decode(*M.pick_one(s, g.all_vars())); };
  auto forced_dead = [&]() {
    Bdd w = M.bdd_false();
    while (true) {
      Bdd nw = env_dead | cpre(g, w);
      if (nw == w) return w;
      w = nw;
    }
  }();
  if (!(forced_dead & reach).is_false()) {
    out.well_separated = false;
    out.deadlock = true;
    out.witness = first_state(forced_dead & reach);
    out.sketch = "system steers into a state where no environment move satisfies the assumptions";
  }
  for (std::size_t i = 0; i < g.m() && out.well_separated; ++i) {
    // mu W. nu V. (!J_e[i] & cpre(V)) | cpre(W)
    Bdd w = M.bdd_false();
    while (true) {
      Bdd v = M.bdd_true();
      while (true) {
        Bdd nv = ((!g.je[i]) & cpre(g, v)) | cpre(g, w);
        if (nv == v) break;
        v = nv;
      }
      if (v == w) break;
      w = v;
    }
    w &= !env_dead;  // deadlocks are reported above
    Bdd hit = w & reach;
    if (hit.is_false()) continue;
    out.well_separated = false;
    out.justice = i;
    out.label = g.je_prov[i].label;
    out.witness = first_state(hit);
    out.sketch = "system can keep the assumption '" + out.label + "' unfulfilled forever from " +
                 g.format(*out.witness);
  }
  return out;
}

}  // namespace gr1::synth
