#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gr1/synth/solver.hpp"

namespace gr1::synth {

/// Enumerated game: state k is the integer whose bit b is state bit b.
/// moves[s] lists, for every env move allowed from s, the states sys may
/// answer with (possibly none).
struct ExplicitGame {
  unsigned bits = 0;
  std::vector<char> theta_e_ok;  // per state, theta_e (sys part ignored)
  std::vector<char> theta_s_ok;
  std::vector<std::vector<std::vector<unsigned>>> moves;
  std::vector<std::vector<char>> je, js;
  std::vector<unsigned> env_mask_bits;  // bit positions owned by env

  [[nodiscard]] std::size_t size() const { return std::size_t{1} << bits; }
};

inline constexpr unsigned kExplicitMaxBits = 12;

/// Builds the explicit transition structure by evaluating the game's BDDs
/// on every state pair.
inline ExplicitGame enumerate_game(const Game& g) {
  const unsigned nb = g.enc.num_bits();
  if (nb > kExplicitMaxBits) throw std::length_error("explicit oracle: more than 12 state bits");
  ExplicitGame x;
  x.bits = nb;
  const std::size_t N = x.size();
  std::vector<unsigned> env_bits, sys_bits;
  for (unsigned b = 0; b < nb; ++b) (g.enc.bit_is_env(b) ? env_bits : sys_bits).push_back(b);
  x.env_mask_bits = env_bits;
  std::vector<bool> val(g.enc.num_bdd_vars());
  auto load = [&](unsigned s, bool primed) {
    for (unsigned b = 0; b < nb; ++b) val[primed ? bdd::primed(b) : bdd::unprimed(b)] = (s >> b) & 1U;
  };
  Manager& M = *g.mgr;
  x.theta_e_ok.resize(N);
  x.theta_s_ok.resize(N);
  x.moves.resize(N);
  x.je.assign(g.m(), std::vector<char>(N));
  x.js.assign(g.n(), std::vector<char>(N));
  for (unsigned s = 0; s < N; ++s) {
    load(s, false);
    x.theta_e_ok[s] = M.eval(g.theta_e, val);
    x.theta_s_ok[s] = M.eval(g.theta_s, val);
    for (std::size_t i = 0; i < g.m(); ++i) x.je[i][s] = M.eval(g.je[i], val);
    for (std::size_t j = 0; j < g.n(); ++j) x.js[j][s] = M.eval(g.js[j], val);
  }
  auto spread = [](unsigned k, const std::vector<unsigned>& pos) {
    unsigned out = 0;
    for (std::size_t i = 0; i < pos.size(); ++i)
      if ((k >> i) & 1U) out |= 1U << pos[i];
    return out;
  };
  for (unsigned s = 0; s < N; ++s) {
    load(s, false);
    for (unsigned e = 0; e < (1U << env_bits.size()); ++e) {
      unsigned env_part = spread(e, env_bits);
      load(env_part, true);
      if (!M.eval(g.rho_e, val)) continue;
      std::vector<unsigned> answers;
      for (unsigned y = 0; y < (1U << sys_bits.size()); ++y) {
        unsigned t = env_part | spread(y, sys_bits);
        load(t, true);
        if (M.eval(g.rho_s, val)) answers.push_back(t);
      }
      x.moves[s].push_back(std::move(answers));
    }
  }
  return x;
}

struct ExplicitVerdict {
  bool realizable = false;
  std::vector<char> z;
};

/// Sys winning region and verdict by explicit fixpoints over state sets.
inline ExplicitVerdict explicit_solve(const ExplicitGame& x) {
  const std::size_t N = x.size();
  using Set = std::vector<char>;
  auto cpre = [&](const Set& s) {
    Set out(N, 0);
    for (std::size_t v = 0; v < N; ++v) {
      bool all = true;
      for (const auto& answers : x.moves[v]) {
        bool some = false;
        for (unsigned t : answers) some = some || s[t];
        all = all && some;
      }
      out[v] = all;
    }
    return out;
  };
  Set z(N, 1);
  while (true) {
    Set nz(N, 1);
    for (std::size_t j = 0; j < x.js.size(); ++j) {
      Set cz = cpre(z);
      Set y(N, 0);
      while (true) {
        Set cy = cpre(y);
        Set ny(N, 0);
        for (std::size_t i = 0; i < x.je.size(); ++i) {
          Set xs = z;
          while (true) {
            Set cx = cpre(xs);
            Set nx(N, 0);
            for (std::size_t v = 0; v < N; ++v)
              nx[v] = (x.js[j][v] && cz[v]) || cy[v] || (!x.je[i][v] && cx[v]);
            if (nx == xs) break;
            xs = nx;
          }
          for (std::size_t v = 0; v < N; ++v) ny[v] = ny[v] || xs[v];
        }
        if (ny == y) break;
        y = ny;
      }
      for (std::size_t v = 0; v < N; ++v) nz[v] = nz[v] && y[v];
    }
    if (nz == z) break;
    z = nz;
  }
  // Every env initial choice (env bits) with theta_e must have a sys
  // completion with theta_s inside z.
  unsigned env_mask = 0;
  for (unsigned b : x.env_mask_bits) env_mask |= 1U << b;
  bool ok = true;
  for (std::size_t s = 0; s < N && ok; ++s) {
    if ((s & ~env_mask) != 0 || !x.theta_e_ok[s]) continue;
    bool some = false;
    for (std::size_t t = 0; t < N && !some; ++t)
      some = (t & env_mask) == s && x.theta_s_ok[t] && z[t];
    ok = some;
  }
  return {ok, z};
}

inline ExplicitVerdict explicit_oracle(const Game& g) { return explicit_solve(enumerate_game(g)); }

struct RandomGameOptions {
  unsigned env_bits = 2;
  unsigned sys_bits = 2;
  unsigned m = 1;
  unsigned n = 1;
  double rho_e_density = 0.5;
  double rho_s_density = 0.5;
  double theta_density = 0.7;
  double justice_density = 0.5;
};

/// Game over boolean variables e0.. (env) and s0.. (sys) whose predicates
/// are random truth tables.  theta_e only reads env bits and rho_e only
/// current bits and next env bits.
inline Game random_game(std::uint64_t seed, const RandomGameOptions& o) {
  std::mt19937_64 rng(seed);
  Game g;
  for (unsigned i = 0; i < o.env_bits; ++i) g.enc.add({"e" + std::to_string(i), {}, true, false, false, 0, 1, std::nullopt});
  for (unsigned i = 0; i < o.sys_bits; ++i) g.enc.add({"s" + std::to_string(i), {}, false, false, false, 0, 1, std::nullopt});
  g.mgr = std::make_shared<Manager>(g.enc.num_bdd_vars());
  Manager& M = *g.mgr;
  const unsigned nb = g.enc.num_bits();
  auto table = [&](const std::vector<VarId>& vars, double density) {
    std::bernoulli_distribution coin(density);
    std::vector<bool> t(std::size_t{1} << vars.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = coin(rng);
    return bdd::from_truth_table(M, vars, t);
  };
  std::vector<VarId> env_cur, cur, cur_env_next, all;
  for (unsigned b = 0; b < nb; ++b) {
    cur.push_back(bdd::unprimed(b));
    all.push_back(bdd::unprimed(b));
    all.push_back(bdd::primed(b));
    cur_env_next.push_back(bdd::unprimed(b));
    if (g.enc.bit_is_env(b)) {
      env_cur.push_back(bdd::unprimed(b));
      cur_env_next.push_back(bdd::primed(b));
    }
  }
  g.theta_e = table(env_cur, o.theta_density);
  g.theta_s = table(cur, o.theta_density);
  g.rho_e = table(cur_env_next, o.rho_e_density);
  g.rho_s = table(all, o.rho_s_density);
  for (unsigned i = 0; i < o.m; ++i) {
    g.je.push_back(table(cur, o.justice_density));
    g.je_prov.push_back({Side::Assumption, ConstraintKind::Justice, std::nullopt, Role::Body, "je" + std::to_string(i)});
  }
  for (unsigned j = 0; j < o.n; ++j) {
    g.js.push_back(table(cur, o.justice_density));
    g.js_prov.push_back({Side::Guarantee, ConstraintKind::Justice, std::nullopt, Role::Body, "js" + std::to_string(j)});
  }
  g.finalize();
  return g;
}

}  // namespace gr1::synth
