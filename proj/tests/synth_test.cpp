#include <gtest/gtest.h>

#include <random>

#include "gr1/spec/parser.hpp"
#include "gr1/synth/explicit.hpp"

using namespace gr1;
using namespace gr1::synth;

namespace {

std::string corpus(const std::string& name) { return std::string(GR1_SPEC_DIR) + "/" + name + ".gr1spec"; }

Game corpus_game(const std::string& name) { return prepare_game(spec::parse_file(corpus(name))); }

Game small(const std::string& body) {
  return prepare_game(spec::parse("SPEC t\nVARENV\n  e : boolean;\nVAR\n  s : boolean;\n" + body));
}

bool subset(const Bdd& a, const Bdd& b) { return (a & !b).is_false(); }

Bdd random_relation(const Game& g, bool env_next_only, std::mt19937& rng) {
  std::vector<VarId> vars;
  for (unsigned b = 0; b < g.enc.num_bits(); ++b) {
    vars.push_back(bdd::unprimed(b));
    if (!env_next_only || g.enc.bit_is_env(b)) vars.push_back(bdd::primed(b));
  }
  std::bernoulli_distribution coin(0.7);
  std::vector<bool> t(std::size_t{1} << vars.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = coin(rng);
  return bdd::from_truth_table(*g.mgr, vars, t);
}

}  // namespace

TEST(Encoding, CorpusLayout) {
  Game g = corpus_game("v1");
  EXPECT_EQ(g.enc.num_bits(), 23U);
  unsigned env = 0, sys = 0;
  for (unsigned b = 0; b < g.enc.num_bits(); ++b) (g.enc.bit_is_env(b) ? env : sys)++;
  // 4 declared env bits + 5 P26 + 3 P15 monitor bits
  EXPECT_EQ(env, 12U);
  EXPECT_EQ(sys, 11U);
  const StateVar* ml = g.enc.find("mLeft");
  ASSERT_NE(ml, nullptr);
  EXPECT_EQ(ml->nbits, 2U);
  EXPECT_EQ(ml->first_bit, 4U);
  EXPECT_FALSE(g.enc.find("spec_loaded")->env);
  EXPECT_TRUE(g.enc.find("aux_escape_pending")->env);
  EXPECT_FALSE(g.enc.find("aux_moveCargo_fail")->env);
}

TEST(Encoding, EnumCodesAreBinaryMsbFirst) {
  Game g = corpus_game("v1");
  Manager& M = *g.mgr;
  const StateVar* ml = g.enc.find("mLeft");
  std::vector<bool> bits(g.enc.num_bdd_vars());
  for (int code = 0; code < 3; ++code) {
    Bdd v = g.enc.value(M, *ml, code, false);
    bits[bdd::unprimed(4)] = (code >> 1) & 1;
    bits[bdd::unprimed(5)] = code & 1;
    EXPECT_TRUE(M.eval(v, bits)) << code;
  }
  Bdd stop = g.enc.encode(M, spec::parse_expr("mLeft = STOP"));
  bits[bdd::unprimed(4)] = true;
  bits[bdd::unprimed(5)] = false;
  EXPECT_TRUE(M.eval(stop, bits));
  // Unused code 11 is excluded by the domain constraint on the owner side.
  Bdd bad = g.enc.value(M, *ml, 3, false);
  EXPECT_TRUE((g.theta_s & bad).is_false());
  EXPECT_TRUE((g.rho_s & g.enc.value(M, *ml, 3, true)).is_false());
  EXPECT_FALSE((g.theta_e & bad).is_false());
}

TEST(Encoding, NextMapsToPrimedBits) {
  Game g = corpus_game("v1");
  Bdd b = g.enc.encode(*g.mgr, spec::parse_expr("next(station) & emgOff"));
  auto sup = g.mgr->support(b);
  ASSERT_EQ(sup.size(), 2U);
  EXPECT_EQ(sup[0], bdd::primed(0));
  EXPECT_EQ(sup[1], bdd::unprimed(3));
}

TEST(Game, CorpusJusticeCounts) {
  Game v1 = corpus_game("v1");
  EXPECT_EQ(v1.m(), 6U);
  EXPECT_EQ(v1.n(), 3U);
  Game v2 = corpus_game("v2");
  EXPECT_EQ(v2.m(), 7U);
  EXPECT_EQ(v2.n(), 3U);
  for (const auto& p : v1.je_prov) EXPECT_EQ(p.side, Side::Assumption);
  EXPECT_EQ(v1.je_prov[2].label, "leaveStation");
  EXPECT_EQ(v1.js_prov[0].label, "deliver");
}

TEST(Game, PaddingWithoutJustice) {
  Game g = small("GAR G (s -> next(s));\n");
  EXPECT_EQ(g.m(), 1U);
  EXPECT_EQ(g.n(), 1U);
  EXPECT_TRUE(g.je[0].is_true());
  EXPECT_TRUE(g.js[0].is_true());
  EXPECT_EQ(g.je_prov[0].label, "padding");
}

TEST(Game, SingleJusticeMapsDirectly) {
  Game g = small("GAR G F (s);\n");
  EXPECT_TRUE(g.rho_s.is_true());
  EXPECT_TRUE(g.rho_e.is_true());
  ASSERT_EQ(g.n(), 1U);
  EXPECT_EQ(g.js[0], g.enc.encode(*g.mgr, spec::parse_expr("s")));
}

TEST(Game, RhoEMentionsOnlyEnvPrimedBits) {
  for (const char* name : {"v1", "v2", "v2_c3_bad_ack"}) {
    Game g = corpus_game(name);
    for (VarId v : g.mgr->support(g.rho_e)) {
      if (bdd::is_primed(v)) {
        EXPECT_TRUE(g.enc.bit_is_env(v / 2)) << name;
      }
    }
    for (const auto& j : g.je)
      for (VarId v : g.mgr->support(j)) {
        EXPECT_FALSE(bdd::is_primed(v));
      }
  }
}

TEST(AuxValidation, CorpusAuxDefinitionsAreValid) {
  for (const char* name : {"v1", "v2", "v1_c1_strong_guarantee", "v1_c2_early", "v2_c3_bad_ack"}) {
    Game g = build_game(pattern::normalize(spec::parse_file(corpus(name))));
    auto err = validate_aux(g);
    EXPECT_FALSE(err.has_value()) << name << ": " << (err ? err->to_string() : "");
  }
}

TEST(AuxValidation, UndefinedAuxIsIncomplete) {
  auto doc = spec::parse("SPEC t\nVARENV\n  e : boolean;\nVAR\n  s : boolean;\n  spec_a : boolean;\nGAR G F (s);\n");
  Game g = build_game(pattern::normalize(doc));
  auto err = validate_aux(g);
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->kind, AuxError::Kind::Incomplete);
  EXPECT_EQ(err->var, "spec_a");
  EXPECT_THROW(prepare_game(doc), AuxValidationError);
}

TEST(AuxValidation, ContradictoryUpdateIsIncomplete) {
  auto doc = spec::parse(
      "SPEC t\nVARENV\n  e : boolean;\nVAR\n  s : boolean;\n  spec_a : boolean;\n"
      "GAR !spec_a;\nGAR G (next(spec_a));\nGAR G (!next(spec_a));\n");
  auto err = validate_aux(build_game(pattern::normalize(doc)));
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->kind, AuxError::Kind::Incomplete);
  EXPECT_FALSE(err->initial);
}

TEST(AuxValidation, FreeUpdateIsNondeterministic) {
  auto doc = spec::parse(
      "SPEC t\nVARENV\n  e : boolean;\nVAR\n  s : boolean;\n  spec_a : boolean;\n"
      "GAR !spec_a;\nGAR G (e -> next(spec_a));\n");
  auto err = validate_aux(build_game(pattern::normalize(doc)));
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->kind, AuxError::Kind::Nondeterministic);
  EXPECT_NE(err->witness.find("e=false"), std::string::npos);
}

TEST(AuxValidation, AgreesWithExplicitEnumeration) {
  // Random update relation for spec_a over e, s, spec_a and their next
  // values, written as a disjunction of full minterms.
  std::mt19937 rng(11);
  const char* names[] = {"e", "s", "spec_a"};
  for (int round = 0; round < 60; ++round) {
    std::vector<bool> table(64);
    std::bernoulli_distribution coin(round % 3 == 0 ? 0.5 : 0.9);
    for (auto&& t : table) t = coin(rng);
    // Make most rounds functional so both verdict kinds are exercised.
    if (round % 3 == 1)
      for (unsigned k = 0; k < 32; ++k) {
        bool pick = coin(rng);
        table[2 * k] = !pick;
        table[2 * k + 1] = pick;
      }
    std::string rel = "FALSE";
    for (unsigned k = 0; k < 64; ++k) {
      if (!table[k]) continue;
      std::string m;
      for (unsigned b = 0; b < 6; ++b) {
        bool on = (k >> (5 - b)) & 1U;
        std::string atom = b < 3 ? std::string(names[b]) : "next(" + std::string(names[b - 3]) + ")";
        m += (m.empty() ? "" : " & ") + (on ? atom : "!" + atom);
      }
      rel += " | (" + m + ")";
    }
    auto doc = spec::parse("SPEC t\nVARENV\n  e : boolean;\nVAR\n  s : boolean;\n  spec_a : boolean;\n"
                           "GAR !spec_a;\nGAR G (" + rel + ");\n");
    auto err = validate_aux(build_game(pattern::normalize(doc)));
    // Explicit: for each (e, s, a, e', s') count values of a'.
    bool incomplete = false, several = false;
    for (unsigned k = 0; k < 32; ++k) {
      int count = table[2 * k] + table[2 * k + 1];
      incomplete = incomplete || count == 0;
      several = several || count == 2;
    }
    if (incomplete) {
      ASSERT_TRUE(err.has_value()) << round;
      EXPECT_EQ(err->kind, AuxError::Kind::Incomplete) << round;
    } else if (several) {
      ASSERT_TRUE(err.has_value()) << round;
      EXPECT_EQ(err->kind, AuxError::Kind::Nondeterministic) << round;
    } else {
      EXPECT_FALSE(err.has_value()) << round;
    }
  }
}

TEST(Realizability, Corpus) {
  const std::vector<std::pair<std::string, bool>> cases = {
      {"v1", true}, {"v2", true}, {"v1_c1_strong_guarantee", false}, {"v1_c2_early", true}, {"v2_c3_bad_ack", false}};
  for (const auto& [name, expected] : cases) {
    Game g = corpus_game(name);
    auto r = check_realizability(g);
    EXPECT_EQ(r.realizable, expected) << name;
    EXPECT_EQ(r.dual.has_value(), !expected) << name;
    EXPECT_LT(r.stats.seconds, 30.0) << name;
  }
}

TEST(Realizability, ContradictionIsUnrealizable) {
  Game g = small("GAR G (!s);\nGAR G F (s);\n");
  EXPECT_FALSE(check_realizability(g).realizable);
  EXPECT_FALSE(explicit_oracle(g).realizable);
}

TEST(Realizability, MatchingEnvIsRealizable) {
  Game g = small("GAR G F (s = e);\n");
  EXPECT_TRUE(check_realizability(g).realizable);
  EXPECT_TRUE(explicit_oracle(g).realizable);
}

TEST(Realizability, EnvDeadlockIsSysWin) {
  Game g = small("ASM G (FALSE);\nGAR G (!s);\nGAR G F (s);\n");
  EXPECT_TRUE(g.rho_e.is_false());
  EXPECT_TRUE(check_realizability(g).realizable);
  EXPECT_TRUE(explicit_oracle(g).realizable);
}

TEST(Realizability, SysDeadlockIsEnvWin) {
  Game g = small("GAR G (next(s));\nGAR G (!next(s));\n");
  EXPECT_FALSE(check_realizability(g).realizable);
  EXPECT_FALSE(explicit_oracle(g).realizable);
}

TEST(Realizability, CorpusHasNoReachableEnvDeadlock) {
  for (const char* name : {"v1", "v2", "v1_c1_strong_guarantee", "v1_c2_early", "v2_c3_bad_ack"}) {
    Game g = corpus_game(name);
    Manager& M = *g.mgr;
    Bdd dead = !M.exists(g.rho_e, g.env_next_cube);
    Bdd trans = g.rho_e & g.rho_s;
    Bdd reach = g.theta_e & g.theta_s;
    while (true) {
      Bdd nr = reach | g.unprime(M.and_exists(reach, trans, g.cur_cube));
      if (nr == reach) break;
      reach = nr;
    }
    EXPECT_TRUE((reach & dead).is_false()) << name;
  }
}

TEST(Fixpoint, WinningRegionIsAFixpointAndRingsAreMonotone) {
  for (const char* name : {"v1", "v2"}) {
    Game g = corpus_game(name);
    auto r = check_realizability(g);
    Bdd again = r.mem.z;
    for (std::size_t j = 0; j < g.n(); ++j) again &= detail::sys_y(g, again, j, nullptr);
    EXPECT_EQ(again, r.mem.z) << name;
    ASSERT_EQ(r.mem.y.size(), g.n());
    for (std::size_t j = 0; j < g.n(); ++j) {
      const auto& rings = r.mem.y[j];
      ASSERT_FALSE(rings.empty());
      for (std::size_t k = 1; k < rings.size(); ++k) EXPECT_TRUE(subset(rings[k - 1], rings[k]));
      EXPECT_EQ(rings.back(), r.mem.z);
      ASSERT_EQ(r.mem.x[j].size(), rings.size());
      for (std::size_t k = 0; k < rings.size(); ++k) {
        Bdd u = g.mgr->bdd_false();
        for (const auto& x : r.mem.x[j][k]) u |= x;
        EXPECT_EQ(u, rings[k]);
      }
    }
  }
}

TEST(Fixpoint, DualRegionIsTheComplement) {
  for (const char* name : {"v1_c1_strong_guarantee", "v2_c3_bad_ack"}) {
    Game g = corpus_game(name);
    auto r = check_realizability(g);
    ASSERT_TRUE(r.dual.has_value());
    EXPECT_EQ(r.dual->losing(), !r.mem.z) << name;
  }
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomGameOptions o;
    o.m = 1 + seed % 2;
    o.n = 1 + (seed / 2) % 2;
    Game g = random_game(seed, o);
    EXPECT_EQ(env_winning(g).losing(), !winning_region(g)) << seed;
  }
}

TEST(Fixpoint, Monotonicity) {
  std::mt19937 rng(5);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomGameOptions o;
    o.rho_e_density = 0.8;
    o.rho_s_density = 0.7;
    Game g = random_game(seed, o);
    Bdd z = winning_region(g);
    Game stronger = g;
    stronger.rho_s = g.rho_s & random_relation(g, false, rng);
    EXPECT_TRUE(subset(winning_region(stronger), z)) << seed;
    Game weaker_env = g;
    weaker_env.rho_e = g.rho_e | random_relation(g, true, rng);
    EXPECT_TRUE(subset(winning_region(weaker_env), z)) << seed;
  }
}

TEST(Oracle, RandomGamesAgree) {
  std::size_t realizable = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    RandomGameOptions o;
    o.env_bits = 1 + seed % 3;
    o.sys_bits = 1 + (seed / 3) % 3;
    o.m = 1 + seed % 2;
    o.n = 1 + (seed / 5) % 2;
    o.rho_e_density = seed % 4 == 0 ? 0.5 : 0.85;
    o.rho_s_density = 0.6;
    Game g = random_game(seed, o);
    auto sym = check_realizability(g);
    auto exp = explicit_oracle(g);
    EXPECT_EQ(sym.realizable, exp.realizable) << seed;
    realizable += sym.realizable;
    std::vector<bool> val(g.enc.num_bdd_vars());
    for (unsigned s = 0; s < (1U << g.enc.num_bits()); ++s) {
      for (unsigned b = 0; b < g.enc.num_bits(); ++b) val[bdd::unprimed(b)] = (s >> b) & 1U;
      EXPECT_EQ(g.mgr->eval(sym.mem.z, val), exp.z[s] != 0) << seed << " state " << s;
    }
  }
  // Both verdicts occur.
  EXPECT_GT(realizable, 10U);
  EXPECT_LT(realizable, 110U);
}

TEST(Oracle, SizeGuard) {
  RandomGameOptions o;
  o.env_bits = 7;
  o.sys_bits = 6;
  Game g = random_game(1, o);
  EXPECT_THROW(explicit_oracle(g), std::length_error);
}

TEST(Realizability, IndependentOfDeclarationOrder) {
  auto doc = spec::parse_file(corpus("v1"));
  std::reverse(doc.env_vars.begin(), doc.env_vars.end());
  std::reverse(doc.sys_vars.begin(), doc.sys_vars.end());
  EXPECT_TRUE(check_realizability(prepare_game(doc)).realizable);
  auto bad = spec::parse_file(corpus("v2_c3_bad_ack"));
  std::reverse(bad.env_vars.begin(), bad.env_vars.end());
  EXPECT_FALSE(check_realizability(prepare_game(bad)).realizable);
}

TEST(WellSeparation, EarlyLeaveStationLetsSystemBlockJustice) {
  Game g = corpus_game("v1_c2_early");
  auto ws = check_well_separation(g);
  EXPECT_FALSE(ws.well_separated);
  EXPECT_FALSE(ws.deadlock);
  EXPECT_EQ(ws.label, "leaveStation");
  ASSERT_TRUE(ws.witness.has_value());
  // The witness stands on a station with the response pending.
  EXPECT_EQ((*ws.witness)[g.enc.index_of("station")], 1);
  EXPECT_EQ((*ws.witness)[g.enc.index_of("aux_leaveStation_pending")], 1);
}

TEST(WellSeparation, TrivialGameIsWellSeparated) {
  Game g = small("GAR G F (s);\n");
  EXPECT_TRUE(check_well_separation(g).well_separated);
}

TEST(WellSeparation, FinalCorpusVerdictsPinned) {
  EXPECT_TRUE(check_well_separation(corpus_game("v1")).well_separated);
  EXPECT_TRUE(check_well_separation(corpus_game("v2")).well_separated);
}

TEST(WellSeparation, ForcedEnvDeadlock) {
  // Whenever s holds, the env has no legal move.
  Game g = small("ASM G (!s);\n");
  auto ws = check_well_separation(g);
  EXPECT_FALSE(ws.well_separated);
  EXPECT_TRUE(ws.deadlock);
}
