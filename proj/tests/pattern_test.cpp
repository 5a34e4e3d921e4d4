#include <gtest/gtest.h>

#include <random>

#include "gr1/pattern/equivalence.hpp"
#include "gr1/pattern/normalize.hpp"
#include "gr1/spec/parser.hpp"

using namespace gr1;
using namespace gr1::pattern;
using spec::ex::ident;

namespace {

std::string corpus(const std::string& name) { return std::string(GR1_SPEC_DIR) + "/" + name + ".gr1spec"; }

PatternInstance make(PatternId id, int bound = 0) {
  PatternInstance in;
  in.id = id;
  in.bound = bound;
  in.p = ident("p");
  if (id == PatternId::P26) {
    in.s = ident("s");
  } else {
    in.q = ident("q");
    in.r = ident("r");
  }
  return in;
}

std::vector<std::string> atoms_for(PatternId id) {
  if (id == PatternId::P26) return {"p", "s"};
  return {"p", "q", "r"};
}

// Runs the deterministic aux updates of `t` along a trace of input values.
std::vector<std::unordered_map<std::string, int>> simulate(
    const TemplateExpansion& t, const std::vector<std::unordered_map<std::string, int>>& inputs) {
  static const spec::Domain kBool;
  spec::ExplicitValuation val;
  for (const auto& v : t.new_aux_vars) val.declare(v.name, &kBool);
  for (const auto& [k, _] : inputs[0]) val.declare(k, &kBool);
  const unsigned n = static_cast<unsigned>(t.new_aux_vars.size());
  auto assign = [&](std::unordered_map<std::string, int>& m, unsigned code) {
    for (unsigned b = 0; b < n; ++b) m[t.new_aux_vars[b].name] = (code >> b) & 1U;
  };
  std::vector<std::unordered_map<std::string, int>> out;
  for (std::size_t step = 0; step < inputs.size(); ++step) {
    std::vector<std::unordered_map<std::string, int>> options;
    for (unsigned code = 0; code < (1U << n); ++code) {
      auto st = inputs[step];
      assign(st, code);
      bool ok = true;
      if (step == 0) {
        val.cur = st;
        for (const auto& e : t.initial) ok = ok && val.eval(e);
      } else {
        val.cur = out.back();
        val.nxt = st;
        for (const auto& e : t.safety) ok = ok && val.eval(e);
      }
      if (ok) options.push_back(st);
    }
    EXPECT_EQ(options.size(), 1U) << "aux not determined at step " << step;
    if (options.empty()) break;
    out.push_back(options[0]);
  }
  return out;
}

spec::ExprPtr random_formula(std::mt19937& rng, const std::vector<std::string>& atoms, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 1);
  switch (pick(rng)) {
    case 0:
    case 1: return ident(atoms[std::uniform_int_distribution<std::size_t>(0, atoms.size() - 1)(rng)]);
    case 2: return spec::ex::lnot(random_formula(rng, atoms, depth - 1));
    case 3:
      return spec::ex::land(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1));
    case 4:
      return spec::ex::lor(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1));
    default:
      return spec::ex::iff(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1));
  }
}

}  // namespace

TEST(Templates, P26Shape) {
  FreshNames fresh;
  auto t = expand_pattern(make(PatternId::P26), fresh, "x");
  EXPECT_EQ(t.new_aux_vars.size(), 1U);
  EXPECT_EQ(t.new_aux_vars[0].name, "aux_x_pending");
  EXPECT_EQ(t.initial.size(), 1U);
  EXPECT_EQ(t.safety.size(), 1U);
  EXPECT_EQ(t.justice.size(), 1U);
  EXPECT_EQ(t.violation, nullptr);
}

TEST(Templates, P09AndP20Shape) {
  for (auto id : {PatternId::P09, PatternId::P20}) {
    FreshNames fresh;
    auto t = expand_pattern(make(id), fresh, "x");
    EXPECT_EQ(t.new_aux_vars.size(), 2U);
    EXPECT_EQ(t.initial.size(), 1U);
    EXPECT_EQ(t.safety.size(), 2U);
    EXPECT_EQ(t.justice.size(), 1U);
    EXPECT_NE(t.violation, nullptr);
  }
}

TEST(Templates, P15BitsGrowWithBound) {
  const std::vector<std::pair<int, std::size_t>> cases = {{0, 2}, {1, 3}, {2, 3}, {4, 3}, {5, 4}, {12, 4}, {13, 5}};
  for (auto [k, bits] : cases) {
    FreshNames fresh;
    auto t = expand_pattern(make(PatternId::P15, k), fresh, "x");
    EXPECT_EQ(t.new_aux_vars.size(), bits) << "k=" << k;
    EXPECT_EQ(t.safety.size(), bits);
    EXPECT_EQ(t.initial.size(), 1U);
    EXPECT_EQ(t.justice.size(), 1U);
  }
}

TEST(Templates, FreshNamesAvoidCollisions) {
  FreshNames fresh({"aux_x_pending"});
  auto t = expand_pattern(make(PatternId::P26), fresh, "x");
  EXPECT_EQ(t.new_aux_vars[0].name, "aux_x_pending_1");
  auto u = expand_pattern(make(PatternId::P26), fresh, "x");
  EXPECT_EQ(u.new_aux_vars[0].name, "aux_x_pending_2");
}

TEST(Templates, CatalogListsAllPatterns) {
  EXPECT_EQ(catalog().size(), 4U);
  for (const auto& e : catalog()) {
    EXPECT_NE(std::string(e.ltl), "");
    EXPECT_NE(std::string(e.syntax), "");
  }
}

TEST(Past, NestedSinceUnderPrevUsesTwoAux) {
  auto e = spec::parse_expr("PREV(lift != DROP SINCE lift = LIFT)");
  FreshNames fresh;
  auto [compiled, t] = compile_past(e, fresh, Side::Guarantee);
  EXPECT_FALSE(spec::has_past(compiled));
  ASSERT_EQ(t.new_aux_vars.size(), 2U);
  EXPECT_EQ(t.new_aux_vars[0].name, "aux_since");
  EXPECT_EQ(t.new_aux_vars[1].name, "aux_prev");
  EXPECT_EQ(t.initial.size(), 2U);
  EXPECT_EQ(t.safety.size(), 2U);
  EXPECT_TRUE(t.justice.empty());
}

TEST(Past, OperatorsFollowTheirTraceMeaning) {
  std::mt19937 rng(7);
  FreshNames fresh;
  auto [once_e, once_t] = compile_past(spec::ex::once(ident("x")), fresh, Side::Guarantee);
  auto [hist_e, hist_t] = compile_past(spec::ex::historically(ident("x")), fresh, Side::Guarantee);
  auto [prev_e, prev_t] = compile_past(spec::ex::prev(ident("x")), fresh, Side::Guarantee);
  auto [since_e, since_t] = compile_past(spec::ex::since(ident("x"), ident("y")), fresh, Side::Guarantee);
  static const spec::Domain kBool;
  for (int round = 0; round < 50; ++round) {
    std::vector<std::unordered_map<std::string, int>> in(12);
    for (auto& m : in) {
      m["x"] = static_cast<int>(rng() % 4 != 0);
      m["y"] = static_cast<int>(rng() % 3 == 0);
    }
    auto check = [&](const spec::ExprPtr& e, const TemplateExpansion& t, auto expected) {
      auto states = simulate(t, in);
      ASSERT_EQ(states.size(), in.size());
      spec::ExplicitValuation val;
      for (const auto& [k, _] : states[0]) val.declare(k, &kBool);
      for (std::size_t i = 0; i < states.size(); ++i) {
        val.cur = states[i];
        EXPECT_EQ(val.eval(e), expected(i)) << "step " << i;
      }
    };
    check(once_e, once_t, [&](std::size_t i) {
      for (std::size_t j = 0; j <= i; ++j)
        if (in[j]["x"]) return true;
      return false;
    });
    check(hist_e, hist_t, [&](std::size_t i) {
      for (std::size_t j = 0; j <= i; ++j)
        if (!in[j]["x"]) return false;
      return true;
    });
    check(prev_e, prev_t, [&](std::size_t i) { return i > 0 && in[i - 1]["x"] != 0; });
    check(since_e, since_t, [&](std::size_t i) {
      for (std::size_t j = i + 1; j-- > 0;) {
        if (in[j]["y"]) return true;
        if (!in[j]["x"]) return false;
      }
      return false;
    });
  }
}

TEST(Ltl, LassoEvaluation) {
  Ltl f;
  auto a = f.atom(0), b = f.atom(1);
  auto gfa = f.globally(f.eventually(a));
  auto aub = f.until(a, b);
  auto awb = f.weak_until(a, b);
  EXPECT_TRUE(f.holds(gfa, {0, 0}, {0, 1}));
  EXPECT_FALSE(f.holds(gfa, {1, 1}, {0}));
  EXPECT_TRUE(f.holds(aub, {1, 1}, {2}));
  EXPECT_FALSE(f.holds(aub, {}, {1}));
  EXPECT_TRUE(f.holds(awb, {}, {1}));
  EXPECT_FALSE(f.holds(awb, {1, 0}, {2}));
  EXPECT_TRUE(f.holds(f.next(b), {0}, {2, 0}));
}

TEST(Ltl, LyndonWordCounts) {
  // Necklace counting: primitive necklaces of length n over k letters.
  EXPECT_EQ(detail::lyndon_words(2, 4).size(), 2U + 1U + 2U + 3U);
  EXPECT_EQ(detail::lyndon_words(3, 3).size(), 3U + 3U + 8U);
  for (const auto& w : detail::lyndon_words(3, 6)) {
    for (std::size_t r = 1; r < w.size(); ++r) {
      std::vector<unsigned> rot(w.begin() + static_cast<long>(r), w.end());
      rot.insert(rot.end(), w.begin(), w.begin() + static_cast<long>(r));
      EXPECT_LT(w, rot);
    }
  }
}

TEST(Equivalence, TemplatesMatchTheirLtlOnFreeParameters) {
  for (auto id : {PatternId::P26, PatternId::P09, PatternId::P20}) {
    auto r = check_template_equivalence(make(id), atoms_for(id), 6);
    EXPECT_TRUE(r.equivalent) << spec::to_string(id);
    EXPECT_GT(r.loops_checked, 0U);
  }
  for (int k = 0; k <= 4; ++k) {
    auto r = check_template_equivalence(make(PatternId::P15, k), atoms_for(PatternId::P15), 6);
    EXPECT_TRUE(r.equivalent) << "P15 k=" << k;
  }
}

TEST(Equivalence, P26WithoutJusticeIsCaught) {
  FreshNames fresh({"p", "s"});
  auto inst = make(PatternId::P26);
  auto t = expand_pattern(inst, fresh, "m");
  t.justice.clear();
  Ltl f;
  auto root = pattern_ltl(f, PatternId::P26);
  auto r = check_equivalence(t, f, root, {"p", "s"}, {inst.p, nullptr, nullptr, inst.s}, 8);
  ASSERT_FALSE(r.equivalent);
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_TRUE(r.template_accepts);
  EXPECT_FALSE(r.ltl_accepts);
  const Lasso& l = *r.counterexample;
  EXPECT_EQ(l.size(), 1U);
  // s (atom 1) never holds on the loop, p (atom 0) holds somewhere on it.
  bool p_seen = false;
  for (unsigned x : l.loop) {
    EXPECT_EQ(x & 2U, 0U);
    p_seen = p_seen || (x & 1U);
  }
  EXPECT_TRUE(p_seen);
  std::vector<unsigned> prefix = l.prefix, loop = l.loop;  // letters are already over p=bit0, s=bit1
  for (auto* w : {&prefix, &loop})
    for (auto& x : *w) x = (x & 1U) | ((x & 2U) << 2);
  EXPECT_FALSE(f.holds(root, prefix, loop));
}

TEST(Equivalence, OffByOneBoundIsCaught) {
  FreshNames fresh({"p", "q", "r"});
  auto inst = make(PatternId::P15, 2);
  auto t = expand_pattern(inst, fresh, "m");
  Ltl f;
  auto root = pattern_ltl(f, PatternId::P15, 3);
  auto r = check_equivalence(t, f, root, {"p", "q", "r"}, {inst.p, inst.q, inst.r, nullptr}, 6);
  ASSERT_FALSE(r.equivalent);
  EXPECT_FALSE(r.template_accepts);
  EXPECT_TRUE(r.ltl_accepts);
}

TEST(Equivalence, SwappedP20UpdateIsCaught) {
  FreshNames fresh({"p", "q", "r"});
  auto inst = make(PatternId::P20);
  auto broken = inst;
  std::swap(broken.p, broken.r);
  auto t = expand_pattern(broken, fresh, "m");
  Ltl f;
  auto root = pattern_ltl(f, PatternId::P20);
  auto r = check_equivalence(t, f, root, {"p", "q", "r"}, {inst.p, inst.q, inst.r, nullptr}, 4);
  EXPECT_FALSE(r.equivalent);
}

TEST(Equivalence, RandomInstantiations) {
  std::mt19937 rng(2024);
  const std::vector<std::string> atoms = {"a", "b", "c"};
  for (int round = 0; round < 12; ++round) {
    for (auto id : {PatternId::P26, PatternId::P09, PatternId::P20, PatternId::P15}) {
      PatternInstance in;
      in.id = id;
      in.bound = id == PatternId::P15 ? static_cast<int>(rng() % 3) : 0;
      in.p = random_formula(rng, atoms, 2);
      if (id == PatternId::P26) {
        in.s = random_formula(rng, atoms, 2);
      } else {
        in.q = random_formula(rng, atoms, 2);
        in.r = random_formula(rng, atoms, 2);
      }
      auto r = check_template_equivalence(in, atoms, 6);
      EXPECT_TRUE(r.equivalent) << spec::to_string(in);
    }
  }
}

TEST(Normalize, V1Accounting) {
  auto ns = normalize(spec::parse_file(corpus("v1")));
  auto a = account(ns);
  EXPECT_EQ(a.assumptions.safety, 1U);
  EXPECT_EQ(a.assumptions.p26, 5U);
  EXPECT_EQ(a.assumptions.p15, 1U);
  EXPECT_EQ(a.assumptions.total(), 7U);
  EXPECT_EQ(a.guarantees.initial, 1U);
  EXPECT_EQ(a.guarantees.safety, 8U);
  EXPECT_EQ(a.guarantees.justice, 1U);
  EXPECT_EQ(a.guarantees.p09, 1U);
  EXPECT_EQ(a.guarantees.p20, 1U);
  EXPECT_EQ(a.env_bits, 4U);
  EXPECT_EQ(a.sys_bits, 6U);
  EXPECT_EQ(a.manual_aux_bits, 1U);
  EXPECT_EQ(a.pattern_aux_bits, 12U);
  EXPECT_EQ(a.past_aux_bits, 0U);
  EXPECT_EQ(a.env_justice, 6U);
  EXPECT_EQ(a.sys_justice, 3U);
}

TEST(Normalize, V2Accounting) {
  auto ns = normalize(spec::parse_file(corpus("v2")));
  auto a = account(ns);
  EXPECT_EQ(a.assumptions.safety, 2U);
  EXPECT_EQ(a.assumptions.p26, 6U);
  EXPECT_EQ(a.assumptions.p15, 1U);
  EXPECT_EQ(a.guarantees.initial, 1U);
  EXPECT_EQ(a.guarantees.safety, 10U);
  EXPECT_EQ(a.guarantees.justice, 1U);
  EXPECT_EQ(a.guarantees.p09, 1U);
  EXPECT_EQ(a.guarantees.p20, 1U);
  EXPECT_EQ(a.env_bits, 5U);
  EXPECT_EQ(a.sys_bits, 6U);
  EXPECT_EQ(a.pattern_aux_bits, 13U);
  EXPECT_EQ(a.env_justice, 7U);
  EXPECT_EQ(a.sys_justice, 3U);
}

TEST(Normalize, OutputIsPureGr1) {
  for (const char* name : {"v1", "v2", "v1_c1_strong_guarantee", "v1_c2_early", "v2_c3_bad_ack"}) {
    auto ns = normalize(spec::parse_file(corpus(name)));
    for (const auto& c : ns.constraints) {
      EXPECT_NE(c.kind, spec::ConstraintKind::Pattern);
      EXPECT_FALSE(spec::has_past(c.expr)) << name;
      if (c.kind != spec::ConstraintKind::Safety) {
        EXPECT_FALSE(spec::has_next(c.expr)) << name;
      }
      ASSERT_LT(c.origin, ns.origins.size());
      EXPECT_EQ(ns.origins[c.origin].side, c.side);
    }
    for (const auto& g : ns.generated) EXPECT_EQ(g.decl.name.rfind("aux_", 0), 0U);
  }
}

TEST(Normalize, PastInsidePatternParameter) {
  auto ns = normalize(spec::parse_file(corpus("v1_c1_strong_guarantee")));
  EXPECT_EQ(ns.past_aux_bits(), 1U);
  EXPECT_EQ(ns.pattern_aux_bits(), 12U);
}

TEST(Normalize, MonitorViolationPredicates) {
  auto ns = normalize(spec::parse_file(corpus("v1")));
  std::size_t with = 0;
  for (std::size_t i = 0; i < ns.origins.size(); ++i) {
    if (ns.monitor_violation[i]) {
      ++with;
      ASSERT_TRUE(ns.origins[i].pattern.has_value());
      EXPECT_NE(*ns.origins[i].pattern, PatternId::P26);
    }
  }
  EXPECT_EQ(with, 3U);  // P15, P09, P20
}

TEST(Normalize, JusticeAttributedToItsPattern) {
  auto ns = normalize(spec::parse_file(corpus("v1")));
  auto leave = ns.origin_of(Side::Assumption, 3);
  EXPECT_EQ(ns.origins[leave].label, "leaveStation");
  std::size_t justice = 0;
  for (const auto& c : ns.constraints)
    if (c.origin == leave && c.kind == spec::ConstraintKind::Justice) ++justice;
  EXPECT_EQ(justice, 1U);
}
