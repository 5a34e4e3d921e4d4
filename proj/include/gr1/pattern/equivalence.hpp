#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "gr1/pattern/ltl.hpp"
#include "gr1/pattern/templates.hpp"
#include "gr1/spec/eval.hpp"

namespace gr1::pattern {

/// Ultimately periodic word prefix . loop^omega; each letter is a valuation
/// of the atoms (bit i = atom i).
struct Lasso {
  std::vector<unsigned> prefix;
  std::vector<unsigned> loop;
  [[nodiscard]] std::size_t size() const { return prefix.size() + loop.size(); }
};

struct EquivalenceResult {
  bool equivalent = true;
  std::optional<Lasso> counterexample;
  bool template_accepts = false;  // verdicts on the counterexample
  bool ltl_accepts = false;
  std::size_t loops_checked = 0;
};

namespace detail {

// Calls `visit` on the Lyndon words (primitive, minimal among rotations)
// over `letters` symbols of length 1..max_len, shortest first, until it
// returns false.
template <class Visit>
void for_each_lyndon(unsigned letters, unsigned max_len, Visit&& visit) {
  if (letters == 0) return;
  for (unsigned n = 1; n <= max_len; ++n) {
    std::vector<unsigned> w{0};
    // Duval's generation of words of length <= n; keep those of length n.
    while (!w.empty()) {
      if (w.size() == n && !visit(static_cast<const std::vector<unsigned>&>(w))) return;
      std::size_t m = w.size();
      while (w.size() < n) w.push_back(w[w.size() - m]);
      while (!w.empty() && w.back() == letters - 1) w.pop_back();
      if (!w.empty()) ++w.back();
    }
  }
}

inline std::vector<std::vector<unsigned>> lyndon_words(unsigned letters, unsigned max_len) {
  std::vector<std::vector<unsigned>> out;
  for_each_lyndon(letters, max_len, [&](const std::vector<unsigned>& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

/// Explicit tables of a template's constraints over aux states and
/// parameter-class letters.
struct TemplateTables {
  unsigned aux_states = 0;
  unsigned letters = 0;
  std::vector<char> init;                 // [x][l]
  std::vector<char> step;                 // [x][l][x'][l']
  std::vector<std::vector<char>> justice;  // per justice: [x][l]

  [[nodiscard]] bool I(unsigned x, unsigned l) const { return init[x * letters + l]; }
  [[nodiscard]] bool S(unsigned x, unsigned l, unsigned y, unsigned m) const {
    return step[((x * letters + l) * aux_states + y) * letters + m];
  }
};

}  // namespace detail

/// Compares a monitor expansion against an LTL formula on all lassos whose
/// loop has at most `max_loop` letters (and any prefix).  `atoms` name the
/// boolean inputs; `params` give the pattern parameters p, q, r, s as
/// expressions over them (null entries are constant false).
inline EquivalenceResult check_equivalence(const TemplateExpansion& t, const Ltl& f, Ltl::Ref root,
                                           const std::vector<std::string>& atoms,
                                           const std::array<ExprPtr, 4>& params,
                                           unsigned max_loop = 8) {
  static const spec::Domain kBool;
  if (atoms.size() > 4) throw std::invalid_argument("at most 4 atoms");
  if (t.new_aux_vars.size() > 3) throw std::invalid_argument("at most 3 aux bits");

  // Parameter letter of every atom valuation; classes of equal letters.
  spec::ExplicitValuation val;
  for (const auto& a : atoms) val.declare(a, &kBool);
  for (const auto& v : t.new_aux_vars) val.declare(v.name, &kBool);
  const unsigned atom_letters = 1U << atoms.size();
  std::vector<unsigned> param_letter(atom_letters);
  std::map<unsigned, unsigned> class_of;  // param letter -> class
  std::vector<unsigned> rep;              // class -> atom letter
  auto set_atoms = [&](std::unordered_map<std::string, int>& m, unsigned x) {
    for (std::size_t i = 0; i < atoms.size(); ++i) m[atoms[i]] = (x >> i) & 1U;
  };
  for (unsigned x = 0; x < atom_letters; ++x) {
    set_atoms(val.cur, x);
    unsigned pl = 0;
    for (std::size_t i = 0; i < 4; ++i)
      if (params[i] && val.eval(params[i])) pl |= 1U << i;
    param_letter[x] = pl;
    if (!class_of.count(pl)) {
      class_of[pl] = static_cast<unsigned>(rep.size());
      rep.push_back(x);
    }
  }
  const unsigned L = static_cast<unsigned>(rep.size());

  detail::TemplateTables tab;
  const unsigned nbits = static_cast<unsigned>(t.new_aux_vars.size());
  tab.aux_states = 1U << nbits;
  tab.letters = L;
  const unsigned A = tab.aux_states;
  auto set_aux = [&](std::unordered_map<std::string, int>& m, unsigned x) {
    for (unsigned b = 0; b < nbits; ++b) m[t.new_aux_vars[b].name] = (x >> b) & 1U;
  };
  auto all_hold = [&](const std::vector<ExprPtr>& es) {
    for (const auto& e : es)
      if (!val.eval(e)) return false;
    return true;
  };
  tab.init.assign(A * L, 0);
  tab.step.assign(A * L * A * L, 0);
  tab.justice.assign(t.justice.size(), std::vector<char>(A * L, 0));
  for (unsigned x = 0; x < A; ++x) {
    for (unsigned l = 0; l < L; ++l) {
      set_aux(val.cur, x);
      set_atoms(val.cur, rep[l]);
      tab.init[x * L + l] = all_hold(t.initial);
      for (std::size_t j = 0; j < t.justice.size(); ++j) tab.justice[j][x * L + l] = val.eval(t.justice[j]);
      for (unsigned y = 0; y < A; ++y) {
        for (unsigned m = 0; m < L; ++m) {
          set_aux(val.nxt, y);
          set_atoms(val.nxt, rep[m]);
          tab.step[((x * L + l) * A + y) * L + m] = all_hold(t.safety);
        }
      }
    }
  }

  // post[(x * L + l) * L + m]: successor aux states of x reading l then m.
  std::vector<std::uint8_t> post(A * L * L, 0);
  for (unsigned x = 0; x < A; ++x)
    for (unsigned l = 0; l < L; ++l)
      for (unsigned m = 0; m < L; ++m)
        for (unsigned y = 0; y < A; ++y)
          if (tab.S(x, l, y, m)) post[(x * L + l) * L + m] |= static_cast<std::uint8_t>(1U << y);
  auto image = [&](std::uint32_t set, unsigned l, unsigned m) {
    std::uint32_t out = 0;
    for (unsigned x = 0; x < A; ++x)
      if ((set >> x) & 1U) out |= post[(x * L + l) * L + m];
    return out;
  };

  // With at most one justice: summarize one pass over the loop as relations
  // R (any run) and RJ (runs meeting the justice) between aux states at the
  // loop start; a start state accepts iff it reaches a cycle of R that uses
  // an RJ edge.
  auto accepting_single = [&](const std::vector<unsigned>& loop) -> std::uint32_t {
    const unsigned m = static_cast<unsigned>(loop.size());
    std::array<std::uint32_t, 8> R{}, RJ{};
    for (unsigned y = 0; y < A; ++y) {
      std::uint32_t all = 1U << y, met = 0;
      for (unsigned i = 0; i < m; ++i) {
        for (unsigned x = 0; x < A; ++x)
          if (((all >> x) & 1U) && (tab.justice.empty() || tab.justice[0][x * L + loop[i]])) met |= 1U << x;
        unsigned l = loop[i], n = loop[(i + 1) % m];
        all = image(all, l, n);
        met = image(met, l, n);
      }
      R[y] = all;
      RJ[y] = met;
    }
    std::array<std::uint32_t, 8> star{};  // reflexive-transitive closure of R
    for (unsigned y = 0; y < A; ++y) star[y] = (1U << y) | R[y];
    for (unsigned k = 0; k < A; ++k)
      for (unsigned y = 0; y < A; ++y)
        if ((star[y] >> k) & 1U) star[y] |= star[k];
    std::uint32_t good = 0;
    for (unsigned x = 0; x < A; ++x)
      for (unsigned z = 0; z < A; ++z)
        if (((RJ[x] >> z) & 1U) && ((star[z] >> x) & 1U)) good |= 1U << x;
    std::uint32_t out = 0;
    for (unsigned y = 0; y < A; ++y)
      if (star[y] & good) out |= 1U << y;
    return out;
  };

  // Aux states y from which the template accepts loop^omega starting at
  // the first loop letter.
  auto accepting = [&](const std::vector<unsigned>& loop) -> std::uint32_t {
    if (tab.justice.size() <= 1) return accepting_single(loop);
    // Product nodes (x, i) numbered i*A + x; at most 64 of them.
    const unsigned m = static_cast<unsigned>(loop.size());
    const unsigned N = A * m;
    std::array<std::uint64_t, 64> reach{};  // transitive closure, length >= 1
    for (unsigned i = 0; i < m; ++i)
      for (unsigned x = 0; x < A; ++x)
        for (unsigned y = 0; y < A; ++y)
          if (tab.S(x, loop[i], y, loop[(i + 1) % m]))
            reach[i * A + x] |= std::uint64_t{1} << (((i + 1) % m) * A + y);
    for (unsigned k = 0; k < N; ++k)
      for (unsigned v = 0; v < N; ++v)
        if ((reach[v] >> k) & 1U) reach[v] |= reach[k];
    std::array<std::uint32_t, 64> just{};
    for (unsigned v = 0; v < N; ++v)
      for (std::size_t j = 0; j < tab.justice.size(); ++j)
        if (tab.justice[j][(v % A) * L + loop[v / A]]) just[v] |= 1U << j;
    const std::uint32_t need = (1U << tab.justice.size()) - 1;
    std::uint64_t good = 0;
    for (unsigned v = 0; v < N; ++v) {
      if (!((reach[v] >> v) & 1U)) continue;
      std::uint32_t seen = 0;
      for (unsigned w = 0; w < N; ++w)
        if (((reach[v] >> w) & 1U) && ((reach[w] >> v) & 1U)) seen |= just[w];
      if ((seen & need) == need) good |= std::uint64_t{1} << v;
    }
    std::uint32_t out = 0;
    for (unsigned x = 0; x < A; ++x)
      if ((reach[x] & good) != 0 || ((good >> x) & 1U)) out |= 1U << x;
    return out;
  };

  auto to_param = [&](unsigned cls) { return param_letter[rep[cls]]; };

  // Prefix closure: for the words w prepended to the loop, the relation
  // from aux states at w's first letter to aux states at the loop start,
  // w's first letter, and the LTL node vector at w's first letter.
  struct Triple {
    std::uint64_t rel;  // row x: bits of reachable y (8 bits per row)
    unsigned first;
    std::uint64_t sigma;
    bool operator<(const Triple& o) const {
      return std::tie(rel, first, sigma) < std::tie(o.rel, o.first, o.sigma);
    }
  };
  std::map<std::pair<unsigned, std::uint64_t>, std::vector<std::pair<Triple, std::vector<unsigned>>>> memo;
  auto closure = [&](unsigned first, std::uint64_t sigma) -> const auto& {
    auto key = std::make_pair(first, sigma);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::uint64_t ident = 0;
    for (unsigned x = 0; x < A; ++x) ident |= std::uint64_t{1} << (8 * x + x);
    std::map<Triple, std::vector<unsigned>> seen;
    std::vector<Triple> frontier{{ident, first, sigma}};
    seen[frontier[0]] = {};
    for (int depth = 0; depth < 4096 && !frontier.empty(); ++depth) {
      std::vector<Triple> next;
      for (const Triple& tr : frontier) {
        for (unsigned a = 0; a < L; ++a) {
          Triple nt{0, a, f.prepend(to_param(a), tr.sigma)};
          for (unsigned x = 0; x < A; ++x) {
            std::uint64_t row = 0;
            for (unsigned z = 0; z < A; ++z)
              if (tab.S(x, a, z, tr.first)) row |= (tr.rel >> (8 * z)) & 0xFFU;
            nt.rel |= row << (8 * x);
          }
          if (seen.count(nt)) continue;
          std::vector<unsigned> w{a};
          const auto& tail = seen[tr];
          w.insert(w.end(), tail.begin(), tail.end());
          seen[nt] = w;
          next.push_back(nt);
        }
      }
      frontier = std::move(next);
    }
    auto& out = memo[key];
    for (auto& [tr, w] : seen) out.emplace_back(tr, w);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.second.size() < b.second.size(); });
    return out;
  };

  // First mismatching witness (index into the closure) or -1, per
  // (first loop letter, loop vector, accepting mask).
  std::map<std::tuple<unsigned, std::uint64_t, std::uint32_t>, int> verdicts;
  EquivalenceResult res;
  detail::for_each_lyndon(L, max_loop, [&](const std::vector<unsigned>& loop) {
    if (res.counterexample && res.counterexample->size() <= loop.size()) return false;
    ++res.loops_checked;
    std::vector<unsigned> ploop;
    for (unsigned c : loop) ploop.push_back(to_param(c));
    std::uint64_t sigma = f.loop_vector(ploop);
    std::uint32_t acc = accepting(loop);
    const auto& wits = closure(loop[0], sigma);
    auto key = std::make_tuple(loop[0], sigma, acc);
    auto vit = verdicts.find(key);
    if (vit == verdicts.end()) {
      int bad = -1;
      for (std::size_t k = 0; k < wits.size() && bad < 0; ++k) {
        const Triple& tr = wits[k].first;
        bool gr1 = false;
        for (unsigned x = 0; x < A && !gr1; ++x)
          gr1 = tab.I(x, tr.first) && ((tr.rel >> (8 * x)) & acc & 0xFFU) != 0;
        if (gr1 != (((tr.sigma >> root) & 1U) != 0)) bad = static_cast<int>(k);
      }
      vit = verdicts.emplace(key, bad).first;
    }
    if (vit->second < 0) return true;
    const auto& [tr, w] = wits[static_cast<std::size_t>(vit->second)];
    if (!res.counterexample || w.size() + loop.size() < res.counterexample->size()) {
      Lasso l;
      for (unsigned c : w) l.prefix.push_back(rep[c]);
      for (unsigned c : loop) l.loop.push_back(rep[c]);
      res.counterexample = l;
      res.ltl_accepts = (tr.sigma >> root) & 1U;
      res.template_accepts = !res.ltl_accepts;
    }
    return true;
  });
  res.equivalent = !res.counterexample;
  return res;
}

/// Checks a pattern's monitor against its LTL meaning.  The instance's
/// parameters must be propositional formulas over `atoms`.
inline EquivalenceResult check_template_equivalence(const PatternInstance& inst,
                                                    const std::vector<std::string>& atoms,
                                                    unsigned max_loop = 8) {
  FreshNames fresh;
  for (const auto& a : atoms) fresh.reserve(a);
  TemplateExpansion t = expand_pattern(inst, fresh, "m");
  Ltl f;
  Ltl::Ref root = pattern_ltl(f, inst.id, inst.bound);
  std::array<ExprPtr, 4> params{inst.p, inst.q, inst.r, inst.s};
  if (inst.id == PatternId::P26) params[1] = params[2] = nullptr;
  else params[3] = nullptr;
  return check_equivalence(t, f, root, atoms, params, max_loop);
}

}  // namespace gr1::pattern
