#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "gr1/spec/ast.hpp"

namespace gr1::pattern {

/// Future LTL over numbered atoms, stored as a hash-consed DAG whose nodes
/// are in topological order (children first).  Used as an independent
/// reference semantics for the pattern templates.
class Ltl {
 public:
  enum class Op { True, Atom, Not, And, Or, Imp, X, U, W, G, F };
  struct Node {
    Op op;
    int atom = -1;
    int a = -1, b = -1;
  };
  using Ref = int;

  Ref top() { return add({Op::True}); }
  Ref atom(int i) { return add({Op::Atom, i}); }
  Ref lnot(Ref x) { return add({Op::Not, -1, x}); }
  Ref land(Ref x, Ref y) { return add({Op::And, -1, x, y}); }
  Ref lor(Ref x, Ref y) { return add({Op::Or, -1, x, y}); }
  Ref imp(Ref x, Ref y) { return add({Op::Imp, -1, x, y}); }
  Ref next(Ref x) { return add({Op::X, -1, x}); }
  Ref until(Ref x, Ref y) { return add({Op::U, -1, x, y}); }
  Ref weak_until(Ref x, Ref y) { return add({Op::W, -1, x, y}); }
  Ref globally(Ref x) { return add({Op::G, -1, x}); }
  Ref eventually(Ref x) { return add({Op::F, -1, x}); }

  [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }

  /// Truth value of every node at the first loop position of `loop`^omega,
  /// one bit per node.
  [[nodiscard]] std::uint64_t loop_vector(const std::vector<unsigned>& loop) const {
    check_size();
    const std::size_t m = loop.size();
    if (m == 0 || m > 64) throw std::invalid_argument("loop length must be in [1, 64]");
    const std::uint64_t all = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
    auto shift = [&](std::uint64_t c) {  // value at position i+1 (mod m)
      return ((c >> 1) | ((c & 1U) << (m - 1))) & all;
    };
    std::vector<std::uint64_t> v(nodes_.size());
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      const Node& nd = nodes_[n];
      switch (nd.op) {
        case Op::True: v[n] = all; break;
        case Op::Atom: {
          std::uint64_t mask = 0;
          for (std::size_t i = 0; i < m; ++i)
            if ((loop[i] >> nd.atom) & 1U) mask |= std::uint64_t{1} << i;
          v[n] = mask;
          break;
        }
        case Op::Not: v[n] = ~v[nd.a] & all; break;
        case Op::And: v[n] = v[nd.a] & v[nd.b]; break;
        case Op::Or: v[n] = v[nd.a] | v[nd.b]; break;
        case Op::Imp: v[n] = (~v[nd.a] & all) | v[nd.b]; break;
        case Op::X: v[n] = shift(v[nd.a]); break;
        case Op::U:
        case Op::F:
        case Op::W:
        case Op::G: {
          bool least = nd.op == Op::U || nd.op == Op::F;
          std::uint64_t cur = least ? 0 : all;
          for (std::size_t it = 0; it <= m; ++it) {
            std::uint64_t nxt = shift(cur);
            switch (nd.op) {
              case Op::U: cur = v[nd.b] | (v[nd.a] & nxt); break;
              case Op::W: cur = v[nd.b] | (v[nd.a] & nxt); break;
              case Op::F: cur = v[nd.a] | nxt; break;
              default: cur = v[nd.a] & nxt; break;
            }
          }
          v[n] = cur;
          break;
        }
      }
    }
    std::uint64_t out = 0;
    for (std::size_t n = 0; n < nodes_.size(); ++n)
      if (v[n] & 1U) out |= std::uint64_t{1} << n;
    return out;
  }

  /// Node vector at a position reading `letter`, given the vector at the
  /// following position.
  [[nodiscard]] std::uint64_t prepend(unsigned letter, std::uint64_t after) const {
    std::uint64_t cur = 0;
    auto bit = [](std::uint64_t w, int i) { return ((w >> i) & 1U) != 0; };
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      const Node& nd = nodes_[n];
      bool val = false;
      switch (nd.op) {
        case Op::True: val = true; break;
        case Op::Atom: val = (letter >> nd.atom) & 1U; break;
        case Op::Not: val = !bit(cur, nd.a); break;
        case Op::And: val = bit(cur, nd.a) && bit(cur, nd.b); break;
        case Op::Or: val = bit(cur, nd.a) || bit(cur, nd.b); break;
        case Op::Imp: val = !bit(cur, nd.a) || bit(cur, nd.b); break;
        case Op::X: val = bit(after, nd.a); break;
        case Op::U:
        case Op::W: val = bit(cur, nd.b) || (bit(cur, nd.a) && bit(after, static_cast<int>(n))); break;
        case Op::F: val = bit(cur, nd.a) || bit(after, static_cast<int>(n)); break;
        case Op::G: val = bit(cur, nd.a) && bit(after, static_cast<int>(n)); break;
      }
      if (val) cur |= std::uint64_t{1} << n;
    }
    return cur;
  }

  /// Truth of node `f` on the lasso prefix . loop^omega.
  [[nodiscard]] bool holds(Ref f, const std::vector<unsigned>& prefix,
                           const std::vector<unsigned>& loop) const {
    std::uint64_t v = loop_vector(loop);
    for (std::size_t i = prefix.size(); i-- > 0;) v = prepend(prefix[i], v);
    return (v >> f) & 1U;
  }

 private:
  Ref add(Node n) {
    auto key = std::make_tuple(static_cast<int>(n.op), n.atom, n.a, n.b);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    nodes_.push_back(n);
    Ref r = static_cast<Ref>(nodes_.size() - 1);
    index_[key] = r;
    return r;
  }
  void check_size() const {
    if (nodes_.size() > 64) throw std::length_error("formula too large for lasso evaluation");
  }

  std::vector<Node> nodes_;
  std::map<std::tuple<int, int, int, int>, Ref> index_;
};

/// Atom numbering used for pattern parameters.
enum ParamAtom { kP = 0, kQ = 1, kR = 2, kS = 3 };

/// The LTL meaning of a pattern over parameter atoms p, q, r, s.
inline Ltl::Ref pattern_ltl(Ltl& f, spec::PatternId id, int bound = 1) {
  Ltl::Ref p = f.atom(kP), q = f.atom(kQ), r = f.atom(kR), s = f.atom(kS);
  Ltl::Ref nr = f.lnot(r);
  switch (id) {
    case spec::PatternId::P26: return f.globally(f.imp(p, f.eventually(s)));
    case spec::PatternId::P20: return f.globally(f.imp(f.land(q, nr), f.weak_until(p, r)));
    case spec::PatternId::P09: {
      Ltl::Ref trigger = f.land(f.land(q, nr), f.eventually(r));
      return f.globally(f.imp(trigger, f.until(nr, f.land(p, nr))));
    }
    case spec::PatternId::P15: {
      Ltl::Ref phi = f.until(nr, f.land(p, nr));
      for (int j = 1; j <= bound; ++j) phi = f.until(nr, f.land(f.land(p, nr), f.next(phi)));
      Ltl::Ref trigger = f.land(f.land(q, nr), f.eventually(r));
      return f.globally(f.imp(trigger, f.lnot(phi)));
    }
  }
  return f.top();
}

}  // namespace gr1::pattern
