#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gr1::bdd {

using NodeId = std::uint32_t;
using VarId = std::uint32_t;

inline constexpr NodeId kFalseNode = 0;
inline constexpr NodeId kTrueNode = 1;
inline constexpr VarId kTerminalVar = std::numeric_limits<VarId>::max();

class Manager;

/// Handle to a node of a Manager.  Copies keep the node alive across
/// garbage collections; a default-constructed handle is empty.
class Bdd {
 public:
  Bdd() = default;
  Bdd(Manager* mgr, NodeId id);
  Bdd(const Bdd& other);
  Bdd(Bdd&& other) noexcept : mgr_(other.mgr_), id_(other.id_) {
    other.mgr_ = nullptr;
    other.id_ = kFalseNode;
  }
  Bdd& operator=(const Bdd& other);
  Bdd& operator=(Bdd&& other) noexcept;
  ~Bdd();

  [[nodiscard]] Manager* manager() const { return mgr_; }
  [[nodiscard]] NodeId id() const { return id_; }
  [[nodiscard]] bool empty() const { return mgr_ == nullptr; }
  [[nodiscard]] bool is_false() const { return id_ == kFalseNode; }
  [[nodiscard]] bool is_true() const { return id_ == kTrueNode; }
  [[nodiscard]] bool is_constant() const { return id_ <= kTrueNode; }

  Bdd operator!() const;
  Bdd operator&(const Bdd& o) const;
  Bdd operator|(const Bdd& o) const;
  Bdd operator^(const Bdd& o) const;
  Bdd& operator&=(const Bdd& o) { return *this = *this & o; }
  Bdd& operator|=(const Bdd& o) { return *this = *this | o; }
  [[nodiscard]] Bdd implies(const Bdd& o) const;
  [[nodiscard]] Bdd iff(const Bdd& o) const;

  friend bool operator==(const Bdd& a, const Bdd& b) {
    return a.mgr_ == b.mgr_ && a.id_ == b.id_;
  }
  friend bool operator!=(const Bdd& a, const Bdd& b) { return !(a == b); }

 private:
  void acquire();
  void release();

  Manager* mgr_ = nullptr;
  NodeId id_ = kFalseNode;
};

enum class BinOp : std::uint32_t { And = 1, Or, Xor, Imp };

/// Reduced ordered BDD store with a hash-consed unique table and a lossy
/// operation cache.  Variable order is the numeric order of VarId.
class Manager {
 public:
  explicit Manager(unsigned num_vars, std::size_t cache_log2 = 20)
      : num_vars_(num_vars), cache_(std::size_t{1} << cache_log2) {
    nodes_.reserve(1 << 16);
    nodes_.push_back({kTerminalVar, kFalseNode, kFalseNode, 1, kNil});
    nodes_.push_back({kTerminalVar, kTrueNode, kTrueNode, 1, kNil});
    buckets_.assign(1 << 16, kNil);
  }
  Manager(const Manager&) = delete;
  Manager& operator=(const Manager&) = delete;

  [[nodiscard]] unsigned num_vars() const { return num_vars_; }

  /// Adds fresh variables at the bottom of the order.
  void extend_vars(unsigned count) { num_vars_ += count; }

  Bdd constant(bool value) { return {this, value ? kTrueNode : kFalseNode}; }
  Bdd bdd_true() { return constant(true); }
  Bdd bdd_false() { return constant(false); }
  Bdd var(VarId v) {
    check_var(v);
    return {this, mk(v, kFalseNode, kTrueNode)};
  }
  Bdd nvar(VarId v) {
    check_var(v);
    return {this, mk(v, kTrueNode, kFalseNode)};
  }
  Bdd literal(VarId v, bool positive) { return positive ? var(v) : nvar(v); }

  Bdd negate(const Bdd& a) {
    check(a);
    maybe_gc();
    return {this, not_rec(a.id())};
  }
  Bdd apply(BinOp op, const Bdd& a, const Bdd& b) {
    check(a);
    check(b);
    maybe_gc();
    return {this, apply_rec(op, a.id(), b.id())};
  }
  Bdd ite(const Bdd& c, const Bdd& t, const Bdd& e) {
    check(c);
    check(t);
    check(e);
    maybe_gc();
    return {this, ite_rec(c.id(), t.id(), e.id())};
  }

  /// Conjunction of positive literals, used as a quantification set.
  Bdd cube(const std::vector<VarId>& vars) {
    std::vector<VarId> sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    maybe_gc();
    NodeId r = kTrueNode;
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
      check_var(*it);
      r = mk(*it, kFalseNode, r);
    }
    return {this, r};
  }
  /// Conjunction of literals from (var, value) pairs.
  Bdd minterm(const std::vector<std::pair<VarId, bool>>& lits) {
    auto sorted = lits;
    std::sort(sorted.begin(), sorted.end());
    maybe_gc();
    NodeId r = kTrueNode;
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
      check_var(it->first);
      r = it->second ? mk(it->first, kFalseNode, r) : mk(it->first, r, kFalseNode);
    }
    return {this, r};
  }

  Bdd exists(const Bdd& f, const Bdd& cube) {
    check(f);
    check(cube);
    maybe_gc();
    return {this, quant_rec(f.id(), cube.id(), /*universal=*/false)};
  }
  Bdd forall(const Bdd& f, const Bdd& cube) {
    check(f);
    check(cube);
    maybe_gc();
    return {this, quant_rec(f.id(), cube.id(), /*universal=*/true)};
  }
  /// exists cube. (f & g) without building the full conjunction.
  Bdd and_exists(const Bdd& f, const Bdd& g, const Bdd& cube) {
    check(f);
    check(g);
    check(cube);
    maybe_gc();
    return {this, and_exists_rec(f.id(), g.id(), cube.id())};
  }

  /// Cofactor of f by a conjunction of literals.
  Bdd restrict(const Bdd& f, const Bdd& literals) {
    check(f);
    check(literals);
    maybe_gc();
    return {this, restrict_rec(f.id(), literals.id())};
  }

  /// Substitutes variable v by map[v] for every v in the support of f.
  /// `tag` identifies the map in the operation cache and must be unique
  /// per distinct map.
  Bdd permute(const Bdd& f, const std::vector<VarId>& map, std::uint32_t tag) {
    check(f);
    if (map.size() < num_vars_) throw std::logic_error("bdd: permutation map too short");
    maybe_gc();
    return {this, permute_rec(f.id(), map, tag)};
  }

  [[nodiscard]] bool eval(const Bdd& f, const std::vector<bool>& assignment) const {
    NodeId n = f.id();
    while (n > kTrueNode) {
      const Node& node = nodes_[n];
      if (node.var >= assignment.size()) throw std::logic_error("bdd: assignment too short");
      n = assignment[node.var] ? node.hi : node.lo;
    }
    return n == kTrueNode;
  }

  /// Number of satisfying assignments over `vars`; the support of f must be
  /// contained in `vars`.
  [[nodiscard]] double sat_count(const Bdd& f, const std::vector<VarId>& vars) const;

  /// Lexicographically smallest satisfying assignment (false before true, in
  /// variable order), projected onto `vars`.
  [[nodiscard]] std::optional<std::vector<bool>> pick_one(
      const Bdd& f, const std::vector<VarId>& vars) const;

  /// Calls `visit` for every satisfying assignment over `vars` in
  /// lexicographic order.  Returning false from `visit` stops enumeration.
  void enumerate(const Bdd& f, const std::vector<VarId>& vars,
                 const std::function<bool(const std::vector<bool>&)>& visit) const;

  [[nodiscard]] std::vector<VarId> support(const Bdd& f) const;
  [[nodiscard]] std::size_t node_count(const Bdd& f) const;
  [[nodiscard]] std::size_t live_nodes() const { return nodes_.size() - free_count_; }

  [[nodiscard]] VarId node_var(NodeId n) const { return nodes_[n].var; }
  [[nodiscard]] NodeId node_lo(NodeId n) const { return nodes_[n].lo; }
  [[nodiscard]] NodeId node_hi(NodeId n) const { return nodes_[n].hi; }

  /// Builds the node (v, lo, hi) directly; lo/hi must be below v in the order.
  Bdd make_node(VarId v, const Bdd& lo, const Bdd& hi) {
    check(lo);
    check(hi);
    check_var(v);
    if (nodes_[lo.id()].var <= v || nodes_[hi.id()].var <= v)
      throw std::logic_error("bdd: make_node violates variable order");
    maybe_gc();
    return {this, mk(v, lo.id(), hi.id())};
  }

  void set_cache_enabled(bool enabled) {
    cache_enabled_ = enabled;
    clear_cache();
  }

  /// Forces a collection of nodes unreachable from live handles.
  void collect_garbage();

  // Reference counting hooks for Bdd handles.
  void ref(NodeId n) {
    if (n > kTrueNode) ++nodes_[n].ref;
  }
  void deref(NodeId n) {
    if (n > kTrueNode) --nodes_[n].ref;
  }

 private:
  static constexpr NodeId kNil = std::numeric_limits<NodeId>::max();

  struct Node {
    VarId var;
    NodeId lo, hi;
    std::uint32_t ref;
    NodeId next;
  };
  struct CacheEntry {
    std::uint32_t op = 0;
    NodeId a = 0, b = 0, c = 0;
    NodeId result = 0;
  };
  enum CacheOp : std::uint32_t {
    kOpNot = 16,
    kOpIte,
    kOpExists,
    kOpForall,
    kOpAndExists,
    kOpRestrict,
    kOpPermuteBase = 1024,
  };

  void check(const Bdd& b) const {
    if (b.manager() != this) throw std::logic_error("bdd: operand belongs to a different manager");
  }
  void check_var(VarId v) const {
    if (v >= num_vars_) throw std::logic_error("bdd: variable id out of range");
  }

  static std::size_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = a * 0x9E3779B97F4A7C15ULL;
    h ^= b + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    h ^= c * 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }

  NodeId mk(VarId v, NodeId lo, NodeId hi) {
    if (lo == hi) return lo;
    std::size_t b = hash3(v, lo, hi) & (buckets_.size() - 1);
    for (NodeId n = buckets_[b]; n != kNil; n = nodes_[n].next) {
      const Node& node = nodes_[n];
      if (node.var == v && node.lo == lo && node.hi == hi) return n;
    }
    NodeId id;
    if (free_head_ != kNil) {
      id = free_head_;
      free_head_ = nodes_[id].next;
      --free_count_;
      nodes_[id] = {v, lo, hi, 0, buckets_[b]};
    } else {
      id = static_cast<NodeId>(nodes_.size());
      nodes_.push_back({v, lo, hi, 0, buckets_[b]});
    }
    buckets_[b] = id;
    if (nodes_.size() - free_count_ > buckets_.size()) grow_table();
    return id;
  }

  void grow_table() {
    buckets_.assign(buckets_.size() * 2, kNil);
    rehash();
  }
  void rehash() {
    std::fill(buckets_.begin(), buckets_.end(), kNil);
    for (NodeId n = 2; n < nodes_.size(); ++n) {
      Node& node = nodes_[n];
      if (node.var == kTerminalVar) continue;  // freed slot
      std::size_t b = hash3(node.var, node.lo, node.hi) & (buckets_.size() - 1);
      node.next = buckets_[b];
      buckets_[b] = n;
    }
  }

  void maybe_gc() {
    if (free_head_ == kNil && nodes_.size() >= gc_threshold_) collect_garbage();
  }

  void clear_cache() { std::fill(cache_.begin(), cache_.end(), CacheEntry{}); }

  bool cache_lookup(std::uint32_t op, NodeId a, NodeId b, NodeId c, NodeId& out) const {
    if (!cache_enabled_) return false;
    const CacheEntry& e = cache_[hash3(op ^ (std::uint64_t{a} << 32), b, c) & (cache_.size() - 1)];
    if (e.op == op && e.a == a && e.b == b && e.c == c) {
      out = e.result;
      return true;
    }
    return false;
  }
  void cache_store(std::uint32_t op, NodeId a, NodeId b, NodeId c, NodeId r) {
    if (!cache_enabled_) return;
    cache_[hash3(op ^ (std::uint64_t{a} << 32), b, c) & (cache_.size() - 1)] = {op, a, b, c, r};
  }

  VarId top(NodeId n) const { return nodes_[n].var; }
  NodeId lo_of(NodeId n, VarId v) const { return nodes_[n].var == v ? nodes_[n].lo : n; }
  NodeId hi_of(NodeId n, VarId v) const { return nodes_[n].var == v ? nodes_[n].hi : n; }

  NodeId not_rec(NodeId a) {
    if (a == kFalseNode) return kTrueNode;
    if (a == kTrueNode) return kFalseNode;
    NodeId r;
    if (cache_lookup(kOpNot, a, 0, 0, r)) return r;
    const Node n = nodes_[a];
    NodeId lo = not_rec(n.lo);
    NodeId hi = not_rec(n.hi);
    r = mk(n.var, lo, hi);
    cache_store(kOpNot, a, 0, 0, r);
    return r;
  }

  NodeId apply_rec(BinOp op, NodeId a, NodeId b) {
    switch (op) {
      case BinOp::And:
        if (a == kFalseNode || b == kFalseNode) return kFalseNode;
        if (a == kTrueNode) return b;
        if (b == kTrueNode || a == b) return a;
        if (a > b) std::swap(a, b);
        break;
      case BinOp::Or:
        if (a == kTrueNode || b == kTrueNode) return kTrueNode;
        if (a == kFalseNode) return b;
        if (b == kFalseNode || a == b) return a;
        if (a > b) std::swap(a, b);
        break;
      case BinOp::Xor:
        if (a == b) return kFalseNode;
        if (a == kFalseNode) return b;
        if (b == kFalseNode) return a;
        if (a == kTrueNode) return not_rec(b);
        if (b == kTrueNode) return not_rec(a);
        if (a > b) std::swap(a, b);
        break;
      case BinOp::Imp:
        if (a == kFalseNode || b == kTrueNode || a == b) return kTrueNode;
        if (a == kTrueNode) return b;
        if (b == kFalseNode) return not_rec(a);
        break;
    }
    const auto opcode = static_cast<std::uint32_t>(op);
    NodeId r;
    if (cache_lookup(opcode, a, b, 0, r)) return r;
    VarId v = std::min(top(a), top(b));
    NodeId lo = apply_rec(op, lo_of(a, v), lo_of(b, v));
    NodeId hi = apply_rec(op, hi_of(a, v), hi_of(b, v));
    r = mk(v, lo, hi);
    cache_store(opcode, a, b, 0, r);
    return r;
  }

  NodeId ite_rec(NodeId c, NodeId t, NodeId e) {
    if (c == kTrueNode) return t;
    if (c == kFalseNode) return e;
    if (t == e) return t;
    if (t == kTrueNode && e == kFalseNode) return c;
    if (t == kFalseNode && e == kTrueNode) return not_rec(c);
    if (t == kTrueNode) return apply_rec(BinOp::Or, c, e);
    if (e == kFalseNode) return apply_rec(BinOp::And, c, t);
    NodeId r;
    if (cache_lookup(kOpIte, c, t, e, r)) return r;
    VarId v = std::min({top(c), top(t), top(e)});
    NodeId lo = ite_rec(lo_of(c, v), lo_of(t, v), lo_of(e, v));
    NodeId hi = ite_rec(hi_of(c, v), hi_of(t, v), hi_of(e, v));
    r = mk(v, lo, hi);
    cache_store(kOpIte, c, t, e, r);
    return r;
  }

  NodeId quant_rec(NodeId f, NodeId cube, bool universal) {
    if (f <= kTrueNode) return f;
    while (cube != kTrueNode && top(cube) < top(f)) cube = nodes_[cube].hi;
    if (cube == kTrueNode) return f;
    const std::uint32_t op = universal ? kOpForall : kOpExists;
    NodeId r;
    if (cache_lookup(op, f, cube, 0, r)) return r;
    const Node n = nodes_[f];
    if (top(cube) == n.var) {
      NodeId rest = nodes_[cube].hi;
      NodeId lo = quant_rec(n.lo, rest, universal);
      if (!universal && lo == kTrueNode) {
        r = kTrueNode;
      } else if (universal && lo == kFalseNode) {
        r = kFalseNode;
      } else {
        NodeId hi = quant_rec(n.hi, rest, universal);
        r = apply_rec(universal ? BinOp::And : BinOp::Or, lo, hi);
      }
    } else {
      NodeId lo = quant_rec(n.lo, cube, universal);
      NodeId hi = quant_rec(n.hi, cube, universal);
      r = mk(n.var, lo, hi);
    }
    cache_store(op, f, cube, 0, r);
    return r;
  }

  NodeId and_exists_rec(NodeId f, NodeId g, NodeId cube) {
    if (f == kFalseNode || g == kFalseNode) return kFalseNode;
    if (f == kTrueNode && g == kTrueNode) return kTrueNode;
    if (f == kTrueNode) return quant_rec(g, cube, false);
    if (g == kTrueNode || f == g) return quant_rec(f, cube, false);
    if (f > g) std::swap(f, g);
    VarId v = std::min(top(f), top(g));
    while (cube != kTrueNode && top(cube) < v) cube = nodes_[cube].hi;
    if (cube == kTrueNode) return apply_rec(BinOp::And, f, g);
    NodeId r;
    if (cache_lookup(kOpAndExists, f, g, cube, r)) return r;
    if (top(cube) == v) {
      NodeId rest = nodes_[cube].hi;
      NodeId lo = and_exists_rec(lo_of(f, v), lo_of(g, v), rest);
      if (lo == kTrueNode) {
        r = kTrueNode;
      } else {
        NodeId hi = and_exists_rec(hi_of(f, v), hi_of(g, v), rest);
        r = apply_rec(BinOp::Or, lo, hi);
      }
    } else {
      NodeId lo = and_exists_rec(lo_of(f, v), lo_of(g, v), cube);
      NodeId hi = and_exists_rec(hi_of(f, v), hi_of(g, v), cube);
      r = mk(v, lo, hi);
    }
    cache_store(kOpAndExists, f, g, cube, r);
    return r;
  }

  NodeId restrict_rec(NodeId f, NodeId lits) {
    if (f <= kTrueNode) return f;
    while (lits > kTrueNode && top(lits) < top(f)) {
      const Node& l = nodes_[lits];
      lits = l.lo == kFalseNode ? l.hi : l.lo;
    }
    if (lits <= kTrueNode) return f;
    NodeId r;
    if (cache_lookup(kOpRestrict, f, lits, 0, r)) return r;
    const Node n = nodes_[f];
    if (top(lits) == n.var) {
      const Node& l = nodes_[lits];
      bool positive = l.lo == kFalseNode;
      NodeId rest = positive ? l.hi : l.lo;
      r = restrict_rec(positive ? n.hi : n.lo, rest);
    } else {
      NodeId lo = restrict_rec(n.lo, lits);
      NodeId hi = restrict_rec(n.hi, lits);
      r = mk(n.var, lo, hi);
    }
    cache_store(kOpRestrict, f, lits, 0, r);
    return r;
  }

  NodeId permute_rec(NodeId f, const std::vector<VarId>& map, std::uint32_t tag) {
    if (f <= kTrueNode) return f;
    const std::uint32_t op = kOpPermuteBase + tag;
    NodeId r;
    if (cache_lookup(op, f, 0, 0, r)) return r;
    const Node n = nodes_[f];
    NodeId lo = permute_rec(n.lo, map, tag);
    NodeId hi = permute_rec(n.hi, map, tag);
    VarId target = map[n.var];
    check_var(target);
    if (target < top(lo) && target < top(hi)) {
      r = mk(target, lo, hi);
    } else {
      NodeId x = mk(target, kFalseNode, kTrueNode);
      r = ite_rec(x, hi, lo);
    }
    cache_store(op, f, 0, 0, r);
    return r;
  }

  unsigned num_vars_;
  std::vector<Node> nodes_;
  std::vector<NodeId> buckets_;
  std::vector<CacheEntry> cache_;
  bool cache_enabled_ = true;
  NodeId free_head_ = kNil;
  std::size_t free_count_ = 0;
  std::size_t gc_threshold_ = 1 << 20;
};

// ---------------------------------------------------------------------------
// Bdd handle

inline Bdd::Bdd(Manager* mgr, NodeId id) : mgr_(mgr), id_(id) { acquire(); }
inline Bdd::Bdd(const Bdd& other) : mgr_(other.mgr_), id_(other.id_) { acquire(); }
inline Bdd& Bdd::operator=(const Bdd& other) {
  if (this != &other) {
    if (other.mgr_) other.mgr_->ref(other.id_);
    release();
    mgr_ = other.mgr_;
    id_ = other.id_;
  }
  return *this;
}
inline Bdd& Bdd::operator=(Bdd&& other) noexcept {
  if (this != &other) {
    release();
    mgr_ = other.mgr_;
    id_ = other.id_;
    other.mgr_ = nullptr;
    other.id_ = kFalseNode;
  }
  return *this;
}
inline Bdd::~Bdd() { release(); }
inline void Bdd::acquire() {
  if (mgr_) mgr_->ref(id_);
}
inline void Bdd::release() {
  if (mgr_) mgr_->deref(id_);
}

inline Bdd Bdd::operator!() const { return mgr_->negate(*this); }
inline Bdd Bdd::operator&(const Bdd& o) const { return mgr_->apply(BinOp::And, *this, o); }
inline Bdd Bdd::operator|(const Bdd& o) const { return mgr_->apply(BinOp::Or, *this, o); }
inline Bdd Bdd::operator^(const Bdd& o) const { return mgr_->apply(BinOp::Xor, *this, o); }
inline Bdd Bdd::implies(const Bdd& o) const { return mgr_->apply(BinOp::Imp, *this, o); }
inline Bdd Bdd::iff(const Bdd& o) const { return !(*this ^ o); }

// ---------------------------------------------------------------------------
// Manager out-of-line members

inline void Manager::collect_garbage() {
  std::vector<char> mark(nodes_.size(), 0);
  mark[kFalseNode] = mark[kTrueNode] = 1;
  std::vector<NodeId> stack;
  for (NodeId n = 2; n < nodes_.size(); ++n)
    if (nodes_[n].var != kTerminalVar && nodes_[n].ref > 0) stack.push_back(n);
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (mark[n]) continue;
    mark[n] = 1;
    stack.push_back(nodes_[n].lo);
    stack.push_back(nodes_[n].hi);
  }
  free_head_ = kNil;
  free_count_ = 0;
  for (NodeId n = static_cast<NodeId>(nodes_.size()); n-- > 2;) {
    if (!mark[n]) {
      nodes_[n] = {kTerminalVar, kFalseNode, kFalseNode, 0, free_head_};
      free_head_ = n;
      ++free_count_;
    }
  }
  rehash();
  // Freed slots keep their chain pointer in `next`; rehash skipped them.
  clear_cache();
  if (free_count_ < nodes_.size() / 4) gc_threshold_ = nodes_.size() * 2;
}

inline double Manager::sat_count(const Bdd& f, const std::vector<VarId>& vars) const {
  std::vector<VarId> sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  auto level = [&](VarId v) -> std::size_t {
    if (v == kTerminalVar) return sorted.size();
    auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
    if (it == sorted.end() || *it != v)
      throw std::logic_error("bdd: sat_count support not contained in variable set");
    return static_cast<std::size_t>(it - sorted.begin());
  };
  std::vector<double> table(nodes_.size(), -1.0);
  auto gap = [&](NodeId child, std::size_t lv) {
    return std::ldexp(1.0, static_cast<int>(level(nodes_[child].var) - lv - 1));
  };
  std::function<double(NodeId)> rec = [&](NodeId n) -> double {
    if (n == kFalseNode) return 0.0;
    if (n == kTrueNode) return 1.0;
    if (table[n] >= 0.0) return table[n];
    const Node node = nodes_[n];
    std::size_t lv = level(node.var);
    return table[n] = rec(node.lo) * gap(node.lo, lv) + rec(node.hi) * gap(node.hi, lv);
  };
  return rec(f.id()) * std::ldexp(1.0, static_cast<int>(level(top(f.id()))));
}

inline std::optional<std::vector<bool>> Manager::pick_one(const Bdd& f,
                                                          const std::vector<VarId>& vars) const {
  if (f.is_false()) return std::nullopt;
  std::vector<bool> full(num_vars_, false);
  NodeId n = f.id();
  while (n > kTrueNode) {
    const Node& node = nodes_[n];
    if (node.lo != kFalseNode) {
      full[node.var] = false;
      n = node.lo;
    } else {
      full[node.var] = true;
      n = node.hi;
    }
  }
  std::vector<bool> out(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) out[i] = full[vars[i]];
  return out;
}

inline void Manager::enumerate(const Bdd& f, const std::vector<VarId>& vars,
                               const std::function<bool(const std::vector<bool>&)>& visit) const {
  std::vector<std::size_t> order(vars.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vars[a] < vars[b]; });
  std::vector<bool> out(vars.size(), false);
  bool stop = false;
  std::function<void(NodeId, std::size_t)> rec = [&](NodeId n, std::size_t k) {
    if (stop || n == kFalseNode) return;
    if (k == order.size()) {
      if (n != kTrueNode) throw std::logic_error("bdd: enumerate support not contained in variable set");
      if (!visit(out)) stop = true;
      return;
    }
    VarId v = vars[order[k]];
    if (top(n) < v) throw std::logic_error("bdd: enumerate support not contained in variable set");
    for (bool val : {false, true}) {
      out[order[k]] = val;
      NodeId next = top(n) == v ? (val ? nodes_[n].hi : nodes_[n].lo) : n;
      rec(next, k + 1);
      if (stop) return;
    }
    out[order[k]] = false;
  };
  rec(f.id(), 0);
}

inline std::vector<VarId> Manager::support(const Bdd& f) const {
  std::vector<char> seen_var(num_vars_, 0);
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<NodeId> stack{f.id()};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (n <= kTrueNode || seen[n]) continue;
    seen[n] = 1;
    seen_var[nodes_[n].var] = 1;
    stack.push_back(nodes_[n].lo);
    stack.push_back(nodes_[n].hi);
  }
  std::vector<VarId> out;
  for (VarId v = 0; v < num_vars_; ++v)
    if (seen_var[v]) out.push_back(v);
  return out;
}

inline std::size_t Manager::node_count(const Bdd& f) const {
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<NodeId> stack{f.id()};
  std::size_t count = 0;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (n <= kTrueNode || seen[n]) continue;
    seen[n] = 1;
    ++count;
    stack.push_back(nodes_[n].lo);
    stack.push_back(nodes_[n].hi);
  }
  return count;
}

}  // namespace gr1::bdd
