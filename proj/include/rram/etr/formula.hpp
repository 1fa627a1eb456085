#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rram/error.hpp"
#include "rram/exact/rational.hpp"

namespace rram::etr {

enum class NodeKind : std::uint8_t { Zero, One, Var, Add, Mul, Eq, Le, Lt, And, Or, Not };

constexpr bool is_term_kind(NodeKind k) {
  return k == NodeKind::Zero || k == NodeKind::One || k == NodeKind::Var || k == NodeKind::Add || k == NodeKind::Mul;
}

// Typed handles into the node arena.
struct Term {
  std::uint32_t id = 0;
};
struct Prop {
  std::uint32_t id = 0;
};

struct Node {
  NodeKind kind;
  std::uint32_t a = 0;  // Var: variable id; binary: lhs; Not: child; And/Or: offset into the child pool
  std::uint32_t b = 0;  // binary: rhs; And/Or: child count
};

using Assignment = std::unordered_map<std::string, Rational>;

struct FormulaStats {
  std::uint64_t variables = 0;
  std::uint64_t nodes = 0;  // length of the fully expanded tree
  std::uint64_t depth = 0;
};

/// An existential ETR sentence: a variable list plus a quantifier-free body over
/// {0, 1, +, *, =, <=, <, and, or, not}. Nodes live in an arena; a node may be
/// referenced more than once, and all size measures count the expanded tree.
class Formula {
 public:
  explicit Formula(std::uint64_t node_cap = 10'000'000) : cap_(node_cap) {}

  // variables --------------------------------------------------------------
  Term var(const std::string& name) {
    auto it = index_.find(name);
    std::uint32_t id;
    if (it == index_.end()) {
      id = static_cast<std::uint32_t>(names_.size());
      names_.push_back(name);
      index_.emplace(name, id);
    } else {
      id = it->second;
    }
    return Term{push({NodeKind::Var, id, 0}, 1, 1)};
  }
  bool has_var(const std::string& name) const { return index_.count(name) != 0; }
  const std::vector<std::string>& variables() const { return names_; }

  // terms --------------------------------------------------------------------
  Term zero() { return Term{push({NodeKind::Zero, 0, 0}, 1, 1)}; }
  Term one() { return Term{push({NodeKind::One, 0, 0}, 1, 1)}; }
  Term add(Term x, Term y) { return Term{binary(NodeKind::Add, x.id, y.id)}; }
  Term mul(Term x, Term y) { return Term{binary(NodeKind::Mul, x.id, y.id)}; }
  /// Left-nested sum; the empty sum is the constant 0.
  Term sum(const std::vector<Term>& xs) {
    if (xs.empty()) return zero();
    Term acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = add(acc, xs[i]);
    return acc;
  }

  // atoms and connectives -----------------------------------------------------
  Prop eq(Term x, Term y) { return Prop{binary(NodeKind::Eq, x.id, y.id)}; }
  Prop le(Term x, Term y) { return Prop{binary(NodeKind::Le, x.id, y.id)}; }
  Prop lt(Term x, Term y) { return Prop{binary(NodeKind::Lt, x.id, y.id)}; }
  Prop not_(Prop p) {
    return Prop{push({NodeKind::Not, p.id, 0}, 1 + size_[p.id], 1 + depth_[p.id])};
  }
  Prop and_(const std::vector<Prop>& ps) { return Prop{nary(NodeKind::And, ps)}; }
  Prop or_(const std::vector<Prop>& ps) { return Prop{nary(NodeKind::Or, ps)}; }
  Prop implies(Prop a, Prop b) { return or_({not_(a), b}); }
  /// (A and B) or (not A and C); A is shared, not copied.
  Prop ite(Prop a, Prop b, Prop c) { return or_({and_({a, b}), and_({not_(a), c})}); }
  Prop falsum() { return eq(zero(), one()); }

  // access ------------------------------------------------------------------
  void set_root(Prop p) { root_ = p.id; has_root_ = true; }
  Prop root() const {
    if (!has_root_) throw Error(ErrorKind::InvalidConfig, "formula has no body");
    return Prop{root_};
  }
  const Node& node(std::uint32_t id) const { return nodes_[id]; }
  std::uint32_t child(const Node& n, std::uint32_t i) const { return kids_[n.a + i]; }
  std::uint64_t tree_size(std::uint32_t id) const { return size_[id]; }
  std::uint64_t tree_depth(std::uint32_t id) const { return depth_[id]; }
  std::uint64_t node_cap() const { return cap_; }
  std::size_t arena_size() const { return nodes_.size(); }

  FormulaStats stats() const {
    FormulaStats s;
    s.variables = names_.size();
    auto r = root();
    s.nodes = size_[r.id];
    s.depth = depth_[r.id];
    return s;
  }

 private:
  std::uint32_t push(Node n, std::uint64_t size, std::uint64_t depth) {
    if (size > cap_ || nodes_.size() >= cap_)
      throw Error(ErrorKind::BudgetExceeded, "formula exceeds the node cap of " + std::to_string(cap_));
    nodes_.push_back(n);
    size_.push_back(size);
    depth_.push_back(depth);
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }
  std::uint32_t binary(NodeKind k, std::uint32_t x, std::uint32_t y) {
    return push({k, x, y}, 1 + size_[x] + size_[y], 1 + std::max(depth_[x], depth_[y]));
  }
  std::uint32_t nary(NodeKind k, const std::vector<Prop>& ps) {
    std::uint64_t size = 1, depth = 0;
    auto offset = static_cast<std::uint32_t>(kids_.size());
    for (auto p : ps) {
      size += size_[p.id];
      depth = std::max(depth, depth_[p.id]);
      kids_.push_back(p.id);
    }
    return push({k, offset, static_cast<std::uint32_t>(ps.size())}, size, depth + 1);
  }

  std::uint64_t cap_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> kids_;
  std::vector<std::uint64_t> size_;
  std::vector<std::uint64_t> depth_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::uint32_t root_ = 0;
  bool has_root_ = false;
};

// evaluation -----------------------------------------------------------------

class Evaluator {
 public:
  Evaluator(const Formula& f, const Assignment& a) : f_(f) {
    const auto& names = f.variables();
    values_.reserve(names.size());
    for (const auto& n : names) {
      auto it = a.find(n);
      if (it == a.end()) throw Error(ErrorKind::UnboundVariable, "no value for variable '" + n + "'");
      values_.push_back(it->second);
    }
  }

  Rational term(std::uint32_t id) const {
    const Node& n = f_.node(id);
    switch (n.kind) {
      case NodeKind::Zero: return Rational(0);
      case NodeKind::One: return Rational(1);
      case NodeKind::Var: return values_[n.a];
      case NodeKind::Add: return term(n.a) + term(n.b);
      case NodeKind::Mul: return term(n.a) * term(n.b);
      default: throw Error(ErrorKind::ParseError, "proposition used as a term");
    }
  }

  bool prop(std::uint32_t id) const {
    const Node& n = f_.node(id);
    switch (n.kind) {
      case NodeKind::Eq: return term(n.a) == term(n.b);
      case NodeKind::Le: return term(n.a) <= term(n.b);
      case NodeKind::Lt: return term(n.a) < term(n.b);
      case NodeKind::Not: return !prop(n.a);
      case NodeKind::And:
        for (std::uint32_t i = 0; i < n.b; ++i)
          if (!prop(f_.child(n, i))) return false;
        return true;
      case NodeKind::Or:
        for (std::uint32_t i = 0; i < n.b; ++i)
          if (prop(f_.child(n, i))) return true;
        return false;
      default: throw Error(ErrorKind::ParseError, "term used as a proposition");
    }
  }

 private:
  const Formula& f_;
  std::vector<Rational> values_;
};

/// Exact truth value of the body under a total assignment.
inline bool evaluate(const Formula& f, const Assignment& a) { return Evaluator(f, a).prop(f.root().id); }

inline bool evaluate(const Formula& f, Prop p, const Assignment& a) { return Evaluator(f, a).prop(p.id); }

inline FormulaStats formula_stats(const Formula& f) { return f.stats(); }

}  // namespace rram::etr
