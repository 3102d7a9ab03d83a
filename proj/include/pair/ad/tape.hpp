#pragma once

// Small reverse-mode automatic differentiation tape.
//
// A Tape records every elementary operation as a node with at most two
// parents and the local partial derivatives. Var is a value plus the index of
// its node; constants carry no node and never enter the tape. A single tape is
// active per thread (see ScopedTape).

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "pair/core/math.hpp"

namespace pair::ad {

inline constexpr std::uint32_t kNoNode = std::numeric_limits<std::uint32_t>::max();

class Tape {
 public:
  struct Node {
    std::uint32_t a = kNoNode;
    std::uint32_t b = kNoNode;
    double da = 0.0;
    double db = 0.0;
  };

  std::uint32_t push(std::uint32_t a, double da, std::uint32_t b = kNoNode, double db = 0.0) {
    nodes_.push_back({a, b, da, db});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  std::uint32_t new_input() { return push(kNoNode, 0.0); }

  std::size_t size() const { return nodes_.size(); }

  void clear() { nodes_.clear(); }

  void reserve(std::size_t n) { nodes_.reserve(n); }

  /// Reverse sweep seeded at `output`; returns adjoints for every node.
  std::vector<double> adjoints(std::uint32_t output) const {
    std::vector<double> adj(nodes_.size(), 0.0);
    if (output == kNoNode) {
      return adj;
    }
    adj[output] = 1.0;
    for (std::size_t i = output + 1; i-- > 0;) {
      const double g = adj[i];
      if (g == 0.0) {
        continue;
      }
      const Node& n = nodes_[i];
      if (n.a != kNoNode) {
        adj[n.a] += g * n.da;
      }
      if (n.b != kNoNode) {
        adj[n.b] += g * n.db;
      }
    }
    return adj;
  }

  static Tape*& active() {
    thread_local Tape* tape = nullptr;
    return tape;
  }

 private:
  std::vector<Node> nodes_;
};

/// Makes `tape` the active tape for the current thread for the scope lifetime.
class ScopedTape {
 public:
  explicit ScopedTape(Tape& tape) : previous_(Tape::active()) { Tape::active() = &tape; }
  ~ScopedTape() { Tape::active() = previous_; }
  ScopedTape(const ScopedTape&) = delete;
  ScopedTape& operator=(const ScopedTape&) = delete;

 private:
  Tape* previous_;
};

struct Var {
  double value = 0.0;
  std::uint32_t index = kNoNode;

  Var() = default;
  // Implicit so that literals and doubles mix freely in templated code.
  Var(double v) : value(v) {}  // NOLINT(google-explicit-constructor)
  Var(double v, std::uint32_t i) : value(v), index(i) {}

  static Var input(double v) { return {v, Tape::active()->new_input()}; }

  bool is_constant() const { return index == kNoNode; }
};

namespace detail {

inline Var unary(double value, const Var& a, double da) {
  if (a.is_constant()) {
    return Var(value);
  }
  return {value, Tape::active()->push(a.index, da)};
}

inline Var binary(double value, const Var& a, double da, const Var& b, double db) {
  if (a.is_constant()) {
    return unary(value, b, db);
  }
  if (b.is_constant()) {
    return unary(value, a, da);
  }
  return {value, Tape::active()->push(a.index, da, b.index, db)};
}

}  // namespace detail

inline Var operator+(const Var& a, const Var& b) { return detail::binary(a.value + b.value, a, 1.0, b, 1.0); }
inline Var operator-(const Var& a, const Var& b) { return detail::binary(a.value - b.value, a, 1.0, b, -1.0); }
inline Var operator*(const Var& a, const Var& b) {
  return detail::binary(a.value * b.value, a, b.value, b, a.value);
}
inline Var operator/(const Var& a, const Var& b) {
  const double inv = 1.0 / b.value;
  return detail::binary(a.value * inv, a, inv, b, -a.value * inv * inv);
}
inline Var operator-(const Var& a) { return detail::unary(-a.value, a, -1.0); }

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }

inline Var sqrt(const Var& a) {
  const double r = std::sqrt(a.value);
  return detail::unary(r, a, 0.5 / r);
}
inline Var sin(const Var& a) { return detail::unary(std::sin(a.value), a, std::cos(a.value)); }
inline Var cos(const Var& a) { return detail::unary(std::cos(a.value), a, -std::sin(a.value)); }
inline Var exp(const Var& a) {
  const double e = std::exp(a.value);
  return detail::unary(e, a, e);
}
inline Var square(const Var& a) { return detail::unary(a.value * a.value, a, 2.0 * a.value); }

inline Var sinc_of_squared(const Var& s) {
  return detail::unary(pair::sinc_of_squared(s.value), s, pair::sinc_of_squared_derivative(s.value));
}
inline Var cosc_of_squared(const Var& s) {
  return detail::unary(pair::cosc_of_squared(s.value), s, pair::cosc_of_squared_derivative(s.value));
}

/// Gradient of `output` with respect to `inputs`, in input order.
inline std::vector<double> gradient(const Tape& tape, const Var& output, std::span<const Var> inputs) {
  const auto adj = tape.adjoints(output.index);
  std::vector<double> g(inputs.size(), 0.0);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!inputs[i].is_constant()) {
      g[i] = adj[inputs[i].index];
    }
  }
  return g;
}

}  // namespace pair::ad

namespace pair {

// Scalar helpers so templated code can call the same names on doubles.
inline double square(double a) { return a * a; }
inline double value_of(double a) { return a; }
inline double value_of(const ad::Var& a) { return a.value; }

}  // namespace pair
