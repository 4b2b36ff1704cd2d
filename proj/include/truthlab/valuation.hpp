#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "truthlab/syntax.hpp"

namespace truthlab {

// Four-valued lattice: a pair of bits (phi in X, not-phi in X).
// Report order N < T < F < B matches the bit encoding.
struct V4 {
  uint8_t bits = 0;  // bit0 = t, bit1 = f

  static V4 N() { return V4{0}; }
  static V4 T() { return V4{1}; }
  static V4 F() { return V4{2}; }
  static V4 B() { return V4{3}; }

  bool t_bit() const { return bits & 1; }
  bool f_bit() const { return bits & 2; }

  friend bool operator==(V4 a, V4 b) { return a.bits == b.bits; }
  friend bool operator!=(V4 a, V4 b) { return a.bits != b.bits; }
};

V4 v4_not(V4 a);
V4 v4_and(V4 a, V4 b);
V4 v4_or(V4 a, V4 b);
V4 v4_imp(V4 a, V4 b);
// Knowledge order: bitwise inclusion.
bool leq_k(V4 a, V4 b);
// Conflation: swaps N and B, fixes T and F.
V4 v4_conflate(V4 a);
std::string to_string(V4 v);
V4 v4_from_string(const std::string& s);

// Assignment of V4 values to the system's names, in declaration order.
using NameAssignment = std::vector<V4>;

struct ClassFlags {
  bool consistent = false;
  bool complete = false;
  bool symmetric = false;
  bool mixed = false;
};

struct FixedPoint {
  NameAssignment values;
  ClassFlags flags;
};

// FDE evaluator over a fixed name assignment. Memoization is by node address
// and therefore restricted to the nodes of an optional StableNodeSet;
// transient nodes are evaluated structurally.
class Evaluator {
 public:
  Evaluator(const SentenceSystem& sys, const NameAssignment& w,
            std::shared_ptr<const StableNodeSet> stable = nullptr);
  V4 value(const FormulaPtr& f);

 private:
  V4 eval(const FormulaPtr& f);
  const SentenceSystem& sys_;
  const NameAssignment& w_;
  std::shared_ptr<const StableNodeSet> stable_;
  std::unordered_map<const Formula*, V4> memo_;
};

V4 eval_fde(const FormulaPtr& s, const NameAssignment& w, const SentenceSystem& sys);
NameAssignment jump_step(const NameAssignment& w, const SentenceSystem& sys);
bool is_jump_fixed_point(const NameAssignment& w, const SentenceSystem& sys);

FixedPoint least_fixed_point(const SentenceSystem& sys);
std::vector<FixedPoint> enumerate_fixed_points(const SentenceSystem& sys, int max_names = 8);
ClassFlags classify(const NameAssignment& w);
FixedPoint dual(const FixedPoint& fp);

enum class DetVariant { Cons, Comp, Sym };
std::string to_string(DetVariant v);

// Kripkean determinateness relative to a fixed point: cons = value != N,
// comp = value != B, sym = value in {T, F}.
bool is_determinate(V4 value, DetVariant variant);
bool is_determinate(const FormulaPtr& s, const FixedPoint& fp, DetVariant variant,
                    const SentenceSystem& sys);
std::vector<FormulaPtr> determinate_set(const FixedPoint& fp, DetVariant variant,
                                        const std::vector<FormulaPtr>& pool,
                                        const SentenceSystem& sys);

// Extends an assignment over `sys` to companion names (__neg companions get
// the negated value, __dual companions the same value).
NameAssignment extend_to_companions(const NameAssignment& w, const SentenceSystem& original,
                                    const SentenceSystem& prepared);
FixedPoint extend_fixed_point(const FixedPoint& fp, const SentenceSystem& from,
                              const SentenceSystem& to);

}  // namespace truthlab
