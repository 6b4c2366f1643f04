#pragma once

// Sorted symbolic terms. All construction goes through TermManager::mk (or
// the typed helpers), which checks operator signatures, folds constant
// subterms and applies a small set of algebraic identities. Nodes are
// hash-consed: structural equality coincides with pointer equality for terms
// created by the same manager.

#include <cassert>
#include <cstdint>
#include <cstring>
#include <deque>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace wasym {

enum class SortKind : uint8_t { Bv, Bool, F32, F64 };

struct Sort {
  SortKind kind = SortKind::Bool;
  uint32_t width = 0;  // bit width, Bv only

  static Sort bv(uint32_t w) { return {SortKind::Bv, w}; }
  static Sort boolean() { return {SortKind::Bool, 0}; }
  static Sort f32() { return {SortKind::F32, 0}; }
  static Sort f64() { return {SortKind::F64, 0}; }

  bool is_bv() const { return kind == SortKind::Bv; }
  bool is_bool() const { return kind == SortKind::Bool; }
  bool is_float() const { return kind == SortKind::F32 || kind == SortKind::F64; }

  // Width in bits of the underlying representation.
  uint32_t bits() const {
    switch (kind) {
      case SortKind::Bv: return width;
      case SortKind::Bool: return 1;
      case SortKind::F32: return 32;
      case SortKind::F64: return 64;
    }
    return 0;
  }

  bool operator==(const Sort& o) const { return kind == o.kind && width == o.width; }
  bool operator!=(const Sort& o) const { return !(*this == o); }
};

enum class Op : uint8_t {
  // leaf kinds
  Const,
  Var,
  // bitvector, unary
  BvNot,
  BvNeg,
  BvClz,
  BvCtz,
  BvPopcnt,
  // bitvector, binary
  BvAdd,
  BvSub,
  BvMul,
  BvUDiv,   // total: x/0 = all-ones (SMT-LIB), trap handled before term build
  BvSDiv,   // total: x/0 = all-ones; INT_MIN/-1 = INT_MIN
  BvURem,   // total: x%0 = x
  BvSRem,   // total: x%0 = x
  BvAnd,
  BvOr,
  BvXor,
  BvShl,    // shift amount interpreted unsigned; >= width gives 0
  BvLshr,
  BvAshr,
  BvRotl,   // rotate amount taken mod width
  BvRotr,
  // predicates over bitvectors (result Bool)
  Eq,       // also defined on Bool operands
  BvUlt,
  BvUle,
  BvSlt,
  BvSle,
  // boolean connectives
  Not,
  And,
  Or,
  // structure
  Ite,      // (Bool, T, T) -> T, T any sort
  Extract,  // imm_a = hi, imm_b = lo, inclusive bit positions
  Concat,   // n children; child 0 holds the most significant bits
  ZeroExt,  // to node sort width
  SignExt,
  // float arithmetic (operands and result share the node's float sort)
  FAdd,
  FSub,
  FMul,
  FDiv,
  FMin,
  FMax,
  FCopysign,
  FAbs,
  FNeg,
  FSqrt,
  FCeil,
  FFloor,
  FTrunc,
  FNearest,
  // float predicates (result Bool)
  FEq,
  FLt,
  FLe,
  // conversions
  FToSBv,    // float -> signed bv of node width; value must be in range (guarded by emulator)
  FToUBv,
  SBvToF,    // signed bv -> float of node sort
  UBvToF,
  FPromote,  // f32 -> f64
  FDemote,   // f64 -> f32
  BvToFBits,  // reinterpret bv32/bv64 bits as f32/f64
  FToBvBits,  // reinterpret float as bv of equal width
};

inline const char* op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::BvNot: return "bvnot";
    case Op::BvNeg: return "bvneg";
    case Op::BvClz: return "clz";
    case Op::BvCtz: return "ctz";
    case Op::BvPopcnt: return "popcnt";
    case Op::BvAdd: return "bvadd";
    case Op::BvSub: return "bvsub";
    case Op::BvMul: return "bvmul";
    case Op::BvUDiv: return "bvudiv";
    case Op::BvSDiv: return "bvsdiv";
    case Op::BvURem: return "bvurem";
    case Op::BvSRem: return "bvsrem";
    case Op::BvAnd: return "bvand";
    case Op::BvOr: return "bvor";
    case Op::BvXor: return "bvxor";
    case Op::BvShl: return "bvshl";
    case Op::BvLshr: return "bvlshr";
    case Op::BvAshr: return "bvashr";
    case Op::BvRotl: return "rotl";
    case Op::BvRotr: return "rotr";
    case Op::Eq: return "=";
    case Op::BvUlt: return "bvult";
    case Op::BvUle: return "bvule";
    case Op::BvSlt: return "bvslt";
    case Op::BvSle: return "bvsle";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Ite: return "ite";
    case Op::Extract: return "extract";
    case Op::Concat: return "concat";
    case Op::ZeroExt: return "zero_extend";
    case Op::SignExt: return "sign_extend";
    case Op::FAdd: return "fp.add";
    case Op::FSub: return "fp.sub";
    case Op::FMul: return "fp.mul";
    case Op::FDiv: return "fp.div";
    case Op::FMin: return "fp.min";
    case Op::FMax: return "fp.max";
    case Op::FCopysign: return "fp.copysign";
    case Op::FAbs: return "fp.abs";
    case Op::FNeg: return "fp.neg";
    case Op::FSqrt: return "fp.sqrt";
    case Op::FCeil: return "fp.ceil";
    case Op::FFloor: return "fp.floor";
    case Op::FTrunc: return "fp.trunc";
    case Op::FNearest: return "fp.nearest";
    case Op::FEq: return "fp.eq";
    case Op::FLt: return "fp.lt";
    case Op::FLe: return "fp.le";
    case Op::FToSBv: return "fp.to_sbv";
    case Op::FToUBv: return "fp.to_ubv";
    case Op::SBvToF: return "fp.from_sbv";
    case Op::UBvToF: return "fp.from_ubv";
    case Op::FPromote: return "fp.promote";
    case Op::FDemote: return "fp.demote";
    case Op::BvToFBits: return "fp.from_bits";
    case Op::FToBvBits: return "fp.to_bits";
  }
  return "?";
}

class TermManager;
struct TermNode;
using Term = const TermNode*;

struct TermNode {
  Sort sort;
  Op op;
  uint32_t imm_a = 0, imm_b = 0;  // Extract bounds
  std::vector<Term> children;
  std::vector<uint8_t> bytes;  // Const payload, little-endian, ceil(bits/8)
  std::string name;            // Var payload
  uint64_t hash = 0;
  uint64_t id = 0;  // creation ordinal within the manager, stable per run

  bool is_const() const { return op == Op::Const; }
  bool is_var() const { return op == Op::Var; }

  // Constant accessors; only valid when is_const().
  uint64_t const_u64() const {
    assert(is_const() && sort.bits() <= 64);
    uint64_t v = 0;
    std::memcpy(&v, bytes.data(), bytes.size());
    return v;
  }
  bool const_bool() const {
    assert(is_const() && sort.is_bool());
    return bytes[0] != 0;
  }
  float const_f32() const {
    assert(sort.kind == SortKind::F32);
    float f;
    uint32_t b = static_cast<uint32_t>(const_u64());
    std::memcpy(&f, &b, 4);
    return f;
  }
  double const_f64() const {
    assert(sort.kind == SortKind::F64);
    double d;
    uint64_t b = const_u64();
    std::memcpy(&d, &b, 8);
    return d;
  }
  // Byte k of a constant (little-endian position).
  uint8_t const_byte(uint32_t k) const {
    assert(is_const() && k < bytes.size());
    return bytes[k];
  }
};

// Raised on ill-sorted construction. Indicates an engine bug, not bad input.
struct SortError : std::logic_error {
  explicit SortError(const std::string& msg) : std::logic_error(msg) {}
};

namespace detail {

inline uint64_t mix64(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

inline uint64_t hash_node(const TermNode& n) {
  uint64_t h = mix64((uint64_t(n.sort.kind) << 40) ^ (uint64_t(n.sort.width) << 8) ^ uint64_t(n.op));
  h = mix64(h ^ (uint64_t(n.imm_a) << 32 | n.imm_b));
  for (Term c : n.children) h = mix64(h ^ c->hash ^ 0x9e3779b97f4a7c15ULL);
  for (uint8_t b : n.bytes) h = h * 1099511628211ULL ^ b;
  for (char c : n.name) h = h * 1099511628211ULL ^ uint8_t(c);
  return h | 1;  // never zero
}

inline bool node_equal(const TermNode& a, const TermNode& b) {
  return a.sort == b.sort && a.op == b.op && a.imm_a == b.imm_a &&
         a.imm_b == b.imm_b && a.children == b.children && a.bytes == b.bytes &&
         a.name == b.name;
}

}  // namespace detail

// Mask value to the bottom `bits` bits (bits in 1..64).
inline uint64_t mask_to(uint64_t v, uint32_t bits) {
  return bits >= 64 ? v : (v & ((uint64_t(1) << bits) - 1));
}

inline int64_t sign_extend_of(uint64_t v, uint32_t bits) {
  assert(bits >= 1 && bits <= 64);
  if (bits == 64) return int64_t(v);
  uint64_t m = uint64_t(1) << (bits - 1);
  v = mask_to(v, bits);
  return int64_t((v ^ m) - m);
}

class TermManager {
public:
  TermManager() {
    true_ = intern_const(Sort::boolean(), {1});
    false_ = intern_const(Sort::boolean(), {0});
  }
  TermManager(const TermManager&) = delete;
  TermManager& operator=(const TermManager&) = delete;

  // --- constants -----------------------------------------------------------

  Term bv_const(uint32_t width, uint64_t value) {
    assert(width >= 1 && width <= 64);
    value = mask_to(value, width);
    std::vector<uint8_t> bytes((width + 7) / 8);
    std::memcpy(bytes.data(), &value, bytes.size());
    return intern_const(Sort::bv(width), std::move(bytes));
  }

  // Wide constants (byte arrays); width = 8 * bytes.size().
  Term bytes_const(std::vector<uint8_t> bytes) {
    assert(!bytes.empty());
    uint32_t w = uint32_t(bytes.size()) * 8;
    return intern_const(Sort::bv(w), std::move(bytes));
  }

  Term bool_const(bool b) { return b ? true_ : false_; }
  Term true_term() const { return true_; }
  Term false_term() const { return false_; }

  Term f32_const(float f) {
    uint32_t b;
    std::memcpy(&b, &f, 4);
    std::vector<uint8_t> bytes(4);
    std::memcpy(bytes.data(), &b, 4);
    return intern_const(Sort::f32(), std::move(bytes));
  }
  Term f64_const(double d) {
    uint64_t b;
    std::memcpy(&b, &d, 8);
    std::vector<uint8_t> bytes(8);
    std::memcpy(bytes.data(), &b, 8);
    return intern_const(Sort::f64(), std::move(bytes));
  }
  Term const_of_sort(Sort s, uint64_t raw_bits) {
    if (s.is_bool()) return bool_const(raw_bits & 1);
    if (s.is_bv()) return bv_const(s.width, raw_bits);
    std::vector<uint8_t> bytes(s.bits() / 8);
    std::memcpy(bytes.data(), &raw_bits, bytes.size());
    return intern_const(s, std::move(bytes));
  }

  Term var(const std::string& name, Sort sort) {
    TermNode n;
    n.sort = sort;
    n.op = Op::Var;
    n.name = name;
    return intern(std::move(n));
  }

  // --- generic application -------------------------------------------------

  Term mk(Op op, std::span<const Term> args, uint32_t imm_a = 0, uint32_t imm_b = 0);

  Term mk(Op op, std::initializer_list<Term> args, uint32_t imm_a = 0, uint32_t imm_b = 0) {
    return mk(op, std::span<const Term>(args.begin(), args.size()), imm_a, imm_b);
  }

  // --- typed helpers -------------------------------------------------------

  Term ite(Term c, Term t, Term e) { return mk(Op::Ite, {c, t, e}); }
  Term extract(uint32_t hi, uint32_t lo, Term x) { return mk(Op::Extract, {x}, hi, lo); }
  Term concat(std::span<const Term> parts) { return mk(Op::Concat, parts); }
  Term concat2(Term hi, Term lo) { return mk(Op::Concat, {hi, lo}); }
  Term zero_ext(uint32_t to_width, Term x) { return mk(Op::ZeroExt, {x}, to_width); }
  Term sign_ext(uint32_t to_width, Term x) { return mk(Op::SignExt, {x}, to_width); }
  Term eq(Term a, Term b) { return mk(Op::Eq, {a, b}); }
  Term ne(Term a, Term b) { return mk(Op::Not, {eq(a, b)}); }
  Term band(Term a, Term b) { return mk(Op::And, {a, b}); }
  Term bor(Term a, Term b) { return mk(Op::Or, {a, b}); }
  Term bnot(Term a) { return mk(Op::Not, {a}); }
  Term ult(Term a, Term b) { return mk(Op::BvUlt, {a, b}); }
  Term ule(Term a, Term b) { return mk(Op::BvUle, {a, b}); }
  Term slt(Term a, Term b) { return mk(Op::BvSlt, {a, b}); }
  Term sle(Term a, Term b) { return mk(Op::BvSle, {a, b}); }
  Term add(Term a, Term b) { return mk(Op::BvAdd, {a, b}); }
  Term sub(Term a, Term b) { return mk(Op::BvSub, {a, b}); }

  // Extract byte k (little-endian byte order: byte 0 is bits [7:0]).
  Term byte_of(Term x, uint32_t k) { return extract(8 * k + 7, 8 * k, x); }

  size_t node_count() const { return nodes_.size(); }

  // Apply op to constant children; shared by mk folding and eval.
  Term fold_const(Op op, std::span<const Term> args, Sort result_sort,
                  uint32_t imm_a, uint32_t imm_b);

private:
  Term intern_const(Sort s, std::vector<uint8_t> bytes) {
    TermNode n;
    n.sort = s;
    n.op = Op::Const;
    n.bytes = std::move(bytes);
    return intern(std::move(n));
  }

  Term intern(TermNode&& n) {
    n.hash = detail::hash_node(n);
    auto it = table_.find(&n);
    if (it != table_.end()) return *it;
    nodes_.push_back(std::move(n));
    TermNode* stored = &nodes_.back();
    stored->id = next_id_++;
    table_.insert(stored);
    return stored;
  }

  Sort result_sort_checked(Op op, std::span<const Term> args, uint32_t imm_a, uint32_t imm_b);

  struct Hash {
    size_t operator()(const TermNode* n) const { return size_t(n->hash); }
  };
  struct Eq_ {
    bool operator()(const TermNode* a, const TermNode* b) const {
      return detail::node_equal(*a, *b);
    }
  };

  std::deque<TermNode> nodes_;
  std::unordered_set<TermNode*, Hash, Eq_> table_;
  uint64_t next_id_ = 0;
  Term true_ = nullptr;
  Term false_ = nullptr;
};

inline Sort TermManager::result_sort_checked(Op op, std::span<const Term> a,
                                             uint32_t imm_a, uint32_t imm_b) {
  auto want = [&](bool cond, const char* msg) {
    if (!cond) throw SortError(std::string(op_name(op)) + ": " + msg);
  };
  // Arithmetic is defined on widths up to 64; wider bitvectors (memory chunk
  // byte arrays) only support Extract/Concat/Ite/Eq.
  auto bv_unary = [&] {
    want(a.size() == 1 && a[0]->sort.is_bv() && a[0]->sort.width <= 64,
         "expects one bitvector of width <= 64");
    return a[0]->sort;
  };
  auto bv_binary = [&] {
    want(a.size() == 2 && a[0]->sort.is_bv() && a[0]->sort == a[1]->sort &&
             a[0]->sort.width <= 64,
         "expects two bitvectors of equal width <= 64");
    return a[0]->sort;
  };
  auto float_args = [&](size_t n) {
    want(a.size() == n && a[0]->sort.is_float(), "expects float operands");
    for (size_t i = 1; i < n; ++i) want(a[i]->sort == a[0]->sort, "operand sorts differ");
    return a[0]->sort;
  };
  switch (op) {
    case Op::BvNot:
    case Op::BvNeg:
    case Op::BvClz:
    case Op::BvCtz:
    case Op::BvPopcnt:
      return bv_unary();
    case Op::BvAdd:
    case Op::BvSub:
    case Op::BvMul:
    case Op::BvUDiv:
    case Op::BvSDiv:
    case Op::BvURem:
    case Op::BvSRem:
    case Op::BvAnd:
    case Op::BvOr:
    case Op::BvXor:
    case Op::BvShl:
    case Op::BvLshr:
    case Op::BvAshr:
    case Op::BvRotl:
    case Op::BvRotr:
      return bv_binary();
    case Op::Eq:
      want(a.size() == 2 && a[0]->sort == a[1]->sort &&
               (a[0]->sort.is_bv() || a[0]->sort.is_bool()),
           "expects two bitvector or boolean operands of equal sort");
      return Sort::boolean();
    case Op::BvUlt:
    case Op::BvUle:
    case Op::BvSlt:
    case Op::BvSle:
      bv_binary();
      return Sort::boolean();
    case Op::Not:
      want(a.size() == 1 && a[0]->sort.is_bool(), "expects one boolean");
      return Sort::boolean();
    case Op::And:
    case Op::Or:
      want(a.size() == 2 && a[0]->sort.is_bool() && a[1]->sort.is_bool(),
           "expects two booleans");
      return Sort::boolean();
    case Op::Ite:
      want(a.size() == 3 && a[0]->sort.is_bool() && a[1]->sort == a[2]->sort,
           "expects (bool, T, T)");
      return a[1]->sort;
    case Op::Extract:
      want(a.size() == 1 && a[0]->sort.is_bv() && imm_a >= imm_b &&
               imm_a < a[0]->sort.width,
           "bad extract bounds");
      return Sort::bv(imm_a - imm_b + 1);
    case Op::Concat: {
      want(!a.empty(), "expects at least one part");
      uint32_t w = 0;
      for (Term c : a) {
        want(c->sort.is_bv(), "expects bitvector parts");
        w += c->sort.width;
      }
      return Sort::bv(w);
    }
    case Op::ZeroExt:
    case Op::SignExt:
      want(a.size() == 1 && a[0]->sort.is_bv() && imm_a >= a[0]->sort.width,
           "extension must not narrow");
      return Sort::bv(imm_a);
    case Op::FAdd:
    case Op::FSub:
    case Op::FMul:
    case Op::FDiv:
    case Op::FMin:
    case Op::FMax:
    case Op::FCopysign:
      return float_args(2);
    case Op::FAbs:
    case Op::FNeg:
    case Op::FSqrt:
    case Op::FCeil:
    case Op::FFloor:
    case Op::FTrunc:
    case Op::FNearest:
      return float_args(1);
    case Op::FEq:
    case Op::FLt:
    case Op::FLe:
      float_args(2);
      return Sort::boolean();
    case Op::FToSBv:
    case Op::FToUBv:
      want(a.size() == 1 && a[0]->sort.is_float() && (imm_a == 32 || imm_a == 64),
           "expects float -> bv32/bv64");
      return Sort::bv(imm_a);
    case Op::SBvToF:
    case Op::UBvToF:
      want(a.size() == 1 && a[0]->sort.is_bv() && (imm_a == 32 || imm_a == 64),
           "expects bv -> f32/f64");
      return imm_a == 32 ? Sort::f32() : Sort::f64();
    case Op::FPromote:
      want(a.size() == 1 && a[0]->sort.kind == SortKind::F32, "expects f32");
      return Sort::f64();
    case Op::FDemote:
      want(a.size() == 1 && a[0]->sort.kind == SortKind::F64, "expects f64");
      return Sort::f32();
    case Op::BvToFBits:
      want(a.size() == 1 && a[0]->sort.is_bv() &&
               (a[0]->sort.width == 32 || a[0]->sort.width == 64),
           "expects bv32 or bv64");
      return a[0]->sort.width == 32 ? Sort::f32() : Sort::f64();
    case Op::FToBvBits:
      want(a.size() == 1 && a[0]->sort.is_float(), "expects float");
      return Sort::bv(a[0]->sort.bits());
    case Op::Const:
    case Op::Var:
      break;
  }
  throw SortError("mk: leaf op");
}

inline Term TermManager::mk(Op op, std::span<const Term> args, uint32_t imm_a,
                            uint32_t imm_b) {
  Sort rs = result_sort_checked(op, args, imm_a, imm_b);

  bool all_const = true;
  for (Term c : args)
    if (!c->is_const()) {
      all_const = false;
      break;
    }
  if (all_const) return fold_const(op, args, rs, imm_a, imm_b);

  // Cheap, deterministic identities. Anything beyond this stays symbolic.
  auto is_zero = [](Term t) { return t->is_const() && t->const_u64() == 0 && t->sort.width <= 64; };
  auto is_ones = [](Term t) {
    return t->is_const() && t->sort.width <= 64 &&
           t->const_u64() == mask_to(~uint64_t(0), t->sort.width);
  };
  auto is_one = [](Term t) { return t->is_const() && t->sort.width <= 64 && t->const_u64() == 1; };

  switch (op) {
    case Op::BvAdd:
      if (is_zero(args[0])) return args[1];
      if (is_zero(args[1])) return args[0];
      break;
    case Op::BvSub:
      if (is_zero(args[1])) return args[0];
      if (args[0] == args[1]) return bv_const(rs.width, 0);
      break;
    case Op::BvMul:
      if (is_one(args[0])) return args[1];
      if (is_one(args[1])) return args[0];
      if (is_zero(args[0]) || is_zero(args[1])) return bv_const(rs.width, 0);
      break;
    case Op::BvAnd:
      if (is_zero(args[0]) || is_zero(args[1])) return bv_const(rs.width, 0);
      if (is_ones(args[0])) return args[1];
      if (is_ones(args[1])) return args[0];
      if (args[0] == args[1]) return args[0];
      break;
    case Op::BvOr:
      if (is_zero(args[0])) return args[1];
      if (is_zero(args[1])) return args[0];
      if (is_ones(args[0]) || is_ones(args[1])) return bv_const(rs.width, mask_to(~uint64_t(0), rs.width));
      if (args[0] == args[1]) return args[0];
      break;
    case Op::BvXor:
      if (is_zero(args[0])) return args[1];
      if (is_zero(args[1])) return args[0];
      if (args[0] == args[1]) return bv_const(rs.width, 0);
      break;
    case Op::BvShl:
    case Op::BvLshr:
    case Op::BvAshr:
      if (is_zero(args[1])) return args[0];
      break;
    case Op::Eq:
      if (args[0] == args[1]) return true_;
      break;
    case Op::Not:
      if (args[0]->op == Op::Not) return args[0]->children[0];
      break;
    case Op::And:
      if (args[0] == true_) return args[1];
      if (args[1] == true_) return args[0];
      if (args[0] == false_ || args[1] == false_) return false_;
      if (args[0] == args[1]) return args[0];
      break;
    case Op::Or:
      if (args[0] == false_) return args[1];
      if (args[1] == false_) return args[0];
      if (args[0] == true_ || args[1] == true_) return true_;
      if (args[0] == args[1]) return args[0];
      break;
    case Op::Ite:
      if (args[0] == true_) return args[1];
      if (args[0] == false_) return args[2];
      if (args[1] == args[2]) return args[1];
      break;
    case Op::Extract: {
      Term x = args[0];
      if (imm_b == 0 && imm_a == x->sort.width - 1) return x;
      if (x->op == Op::Extract)  // compose nested extracts
        return mk(Op::Extract, {x->children[0]}, x->imm_b + imm_a, x->imm_b + imm_b);
      if (x->op == Op::Concat) {
        // narrow to a single part when the range lies fully inside it
        uint32_t lo_pos = 0;
        for (size_t i = x->children.size(); i-- > 0;) {
          Term part = x->children[i];
          uint32_t hi_pos = lo_pos + part->sort.width - 1;
          if (imm_b >= lo_pos && imm_a <= hi_pos)
            return mk(Op::Extract, {part}, imm_a - lo_pos, imm_b - lo_pos);
          lo_pos = hi_pos + 1;
        }
      }
      break;
    }
    case Op::Concat: {
      if (args.size() == 1) return args[0];
      // collapse concat of contiguous extracts of one base term
      Term base = nullptr;
      bool contiguous = true;
      uint32_t expect_hi = 0;
      for (size_t i = 0; i < args.size(); ++i) {
        Term p = args[i];
        if (p->op != Op::Extract) {
          contiguous = false;
          break;
        }
        if (i == 0) {
          base = p->children[0];
          expect_hi = p->imm_a;
        } else if (p->children[0] != base || p->imm_a != expect_hi) {
          contiguous = false;
          break;
        }
        expect_hi = p->imm_b == 0 ? ~uint32_t(0) : p->imm_b - 1;
      }
      if (contiguous && base) {
        Term first = args.front(), last = args.back();
        return mk(Op::Extract, {base}, first->imm_a, last->imm_b);
      }
      break;
    }
    case Op::ZeroExt:
    case Op::SignExt:
      if (imm_a == args[0]->sort.width) return args[0];
      break;
    default:
      break;
  }

  TermNode n;
  n.sort = rs;
  n.op = op;
  n.imm_a = imm_a;
  n.imm_b = imm_b;
  n.children.assign(args.begin(), args.end());
  return intern(std::move(n));
}

}  // namespace wasym

#include "wasym/sym/eval.hpp"  // fold_const definition
