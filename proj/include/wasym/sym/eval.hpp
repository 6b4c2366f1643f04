#pragma once

// Concrete evaluation of terms and the constant-folding core shared with
// TermManager::mk. Bit-level semantics here are the reference the SAT
// bit-blaster is tested against, so every operation must be total and
// deterministic (including the NaN and out-of-range conventions).

#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "wasym/sym/term.hpp"

namespace wasym {

struct UnboundVariable : std::runtime_error {
  explicit UnboundVariable(const std::string& name)
      : std::runtime_error("unbound variable: " + name) {}
};

// Assignment from variable names to constant terms of matching sort.
struct Model {
  std::map<std::string, Term> assignment;

  Term lookup(const std::string& name) const {
    auto it = assignment.find(name);
    return it == assignment.end() ? nullptr : it->second;
  }
  bool empty() const { return assignment.empty(); }
};

namespace detail {

// Little-endian bit access over byte arrays (bit i lives in bytes[i/8]).
inline bool get_bit(const std::vector<uint8_t>& b, uint32_t i) {
  return (b[i / 8] >> (i % 8)) & 1;
}
inline void set_bit(std::vector<uint8_t>& b, uint32_t i, bool v) {
  if (v)
    b[i / 8] |= uint8_t(1u << (i % 8));
  else
    b[i / 8] &= uint8_t(~(1u << (i % 8)));
}

inline std::vector<uint8_t> extract_bits(const std::vector<uint8_t>& src,
                                         uint32_t lo, uint32_t count) {
  std::vector<uint8_t> out((count + 7) / 8, 0);
  if (lo % 8 == 0 && count % 8 == 0) {
    std::memcpy(out.data(), src.data() + lo / 8, count / 8);
    return out;
  }
  for (uint32_t i = 0; i < count; ++i) set_bit(out, i, get_bit(src, lo + i));
  return out;
}

constexpr uint32_t kCanonNan32 = 0x7fc00000u;
constexpr uint64_t kCanonNan64 = 0x7ff8000000000000ull;

inline float canon32(float f) {
  if (std::isnan(f)) {
    float out;
    uint32_t b = kCanonNan32;
    std::memcpy(&out, &b, 4);
    return out;
  }
  return f;
}
inline double canon64(double d) {
  if (std::isnan(d)) {
    double out;
    uint64_t b = kCanonNan64;
    std::memcpy(&out, &b, 8);
    return out;
  }
  return d;
}

template <typename F>
F wasm_fmin(F a, F b) {
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<F>::quiet_NaN();
  if (a == F(0) && b == F(0))
    return (std::signbit(a) || std::signbit(b)) ? -F(0) : F(0);
  return a < b ? a : b;
}
template <typename F>
F wasm_fmax(F a, F b) {
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<F>::quiet_NaN();
  if (a == F(0) && b == F(0))
    return (std::signbit(a) && std::signbit(b)) ? -F(0) : F(0);
  return a > b ? a : b;
}

// Round-to-nearest, ties to even, without relying on the FP environment.
template <typename F>
F roundeven(F x) {
  if (std::isnan(x) || std::isinf(x)) return x;
  F fl = std::floor(x);
  F diff = x - fl;
  F r;
  if (diff < F(0.5))
    r = fl;
  else if (diff > F(0.5))
    r = fl + F(1);
  else {
    // tie: pick the even neighbor
    F half = fl / F(2);
    r = (half == std::floor(half)) ? fl : fl + F(1);
  }
  if (r == F(0) && std::signbit(x)) r = -F(0);  // zero keeps the input's sign
  return r;
}

// Truncate toward zero and wrap to w bits (two's complement). NaN and
// infinity map to 0. This is the total semantics of FToSBv/FToUBv; Wasm trap
// conditions are asserted separately by the emulator.
inline uint64_t f64_bits_to_wrapped_int(uint64_t bits, uint32_t w) {
  uint64_t sign = bits >> 63;
  uint32_t be = uint32_t((bits >> 52) & 0x7ff);
  uint64_t frac = bits & ((uint64_t(1) << 52) - 1);
  if (be == 0x7ff) return 0;  // nan or inf
  if (be == 0) return 0;      // subnormal, |x| < 1
  uint64_t m = frac | (uint64_t(1) << 52);
  int32_t e = int32_t(be) - 1075;  // value = m * 2^e
  uint64_t mag;
  if (e >= 64)
    mag = 0;
  else if (e >= 0)
    mag = m << e;
  else if (e <= -53)
    mag = 0;
  else
    mag = m >> (-e);
  uint64_t v = sign ? (~mag + 1) : mag;
  return mask_to(v, w);
}

inline uint64_t f32_bits_to_wrapped_int(uint32_t bits, uint32_t w) {
  uint64_t sign = bits >> 31;
  uint32_t be = (bits >> 23) & 0xff;
  uint64_t frac = bits & ((1u << 23) - 1);
  if (be == 0xff) return 0;
  if (be == 0) return 0;
  uint64_t m = frac | (1u << 23);
  int32_t e = int32_t(be) - 150;  // value = m * 2^e
  uint64_t mag;
  if (e >= 64)
    mag = 0;
  else if (e >= 0)
    mag = m << e;
  else if (e <= -24)
    mag = 0;
  else
    mag = m >> (-e);
  uint64_t v = sign ? (~mag + 1) : mag;
  return mask_to(v, w);
}

}  // namespace detail

// Shared constant-application core: all args are Const terms.
inline Term TermManager::fold_const(Op op, std::span<const Term> args,
                                    Sort rs, uint32_t imm_a, uint32_t imm_b) {
  using namespace detail;
  auto u = [&](size_t i) { return args[i]->const_u64(); };
  auto w0 = [&] { return args[0]->sort.width; };
  auto bvc = [&](uint64_t v) { return bv_const(rs.width, v); };
  auto boolc = [&](bool b) { return bool_const(b); };
  auto s = [&](size_t i) { return sign_extend_of(args[i]->const_u64(), args[i]->sort.width); };

  switch (op) {
    case Op::BvNot: return bvc(~u(0));
    case Op::BvNeg: return bvc(~u(0) + 1);
    case Op::BvClz: {
      uint64_t v = u(0);
      uint32_t w = w0();
      return bvc(v == 0 ? w : uint32_t(std::countl_zero(v)) - (64 - w));
    }
    case Op::BvCtz: {
      uint64_t v = u(0);
      uint32_t w = w0();
      return bvc(v == 0 ? w : uint32_t(std::countr_zero(v)));
    }
    case Op::BvPopcnt: return bvc(uint64_t(std::popcount(u(0))));
    case Op::BvAdd: return bvc(u(0) + u(1));
    case Op::BvSub: return bvc(u(0) - u(1));
    case Op::BvMul: return bvc(u(0) * u(1));
    case Op::BvUDiv: return bvc(u(1) == 0 ? ~uint64_t(0) : u(0) / u(1));
    case Op::BvSDiv: {
      int64_t a = s(0), b = s(1);
      if (b == 0) return bvc(a < 0 ? 1 : ~uint64_t(0));
      if (b == -1) return bvc(uint64_t(-a));  // INT_MIN/-1 wraps
      return bvc(uint64_t(a / b));
    }
    case Op::BvURem: return bvc(u(1) == 0 ? u(0) : u(0) % u(1));
    case Op::BvSRem: {
      int64_t a = s(0), b = s(1);
      if (b == 0) return bvc(uint64_t(a));
      if (b == -1) return bvc(0);
      return bvc(uint64_t(a % b));
    }
    case Op::BvAnd: return bvc(u(0) & u(1));
    case Op::BvOr: return bvc(u(0) | u(1));
    case Op::BvXor: return bvc(u(0) ^ u(1));
    case Op::BvShl: {
      uint64_t n = u(1);
      return bvc(n >= w0() ? 0 : u(0) << n);
    }
    case Op::BvLshr: {
      uint64_t n = u(1);
      return bvc(n >= w0() ? 0 : mask_to(u(0), w0()) >> n);
    }
    case Op::BvAshr: {
      uint64_t n = u(1);
      uint32_t w = w0();
      int64_t a = s(0);
      if (n >= w) return bvc(a < 0 ? ~uint64_t(0) : 0);
      return bvc(uint64_t(a >> n));
    }
    case Op::BvRotl: {
      uint32_t w = w0();
      uint64_t n = u(1) % w, v = mask_to(u(0), w);
      return bvc(n == 0 ? v : (v << n) | (v >> (w - n)));
    }
    case Op::BvRotr: {
      uint32_t w = w0();
      uint64_t n = u(1) % w, v = mask_to(u(0), w);
      return bvc(n == 0 ? v : (v >> n) | (v << (w - n)));
    }
    case Op::Eq:
      return boolc(args[0]->bytes == args[1]->bytes);
    case Op::BvUlt: return boolc(mask_to(u(0), w0()) < mask_to(u(1), w0()));
    case Op::BvUle: return boolc(mask_to(u(0), w0()) <= mask_to(u(1), w0()));
    case Op::BvSlt: return boolc(s(0) < s(1));
    case Op::BvSle: return boolc(s(0) <= s(1));
    case Op::Not: return boolc(!args[0]->const_bool());
    case Op::And: return boolc(args[0]->const_bool() && args[1]->const_bool());
    case Op::Or: return boolc(args[0]->const_bool() || args[1]->const_bool());
    case Op::Ite: return args[0]->const_bool() ? args[1] : args[2];
    case Op::Extract: {
      auto bits = extract_bits(args[0]->bytes, imm_b, imm_a - imm_b + 1);
      return intern_const(rs, std::move(bits));
    }
    case Op::Concat: {
      std::vector<uint8_t> out((rs.width + 7) / 8, 0);
      uint32_t pos = 0;  // fill from least significant = last child first
      for (size_t i = args.size(); i-- > 0;) {
        uint32_t cw = args[i]->sort.width;
        for (uint32_t j = 0; j < cw; ++j)
          set_bit(out, pos + j, get_bit(args[i]->bytes, j));
        pos += cw;
      }
      return intern_const(rs, std::move(out));
    }
    case Op::ZeroExt: {
      std::vector<uint8_t> out((rs.width + 7) / 8, 0);
      std::memcpy(out.data(), args[0]->bytes.data(), args[0]->bytes.size());
      // clear stray bits above the source width inside its top byte
      for (uint32_t i = args[0]->sort.width; i < uint32_t(args[0]->bytes.size()) * 8 && i < rs.width; ++i)
        set_bit(out, i, false);
      return intern_const(rs, std::move(out));
    }
    case Op::SignExt: {
      uint32_t sw = args[0]->sort.width;
      bool sign = get_bit(args[0]->bytes, sw - 1);
      std::vector<uint8_t> out((rs.width + 7) / 8, sign ? 0xff : 0x00);
      for (uint32_t i = 0; i < sw; ++i) set_bit(out, i, get_bit(args[0]->bytes, i));
      for (uint32_t i = rs.width; i < uint32_t(out.size()) * 8; ++i) set_bit(out, i, false);
      return intern_const(rs, std::move(out));
    }
    case Op::FAdd:
      return rs.kind == SortKind::F32 ? f32_const(canon32(args[0]->const_f32() + args[1]->const_f32()))
                                      : f64_const(canon64(args[0]->const_f64() + args[1]->const_f64()));
    case Op::FSub:
      return rs.kind == SortKind::F32 ? f32_const(canon32(args[0]->const_f32() - args[1]->const_f32()))
                                      : f64_const(canon64(args[0]->const_f64() - args[1]->const_f64()));
    case Op::FMul:
      return rs.kind == SortKind::F32 ? f32_const(canon32(args[0]->const_f32() * args[1]->const_f32()))
                                      : f64_const(canon64(args[0]->const_f64() * args[1]->const_f64()));
    case Op::FDiv:
      return rs.kind == SortKind::F32 ? f32_const(canon32(args[0]->const_f32() / args[1]->const_f32()))
                                      : f64_const(canon64(args[0]->const_f64() / args[1]->const_f64()));
    case Op::FMin:
      return rs.kind == SortKind::F32 ? f32_const(canon32(wasm_fmin(args[0]->const_f32(), args[1]->const_f32())))
                                      : f64_const(canon64(wasm_fmin(args[0]->const_f64(), args[1]->const_f64())));
    case Op::FMax:
      return rs.kind == SortKind::F32 ? f32_const(canon32(wasm_fmax(args[0]->const_f32(), args[1]->const_f32())))
                                      : f64_const(canon64(wasm_fmax(args[0]->const_f64(), args[1]->const_f64())));
    case Op::FCopysign: {
      // pure bit manipulation, NaN payloads preserved
      if (rs.kind == SortKind::F32) {
        uint32_t a = uint32_t(u(0)), b = uint32_t(u(1));
        return const_of_sort(rs, (a & 0x7fffffffu) | (b & 0x80000000u));
      }
      return const_of_sort(rs, (u(0) & ~(uint64_t(1) << 63)) | (u(1) & (uint64_t(1) << 63)));
    }
    case Op::FAbs:
      return rs.kind == SortKind::F32 ? const_of_sort(rs, u(0) & 0x7fffffffu)
                                      : const_of_sort(rs, u(0) & ~(uint64_t(1) << 63));
    case Op::FNeg:
      return rs.kind == SortKind::F32 ? const_of_sort(rs, u(0) ^ 0x80000000u)
                                      : const_of_sort(rs, u(0) ^ (uint64_t(1) << 63));
    case Op::FSqrt:
      return rs.kind == SortKind::F32 ? f32_const(canon32(std::sqrt(args[0]->const_f32())))
                                      : f64_const(canon64(std::sqrt(args[0]->const_f64())));
    case Op::FCeil:
      return rs.kind == SortKind::F32 ? f32_const(canon32(std::ceil(args[0]->const_f32())))
                                      : f64_const(canon64(std::ceil(args[0]->const_f64())));
    case Op::FFloor:
      return rs.kind == SortKind::F32 ? f32_const(canon32(std::floor(args[0]->const_f32())))
                                      : f64_const(canon64(std::floor(args[0]->const_f64())));
    case Op::FTrunc:
      return rs.kind == SortKind::F32 ? f32_const(canon32(std::trunc(args[0]->const_f32())))
                                      : f64_const(canon64(std::trunc(args[0]->const_f64())));
    case Op::FNearest:
      return rs.kind == SortKind::F32 ? f32_const(canon32(roundeven(args[0]->const_f32())))
                                      : f64_const(canon64(roundeven(args[0]->const_f64())));
    case Op::FEq:
      return boolc(args[0]->sort.kind == SortKind::F32
                       ? args[0]->const_f32() == args[1]->const_f32()
                       : args[0]->const_f64() == args[1]->const_f64());
    case Op::FLt:
      return boolc(args[0]->sort.kind == SortKind::F32
                       ? args[0]->const_f32() < args[1]->const_f32()
                       : args[0]->const_f64() < args[1]->const_f64());
    case Op::FLe:
      return boolc(args[0]->sort.kind == SortKind::F32
                       ? args[0]->const_f32() <= args[1]->const_f32()
                       : args[0]->const_f64() <= args[1]->const_f64());
    case Op::FToSBv:
    case Op::FToUBv:
      return bvc(args[0]->sort.kind == SortKind::F32
                     ? f32_bits_to_wrapped_int(uint32_t(u(0)), rs.width)
                     : f64_bits_to_wrapped_int(u(0), rs.width));
    case Op::SBvToF:
      return rs.kind == SortKind::F32 ? f32_const(float(s(0))) : f64_const(double(s(0)));
    case Op::UBvToF:
      return rs.kind == SortKind::F32 ? f32_const(float(mask_to(u(0), w0())))
                                      : f64_const(double(mask_to(u(0), w0())));
    case Op::FPromote: return f64_const(canon64(double(args[0]->const_f32())));
    case Op::FDemote: return f32_const(canon32(float(args[0]->const_f64())));
    case Op::BvToFBits: return const_of_sort(rs, u(0));
    case Op::FToBvBits: return bvc(u(0));
    case Op::Const:
    case Op::Var:
      break;
  }
  throw SortError("fold_const: not an application");
}

// Structural evaluation of t under m. Every free variable of t must be
// assigned. Returns a constant term.
inline Term eval(TermManager& tm, Term t, const Model& m) {
  std::unordered_map<Term, Term> memo;
  // explicit stack; terms can be deep (ite chains from memory modeling)
  std::vector<std::pair<Term, bool>> work{{t, false}};
  while (!work.empty()) {
    auto [cur, ready] = work.back();
    work.pop_back();
    if (memo.count(cur)) continue;
    if (cur->op == Op::Const) {
      memo[cur] = cur;
      continue;
    }
    if (cur->op == Op::Var) {
      Term v = m.lookup(cur->name);
      if (!v) throw UnboundVariable(cur->name);
      if (v->sort != cur->sort) throw SortError("model sort mismatch for " + cur->name);
      memo[cur] = v;
      continue;
    }
    if (!ready) {
      work.push_back({cur, true});
      for (Term c : cur->children)
        if (!memo.count(c)) work.push_back({c, false});
      continue;
    }
    std::vector<Term> folded;
    folded.reserve(cur->children.size());
    for (Term c : cur->children) folded.push_back(memo.at(c));
    memo[cur] = tm.fold_const(cur->op, folded, cur->sort, cur->imm_a, cur->imm_b);
  }
  return memo.at(t);
}

// Evaluate a boolean term to a bool.
inline bool eval_bool(TermManager& tm, Term t, const Model& m) {
  return eval(tm, t, m)->const_bool();
}

}  // namespace wasym
