#pragma once

// Term -> CNF lowering. Words are vectors of SAT literals, LSB first.
// Gate constructors fold constants, so circuits over constant operands
// reduce to constant literals at build time; the differential tests lean on
// this to compare circuit semantics against the native evaluator.

#include <unordered_map>

#include "wasym/smt/sat.hpp"
#include "wasym/sym/term.hpp"

namespace wasym::smt {

using sat::Lit;
using sat::Var;
using Word = std::vector<Lit>;

class BitBlaster {
public:
  explicit BitBlaster(sat::Solver& s) : sat_(s) {
    Var t = sat_.new_var();
    true_ = sat::mk_lit(t);
    sat_.add_clause({true_});
  }

  sat::Solver& solver() { return sat_; }
  Lit lit_true() const { return true_; }
  Lit lit_false() const { return ~true_; }
  Lit lit_const(bool b) const { return b ? true_ : lit_false(); }

  bool is_true(Lit l) const { return l == true_; }
  bool is_false(Lit l) const { return l == ~true_; }
  bool is_const(Lit l) const { return is_true(l) || is_false(l); }

  // --- gates (with constant and structural shortcuts) ----------------------

  Lit mk_and(Lit a, Lit b) {
    if (is_false(a) || is_false(b)) return lit_false();
    if (is_true(a)) return b;
    if (is_true(b)) return a;
    if (a == b) return a;
    if (a == ~b) return lit_false();
    Lit g = fresh();
    sat_.add_clause({~g, a});
    sat_.add_clause({~g, b});
    sat_.add_clause({g, ~a, ~b});
    return g;
  }

  Lit mk_or(Lit a, Lit b) { return ~mk_and(~a, ~b); }

  Lit mk_xor(Lit a, Lit b) {
    if (is_const(a)) return is_true(a) ? ~b : b;
    if (is_const(b)) return is_true(b) ? ~a : a;
    if (a == b) return lit_false();
    if (a == ~b) return true_;
    Lit g = fresh();
    sat_.add_clause({~g, a, b});
    sat_.add_clause({~g, ~a, ~b});
    sat_.add_clause({g, ~a, b});
    sat_.add_clause({g, a, ~b});
    return g;
  }

  Lit mk_iff(Lit a, Lit b) { return ~mk_xor(a, b); }

  Lit mk_mux(Lit c, Lit t, Lit e) {  // c ? t : e
    if (is_true(c)) return t;
    if (is_false(c)) return e;
    if (t == e) return t;
    if (is_true(t)) return mk_or(c, e);
    if (is_false(t)) return mk_and(~c, e);
    if (is_true(e)) return mk_or(~c, t);
    if (is_false(e)) return mk_and(c, t);
    if (t == ~e) return mk_xor(c, e);
    Lit g = fresh();
    sat_.add_clause({~g, ~c, t});
    sat_.add_clause({g, ~c, ~t});
    sat_.add_clause({~g, c, e});
    sat_.add_clause({g, c, ~e});
    return g;
  }

  // full adder: returns sum, writes carry-out
  Lit full_add(Lit a, Lit b, Lit cin, Lit& cout) {
    Lit axb = mk_xor(a, b);
    Lit sum = mk_xor(axb, cin);
    cout = mk_or(mk_and(a, b), mk_and(axb, cin));
    return sum;
  }

  // --- word helpers ---------------------------------------------------------

  Word const_word(uint32_t width, uint64_t value) {
    Word w(width);
    for (uint32_t i = 0; i < width; ++i)
      w[i] = lit_const(i < 64 && ((value >> i) & 1));
    return w;
  }

  bool word_is_const(const Word& w) const {
    for (Lit l : w)
      if (!is_const(l)) return false;
    return true;
  }
  uint64_t word_const_value(const Word& w) const {
    uint64_t v = 0;
    for (size_t i = 0; i < w.size() && i < 64; ++i)
      if (is_true(w[i])) v |= uint64_t(1) << i;
    return v;
  }

  Word add(const Word& a, const Word& b, Lit cin) {
    Word out(a.size());
    Lit c = cin;
    for (size_t i = 0; i < a.size(); ++i) out[i] = full_add(a[i], b[i], c, c);
    return out;
  }
  Word add(const Word& a, const Word& b) { return add(a, b, lit_false()); }
  Word sub(const Word& a, const Word& b) { return add(a, not_word(b), true_); }
  Word neg(const Word& a) { return add(not_word(a), const_word(uint32_t(a.size()), 0), true_); }

  Word not_word(const Word& a) {
    Word out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = ~a[i];
    return out;
  }
  Word and_word(const Word& a, const Word& b) {
    Word out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = mk_and(a[i], b[i]);
    return out;
  }
  Word or_word(const Word& a, const Word& b) {
    Word out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = mk_or(a[i], b[i]);
    return out;
  }
  Word xor_word(const Word& a, const Word& b) {
    Word out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = mk_xor(a[i], b[i]);
    return out;
  }
  Word mux_word(Lit c, const Word& t, const Word& e) {
    Word out(t.size());
    for (size_t i = 0; i < t.size(); ++i) out[i] = mk_mux(c, t[i], e[i]);
    return out;
  }

  Word zext_word(const Word& a, uint32_t width) {
    Word out = a;
    out.resize(width, lit_false());
    return out;
  }
  Word sext_word(const Word& a, uint32_t width) {
    Word out = a;
    out.resize(width, a.back());
    return out;
  }
  Word trunc_word(const Word& a, uint32_t width) {
    return Word(a.begin(), a.begin() + width);
  }

  Lit or_all(const Word& a) {
    Lit r = lit_false();
    for (Lit l : a) r = mk_or(r, l);
    return r;
  }
  Lit and_all(const Word& a) {
    Lit r = true_;
    for (Lit l : a) r = mk_and(r, l);
    return r;
  }

  Lit eq_word(const Word& a, const Word& b) {
    Lit r = true_;
    for (size_t i = 0; i < a.size(); ++i) r = mk_and(r, mk_iff(a[i], b[i]));
    return r;
  }

  Lit ult_word(const Word& a, const Word& b) {
    Lit lt = lit_false();
    for (size_t i = 0; i < a.size(); ++i)
      lt = mk_mux(mk_xor(a[i], b[i]), mk_and(~a[i], b[i]), lt);
    return lt;
  }
  Lit ule_word(const Word& a, const Word& b) { return ~ult_word(b, a); }
  Lit slt_word(const Word& a, const Word& b) {
    Word a2 = a, b2 = b;
    a2.back() = ~a2.back();
    b2.back() = ~b2.back();
    return ult_word(a2, b2);
  }
  Lit sle_word(const Word& a, const Word& b) { return ~slt_word(b, a); }

  Word mul(const Word& a, const Word& b) {
    size_t w = a.size();
    Word acc = const_word(uint32_t(w), 0);
    for (size_t i = 0; i < w; ++i) {
      if (is_false(b[i])) continue;
      // row: (a << i) & b_i, added into acc from bit i upward
      Word row(w - i);
      for (size_t j = 0; j + i < w; ++j) row[j] = mk_and(a[j], b[i]);
      Lit c = lit_false();
      for (size_t j = i; j < w; ++j)
        acc[j] = full_add(acc[j], row[j - i], c, c);
    }
    return acc;
  }

  // Restoring division; quotient/remainder with SMT-LIB zero-divisor
  // conventions applied by the caller.
  void udivrem(const Word& a, const Word& b, Word& quo, Word& rem) {
    size_t w = a.size();
    quo.assign(w, lit_false());
    Word r = const_word(uint32_t(w) + 1, 0);
    Word bx = zext_word(b, uint32_t(w) + 1);
    for (size_t i = w; i-- > 0;) {
      // r = (r << 1) | a_i
      for (size_t j = w; j > 0; --j) r[j] = r[j - 1];
      r[0] = a[i];
      Lit ge = ule_word(bx, r);
      Word diff = sub(r, bx);
      r = mux_word(ge, diff, r);
      quo[i] = ge;
    }
    rem = trunc_word(r, uint32_t(w));
  }

  // Variable shifts. Amount is a full-width word; amounts >= width produce
  // zero (or sign fill for arithmetic right shift).
  Word shl(const Word& a, const Word& amount) {
    return barrel(a, amount, /*left=*/true, lit_false());
  }
  Word lshr(const Word& a, const Word& amount) {
    return barrel(a, amount, /*left=*/false, lit_false());
  }
  Word ashr(const Word& a, const Word& amount) {
    return barrel(a, amount, /*left=*/false, a.back());
  }

  Word rotl(const Word& a, const Word& amount) { return rotate(a, amount, true); }
  Word rotr(const Word& a, const Word& amount) { return rotate(a, amount, false); }

  // shift right by amount, OR of dropped bits returned via sticky
  Word lshr_sticky(const Word& a, const Word& amount, Lit& sticky) {
    Word shifted = lshr(a, amount);
    // sticky = (shifted << amount) != a
    Word back = shl(shifted, amount);
    sticky = ~eq_word(back, a);
    return shifted;
  }

  Word clz(const Word& a) {
    uint32_t w = uint32_t(a.size());
    uint32_t rw = out_count_width(w);
    Word r = const_word(rw, w);
    for (uint32_t i = 0; i < w; ++i)  // higher set bits win
      r = mux_word(a[i], const_word(rw, w - 1 - i), r);
    return r;
  }
  Word ctz(const Word& a) {
    uint32_t w = uint32_t(a.size());
    uint32_t rw = out_count_width(w);
    Word r = const_word(rw, w);
    for (uint32_t i = w; i-- > 0;)
      r = mux_word(a[i], const_word(rw, i), r);
    return r;
  }
  Word popcnt(const Word& a) {
    uint32_t w = uint32_t(a.size());
    uint32_t rw = out_count_width(w);
    Word acc = const_word(rw, 0);
    for (uint32_t i = 0; i < w; ++i) {
      Word bit = zext_word(Word{a[i]}, rw);
      acc = add(acc, bit);
    }
    return acc;
  }

  // --- term lowering ---------------------------------------------------------

  // Boolean term to a literal.
  Lit literal(Term t);
  // Bitvector/float term to its bit representation.
  const Word& word(Term t);

  // Free variables with allocated bits (for model extraction).
  const std::unordered_map<Term, Word>& inputs() const { return inputs_; }

  // Read a variable's value from the solver model as raw bits.
  uint64_t model_bits(Term var) const {
    auto it = inputs_.find(var);
    if (it == inputs_.end()) return 0;
    uint64_t v = 0;
    const Word& w = it->second;
    for (size_t i = 0; i < w.size() && i < 64; ++i) {
      bool bit = sat_.model_value(sat::var_of(w[i]));
      if (sat::sign_of(w[i])) bit = !bit;
      if (bit) v |= uint64_t(1) << i;
    }
    return v;
  }

private:
  Lit fresh() { return sat::mk_lit(sat_.new_var()); }

  static uint32_t out_count_width(uint32_t w) {
    // width needed to hold values 0..w
    uint32_t rw = 1;
    while ((uint64_t(1) << rw) < uint64_t(w) + 1) ++rw;
    return std::max(rw, 1u);
  }

  Word barrel(const Word& a, const Word& amount, bool left, Lit fill) {
    uint32_t w = uint32_t(a.size());
    uint32_t stages = 0;
    while ((uint64_t(1) << stages) < w) ++stages;
    Word cur = a;
    for (uint32_t s = 0; s < stages && s < amount.size(); ++s) {
      uint32_t d = 1u << s;
      Word shifted(w, fill);
      if (left) {
        for (uint32_t i = d; i < w; ++i) shifted[i] = cur[i - d];
        for (uint32_t i = 0; i < d && i < w; ++i) shifted[i] = lit_false();
      } else {
        for (uint32_t i = 0; i + d < w; ++i) shifted[i] = cur[i + d];
        for (uint32_t i = (w >= d ? w - d : 0); i < w; ++i) shifted[i] = fill;
      }
      cur = mux_word(amount[s], shifted, cur);
    }
    // amount >= w (any higher bit set, or staged bits encode >= w)
    Lit over = lit_false();
    for (size_t s = stages; s < amount.size(); ++s) over = mk_or(over, amount[s]);
    if ((uint64_t(1) << stages) > w) {
      // non-power-of-two width: staged amount may still be >= w
      Word low = trunc_word(amount, std::min<uint32_t>(stages, uint32_t(amount.size())));
      Word wc = const_word(uint32_t(low.size()), w);
      over = mk_or(over, ule_word(wc, low));
    }
    return mux_word(over, Word(w, left ? lit_false() : fill), cur);
  }

  Word rotate(const Word& a, const Word& amount, bool left) {
    uint32_t w = uint32_t(a.size());
    assert((w & (w - 1)) == 0 && "rotate requires power-of-two width");
    uint32_t stages = 0;
    while ((1u << stages) < w) ++stages;
    Word cur = a;
    for (uint32_t s = 0; s < stages; ++s) {
      uint32_t d = 1u << s;
      Word rot(w);
      for (uint32_t i = 0; i < w; ++i)
        rot[i] = left ? cur[(i + w - d) % w] : cur[(i + d) % w];
      cur = mux_word(amount[s], rot, cur);
    }
    return cur;
  }

  void ensure(Term t);
  Lit lower_bool(Term t);
  Word lower(Term t);
  Word lower_float(Term t);  // defined in float_blast.hpp

  sat::Solver& sat_;
  Lit true_;
  std::unordered_map<Term, Word> words_;
  std::unordered_map<Term, Lit> bools_;
  std::unordered_map<Term, Word> inputs_;
};

// Iterative bottom-up lowering; terms can nest thousands of ites deep.
inline void BitBlaster::ensure(Term t) {
  auto cached = [&](Term x) {
    return x->sort.is_bool() ? bools_.count(x) != 0 : words_.count(x) != 0;
  };
  if (cached(t)) return;
  std::vector<std::pair<Term, bool>> work{{t, false}};
  while (!work.empty()) {
    auto [cur, ready] = work.back();
    work.pop_back();
    if (cached(cur)) continue;
    if (!ready) {
      work.push_back({cur, true});
      for (Term c : cur->children)
        if (!cached(c)) work.push_back({c, false});
      continue;
    }
    if (cur->sort.is_bool()) {
      bools_.emplace(cur, lower_bool(cur));
    } else {
      Word w = lower(cur);
      assert(w.size() == cur->sort.bits());
      words_.emplace(cur, std::move(w));
    }
  }
}

inline const Word& BitBlaster::word(Term t) {
  ensure(t);
  return words_.at(t);
}

inline Lit BitBlaster::literal(Term t) {
  assert(t->sort.is_bool());
  ensure(t);
  return bools_.at(t);
}

// Children are already lowered when this runs.
inline Lit BitBlaster::lower_bool(Term t) {
  Lit r;
  switch (t->op) {
    case Op::Const: r = lit_const(t->const_bool()); break;
    case Op::Var: {
      r = fresh();
      inputs_.emplace(t, Word{r});
      break;
    }
    case Op::Not: r = ~literal(t->children[0]); break;
    case Op::And: r = mk_and(literal(t->children[0]), literal(t->children[1])); break;
    case Op::Or: r = mk_or(literal(t->children[0]), literal(t->children[1])); break;
    case Op::Ite:
      r = mk_mux(literal(t->children[0]), literal(t->children[1]), literal(t->children[2]));
      break;
    case Op::Eq:
      if (t->children[0]->sort.is_bool())
        r = mk_iff(literal(t->children[0]), literal(t->children[1]));
      else
        r = eq_word(word(t->children[0]), word(t->children[1]));
      break;
    case Op::BvUlt: r = ult_word(word(t->children[0]), word(t->children[1])); break;
    case Op::BvUle: r = ule_word(word(t->children[0]), word(t->children[1])); break;
    case Op::BvSlt: r = slt_word(word(t->children[0]), word(t->children[1])); break;
    case Op::BvSle: r = sle_word(word(t->children[0]), word(t->children[1])); break;
    case Op::FEq:
    case Op::FLt:
    case Op::FLe: {
      Word w = lower_float(t);
      assert(w.size() == 1);
      r = w[0];
      break;
    }
    default:
      throw SortError(std::string("bitblast: boolean op expected, got ") + op_name(t->op));
  }
  return r;
}

inline Word BitBlaster::lower(Term t) {
  switch (t->op) {
    case Op::Const: {
      Word w(t->sort.bits());
      for (uint32_t i = 0; i < w.size(); ++i)
        w[i] = lit_const(detail::get_bit(t->bytes, i));
      return w;
    }
    case Op::Var: {
      Word w(t->sort.bits());
      for (auto& l : w) l = fresh();
      inputs_.emplace(t, w);
      return w;
    }
    case Op::BvNot: return not_word(word(t->children[0]));
    case Op::BvNeg: return neg(word(t->children[0]));
    case Op::BvClz: return zext_word(clz(word(t->children[0])), t->sort.width);
    case Op::BvCtz: return zext_word(ctz(word(t->children[0])), t->sort.width);
    case Op::BvPopcnt: return zext_word(popcnt(word(t->children[0])), t->sort.width);
    case Op::BvAdd: return add(word(t->children[0]), word(t->children[1]));
    case Op::BvSub: return sub(word(t->children[0]), word(t->children[1]));
    case Op::BvMul: return mul(word(t->children[0]), word(t->children[1]));
    case Op::BvUDiv:
    case Op::BvURem: {
      const Word& a = word(t->children[0]);
      const Word& b = word(t->children[1]);
      Word q, r;
      udivrem(a, b, q, r);
      Lit bz = ~or_all(b);
      if (t->op == Op::BvUDiv)
        return mux_word(bz, const_word(t->sort.width, ~uint64_t(0)), q);
      return mux_word(bz, a, r);
    }
    case Op::BvSDiv:
    case Op::BvSRem: {
      const Word& a = word(t->children[0]);
      const Word& b = word(t->children[1]);
      Lit sa = a.back(), sb = b.back();
      Word ma = mux_word(sa, neg(a), a);
      Word mb = mux_word(sb, neg(b), b);
      Word q, r;
      udivrem(ma, mb, q, r);
      Lit bz = ~or_all(b);
      if (t->op == Op::BvSDiv) {
        Word sq = mux_word(mk_xor(sa, sb), neg(q), q);
        // divisor 0: a<0 ? 1 : all-ones
        Word dz = mux_word(sa, const_word(t->sort.width, 1),
                           const_word(t->sort.width, ~uint64_t(0)));
        return mux_word(bz, dz, sq);
      }
      Word sr = mux_word(sa, neg(r), r);
      return mux_word(bz, a, sr);
    }
    case Op::BvAnd: return and_word(word(t->children[0]), word(t->children[1]));
    case Op::BvOr: return or_word(word(t->children[0]), word(t->children[1]));
    case Op::BvXor: return xor_word(word(t->children[0]), word(t->children[1]));
    case Op::BvShl: return shl(word(t->children[0]), word(t->children[1]));
    case Op::BvLshr: return lshr(word(t->children[0]), word(t->children[1]));
    case Op::BvAshr: return ashr(word(t->children[0]), word(t->children[1]));
    case Op::BvRotl: return rotl(word(t->children[0]), word(t->children[1]));
    case Op::BvRotr: return rotr(word(t->children[0]), word(t->children[1]));
    case Op::Ite: {
      if (t->sort.is_bool()) break;  // handled by literal()
      Lit c = literal(t->children[0]);
      return mux_word(c, word(t->children[1]), word(t->children[2]));
    }
    case Op::Extract: {
      const Word& x = word(t->children[0]);
      return Word(x.begin() + t->imm_b, x.begin() + t->imm_a + 1);
    }
    case Op::Concat: {
      Word out;
      out.reserve(t->sort.bits());
      for (size_t i = t->children.size(); i-- > 0;) {
        const Word& p = word(t->children[i]);
        out.insert(out.end(), p.begin(), p.end());
      }
      return out;
    }
    case Op::ZeroExt: return zext_word(word(t->children[0]), t->sort.width);
    case Op::SignExt: return sext_word(word(t->children[0]), t->sort.width);
    default:
      return lower_float(t);
  }
  throw SortError(std::string("bitblast: cannot lower ") + op_name(t->op));
}

}  // namespace wasym::smt

#include "wasym/smt/float_blast.hpp"
