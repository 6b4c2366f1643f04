#pragma once

// IEEE-754 circuits over SAT literals (softfloat style): unpack, normalize,
// round-to-nearest-even, pack with subnormal squeeze and overflow-to-inf.
// NaN results are the canonical quiet NaN, matching the evaluator's
// deterministic profile. Gate-level constant folding makes these circuits
// collapse on concrete operands, which the tests compare against native
// floating point.

#include "wasym/smt/bitblast.hpp"

namespace wasym::smt {

namespace fdetail {

struct FloatFmt {
  uint32_t total, expw, manw;
  uint32_t bias() const { return (1u << (expw - 1)) - 1; }
  uint32_t max_exp() const { return (1u << expw) - 1; }
  // working exponent width (signed): fits sums/differences of biased exps
  uint32_t ew() const { return expw + 3; }
  // working significand width: hidden at manw+3, then guard/round/sticky
  uint32_t mw() const { return manw + 4; }
  uint64_t canon_nan() const {
    return ((uint64_t(1) << expw) - 1) << manw | (uint64_t(1) << (manw - 1));
  }
};

inline FloatFmt fmt_of(Sort s) {
  return s.kind == SortKind::F32 ? FloatFmt{32, 8, 23} : FloatFmt{64, 11, 52};
}

struct Unpacked {
  Lit sign;
  Word exp;   // biased, expw bits
  Word frac;  // manw bits
  Lit exp_all0, exp_all1, frac_zero;
  Lit is_nan, is_inf, is_zero;
};

}  // namespace fdetail

// The float pipeline lives in a helper so the format/threading state stays
// together; BitBlaster::lower_float drives it.
class FloatCircuits {
public:
  FloatCircuits(BitBlaster& bb, fdetail::FloatFmt f) : b(bb), fmt(f) {}

  BitBlaster& b;
  fdetail::FloatFmt fmt;

  Word econst(int64_t v) { return b.const_word(fmt.ew(), uint64_t(v)); }

  fdetail::Unpacked unpack(const Word& x) {
    fdetail::Unpacked u;
    u.sign = x[fmt.total - 1];
    u.exp = Word(x.begin() + fmt.manw, x.begin() + fmt.manw + fmt.expw);
    u.frac = Word(x.begin(), x.begin() + fmt.manw);
    u.exp_all0 = ~b.or_all(u.exp);
    u.exp_all1 = b.and_all(u.exp);
    u.frac_zero = ~b.or_all(u.frac);
    u.is_nan = b.mk_and(u.exp_all1, ~u.frac_zero);
    u.is_inf = b.mk_and(u.exp_all1, u.frac_zero);
    u.is_zero = b.mk_and(u.exp_all0, u.frac_zero);
    return u;
  }

  Word pack(Lit sign, const Word& exp_field, const Word& frac_field) {
    Word out;
    out.reserve(fmt.total);
    out.insert(out.end(), frac_field.begin(), frac_field.end());
    out.insert(out.end(), exp_field.begin(), exp_field.end());
    out.push_back(sign);
    return out;
  }

  Word canon_nan_word() { return b.const_word(fmt.total, fmt.canon_nan()); }
  Word inf_word(Lit sign) {
    return pack(sign, b.const_word(fmt.expw, fmt.max_exp()), b.const_word(fmt.manw, 0));
  }
  Word zero_word(Lit sign) {
    return pack(sign, b.const_word(fmt.expw, 0), b.const_word(fmt.manw, 0));
  }

  // Effective significand (hidden bit applied) and effective biased exponent
  // (subnormals read as exponent 1), both unnormalized.
  Word eff_sig(const fdetail::Unpacked& u) {
    Word sig = u.frac;
    sig.push_back(~u.exp_all0);  // hidden bit
    return sig;                  // manw+1 bits
  }
  Word eff_exp(const fdetail::Unpacked& u) {
    Word e = b.zext_word(u.exp, fmt.ew());
    return b.mux_word(u.exp_all0, econst(1), e);
  }

  // Normalized: shifts the significand so the top bit is set (caller must
  // exclude zero), adjusting the exponent.
  void normalize(const fdetail::Unpacked& u, Word& sig, Word& e) {
    sig = eff_sig(u);
    e = eff_exp(u);
    Word lz = b.clz(sig);  // 0 for normal numbers
    Word lzw = b.zext_word(lz, fmt.ew());
    sig = b.shl(sig, lz);
    e = b.sub(e, lzw);
  }

  // Round-to-nearest-even and pack. `e` is the biased exponent (signed, any
  // width up to 16 bits, may be <= 0 or >= max); `m` has mw = manw+4 bits
  // with the hidden bit at manw+3 and guard/round/sticky at bits 2..0.
  // Requires the hidden bit to be set unless e <= 1 (subnormal flows).
  Word round_pack(Lit sign, Word e, Word m) {
    uint32_t mw = fmt.mw();
    assert(m.size() == mw && e.size() <= 16);
    e = b.sext_word(e, 16);
    auto c16 = [&](int64_t v) { return b.const_word(16, uint64_t(v)); };

    // subnormal squeeze: if e <= 0 shift right by 1-e, jamming into sticky
    Lit sub = b.sle_word(e, c16(0));
    Word shift_amt = b.sub(c16(1), e);
    // clamp to mw+1 so the barrel shifter cost stays bounded
    Lit big = b.slt_word(c16(int64_t(mw)), shift_amt);
    Word clamped = b.mux_word(big, c16(int64_t(mw) + 1), shift_amt);
    Word amt = b.mux_word(sub, clamped, c16(0));
    Lit sticky_extra = b.lit_false();
    Word squeezed = lshr_jam(m, b.trunc_word(amt, 8), sticky_extra);
    m = squeezed;
    m[0] = b.mk_or(m[0], sticky_extra);
    e = b.mux_word(sub, c16(1), e);

    // round to nearest even
    Lit lsb = m[3], g = m[2], r = m[1], s = m[0];
    Lit round_up = b.mk_and(g, b.mk_or(r, b.mk_or(s, lsb)));
    Word kept = Word(m.begin() + 3, m.end());  // manw+1 bits
    kept = b.zext_word(kept, fmt.manw + 2);
    Word rounded = b.add(kept, b.zext_word(Word{round_up}, fmt.manw + 2));
    Lit carry = rounded[fmt.manw + 1];
    // carry means rounded == 2^(manw+1): take the shifted value, bump exp
    Word sig_final = b.mux_word(carry,
                                b.const_word(fmt.manw + 1, uint64_t(1) << fmt.manw),
                                b.trunc_word(rounded, fmt.manw + 1));
    e = b.mux_word(carry, b.add(e, c16(1)), e);

    // overflow to infinity
    Lit overflow = b.sle_word(c16(int64_t(fmt.max_exp())), e);
    // subnormal result: hidden bit clear -> exponent field 0
    Lit hidden = sig_final[fmt.manw];
    Word exp_field = b.mux_word(hidden, b.trunc_word(e, fmt.expw), b.const_word(fmt.expw, 0));
    Word frac_field = b.trunc_word(sig_final, fmt.manw);
    Word packed = pack(sign, exp_field, frac_field);
    return b.mux_word(overflow, inf_word(sign), packed);
  }

  // Right shift with jam (sticky OR of shifted-out bits) — amount word may
  // be narrow; amounts >= width give 0 with sticky = (m != 0).
  Word lshr_jam(const Word& m, const Word& amount, Lit& sticky) {
    Word shifted = b.lshr(m, b.zext_word(amount, uint32_t(m.size())));
    Word back = b.shl(shifted, b.zext_word(amount, uint32_t(m.size())));
    sticky = ~b.eq_word(back, m);
    return shifted;
  }

  // --- addition/subtraction -------------------------------------------------

  Word fadd(const Word& xa, const Word& xb) {
    auto ua = unpack(xa), ub = unpack(xb);

    // order by magnitude (exp|frac as unsigned)
    Word mag_a(xa.begin(), xa.end() - 1), mag_b(xb.begin(), xb.end() - 1);
    Lit swap = b.ult_word(mag_a, mag_b);
    Lit sx = b.mk_mux(swap, ub.sign, ua.sign);
    Lit sy = b.mk_mux(swap, ua.sign, ub.sign);
    Word sig_x = b.mux_word(swap, eff_sig(ub), eff_sig(ua));
    Word sig_y = b.mux_word(swap, eff_sig(ua), eff_sig(ub));
    Word ex = b.mux_word(swap, eff_exp(ub), eff_exp(ua));
    Word ey = b.mux_word(swap, eff_exp(ua), eff_exp(ub));

    uint32_t mw = fmt.mw();
    sig_x = b.shl(b.zext_word(sig_x, mw), b.const_word(mw, 3));
    sig_y = b.shl(b.zext_word(sig_y, mw), b.const_word(mw, 3));

    Word d = b.sub(ex, ey);  // >= 0
    Lit jam = b.lit_false();
    Word dn = b.trunc_word(d, std::min<uint32_t>(fmt.ew(), 8));
    // d may exceed the narrow window only when ex is large; then y shifts to
    // pure sticky anyway. Saturate the narrow amount in that case.
    Lit d_big = b.sle_word(econst(int64_t(mw) + 1), d);
    Word dcap = b.mux_word(d_big, b.const_word(uint32_t(dn.size()), mw + 1), dn);
    sig_y = lshr_jam(sig_y, dcap, jam);
    sig_y[0] = b.mk_or(sig_y[0], jam);

    Lit eff_sub = b.mk_xor(sx, sy);
    Word sx5 = b.zext_word(sig_x, mw + 1);
    Word sy5 = b.zext_word(sig_y, mw + 1);
    Word sum = b.add(sx5, sy5);
    Word diff = b.sub(sx5, sy5);
    Word val = b.mux_word(eff_sub, diff, sum);  // mw+1 bits, non-negative

    // effective add: possible carry into bit mw
    Lit carry = val[mw];
    // effective subtract: normalize left, clamped so e stays >= 1
    Word lz = b.zext_word(b.clz(b.trunc_word(val, mw)), fmt.ew());
    Word avail = b.sub(ex, econst(1));
    Lit use_avail = b.slt_word(avail, lz);
    Word lshift = b.mux_word(use_avail, avail, lz);
    lshift = b.mux_word(eff_sub, lshift, econst(0));

    Word m = b.trunc_word(val, mw);
    Word m_shifted = b.shl(m, b.trunc_word(lshift, mw > 8 ? 8 : mw));
    Word e_out = b.sub(ex, lshift);

    // carry path (effective add only): shift right 1 with jam
    Word m_carry(mw, b.lit_false());
    for (uint32_t i = 0; i + 1 < mw; ++i) m_carry[i] = val[i + 1];
    m_carry[mw - 1] = val[mw];
    m_carry[0] = b.mk_or(m_carry[0], val[0]);
    Word e_carry = b.add(ex, econst(1));

    Lit add_carry = b.mk_and(~eff_sub, carry);
    m = b.mux_word(add_carry, m_carry, m_shifted);
    e_out = b.mux_word(add_carry, e_carry, e_out);

    // exact zero result: x - x gives +0 under RNE; 0 + 0 keeps the sign
    Lit val_zero = b.mk_and(~b.or_all(b.trunc_word(val, mw)), ~val[mw]);
    Lit res_sign = b.mk_mux(b.mk_and(eff_sub, val_zero), b.lit_false(), sx);

    Word res = round_pack(res_sign, e_out, m);
    res = b.mux_word(val_zero, zero_word(res_sign), res);

    // specials
    Lit either_nan = b.mk_or(ua.is_nan, ub.is_nan);
    Lit inf_conflict = b.mk_and(b.mk_and(ua.is_inf, ub.is_inf), b.mk_xor(ua.sign, ub.sign));
    Word inf_res = b.mux_word(ua.is_inf, inf_word(ua.sign), inf_word(ub.sign));
    Lit any_inf = b.mk_or(ua.is_inf, ub.is_inf);

    res = b.mux_word(any_inf, inf_res, res);
    res = b.mux_word(b.mk_or(either_nan, inf_conflict), canon_nan_word(), res);
    return res;
  }

  // --- multiplication ---------------------------------------------------------

  Word fmul(const Word& xa, const Word& xb) {
    auto ua = unpack(xa), ub = unpack(xb);
    Lit sign = b.mk_xor(ua.sign, ub.sign);

    Word siga, ea, sigb, eb;
    normalize(ua, siga, ea);
    normalize(ub, sigb, eb);

    uint32_t pw = 2 * (fmt.manw + 1);
    Word p = b.mul(b.zext_word(siga, pw), b.zext_word(sigb, pw));
    Lit top = p[pw - 1];
    // left-align so the leading one sits at pw-1
    Word pn = b.mux_word(top, p, b.shl(p, b.const_word(pw, 1)));
    // m: hidden at manw+3 -> take top manw+4 bits, jam the rest
    Word m(fmt.mw());
    for (uint32_t i = 0; i < fmt.mw(); ++i) m[i] = pn[pw - fmt.mw() + i];
    Lit sticky = b.or_all(Word(pn.begin(), pn.begin() + (pw - fmt.mw())));
    m[0] = b.mk_or(m[0], sticky);

    Word e = b.add(b.sub(b.add(ea, eb), econst(int64_t(fmt.bias()))),
                   b.mux_word(top, econst(1), econst(0)));

    Word res = round_pack(sign, e, m);

    Lit either_nan = b.mk_or(ua.is_nan, ub.is_nan);
    Lit inf_times_zero = b.mk_or(b.mk_and(ua.is_inf, ub.is_zero),
                                 b.mk_and(ub.is_inf, ua.is_zero));
    Lit any_inf = b.mk_or(ua.is_inf, ub.is_inf);
    Lit any_zero = b.mk_or(ua.is_zero, ub.is_zero);
    res = b.mux_word(any_zero, zero_word(sign), res);
    res = b.mux_word(any_inf, inf_word(sign), res);
    res = b.mux_word(b.mk_or(either_nan, inf_times_zero), canon_nan_word(), res);
    return res;
  }

  // --- division -----------------------------------------------------------------

  Word fdiv(const Word& xa, const Word& xb) {
    auto ua = unpack(xa), ub = unpack(xb);
    Lit sign = b.mk_xor(ua.sign, ub.sign);

    Word siga, ea, sigb, eb;
    normalize(ua, siga, ea);
    normalize(ub, sigb, eb);

    // pre-shift so the quotient lands in [1,2)
    Lit lt = b.ult_word(siga, sigb);
    uint32_t nw = (fmt.manw + 1) + (fmt.manw + 4);
    Word num = b.zext_word(siga, nw);
    num = b.shl(num, b.const_word(nw, fmt.manw + 3));
    num = b.mux_word(lt, b.shl(num, b.const_word(nw, 1)), num);
    Word den = b.zext_word(sigb, nw);

    Word q, r;
    b.udivrem(num, den, q, r);
    Word m = b.trunc_word(q, fmt.mw());
    m[0] = b.mk_or(m[0], b.or_all(r));

    Word e = b.add(b.sub(ea, eb), econst(int64_t(fmt.bias())));
    e = b.mux_word(lt, b.sub(e, econst(1)), e);

    Word res = round_pack(sign, e, m);

    Lit either_nan = b.mk_or(ua.is_nan, ub.is_nan);
    Lit nan_case = b.mk_or(either_nan,
                           b.mk_or(b.mk_and(ua.is_inf, ub.is_inf),
                                   b.mk_and(ua.is_zero, ub.is_zero)));
    res = b.mux_word(b.mk_or(ua.is_zero, ub.is_inf), zero_word(sign), res);
    res = b.mux_word(b.mk_or(ua.is_inf, ub.is_zero), inf_word(sign), res);
    res = b.mux_word(nan_case, canon_nan_word(), res);
    return res;
  }

  // --- square root ----------------------------------------------------------------

  Word fsqrt(const Word& x) {
    auto u = unpack(x);

    Word sig, e;
    normalize(u, sig, e);
    Word ue = b.sub(e, econst(int64_t(fmt.bias())));
    Lit odd = ue[0];
    Word k = b.ashr(ue, econst(1));  // floor division by 2

    // X = sig << (manw + 4 + odd), 2*(manw+3) bits
    uint32_t n = fmt.manw + 3;
    uint32_t xw = 2 * n;
    Word X = b.zext_word(sig, xw);
    X = b.shl(X, b.const_word(xw, fmt.manw + 4));
    X = b.mux_word(odd, b.shl(X, b.const_word(xw, 1)), X);

    // bit-serial integer sqrt: q = floor(sqrt(X)), n bits
    Word q(n, b.lit_false());
    Word rem = b.const_word(n + 2, 0);
    for (uint32_t i = n; i-- > 0;) {
      // rem = (rem << 2) | X[2i+1:2i]
      Word r2(n + 2);
      r2[0] = X[2 * i];
      r2[1] = X[2 * i + 1];
      for (uint32_t j = 2; j < n + 2; ++j) r2[j] = rem[j - 2];
      // trial = 4*Q_partial + 1, where Q_partial holds the bits above i
      Word trial(n + 2, b.lit_false());
      trial[0] = b.lit_true();
      for (uint32_t j = i + 1; j < n; ++j) trial[j - i + 1] = q[j];
      Lit ge = b.ule_word(trial, r2);
      rem = b.mux_word(ge, b.sub(r2, trial), r2);
      q[i] = ge;
    }
    Lit inexact = b.or_all(rem);

    // m = q << 1 | sticky (hidden lands at manw+3)
    Word m(fmt.mw());
    m[0] = inexact;
    for (uint32_t i = 0; i < n; ++i) m[i + 1] = q[i];
    Word e_res = b.add(k, econst(int64_t(fmt.bias())));

    Word res = round_pack(b.lit_false(), e_res, m);

    Lit neg_nonzero = b.mk_and(u.sign, ~u.is_zero);
    res = b.mux_word(u.is_zero, zero_word(u.sign), res);
    res = b.mux_word(b.mk_and(u.is_inf, ~u.sign), inf_word(b.lit_false()), res);
    res = b.mux_word(b.mk_or(u.is_nan, neg_nonzero), canon_nan_word(), res);
    return res;
  }

  // --- integer-valued rounding (ceil/floor/trunc/nearest) ---------------------------

  Word fround(const Word& x, Op op) {
    auto u = unpack(x);
    Word ue = b.sub(eff_exp(u), econst(int64_t(fmt.bias())));  // unbiased

    // |x| >= 2^manw: already integral (also inf passes through)
    Lit exact = b.sle_word(econst(int64_t(fmt.manw)), ue);

    // |x| < 1 (covers subnormals): result is 0 or +-1
    Lit small = b.slt_word(ue, econst(0));
    Word one = pack(u.sign, b.const_word(fmt.expw, fmt.bias()), b.const_word(fmt.manw, 0));
    Word zero = zero_word(u.sign);
    Lit mag_nonzero = ~u.is_zero;
    Lit small_up;  // round magnitude up to 1?
    {
      Lit gt_half, eq_half;
      // |x| > 0.5 iff E == bias-1 and frac != 0; |x| == 0.5 iff E == bias-1, frac == 0
      Lit e_is_half = b.eq_word(u.exp, b.const_word(fmt.expw, fmt.bias() - 1));
      gt_half = b.mk_and(e_is_half, ~u.frac_zero);
      eq_half = b.mk_and(e_is_half, u.frac_zero);
      switch (op) {
        case Op::FCeil: small_up = b.mk_and(~u.sign, mag_nonzero); break;
        case Op::FFloor: small_up = b.mk_and(u.sign, mag_nonzero); break;
        case Op::FTrunc: small_up = b.lit_false(); break;
        default: small_up = gt_half; (void)eq_half; break;  // ties go to even 0
      }
    }
    Word small_res = b.mux_word(small_up, one, zero);

    // general: drop k = manw - ue low bits of the significand
    Word sig = eff_sig(u);  // manw+1 bits
    Word k = b.sub(econst(int64_t(fmt.manw)), ue);
    Word kn = b.trunc_word(k, 8);
    uint32_t sw = fmt.manw + 2;
    Word sig2 = b.zext_word(sig, sw);
    Word shifted = b.lshr(sig2, b.zext_word(kn, sw));
    Word truncated = b.shl(shifted, b.zext_word(kn, sw));
    Word dropped = b.sub(sig2, truncated);
    Lit any_dropped = b.or_all(dropped);
    Lit kept_lsb = shifted[0];

    Lit up;
    switch (op) {
      case Op::FCeil: up = b.mk_and(~u.sign, any_dropped); break;
      case Op::FFloor: up = b.mk_and(u.sign, any_dropped); break;
      case Op::FTrunc: up = b.lit_false(); break;
      default: {  // FNearest
        // compare dropped against half = 1 << (k-1)
        Word half = b.shl(b.const_word(sw, 1), b.zext_word(b.sub(kn, b.const_word(8, 1)), sw));
        Lit gt = b.ult_word(half, dropped);
        Lit eq = b.eq_word(half, dropped);
        up = b.mk_or(gt, b.mk_and(eq, kept_lsb));
        break;
      }
    }
    Word step = b.shl(b.const_word(sw, 1), b.zext_word(kn, sw));
    Word mag = b.add(truncated, b.mux_word(up, step, b.const_word(sw, 0)));
    // mag is either in [2^manw, 2^(manw+1)) or exactly 2^(manw+1)
    Lit ovf = mag[fmt.manw + 1];
    Word e_out = b.mux_word(ovf, b.add(eff_exp(u), econst(1)), eff_exp(u));
    Word frac_out = b.mux_word(ovf, b.const_word(fmt.manw, 0), b.trunc_word(mag, fmt.manw));
    Lit result_zero = ~b.or_all(mag);
    Word packed = pack(u.sign, b.trunc_word(e_out, fmt.expw), frac_out);
    packed = b.mux_word(result_zero, zero, packed);

    Word res = b.mux_word(small, small_res, packed);
    res = b.mux_word(exact, x, res);
    res = b.mux_word(u.is_nan, canon_nan_word(), res);
    return res;
  }

  // --- conversions -------------------------------------------------------------------

  // float -> wrapped two's complement integer (see eval for the semantics)
  Word f_to_int(const Word& x, uint32_t w) {
    auto u = unpack(x);
    Word m = eff_sig(u);  // manw+1
    uint32_t ext = std::max(w, fmt.manw + 1);
    Word mw = b.zext_word(m, ext);

    Word sh = b.sub(b.zext_word(u.exp, fmt.ew()),
                    econst(int64_t(fmt.bias()) + int64_t(fmt.manw)));
    Lit sh_neg = sh[fmt.ew() - 1];
    Word pos_amt = b.trunc_word(sh, 8);
    Word neg_amt = b.trunc_word(b.neg(sh), 8);
    // clamp both to <= ext so barrel width stays small
    auto clamp8 = [&](Word a) {
      Lit big = b.ult_word(b.const_word(8, ext), a);
      return b.mux_word(big, b.const_word(8, ext), a);
    };
    // the clamp is only valid when the true amount fits; amounts larger than
    // ext zero everything either way
    Lit pos_big = b.sle_word(econst(int64_t(ext)), sh);
    Lit neg_big = b.sle_word(econst(int64_t(ext)), b.neg(sh));
    Word left = b.shl(mw, b.zext_word(clamp8(pos_amt), ext));
    left = b.mux_word(pos_big, b.const_word(ext, 0), left);
    Word right = b.lshr(mw, b.zext_word(clamp8(neg_amt), ext));
    right = b.mux_word(neg_big, b.const_word(ext, 0), right);
    Word mag = b.trunc_word(b.mux_word(sh_neg, right, left), w);

    Word res = b.mux_word(u.sign, b.neg(mag), mag);
    Lit zero_case = b.mk_or(u.exp_all1, u.exp_all0);  // nan/inf/subnormal/zero
    return b.mux_word(zero_case, b.const_word(w, 0), res);
  }

  // two's complement / unsigned integer -> float, RNE
  Word int_to_f(const Word& v, bool is_signed) {
    uint32_t w = uint32_t(v.size());
    Lit sign = is_signed ? v[w - 1] : b.lit_false();
    Word mag = is_signed ? b.mux_word(sign, b.neg(v), v) : v;
    Lit is_zero = ~b.or_all(mag);

    Word lz = b.clz(mag);
    uint32_t w2 = w + fmt.mw();
    Word ext = b.zext_word(mag, w2);
    Word norm = b.shl(ext, b.zext_word(lz, w2));  // top bit at w-1.. shifted to w-1? no:
    // after shifting by lz, the msb sits at w-1; move it to w2-1
    norm = b.shl(norm, b.const_word(w2, fmt.mw()));
    Word m(fmt.mw());
    for (uint32_t i = 0; i < fmt.mw(); ++i) m[i] = norm[w2 - fmt.mw() + i];
    Lit sticky = b.or_all(Word(norm.begin(), norm.begin() + (w2 - fmt.mw())));
    m[0] = b.mk_or(m[0], sticky);

    // e = bias + (w - 1 - lz)
    Word e = b.sub(econst(int64_t(fmt.bias()) + int64_t(w) - 1),
                   b.zext_word(lz, fmt.ew()));
    Word res = round_pack(sign, e, m);
    return b.mux_word(is_zero, zero_word(b.lit_false()), res);
  }

  // --- comparisons ------------------------------------------------------------------

  Lit feq(const Word& xa, const Word& xb) {
    auto ua = unpack(xa), ub = unpack(xb);
    Lit any_nan = b.mk_or(ua.is_nan, ub.is_nan);
    Lit both_zero = b.mk_and(ua.is_zero, ub.is_zero);
    Lit bits_eq = b.eq_word(xa, xb);
    return b.mk_and(~any_nan, b.mk_or(bits_eq, both_zero));
  }

  Lit flt(const Word& xa, const Word& xb) {
    auto ua = unpack(xa), ub = unpack(xb);
    Lit any_nan = b.mk_or(ua.is_nan, ub.is_nan);
    Lit both_zero = b.mk_and(ua.is_zero, ub.is_zero);
    Word mag_a(xa.begin(), xa.end() - 1), mag_b(xb.begin(), xb.end() - 1);
    Lit mlt = b.ult_word(mag_a, mag_b);
    Lit mgt = b.ult_word(mag_b, mag_a);
    // sign cases: a<0<=b (and not both zero); same sign: compare magnitudes
    Lit diff_sign = b.mk_xor(ua.sign, ub.sign);
    Lit lt_diff = b.mk_and(ua.sign, ~both_zero);
    Lit lt_same = b.mk_mux(ua.sign, mgt, mlt);
    Lit lt = b.mk_mux(diff_sign, lt_diff, lt_same);
    return b.mk_and(~any_nan, lt);
  }

  Lit fle(const Word& xa, const Word& xb) {
    auto ua = unpack(xa), ub = unpack(xb);
    Lit any_nan = b.mk_or(ua.is_nan, ub.is_nan);
    Lit eq = feq(xa, xb);
    Lit lt = flt(xa, xb);
    return b.mk_and(~any_nan, b.mk_or(lt, eq));
  }

  // --- min/max/sign ops ----------------------------------------------------------------

  Word fmin(const Word& xa, const Word& xb) {
    auto ua = unpack(xa), ub = unpack(xb);
    Lit any_nan = b.mk_or(ua.is_nan, ub.is_nan);
    Lit both_zero = b.mk_and(ua.is_zero, ub.is_zero);
    Word zero_res = zero_word(b.mk_or(ua.sign, ub.sign));
    Word sel = b.mux_word(flt(xa, xb), xa, xb);
    Word res = b.mux_word(both_zero, zero_res, sel);
    return b.mux_word(any_nan, canon_nan_word(), res);
  }
  Word fmax(const Word& xa, const Word& xb) {
    auto ua = unpack(xa), ub = unpack(xb);
    Lit any_nan = b.mk_or(ua.is_nan, ub.is_nan);
    Lit both_zero = b.mk_and(ua.is_zero, ub.is_zero);
    Word zero_res = zero_word(b.mk_and(ua.sign, ub.sign));
    Word sel = b.mux_word(flt(xa, xb), xb, xa);
    Word res = b.mux_word(both_zero, zero_res, sel);
    return b.mux_word(any_nan, canon_nan_word(), res);
  }

  // --- width conversions ------------------------------------------------------------------

  // exact widening; narrowing rounds via round_pack. `this` is built for the
  // *target* format; exponent arithmetic runs at 16 bits to cover both.
  Word promote_from(const Word& x, fdetail::FloatFmt src) {
    FloatCircuits sc(b, src);
    auto u = sc.unpack(x);
    Word sig, e;
    sc.normalize(u, sig, e);  // sig: src.manw+1 bits, hidden at top
    // rebase: unbiased exponent, then into the target format
    Word ue = b.sub(b.sext_word(e, 16), b.const_word(16, uint64_t(src.bias())));
    Word m = b.zext_word(sig, fmt.mw());
    m = b.shl(m, b.const_word(fmt.mw(), fmt.mw() - (src.manw + 1)));
    Word e_t = b.add(ue, b.const_word(16, uint64_t(fmt.bias())));
    Word res = round_pack(u.sign, e_t, m);
    res = b.mux_word(u.is_zero, zero_word(u.sign), res);
    res = b.mux_word(u.is_inf, inf_word(u.sign), res);
    return b.mux_word(u.is_nan, canon_nan_word(), res);
  }

  // narrowing with RNE (f64 -> f32): this object is the target format
  Word demote_from(const Word& x, fdetail::FloatFmt src) {
    FloatCircuits sc(b, src);
    auto u = sc.unpack(x);
    Word sig, e;
    sc.normalize(u, sig, e);  // src.manw+1 bits
    uint32_t drop = (src.manw + 1) - (fmt.manw + 4);  // 53-27=26 for f64->f32
    Word m(fmt.mw());
    for (uint32_t i = 0; i < fmt.mw(); ++i) m[i] = sig[drop + i];
    Lit sticky = b.or_all(Word(sig.begin(), sig.begin() + drop));
    m[0] = b.mk_or(m[0], sticky);
    Word ue = b.sub(b.sext_word(e, 16), b.const_word(16, uint64_t(src.bias())));
    Word e_t = b.add(ue, b.const_word(16, uint64_t(fmt.bias())));
    Word res = round_pack(u.sign, e_t, m);
    res = b.mux_word(u.is_zero, zero_word(u.sign), res);
    res = b.mux_word(u.is_inf, inf_word(u.sign), res);
    return b.mux_word(u.is_nan, canon_nan_word(), res);
  }
};

inline Word BitBlaster::lower_float(Term t) {
  using fdetail::fmt_of;
  auto fc = [&](Sort s) { return FloatCircuits(*this, fmt_of(s)); };

  switch (t->op) {
    case Op::FAdd: {
      FloatCircuits f = fc(t->sort);
      return f.fadd(word(t->children[0]), word(t->children[1]));
    }
    case Op::FSub: {
      FloatCircuits f = fc(t->sort);
      Word nb = word(t->children[1]);
      nb.back() = ~nb.back();  // exact sign flip
      return f.fadd(word(t->children[0]), nb);
    }
    case Op::FMul: {
      FloatCircuits f = fc(t->sort);
      return f.fmul(word(t->children[0]), word(t->children[1]));
    }
    case Op::FDiv: {
      FloatCircuits f = fc(t->sort);
      return f.fdiv(word(t->children[0]), word(t->children[1]));
    }
    case Op::FMin: {
      FloatCircuits f = fc(t->sort);
      return f.fmin(word(t->children[0]), word(t->children[1]));
    }
    case Op::FMax: {
      FloatCircuits f = fc(t->sort);
      return f.fmax(word(t->children[0]), word(t->children[1]));
    }
    case Op::FCopysign: {
      Word a = word(t->children[0]);
      const Word& b2 = word(t->children[1]);
      a.back() = b2.back();
      return a;
    }
    case Op::FAbs: {
      Word a = word(t->children[0]);
      a.back() = lit_false();
      return a;
    }
    case Op::FNeg: {
      Word a = word(t->children[0]);
      a.back() = ~a.back();
      return a;
    }
    case Op::FSqrt: {
      FloatCircuits f = fc(t->sort);
      return f.fsqrt(word(t->children[0]));
    }
    case Op::FCeil:
    case Op::FFloor:
    case Op::FTrunc:
    case Op::FNearest: {
      FloatCircuits f = fc(t->sort);
      return f.fround(word(t->children[0]), t->op);
    }
    case Op::FEq:
    case Op::FLt:
    case Op::FLe: {
      FloatCircuits f = fc(t->children[0]->sort);
      const Word& a = word(t->children[0]);
      const Word& b2 = word(t->children[1]);
      Lit r = t->op == Op::FEq ? f.feq(a, b2)
              : t->op == Op::FLt ? f.flt(a, b2)
                                 : f.fle(a, b2);
      return Word{r};
    }
    case Op::FToSBv:
    case Op::FToUBv: {
      FloatCircuits f = fc(t->children[0]->sort);
      return f.f_to_int(word(t->children[0]), t->sort.width);
    }
    case Op::SBvToF:
    case Op::UBvToF: {
      FloatCircuits f = fc(t->sort);
      return f.int_to_f(word(t->children[0]), t->op == Op::SBvToF);
    }
    case Op::FPromote: {
      FloatCircuits f = fc(Sort::f64());
      return f.promote_from(word(t->children[0]), fdetail::fmt_of(Sort::f32()));
    }
    case Op::FDemote: {
      FloatCircuits f = fc(Sort::f32());
      return f.demote_from(word(t->children[0]), fdetail::fmt_of(Sort::f64()));
    }
    case Op::BvToFBits:
    case Op::FToBvBits:
      return word(t->children[0]);
    default:
      break;
  }
  throw SortError(std::string("bitblast: unhandled op ") + op_name(t->op));
}

}  // namespace wasym::smt
