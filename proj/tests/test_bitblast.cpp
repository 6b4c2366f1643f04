#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wasym/smt/solver.hpp"

using namespace wasym;
using smt::SolverSession;
using smt::Verdict;

namespace {

Term bits_of(TermManager& tm, Term t) {
  return t->sort.is_float() ? tm.mk(Op::FToBvBits, {t}) : t;
}

// Checks that the circuit for `t` (over variables) is forced to the value
// the evaluator computes when the variables are pinned to the model.
struct CircuitChecker {
  TermManager& tm;
  SolverSession sess;

  explicit CircuitChecker(TermManager& t) : tm(t), sess(t) {}

  void expect_equal(Term t, const Model& pins, Term expected) {
    std::vector<Term> preds;
    for (auto& [name, val] : pins.assignment) {
      Term v = tm.var(name, val->sort);
      preds.push_back(tm.eq(bits_of(tm, v), bits_of(tm, val)));
    }
    Term rb = bits_of(tm, t);
    Term eb = bits_of(tm, expected);
    preds.push_back(tm.ne(rb, eb));
    auto r1 = sess.check(preds);
    if (r1.verdict != Verdict::Unsat) {
      UNSCOPED_INFO("circuit disagrees with eval");
      for (auto& [name, val] : pins.assignment)
        UNSCOPED_INFO(name << " = 0x" << std::hex << val->const_u64());
      UNSCOPED_INFO("expected 0x" << std::hex << eb->const_u64() << " for "
                                  << op_name(t->op));
      if (r1.verdict == Verdict::Sat) {
        Term got = eval(tm, rb, r1.model);
        UNSCOPED_INFO("circuit value 0x" << std::hex << got->const_u64());
      }
      REQUIRE(r1.verdict == Verdict::Unsat);
    }
    preds.back() = tm.eq(rb, eb);
    auto r2 = sess.check(preds);
    REQUIRE(r2.verdict == Verdict::Sat);
  }

  // builds op over per-op vars (small propagation cones), checks circuit
  void check_bin(Op op, Sort s, uint64_t a, uint64_t b) {
    std::string k = std::string(op_name(op)) + std::to_string(s.bits());
    Term x = tm.var("x" + k, s);
    Term y = tm.var("y" + k, s);
    Term t = tm.mk(op, {x, y});
    Term ca = tm.const_of_sort(s, s.is_bv() ? mask_to(a, s.width) : a);
    Term cb = tm.const_of_sort(s, s.is_bv() ? mask_to(b, s.width) : b);
    Term expected = tm.mk(op, {ca, cb});
    Model pins;
    pins.assignment[x->name] = ca;
    pins.assignment[y->name] = cb;
    expect_equal(t, pins, expected);
  }

  void check_un(Op op, Sort s, uint64_t a, uint32_t imm = 0) {
    Term x = tm.var("ux" + std::string(op_name(op)) + std::to_string(s.bits()) + "_" + std::to_string(imm), s);
    Term t = tm.mk(op, {x}, imm);
    Term ca = tm.const_of_sort(s, s.is_bv() ? mask_to(a, s.width) : a);
    Term expected = tm.mk(op, {ca}, imm);
    Model pins;
    pins.assignment[x->name] = ca;
    expect_equal(t, pins, expected);
  }
};

}  // namespace

TEST_CASE("exhaustive 4-bit binary ops") {
  TermManager tm;
  CircuitChecker cc(tm);
  static const Op ops[] = {Op::BvAdd, Op::BvSub, Op::BvMul, Op::BvUDiv,
                           Op::BvSDiv, Op::BvURem, Op::BvSRem, Op::BvAnd,
                           Op::BvOr, Op::BvXor, Op::BvShl, Op::BvLshr,
                           Op::BvAshr, Op::BvRotl, Op::BvRotr, Op::Eq,
                           Op::BvUlt, Op::BvUle, Op::BvSlt, Op::BvSle};
  for (Op op : ops) {
    if ((op == Op::BvRotl || op == Op::BvRotr)) continue;  // need pow2 width
    for (uint64_t a = 0; a < 16; ++a)
      for (uint64_t b = 0; b < 16; ++b) cc.check_bin(op, Sort::bv(4), a, b);
  }
  // rotates on 8-bit
  for (uint64_t a = 0; a < 256; a += 37)
    for (uint64_t b = 0; b < 16; ++b) {
      cc.check_bin(Op::BvRotl, Sort::bv(8), a, b);
      cc.check_bin(Op::BvRotr, Sort::bv(8), a, b);
    }
}

TEST_CASE("exhaustive 4-bit unary ops") {
  TermManager tm;
  CircuitChecker cc(tm);
  for (Op op : {Op::BvNot, Op::BvNeg, Op::BvClz, Op::BvCtz, Op::BvPopcnt})
    for (uint64_t a = 0; a < 16; ++a) cc.check_un(op, Sort::bv(4), a);
}

TEST_CASE("random wide ops agree with eval") {
  TermManager tm;
  CircuitChecker cc(tm);
  std::mt19937_64 rng(31337);
  static const Op ops[] = {Op::BvAdd, Op::BvSub, Op::BvMul, Op::BvUDiv,
                           Op::BvSDiv, Op::BvURem, Op::BvSRem, Op::BvAnd,
                           Op::BvOr, Op::BvXor, Op::BvShl, Op::BvLshr,
                           Op::BvAshr, Op::BvRotl, Op::BvRotr, Op::Eq,
                           Op::BvUlt, Op::BvUle, Op::BvSlt, Op::BvSle};
  auto interesting = [&](uint32_t w) -> uint64_t {
    switch (rng() % 6) {
      case 0: return 0;
      case 1: return 1;
      case 2: return mask_to(~uint64_t(0), w);                    // all ones
      case 3: return uint64_t(1) << (w - 1);                      // sign bit
      case 4: return mask_to(rng(), w) & 0xff;                    // small
      default: return mask_to(rng(), w);
    }
  };
  for (uint32_t w : {32u, 64u}) {
    for (Op op : ops) {
      for (int i = 0; i < 12; ++i) {
        uint64_t a = interesting(w);
        uint64_t b = interesting(w);
        if (op == Op::BvShl || op == Op::BvLshr || op == Op::BvAshr)
          if (i % 2) b = rng() % (w + 4);  // mostly sane shift amounts
        cc.check_bin(op, Sort::bv(w), a, b);
      }
    }
    for (Op op : {Op::BvNot, Op::BvNeg, Op::BvClz, Op::BvCtz, Op::BvPopcnt})
      for (int i = 0; i < 8; ++i) cc.check_un(op, Sort::bv(w), interesting(w));
  }
}

TEST_CASE("extend and extract circuits") {
  TermManager tm;
  CircuitChecker cc(tm);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    uint64_t a = rng();
    cc.check_un(Op::ZeroExt, Sort::bv(13), mask_to(a, 13), 40);
    cc.check_un(Op::SignExt, Sort::bv(13), mask_to(a, 13), 40);
  }
  // extract via a composite: ite picking bytes
  Term x = tm.var("ex32", Sort::bv(32));
  Term t = tm.extract(23, 8, x);
  Model pins;
  pins.assignment["ex32"] = tm.bv_const(32, 0xDDCCBBAA);
  cc.expect_equal(t, pins, tm.bv_const(16, 0xCCBB));
}

TEST_CASE("solving finds models for invertible constraints") {
  TermManager tm;
  SolverSession sess(tm);

  // x * x == 1369 over bv16 with x < 100: x should be 37
  Term x = tm.var("sq", Sort::bv(16));
  std::vector<Term> preds = {
      tm.eq(tm.mk(Op::BvMul, {x, x}), tm.bv_const(16, 1369)),
      tm.ult(x, tm.bv_const(16, 100))};
  auto r = sess.check(preds);
  REQUIRE(r.verdict == Verdict::Sat);
  REQUIRE(eval_bool(tm, preds[0], r.model));
  REQUIRE(eval_bool(tm, preds[1], r.model));
  REQUIRE(r.model.lookup("sq")->const_u64() == 37);

  // chained arithmetic: 5-byte password check shape
  std::vector<Term> cs;
  const char* pw = "hello";
  for (int i = 0; i < 5; ++i) {
    Term b = tm.var("b" + std::to_string(i), Sort::bv(8));
    cs.push_back(tm.eq(b, tm.bv_const(8, uint8_t(pw[i]))));
  }
  auto r2 = sess.check(cs);
  REQUIRE(r2.verdict == Verdict::Sat);
  std::string solved;
  for (int i = 0; i < 5; ++i)
    solved += char(r2.model.lookup("b" + std::to_string(i))->const_u64());
  REQUIRE(solved == "hello");

  // unsatisfiable pair with core
  Term y = tm.var("core_y", Sort::bv(32));
  Term p1 = tm.eq(y, tm.bv_const(32, 1));
  Term p2 = tm.eq(y, tm.bv_const(32, 2));
  Term p3 = tm.ult(y, tm.bv_const(32, 50));
  auto r3 = sess.check(std::vector<Term>{p3, p1, p2});
  REQUIRE(r3.verdict == Verdict::Unsat);
  REQUIRE(!r3.core.empty());
  for (Term c : r3.core) REQUIRE((c == p1 || c == p2 || c == p3));
}

TEST_CASE("random constraint sets agree with brute force") {
  TermManager tm;
  std::mt19937_64 rng(777);

  for (int round = 0; round < 120; ++round) {
    SolverSession sess(tm);
    Term x = tm.var("bf_x" + std::to_string(round), Sort::bv(8));
    Term y = tm.var("bf_y" + std::to_string(round), Sort::bv(8));

    auto rand_val = [&]() -> Term {
      switch (rng() % 4) {
        case 0: return x;
        case 1: return y;
        case 2: return tm.bv_const(8, rng());
        default: {
          static const Op ops[] = {Op::BvAdd, Op::BvSub, Op::BvMul, Op::BvAnd,
                                   Op::BvOr,  Op::BvXor, Op::BvShl, Op::BvLshr};
          return tm.mk(ops[rng() % 8],
                       {rng() % 2 ? x : y, tm.bv_const(8, rng() % 16)});
        }
      }
    };
    std::vector<Term> preds;
    int n = 1 + int(rng() % 4);
    for (int i = 0; i < n; ++i) {
      static const Op cmps[] = {Op::Eq, Op::BvUlt, Op::BvUle, Op::BvSlt, Op::BvSle};
      Term p = tm.mk(cmps[rng() % 5], {rand_val(), rand_val()});
      if (rng() % 4 == 0) p = tm.bnot(p);
      preds.push_back(p);
    }

    bool expect_sat = false;
    for (uint32_t a = 0; a < 256 && !expect_sat; ++a)
      for (uint32_t b = 0; b < 256 && !expect_sat; ++b) {
        Model m;
        m.assignment[x->name] = tm.bv_const(8, a);
        m.assignment[y->name] = tm.bv_const(8, b);
        bool all = true;
        for (Term p : preds)
          if (!eval_bool(tm, p, m)) {
            all = false;
            break;
          }
        expect_sat = all;
      }

    auto r = sess.check(preds);
    REQUIRE(r.verdict == (expect_sat ? Verdict::Sat : Verdict::Unsat));
    if (r.verdict == Verdict::Sat)
      for (Term p : preds) REQUIRE(eval_bool(tm, p, r.model));
  }
}

TEST_CASE("incremental prefix reuse skips re-encoding") {
  TermManager tm;
  SolverSession sess(tm);
  Term x = tm.var("inc_x", Sort::bv(32));
  std::vector<Term> preds;
  for (int i = 0; i < 20; ++i) {
    preds.push_back(tm.ult(tm.bv_const(32, i), tm.add(x, tm.bv_const(32, i))));
    auto r = sess.check(preds);
    REQUIRE(r.verdict == Verdict::Sat);
  }
  // each predicate encoded exactly once despite 20 queries over prefixes
  REQUIRE(sess.stats().new_predicates_encoded == 20);
  REQUIRE(sess.stats().reused_predicates == 19 * 20 / 2);
}
