#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wasym/sym/eval.hpp"
#include "wasym/sym/path_condition.hpp"
#include "wasym/sym/term.hpp"

using namespace wasym;

TEST_CASE("constant folding") {
  TermManager tm;
  Term five = tm.mk(Op::BvAdd, {tm.bv_const(32, 2), tm.bv_const(32, 3)});
  REQUIRE(five->is_const());
  REQUIRE(five->const_u64() == 5);

  // wraparound mod 2^32
  Term zero = tm.mk(Op::BvAdd, {tm.bv_const(32, 0xFFFFFFFF), tm.bv_const(32, 1)});
  REQUIRE(zero->const_u64() == 0);

  // identity simplification
  Term x = tm.var("x", Sort::bv(32));
  REQUIRE(tm.mk(Op::BvAdd, {x, tm.bv_const(32, 0)}) == x);
  REQUIRE(tm.mk(Op::BvMul, {x, tm.bv_const(32, 1)}) == x);
  REQUIRE(tm.mk(Op::BvAnd, {x, tm.bv_const(32, 0)})->const_u64() == 0);
  REQUIRE(tm.ite(tm.true_term(), x, tm.bv_const(32, 9)) == x);
  REQUIRE(tm.ite(tm.var("c", Sort::boolean()), x, x) == x);
}

TEST_CASE("hash consing gives structural identity") {
  TermManager tm;
  Term x = tm.var("x", Sort::bv(32));
  Term a = tm.add(x, tm.bv_const(32, 7));
  Term b = tm.add(x, tm.bv_const(32, 7));
  REQUIRE(a == b);
  REQUIRE(tm.var("x", Sort::bv(32)) == x);
}

TEST_CASE("sort errors are rejected") {
  TermManager tm;
  Term x32 = tm.var("x", Sort::bv(32));
  Term x64 = tm.var("y", Sort::bv(64));
  REQUIRE_THROWS_AS(tm.mk(Op::BvAdd, {x32, x64}), SortError);
  REQUIRE_THROWS_AS(tm.mk(Op::And, {x32, x32}), SortError);
  REQUIRE_THROWS_AS(tm.mk(Op::Extract, {x32}, 32, 0), SortError);
}

TEST_CASE("eval basics") {
  TermManager tm;
  Model empty;
  REQUIRE(eval(tm, tm.bv_const(32, 7), empty)->const_u64() == 7);

  Term x = tm.var("x", Sort::bv(32));
  Term t = tm.ite(tm.mk(Op::BvSlt, {tm.bv_const(32, 0), x}), tm.bv_const(32, 1),
                  tm.bv_const(32, 2));
  Model m;
  m.assignment["x"] = tm.bv_const(32, 5);
  REQUIRE(eval(tm, t, m)->const_u64() == 1);

  // bit-slice oracle: extract(15,8, 0xAABBCCDD) == (0xAABBCCDD >> 8) & 0xff
  uint32_t expect = (0xAABBCCDDu >> 8) & 0xFF;
  REQUIRE(expect == 0xCC);
  Term ext = tm.extract(15, 8, tm.bv_const(32, 0xAABBCCDD));
  REQUIRE(ext->const_u64() == expect);

  REQUIRE_THROWS_AS(eval(tm, x, empty), UnboundVariable);
}

TEST_CASE("division and shift conventions") {
  TermManager tm;
  auto c32 = [&](uint64_t v) { return tm.bv_const(32, v); };
  // total division semantics used by both eval and the bit-blaster
  REQUIRE(tm.mk(Op::BvUDiv, {c32(5), c32(0)})->const_u64() == 0xFFFFFFFF);
  REQUIRE(tm.mk(Op::BvURem, {c32(5), c32(0)})->const_u64() == 5);
  REQUIRE(tm.mk(Op::BvSDiv, {c32(0x80000000), c32(0xFFFFFFFF)})->const_u64() == 0x80000000);
  REQUIRE(tm.mk(Op::BvSRem, {c32(0x80000000), c32(0xFFFFFFFF)})->const_u64() == 0);
  REQUIRE(tm.mk(Op::BvSDiv, {c32(uint32_t(-7)), c32(2)})->const_u64() == uint32_t(-3));
  REQUIRE(tm.mk(Op::BvSRem, {c32(uint32_t(-7)), c32(2)})->const_u64() == uint32_t(-1));
  // shifts beyond width
  REQUIRE(tm.mk(Op::BvShl, {c32(1), c32(40)})->const_u64() == 0);
  REQUIRE(tm.mk(Op::BvAshr, {c32(0x80000000), c32(40)})->const_u64() == 0xFFFFFFFF);
  // rotates
  REQUIRE(tm.mk(Op::BvRotl, {c32(0x80000001), c32(1)})->const_u64() == 3);
  REQUIRE(tm.mk(Op::BvRotr, {c32(0x80000001), c32(1)})->const_u64() == 0xC0000000);
  // clz/ctz/popcnt
  REQUIRE(tm.mk(Op::BvClz, {c32(0)})->const_u64() == 32);
  REQUIRE(tm.mk(Op::BvClz, {c32(1)})->const_u64() == 31);
  REQUIRE(tm.mk(Op::BvCtz, {c32(0x10)})->const_u64() == 4);
  REQUIRE(tm.mk(Op::BvPopcnt, {c32(0xF0F0)})->const_u64() == 8);
}

TEST_CASE("float conventions") {
  TermManager tm;
  REQUIRE(tm.mk(Op::FSqrt, {tm.f64_const(4.0)})->const_f64() == 2.0);
  // NaN results canonicalize
  Term nan = tm.mk(Op::FDiv, {tm.f64_const(0.0), tm.f64_const(0.0)});
  REQUIRE(nan->const_u64() == 0x7ff8000000000000ull);
  // wasm min/max zero handling
  REQUIRE(tm.mk(Op::FMin, {tm.f32_const(0.0f), tm.f32_const(-0.0f)})->const_u64() == 0x80000000u);
  REQUIRE(tm.mk(Op::FMax, {tm.f32_const(-0.0f), tm.f32_const(0.0f)})->const_u64() == 0);
  // nearest ties to even
  REQUIRE(tm.mk(Op::FNearest, {tm.f64_const(2.5)})->const_f64() == 2.0);
  REQUIRE(tm.mk(Op::FNearest, {tm.f64_const(3.5)})->const_f64() == 4.0);
  REQUIRE(tm.mk(Op::FNearest, {tm.f64_const(-0.5)})->const_f64() == 0.0);
  // conversions
  REQUIRE(tm.mk(Op::FToSBv, {tm.f64_const(-3.7)}, 32)->const_u64() == uint32_t(-3));
  REQUIRE(tm.mk(Op::SBvToF, {tm.bv_const(32, uint32_t(-5))}, 64)->const_f64() == -5.0);
  REQUIRE(tm.mk(Op::UBvToF, {tm.bv_const(32, 0xFFFFFFFF)}, 64)->const_f64() == 4294967295.0);
  // copysign is pure bit manipulation
  Term cs = tm.mk(Op::FCopysign, {tm.f32_const(3.0f), tm.f32_const(-1.0f)});
  REQUIRE(cs->const_f32() == -3.0f);
}

TEST_CASE("concat/extract structure") {
  TermManager tm;
  Term x = tm.var("x", Sort::bv(32));
  // reassembling all bytes of x gives x back
  Term recon = tm.concat2(
      tm.concat2(tm.byte_of(x, 3), tm.byte_of(x, 2)),
      tm.concat2(tm.byte_of(x, 1), tm.byte_of(x, 0)));
  REQUIRE(recon == x);
  // extract of concat narrows to the right part
  Term y = tm.var("y", Sort::bv(8));
  Term cat = tm.concat2(x, y);  // y is low byte
  REQUIRE(tm.extract(7, 0, cat) == y);
  REQUIRE(tm.extract(39, 8, cat) == x);
  // wide constants slice correctly
  std::vector<uint8_t> bytes = {0x11, 0x22, 0x33, 0x44, 0x55, 0x66, 0x77, 0x88, 0x99};
  Term wide = tm.bytes_const(bytes);
  REQUIRE(wide->sort.width == 72);
  REQUIRE(tm.byte_of(wide, 8)->const_u64() == 0x99);
  Term mid = tm.extract(8 * 5 - 1, 8 * 1, wide);  // bytes 1..4
  REQUIRE(mid->const_u64() == 0x55443322);
}

namespace {

struct RandomTermGen {
  TermManager& tm;
  std::mt19937 rng;
  std::vector<std::pair<std::string, Sort>> vars;

  Term gen_bv(uint32_t w, int depth) {
    int pick = int(rng() % 10);
    if (depth <= 0 || pick < 2) return tm.bv_const(w, rng());
    if (pick < 4) {
      std::string n = "v" + std::to_string(rng() % 4) + "_" + std::to_string(w);
      vars.push_back({n, Sort::bv(w)});
      return tm.var(n, Sort::bv(w));
    }
    static const Op bin[] = {Op::BvAdd, Op::BvSub, Op::BvMul, Op::BvUDiv,
                             Op::BvSDiv, Op::BvURem, Op::BvSRem, Op::BvAnd,
                             Op::BvOr, Op::BvXor, Op::BvShl, Op::BvLshr,
                             Op::BvAshr, Op::BvRotl, Op::BvRotr};
    static const Op un[] = {Op::BvNot, Op::BvNeg, Op::BvClz, Op::BvCtz, Op::BvPopcnt};
    int kind = int(rng() % 8);
    if (kind == 0) return tm.mk(un[rng() % 5], {gen_bv(w, depth - 1)});
    if (kind == 1)
      return tm.ite(gen_bool(depth - 1), gen_bv(w, depth - 1), gen_bv(w, depth - 1));
    if (kind == 2) {
      uint32_t bw = std::min<uint32_t>(64, w + rng() % 8);
      uint32_t lo = rng() % (bw - w + 1);
      return tm.extract(lo + w - 1, lo, gen_bv(bw, depth - 1));
    }
    if (kind == 3 && w >= 2) {
      uint32_t wl = 1 + rng() % (w - 1);
      return tm.concat2(gen_bv(w - wl, depth - 1), gen_bv(wl, depth - 1));
    }
    if (kind == 4) {
      uint32_t sw = 1 + rng() % w;
      Op ext = rng() % 2 ? Op::ZeroExt : Op::SignExt;
      return tm.mk(ext, {gen_bv(sw, depth - 1)}, w);
    }
    return tm.mk(bin[rng() % 15], {gen_bv(w, depth - 1), gen_bv(w, depth - 1)});
  }

  Term gen_bool(int depth) {
    int pick = int(rng() % 10);
    if (depth <= 0 || pick < 2) return tm.bool_const(rng() % 2);
    if (pick < 5) {
      static const Op cmp[] = {Op::Eq, Op::BvUlt, Op::BvUle, Op::BvSlt, Op::BvSle};
      uint32_t w = 1 + rng() % 33;
      return tm.mk(cmp[rng() % 5], {gen_bv(w, depth - 1), gen_bv(w, depth - 1)});
    }
    if (pick < 7) return tm.bnot(gen_bool(depth - 1));
    return tm.mk(rng() % 2 ? Op::And : Op::Or, {gen_bool(depth - 1), gen_bool(depth - 1)});
  }

  Term gen_f(Sort fs, int depth) {
    auto rand_const = [&] {
      if (fs.kind == SortKind::F32) {
        uint32_t bits = uint32_t(rng());
        if (rng() % 4 == 0) bits = 0x7fc00000;  // throw NaN into the mix
        float f;
        std::memcpy(&f, &bits, 4);
        return tm.f32_const(f);
      }
      uint64_t bits = (uint64_t(rng()) << 32) | rng();
      double d;
      std::memcpy(&d, &bits, 8);
      return tm.f64_const(d);
    };
    if (depth <= 0 || rng() % 4 == 0) return rand_const();
    static const Op fbin[] = {Op::FAdd, Op::FSub, Op::FMul, Op::FDiv,
                              Op::FMin, Op::FMax, Op::FCopysign};
    static const Op fun[] = {Op::FAbs, Op::FNeg, Op::FSqrt, Op::FCeil,
                             Op::FFloor, Op::FTrunc, Op::FNearest};
    int kind = int(rng() % 3);
    if (kind == 0) return tm.mk(fun[rng() % 7], {gen_f(fs, depth - 1)});
    if (kind == 1)
      return tm.mk(fbin[rng() % 7], {gen_f(fs, depth - 1), gen_f(fs, depth - 1)});
    return tm.mk(rng() % 2 ? Op::SBvToF : Op::UBvToF,
                 {gen_bv(rng() % 2 ? 32 : 64, depth - 1)},
                 fs.kind == SortKind::F32 ? 32 : 64);
  }
};

}  // namespace

// Folding soundness: evaluating a term under a model equals constructing the
// same term with the model's constants substituted at build time (which runs
// the construction-time folding path on every node).
TEST_CASE("fold soundness over 10000 random terms") {
  TermManager tm;
  RandomTermGen gen{tm, std::mt19937(2024)};
  std::mt19937 mrng(77);

  for (int round = 0; round < 10000; ++round) {
    gen.vars.clear();
    int which = round % 3;
    Term t = which == 0   ? gen.gen_bv(1 + (round % 37), 4)
             : which == 1 ? gen.gen_bool(4)
                          : gen.gen_f(round % 2 ? Sort::f32() : Sort::f64(), 3);
    Model m;
    for (auto& [name, sort] : gen.vars) {
      if (m.assignment.count(name)) continue;
      uint64_t bits = (uint64_t(mrng()) << 32) | mrng();
      m.assignment[name] = tm.const_of_sort(sort, sort.is_bv() ? mask_to(bits, sort.width) : bits);
    }
    Term via_eval = eval(tm, t, m);

    // rebuild with constants substituted at the leaves
    std::unordered_map<Term, Term> memo;
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
        memo[cur] = m.assignment.at(cur->name);
        continue;
      }
      if (!ready) {
        work.push_back({cur, true});
        for (Term c : cur->children) work.push_back({c, false});
        continue;
      }
      std::vector<Term> kids;
      for (Term c : cur->children) kids.push_back(memo.at(c));
      memo[cur] = tm.mk(cur->op, kids, cur->imm_a, cur->imm_b);
    }
    Term via_subst = memo.at(t);
    REQUIRE(via_subst->is_const());
    REQUIRE(via_subst == via_eval);
  }
}

TEST_CASE("path condition sharing and keys") {
  TermManager tm;
  Term x = tm.var("x", Sort::bv(32));
  Term p1 = tm.eq(x, tm.bv_const(32, 1));
  Term p2 = tm.ult(x, tm.bv_const(32, 10));

  PathCond root;
  PathCond a = root.append(p1);
  PathCond b = a.append(p2);
  REQUIRE(b.length() == 2);
  REQUIRE(a.is_prefix_of(b));
  REQUIRE(!b.is_prefix_of(a));
  REQUIRE(root.is_prefix_of(b));

  // key is order independent
  PathCond c = root.append(p2).append(p1);
  REQUIRE(b.key() == c.key());
  REQUIRE(!(b.key() == a.key()));
  // duplicates collapse in the canonical set
  PathCond d = b.append(p1);
  REQUIRE(d.key() == b.key());
  REQUIRE(d.canonical() == b.canonical());
}
