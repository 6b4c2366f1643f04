#pragma once

// CDCL SAT solver (two-watched literals, VSIDS, phase saving, Luby restarts,
// 1UIP learning with clause minimization, activity-based DB reduction).
// Solving under assumptions yields, on unsat, the failed subset of the
// assumptions (analyze-final), which the query pool uses both for unsat
// cores and for incremental prefix reuse. Fully deterministic: no clocks,
// no randomness.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <deque>
#include <vector>

namespace wasym::sat {

using Var = int32_t;

struct Lit {
  int32_t x = -2;  // 2*var + sign

  bool operator==(const Lit& o) const { return x == o.x; }
  bool operator!=(const Lit& o) const { return x != o.x; }
  bool operator<(const Lit& o) const { return x < o.x; }
};

inline Lit mk_lit(Var v, bool neg = false) { return Lit{2 * v + int32_t(neg)}; }
inline Lit operator~(Lit l) { return Lit{l.x ^ 1}; }
inline Var var_of(Lit l) { return l.x >> 1; }
inline bool sign_of(Lit l) { return l.x & 1; }
constexpr Lit lit_undef{-2};

enum class LBool : uint8_t { False = 0, True = 1, Undef = 2 };

inline LBool lbool_of(bool b) { return b ? LBool::True : LBool::False; }
inline LBool neg(LBool v) {
  return v == LBool::Undef ? v : (v == LBool::True ? LBool::False : LBool::True);
}

struct Clause {
  std::vector<Lit> lits;
  float activity = 0;
  bool learnt = false;

  size_t size() const { return lits.size(); }
  Lit& operator[](size_t i) { return lits[i]; }
  Lit operator[](size_t i) const { return lits[i]; }
};

class Solver {
public:
  enum class Result { Sat, Unsat, Undef };

  struct Stats {
    uint64_t conflicts = 0;
    uint64_t decisions = 0;
    uint64_t propagations = 0;
    uint64_t solves = 0;
  };

  Var new_var() {
    Var v = Var(assigns_.size());
    assigns_.push_back(LBool::Undef);
    level_.push_back(0);
    reason_.push_back(nullptr);
    activity_.push_back(0);
    polarity_.push_back(true);  // default phase: false
    seen_.push_back(0);
    heap_pos_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(v);
    return v;
  }

  size_t num_vars() const { return assigns_.size(); }
  size_t num_clauses() const { return clauses_.size(); }
  size_t num_learnts() const { return learnts_.size(); }
  const Stats& stats() const { return stats_; }
  bool ok() const { return ok_; }

  // Add a clause; must be called at decision level 0 (between solves).
  // Returns false if the database became trivially unsat.
  bool add_clause(std::vector<Lit> c) {
    assert(decision_level() == 0);
    if (!ok_) return false;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::vector<Lit> out;
    out.reserve(c.size());
    for (size_t i = 0; i < c.size(); ++i) {
      if (i + 1 < c.size() && c[i] == ~c[i + 1]) return true;  // tautology
      LBool v = value(c[i]);
      if (v == LBool::True) return true;  // already satisfied at level 0
      if (v == LBool::Undef) out.push_back(c[i]);
    }
    if (out.empty()) return ok_ = false;
    if (out.size() == 1) {
      unchecked_enqueue(out[0], nullptr);
      return ok_ = (propagate() == nullptr);
    }
    attach(alloc_clause(std::move(out), false));
    return true;
  }

  // Solve under the given assumptions. conflict_budget < 0 means unbounded.
  Result solve(const std::vector<Lit>& assumptions, int64_t conflict_budget = -1) {
    if (!ok_) {
      core_.clear();
      return Result::Unsat;
    }
    assumptions_ = assumptions;
    core_.clear();
    stats_.solves++;
    conflict_limit_ = conflict_budget < 0 ? INT64_MAX
                                          : int64_t(stats_.conflicts) + conflict_budget;
    Result res;
    int restart = 0;
    while (true) {
      res = search(luby(restart++) * 128);
      if (res != Result::Undef) break;
      if (int64_t(stats_.conflicts) >= conflict_limit_) break;
    }
    if (res == Result::Sat) model_.assign(assigns_.begin(), assigns_.end());
    cancel_until(0);
    assumptions_.clear();
    return res;
  }

  // Valid after Result::Sat. Unassigned/eliminated variables read as false.
  bool model_value(Var v) const {
    return size_t(v) < model_.size() && model_[v] == LBool::True;
  }

  // Valid after Result::Unsat: a subset of the assumptions that is already
  // unsatisfiable together with the clause database.
  const std::vector<Lit>& core() const { return core_; }

private:
  struct Watcher {
    Clause* clause;
    Lit blocker;
  };

  // --- state ---------------------------------------------------------------
  std::vector<LBool> assigns_;
  std::vector<LBool> model_;
  std::vector<int32_t> level_;
  std::vector<Clause*> reason_;
  std::vector<double> activity_;
  std::vector<uint8_t> polarity_;  // saved phase: 1 = last value false
  std::vector<uint8_t> seen_;
  std::vector<std::vector<Watcher>> watches_;  // indexed by lit.x
  std::vector<Lit> trail_;
  std::vector<int32_t> trail_lim_;
  size_t qhead_ = 0;
  std::deque<Clause> arena_;
  std::vector<Clause*> clauses_, learnts_;
  std::vector<Lit> assumptions_, core_;
  std::vector<Var> heap_;
  std::vector<int32_t> heap_pos_;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  bool ok_ = true;
  int64_t conflict_limit_ = INT64_MAX;
  Stats stats_;

  static constexpr double kVarDecay = 0.95;
  static constexpr double kClaDecay = 0.999;

  int decision_level() const { return int(trail_lim_.size()); }

  LBool value(Lit l) const {
    LBool v = assigns_[var_of(l)];
    return sign_of(l) ? neg(v) : v;
  }

  // --- variable order heap (max-activity, deterministic ties) --------------
  bool heap_less(Var a, Var b) const {
    if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
    return a < b;
  }
  void heap_insert(Var v) {
    if (heap_pos_[v] >= 0) return;
    heap_pos_[v] = int32_t(heap_.size());
    heap_.push_back(v);
    heap_up(heap_pos_[v]);
  }
  void heap_up(int32_t i) {
    Var v = heap_[i];
    while (i > 0) {
      int32_t p = (i - 1) >> 1;
      if (!heap_less(v, heap_[p])) break;
      heap_[i] = heap_[p];
      heap_pos_[heap_[i]] = i;
      i = p;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }
  void heap_down(int32_t i) {
    Var v = heap_[i];
    int32_t n = int32_t(heap_.size());
    while (true) {
      int32_t c = 2 * i + 1;
      if (c >= n) break;
      if (c + 1 < n && heap_less(heap_[c + 1], heap_[c])) ++c;
      if (!heap_less(heap_[c], v)) break;
      heap_[i] = heap_[c];
      heap_pos_[heap_[i]] = i;
      i = c;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }
  Var heap_pop() {
    Var v = heap_[0];
    heap_pos_[v] = -1;
    heap_[0] = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_pos_[heap_[0]] = 0;
      heap_down(0);
    }
    return v;
  }

  void bump_var(Var v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
  }
  void bump_clause(Clause& c) {
    c.activity += float(cla_inc_);
    if (c.activity > 1e20f) {
      for (Clause* l : learnts_) l->activity *= 1e-20f;
      cla_inc_ *= 1e-20;
    }
  }

  // --- clause management ---------------------------------------------------
  Clause* alloc_clause(std::vector<Lit> lits, bool learnt) {
    arena_.push_back(Clause{std::move(lits), 0, learnt});
    Clause* c = &arena_.back();
    (learnt ? learnts_ : clauses_).push_back(c);
    return c;
  }
  void attach(Clause* c) {
    assert(c->size() >= 2);
    watches_[(~(*c)[0]).x].push_back({c, (*c)[1]});
    watches_[(~(*c)[1]).x].push_back({c, (*c)[0]});
  }
  void detach(Clause* c) {
    for (int i = 0; i < 2; ++i) {
      auto& ws = watches_[(~(*c)[i]).x];
      for (size_t j = 0; j < ws.size(); ++j)
        if (ws[j].clause == c) {
          ws[j] = ws.back();
          ws.pop_back();
          break;
        }
    }
  }
  bool locked(Clause* c) const {
    Lit l = (*c)[0];
    return value(l) == LBool::True && reason_[var_of(l)] == c;
  }

  void reduce_db() {
    std::vector<Clause*> sorted = learnts_;
    std::stable_sort(sorted.begin(), sorted.end(), [](Clause* a, Clause* b) {
      if ((a->size() > 2) != (b->size() > 2)) return a->size() > 2;
      return a->activity < b->activity;
    });
    size_t keep_from = sorted.size() / 2;
    std::vector<Clause*> kept;
    kept.reserve(learnts_.size());
    for (size_t i = 0; i < sorted.size(); ++i) {
      Clause* c = sorted[i];
      if (i >= keep_from || c->size() <= 2 || locked(c)) {
        kept.push_back(c);
      } else {
        detach(c);
        c->lits.clear();  // arena entry stays; clause is dead
      }
    }
    learnts_.swap(kept);
  }

  // --- assignment ----------------------------------------------------------
  void unchecked_enqueue(Lit p, Clause* from) {
    Var v = var_of(p);
    assert(assigns_[v] == LBool::Undef);
    assigns_[v] = lbool_of(!sign_of(p));
    level_[v] = decision_level();
    reason_[v] = from;
    trail_.push_back(p);
  }

  void new_decision_level() { trail_lim_.push_back(int32_t(trail_.size())); }

  void cancel_until(int level) {
    if (decision_level() <= level) return;
    for (size_t i = trail_.size(); i-- > size_t(trail_lim_[level]);) {
      Var v = var_of(trail_[i]);
      polarity_[v] = uint8_t(assigns_[v] == LBool::False);
      assigns_[v] = LBool::Undef;
      reason_[v] = nullptr;
      heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  Clause* propagate() {
    Clause* conflict = nullptr;
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      stats_.propagations++;
      auto& ws = watches_[p.x];
      size_t i = 0, j = 0;
      while (i < ws.size()) {
        Watcher w = ws[i];
        if (value(w.blocker) == LBool::True) {
          ws[j++] = ws[i++];
          continue;
        }
        Clause& c = *w.clause;
        Lit false_lit = ~p;
        if (c[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        assert(c[1] == false_lit);
        ++i;
        Lit first = c[0];
        if (value(first) == LBool::True) {
          ws[j++] = {&c, first};
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != LBool::False) {
            std::swap(c.lits[1], c.lits[k]);
            watches_[(~c[1]).x].push_back({&c, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {&c, first};
        if (value(first) == LBool::False) {
          conflict = &c;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          unchecked_enqueue(first, &c);
        }
      }
      ws.resize(j);
      if (conflict) break;
    }
    return conflict;
  }

  // First-UIP conflict analysis.
  void analyze(Clause* confl, std::vector<Lit>& out_learnt, int& out_btlevel) {
    out_learnt.clear();
    out_learnt.push_back(lit_undef);  // slot for the asserting literal
    int counter = 0;
    Lit p = lit_undef;
    size_t index = trail_.size() - 1;

    do {
      assert(confl);
      Clause& c = *confl;
      if (c.learnt) bump_clause(c);
      for (size_t j = (p == lit_undef) ? 0 : 1; j < c.size(); ++j) {
        Lit q = c[j];
        Var v = var_of(q);
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          bump_var(v);
          if (level_[v] >= decision_level())
            counter++;
          else
            out_learnt.push_back(q);
        }
      }
      while (!seen_[var_of(trail_[index])]) index--;
      p = trail_[index];
      confl = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      index--;
      counter--;
    } while (counter > 0);
    out_learnt[0] = ~p;

    // Conflict-clause minimization (one-level self-subsumption). seen_ is
    // still set for out_learnt[1..] from the resolution loop.
    std::vector<Lit> to_clear(out_learnt.begin() + 1, out_learnt.end());
    size_t keep = 1;
    for (size_t i = 1; i < out_learnt.size(); ++i) {
      Var v = var_of(out_learnt[i]);
      Clause* r = reason_[v];
      bool redundant = r != nullptr;
      if (r) {
        for (size_t k = 1; k < r->size(); ++k) {
          Var u = var_of((*r)[k]);
          if (!seen_[u] && level_[u] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) out_learnt[keep++] = out_learnt[i];
    }
    for (Lit l : to_clear) seen_[var_of(l)] = 0;
    out_learnt.resize(keep);

    if (out_learnt.size() == 1) {
      out_btlevel = 0;
    } else {
      size_t max_i = 1;
      for (size_t i = 2; i < out_learnt.size(); ++i)
        if (level_[var_of(out_learnt[i])] > level_[var_of(out_learnt[max_i])]) max_i = i;
      std::swap(out_learnt[1], out_learnt[max_i]);
      out_btlevel = level_[var_of(out_learnt[1])];
    }
  }

  // Core extraction. `a` is a failed assumption (value currently false,
  // i.e. ~a was forced by earlier assumptions). Produces the subset of the
  // assumptions whose conjunction is already unsat with the clause DB. Only
  // called while the trail holds assumption decisions exclusively.
  void analyze_final(Lit a) {
    core_.clear();
    core_.push_back(a);
    if (decision_level() == 0) return;
    seen_[var_of(a)] = 1;
    for (size_t i = trail_.size(); i-- > size_t(trail_lim_[0]);) {
      Var v = var_of(trail_[i]);
      if (!seen_[v]) continue;
      Clause* r = reason_[v];
      if (r == nullptr) {
        core_.push_back(trail_[i]);
      } else {
        for (size_t k = 1; k < r->size(); ++k) {
          Var u = var_of((*r)[k]);
          if (level_[u] > 0) seen_[u] = 1;
        }
      }
      seen_[v] = 0;
    }
    seen_[var_of(a)] = 0;
  }

  static int64_t luby(int x) {
    int size = 1, seq = 0;
    while (size < x + 1) {
      seq++;
      size = 2 * size + 1;
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      seq--;
      x = x % size;
    }
    return int64_t(1) << seq;
  }

  Result search(int64_t conflicts_allowed) {
    int64_t conflict_count = 0;
    std::vector<Lit> learnt;
    int bt;
    size_t max_learnts = std::max<size_t>(10000, clauses_.size() / 2);

    while (true) {
      Clause* confl = propagate();
      if (confl) {
        stats_.conflicts++;
        conflict_count++;
        if (decision_level() == 0) {
          ok_ = false;
          core_.clear();
          return Result::Unsat;
        }
        analyze(confl, learnt, bt);
        cancel_until(std::max(bt, 0));
        if (learnt.size() == 1) {
          unchecked_enqueue(learnt[0], nullptr);
        } else {
          Clause* c = alloc_clause(learnt, true);
          attach(c);
          bump_clause(*c);
          unchecked_enqueue(learnt[0], c);
        }
        var_inc_ /= kVarDecay;
        cla_inc_ /= kClaDecay;
        continue;
      }

      if (conflict_count >= conflicts_allowed ||
          int64_t(stats_.conflicts) >= conflict_limit_) {
        cancel_until(0);
        return Result::Undef;
      }
      if (learnts_.size() >= max_learnts + trail_.size()) reduce_db();

      // place assumptions, then decide
      Lit next = lit_undef;
      while (decision_level() < int(assumptions_.size())) {
        Lit a = assumptions_[decision_level()];
        if (value(a) == LBool::True) {
          new_decision_level();
        } else if (value(a) == LBool::False) {
          analyze_final(a);
          cancel_until(0);
          return Result::Unsat;
        } else {
          next = a;
          break;
        }
      }
      if (next == lit_undef) {
        while (!heap_.empty()) {
          Var v = heap_[0];
          if (assigns_[v] == LBool::Undef) break;
          heap_pop();
        }
        if (heap_.empty()) return Result::Sat;
        Var v = heap_pop();
        next = mk_lit(v, polarity_[v]);
      }
      stats_.decisions++;
      new_decision_level();
      unchecked_enqueue(next, nullptr);
    }
  }
};

}  // namespace wasym::sat
