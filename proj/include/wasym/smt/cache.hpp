#pragma once

// The SMT query pool: three tiers in front of the solver session.
//   1. exact-hit cache on the canonical predicate set
//   2. unsat-core subsumption (any indexed core contained in P proves unsat)
//   3. incremental solving from the largest cached satisfiable subset,
//      found in O(1) through the path condition's prefix chain, with a
//      model-reuse fast path that answers sat without touching the solver
// Verdicts are always identical to a cold solver call; unknown results are
// never cached.

#include <chrono>
#include <list>

#include "wasym/smt/solver.hpp"

namespace wasym::smt {

struct PoolStats {
  uint64_t queries = 0;
  uint64_t tier1_hits = 0;
  uint64_t tier2_hits = 0;
  uint64_t tier3_hits = 0;        // answered from a cached sat base
  uint64_t model_reuse_hits = 0;  // subset of tier3: no solver call at all
  uint64_t backend_calls = 0;
  uint64_t backend_sat = 0;
  uint64_t backend_unsat = 0;
  uint64_t backend_unknown = 0;
  uint64_t evictions = 0;
  double solver_seconds = 0.0;
};

class QueryPool {
public:
  struct Options {
    bool enabled = true;
    size_t max_entries = 100000;
    size_t max_cores = 20000;
  };

  QueryPool(TermManager& tm, SolverSession& session, Options opts = {})
      : tm_(tm), session_(session), opts_(opts) {}

  const PoolStats& stats() const { return stats_; }
  bool enabled() const { return opts_.enabled; }

  // Query over the predicates of a path condition. The pc's ancestor chain
  // feeds the tier-3 subset lookup.
  CheckResult query(const PathCond& pc) {
    stats_.queries++;
    std::vector<Term> canon = pc.canonical();
    if (canon.empty()) {
      CheckResult r;
      r.verdict = Verdict::Sat;
      return r;
    }
    if (!opts_.enabled) return backend(canon);

    QueryKey key = pc.key();

    // tier 1: exact hit
    if (auto e = find_entry(key, canon); e != entries_.end()) {
      touch(e);
      stats_.tier1_hits++;
      CheckResult r;
      r.verdict = e->verdict;
      if (e->verdict == Verdict::Sat) r.model = e->model;
      if (e->verdict == Verdict::Unsat) r.core = e->core;
      return r;
    }

    // tier 2: unsat-core subsumption
    if (const std::vector<Term>* core = find_subsumed_core(canon)) {
      stats_.tier2_hits++;
      CheckResult r;
      r.verdict = Verdict::Unsat;
      r.core = *core;
      return r;
    }

    // tier 3: largest cached sat subset via the prefix chain
    EntryIt base = find_sat_ancestor(pc);
    if (base != entries_.end()) {
      // model-reuse fast path: the base's model may already satisfy P
      bool all_true = true;
      try {
        for (Term p : canon)
          if (!eval_bool(tm_, p, base->model)) {
            all_true = false;
            break;
          }
      } catch (const UnboundVariable&) {
        all_true = false;  // P mentions variables the base never saw
      }
      if (all_true) {
        stats_.tier3_hits++;
        stats_.model_reuse_hits++;
        CheckResult r;
        r.verdict = Verdict::Sat;
        r.model = base->model;
        touch(base);
        insert(key, canon, r);
        return r;
      }
    }

    CheckResult r = backend(canon);
    if (base != entries_.end() && r.verdict != Verdict::Unknown) stats_.tier3_hits++;
    insert(key, canon, r);
    return r;
  }

  // Convenience for ad-hoc predicate sets (wraps them in a fresh chain).
  CheckResult query_set(const std::vector<Term>& preds) {
    PathCond pc;
    for (Term p : preds) pc = pc.append(p);
    return query(pc);
  }

  // Insert a verdict for a canonical predicate set. Unknown is never stored.
  void insert(const QueryKey& key, const std::vector<Term>& canon,
              const CheckResult& r) {
    if (r.verdict == Verdict::Unknown) return;
    if (find_entry(key, canon) != entries_.end()) return;  // idempotent
    entries_.push_front(Entry{key, canon, r.verdict, r.model, r.core});
    index_[key].push_back(entries_.begin());
    if (r.verdict == Verdict::Unsat) {
      const std::vector<Term>& core = r.core.empty() ? canon : r.core;
      add_core(core);
    }
    if (entries_.size() > opts_.max_entries) evict_oldest();
  }

private:
  struct Entry {
    QueryKey key;
    std::vector<Term> preds;  // canonical sorted set
    Verdict verdict;
    Model model;
    std::vector<Term> core;
  };
  using EntryIt = std::list<Entry>::iterator;

  CheckResult backend(const std::vector<Term>& canon) {
    auto t0 = std::chrono::steady_clock::now();
    CheckResult r = session_.check(canon);
    stats_.solver_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    stats_.backend_calls++;
    switch (r.verdict) {
      case Verdict::Sat: stats_.backend_sat++; break;
      case Verdict::Unsat: stats_.backend_unsat++; break;
      case Verdict::Unknown: stats_.backend_unknown++; break;
    }
    return r;
  }

  EntryIt find_entry(const QueryKey& key, const std::vector<Term>& canon) {
    auto it = index_.find(key);
    if (it == index_.end()) return entries_.end();
    for (EntryIt e : it->second)
      if (e->preds == canon) return e;
    return entries_.end();
  }

  void touch(EntryIt e) { entries_.splice(entries_.begin(), entries_, e); }

  void evict_oldest() {
    EntryIt last = std::prev(entries_.end());
    auto& vec = index_[last->key];
    for (size_t i = 0; i < vec.size(); ++i)
      if (&*vec[i] == &*last) {
        vec[i] = vec.back();
        vec.pop_back();
        break;
      }
    if (vec.empty()) index_.erase(last->key);
    entries_.pop_back();
    stats_.evictions++;
  }

  // --- unsat core index -----------------------------------------------------

  void add_core(const std::vector<Term>& core) {
    if (core.empty()) return;
    std::vector<Term> sorted = core;
    std::sort(sorted.begin(), sorted.end(), [](Term a, Term b) { return a->id < b->id; });
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (cores_.size() >= opts_.max_cores) return;
    Term min_elem = sorted.front();
    cores_.push_back(std::move(sorted));
    core_by_min_[min_elem].push_back(cores_.size() - 1);
  }

  // two-pointer subset test on id-sorted vectors
  static bool subset_of(const std::vector<Term>& small, const std::vector<Term>& big) {
    size_t i = 0, j = 0;
    while (i < small.size() && j < big.size()) {
      if (small[i] == big[j]) {
        ++i;
        ++j;
      } else if (small[i]->id > big[j]->id) {
        ++j;
      } else {
        return false;
      }
    }
    return i == small.size();
  }

  const std::vector<Term>* find_subsumed_core(const std::vector<Term>& canon) {
    for (Term p : canon) {
      auto it = core_by_min_.find(p);
      if (it == core_by_min_.end()) continue;
      for (size_t idx : it->second)
        if (subset_of(cores_[idx], canon)) return &cores_[idx];
    }
    return nullptr;
  }

  // deepest ancestor in the prefix chain with a cached sat entry; the key
  // lookup is O(1) per level, the canonical set is only built on a key hit
  EntryIt find_sat_ancestor(const PathCond& pc) {
    PathCond cur = pc;
    while (!cur.empty()) {
      cur = cur.parent();
      if (cur.empty()) break;
      auto it = index_.find(cur.key());
      if (it == index_.end()) continue;
      std::vector<Term> canon = cur.canonical();
      for (EntryIt e : it->second)
        if (e->verdict == Verdict::Sat && e->preds == canon) return e;
    }
    return entries_.end();
  }

  TermManager& tm_;
  SolverSession& session_;
  Options opts_;
  PoolStats stats_;
  std::list<Entry> entries_;  // front = most recent
  std::unordered_map<QueryKey, std::vector<EntryIt>, QueryKeyHash> index_;
  std::vector<std::vector<Term>> cores_;
  std::unordered_map<Term, std::vector<size_t>> core_by_min_;
};

}  // namespace wasym::smt
