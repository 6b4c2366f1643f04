#pragma once

// Solving façade over the bit-blaster: each boolean predicate lowers once to
// a literal, and a query on a predicate set solves under those literals as
// assumptions. The SAT instance lives across queries, so re-queries of any
// already-encoded subset skip straight to search with all learned clauses
// intact; unsat cores come back as predicate subsets via analyze-final.

#include <span>

#include "wasym/smt/bitblast.hpp"
#include "wasym/sym/eval.hpp"
#include "wasym/sym/path_condition.hpp"

namespace wasym::smt {

enum class Verdict { Sat, Unsat, Unknown };

struct CheckResult {
  Verdict verdict = Verdict::Unknown;
  Model model;              // populated on Sat
  std::vector<Term> core;   // populated on Unsat: subset of the query
};

struct SessionStats {
  uint64_t checks = 0;
  uint64_t new_predicates_encoded = 0;
  uint64_t reused_predicates = 0;
};

class SolverSession {
public:
  explicit SolverSession(TermManager& tm, int64_t conflict_budget = 1 << 22)
      : tm_(tm), bb_(sat_), conflict_budget_(conflict_budget) {}

  TermManager& term_manager() { return tm_; }
  const SessionStats& stats() const { return session_stats_; }
  const sat::Solver::Stats& sat_stats() const { return sat_.stats(); }

  bool is_encoded(Term pred) const { return pred_lit_.count(pred) != 0; }

  CheckResult check(std::span<const Term> predicates) {
    session_stats_.checks++;
    std::vector<sat::Lit> assumptions;
    assumptions.reserve(predicates.size());
    std::unordered_map<int32_t, Term> lit_to_pred;
    for (Term p : predicates) {
      assert(p->sort.is_bool());
      auto it = pred_lit_.find(p);
      sat::Lit l;
      if (it != pred_lit_.end()) {
        l = it->second;
        session_stats_.reused_predicates++;
      } else {
        l = bb_.literal(p);
        pred_lit_.emplace(p, l);
        session_stats_.new_predicates_encoded++;
      }
      assumptions.push_back(l);
      lit_to_pred.emplace(l.x, p);
    }

    CheckResult res;
    switch (sat_.solve(assumptions, conflict_budget_)) {
      case sat::Solver::Result::Sat: {
        res.verdict = Verdict::Sat;
        res.model = extract_model(predicates);
        break;
      }
      case sat::Solver::Result::Unsat: {
        res.verdict = Verdict::Unsat;
        for (sat::Lit l : sat_.core()) {
          auto it = lit_to_pred.find(l.x);
          if (it != lit_to_pred.end()) res.core.push_back(it->second);
        }
        // a constant-false literal in the query maps to no assumption var;
        // an empty core then means the DB alone is unsat, which is fine
        break;
      }
      case sat::Solver::Result::Undef:
        res.verdict = Verdict::Unknown;
        break;
    }
    return res;
  }

  CheckResult check(const std::vector<Term>& predicates) {
    return check(std::span<const Term>(predicates.data(), predicates.size()));
  }

private:
  Model extract_model(std::span<const Term> predicates) {
    Model m;
    std::unordered_set<Term> visited;
    std::vector<Term> work(predicates.begin(), predicates.end());
    while (!work.empty()) {
      Term t = work.back();
      work.pop_back();
      if (!visited.insert(t).second) continue;
      if (t->op == Op::Var) {
        uint64_t bits = bb_.model_bits(t);
        m.assignment.emplace(t->name, tm_.const_of_sort(t->sort, bits));
        continue;
      }
      for (Term c : t->children) work.push_back(c);
    }
    return m;
  }

  TermManager& tm_;
  sat::Solver sat_;
  BitBlaster bb_;
  std::unordered_map<Term, sat::Lit> pred_lit_;
  int64_t conflict_budget_;
  SessionStats session_stats_;
};

}  // namespace wasym::smt
