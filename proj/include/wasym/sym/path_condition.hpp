#pragma once

// Append-only path conditions with structural sharing: a child state's
// condition extends its parent's by one node, so ancestor chains are shared
// across the whole exploration tree. Query keys are memoized per node for
// the cache pool's prefix lookups.

#include <algorithm>
#include <memory>
#include <optional>

#include "wasym/sym/term.hpp"

namespace wasym {

// Order-independent fingerprint of a predicate set.
struct QueryKey {
  uint64_t sum = 0;
  uint64_t xr = 0;
  uint32_t n = 0;

  bool operator==(const QueryKey& o) const {
    return sum == o.sum && xr == o.xr && n == o.n;
  }
};

struct QueryKeyHash {
  size_t operator()(const QueryKey& k) const {
    return size_t(detail::mix64(k.sum ^ detail::mix64(k.xr) ^ k.n));
  }
};

class PathCond {
  struct Node {
    Term pred;
    std::shared_ptr<const Node> parent;
    uint32_t length;
    mutable std::optional<QueryKey> key_memo;
  };
  std::shared_ptr<const Node> tail_;

  explicit PathCond(std::shared_ptr<const Node> t) : tail_(std::move(t)) {}

public:
  PathCond() = default;

  uint32_t length() const { return tail_ ? tail_->length : 0; }
  bool empty() const { return !tail_; }

  PathCond append(Term pred) const {
    assert(pred->sort.is_bool());
    auto n = std::make_shared<Node>();
    n->pred = pred;
    n->parent = tail_;
    n->length = length() + 1;
    return PathCond(std::move(n));
  }

  Term last() const {
    assert(tail_);
    return tail_->pred;
  }

  PathCond parent() const {
    assert(tail_);
    return PathCond(tail_->parent);
  }

  // Oldest-first predicate list.
  std::vector<Term> predicates() const {
    std::vector<Term> out(length());
    size_t i = length();
    for (const Node* p = tail_.get(); p; p = p->parent.get()) out[--i] = p->pred;
    return out;
  }

  // Sorted-by-id, deduplicated predicate set (the canonical query form).
  std::vector<Term> canonical() const {
    std::vector<Term> v = predicates();
    std::sort(v.begin(), v.end(), [](Term a, Term b) { return a->id < b->id; });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  // Fingerprint over the canonical set; memoized.
  QueryKey key() const {
    if (!tail_) return QueryKey{};
    if (tail_->key_memo) return *tail_->key_memo;
    QueryKey k = make_key(canonical());
    tail_->key_memo = k;
    return k;
  }

  static QueryKey make_key(const std::vector<Term>& canonical_set) {
    QueryKey k;
    for (Term t : canonical_set) {
      uint64_t h = detail::mix64(t->hash);
      k.sum += h;
      k.xr ^= h;
    }
    k.n = uint32_t(canonical_set.size());
    return k;
  }

  // True when `other` is this condition with zero or more extra appends.
  bool is_prefix_of(const PathCond& other) const {
    const Node* p = other.tail_.get();
    while (p && p->length > length()) p = p->parent.get();
    return p == tail_.get();
  }

  bool same_rep(const PathCond& o) const { return tail_ == o.tail_; }
};

}  // namespace wasym
