#pragma once

// Persistent (immutable, structurally shared) containers used by execution
// states. Forking a state must be O(1); mutation returns a new version and
// never touches the old one.

#include <cassert>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace wasym {

// Immutable cons-list stack. push/pop are O(1) and share the tail.
template <typename T>
class PStack {
  struct Node {
    T value;
    std::shared_ptr<const Node> next;
    uint32_t size;
  };
  std::shared_ptr<const Node> head_;

  explicit PStack(std::shared_ptr<const Node> h) : head_(std::move(h)) {}

public:
  PStack() = default;

  bool empty() const { return head_ == nullptr; }
  uint32_t size() const { return head_ ? head_->size : 0; }

  const T& top() const {
    assert(head_);
    return head_->value;
  }

  PStack push(T v) const {
    auto n = std::make_shared<Node>(Node{std::move(v), head_, size() + 1});
    return PStack(std::move(n));
  }

  PStack pop() const {
    assert(head_);
    return PStack(head_->next);
  }

  // nth element from the top (0 = top).
  const T& peek(uint32_t n) const {
    const Node* p = head_.get();
    while (n--) {
      assert(p);
      p = p->next.get();
    }
    assert(p);
    return p->value;
  }

  // Top-to-bottom traversal.
  template <typename F>
  void for_each(F&& f) const {
    for (const Node* p = head_.get(); p; p = p->next.get()) f(p->value);
  }

  // Bottom-to-top order (oldest first).
  std::vector<T> to_vector_bottom_up() const {
    std::vector<T> out(size());
    size_t i = size();
    for (const Node* p = head_.get(); p; p = p->next.get()) out[--i] = p->value;
    return out;
  }

  bool same_rep(const PStack& o) const { return head_ == o.head_; }
};

// Immutable ordered map implemented as a weight-balanced binary tree with
// path copying. Lookups O(log n); insert/erase allocate O(log n) nodes and
// share the rest with previous versions.
template <typename K, typename V>
class PMap {
  struct Node {
    K key;
    V val;
    std::shared_ptr<const Node> left, right;
    uint32_t count;
  };
  using NodePtr = std::shared_ptr<const Node>;
  NodePtr root_;

  static uint32_t count(const NodePtr& n) { return n ? n->count : 0; }

  static NodePtr make(K k, V v, NodePtr l, NodePtr r) {
    return std::make_shared<Node>(
        Node{std::move(k), std::move(v), l, r, 1 + count(l) + count(r)});
  }

  static NodePtr rotate_left(const NodePtr& n) {
    const NodePtr& r = n->right;
    return make(r->key, r->val, make(n->key, n->val, n->left, r->left),
                r->right);
  }

  static NodePtr rotate_right(const NodePtr& n) {
    const NodePtr& l = n->left;
    return make(l->key, l->val, l->left,
                make(n->key, n->val, l->right, n->right));
  }

  // Weight-balance criterion (delta = 3).
  static NodePtr balance(NodePtr n) {
    uint32_t lc = count(n->left), rc = count(n->right);
    if (lc + rc <= 1) return n;
    if (rc > 3 * lc + 1) {
      if (count(n->right->left) > count(n->right->right))
        n = make(n->key, n->val, n->left, rotate_right(n->right));
      return rotate_left(n);
    }
    if (lc > 3 * rc + 1) {
      if (count(n->left->right) > count(n->left->left))
        n = make(n->key, n->val, rotate_left(n->left), n->right);
      return rotate_right(n);
    }
    return n;
  }

  static NodePtr insert(const NodePtr& n, const K& k, const V& v) {
    if (!n) return make(k, v, nullptr, nullptr);
    if (k < n->key) return balance(make(n->key, n->val, insert(n->left, k, v), n->right));
    if (n->key < k) return balance(make(n->key, n->val, n->left, insert(n->right, k, v)));
    return make(k, v, n->left, n->right);
  }

  static NodePtr min_node(NodePtr n) {
    while (n->left) n = n->left;
    return n;
  }

  static NodePtr erase_min(const NodePtr& n) {
    if (!n->left) return n->right;
    return balance(make(n->key, n->val, erase_min(n->left), n->right));
  }

  static NodePtr erase(const NodePtr& n, const K& k) {
    if (!n) return nullptr;
    if (k < n->key) return balance(make(n->key, n->val, erase(n->left, k), n->right));
    if (n->key < k) return balance(make(n->key, n->val, n->left, erase(n->right, k)));
    if (!n->left) return n->right;
    if (!n->right) return n->left;
    NodePtr m = min_node(n->right);
    return balance(make(m->key, m->val, n->left, erase_min(n->right)));
  }

  template <typename F>
  static void walk(const Node* n, F& f) {
    if (!n) return;
    walk(n->left.get(), f);
    f(n->key, n->val);
    walk(n->right.get(), f);
  }

public:
  PMap() = default;

  uint32_t size() const { return count(root_); }
  bool empty() const { return !root_; }

  const V* find(const K& k) const {
    const Node* p = root_.get();
    while (p) {
      if (k < p->key)
        p = p->left.get();
      else if (p->key < k)
        p = p->right.get();
      else
        return &p->val;
    }
    return nullptr;
  }

  // Greatest entry with key <= k.
  std::optional<std::pair<K, V>> floor(const K& k) const {
    const Node* best = nullptr;
    const Node* p = root_.get();
    while (p) {
      if (k < p->key) {
        p = p->left.get();
      } else {
        best = p;
        p = p->right.get();
      }
    }
    if (!best) return std::nullopt;
    return std::make_pair(best->key, best->val);
  }

  PMap set(const K& k, const V& v) const {
    PMap m;
    m.root_ = insert(root_, k, v);
    return m;
  }

  PMap erase(const K& k) const {
    PMap m;
    m.root_ = erase(root_, k);
    return m;
  }

  // In key order.
  template <typename F>
  void for_each(F f) const {
    walk(root_.get(), f);
  }

  std::vector<std::pair<K, V>> items() const {
    std::vector<std::pair<K, V>> out;
    out.reserve(size());
    for_each([&](const K& k, const V& v) { out.emplace_back(k, v); });
    return out;
  }

  bool same_rep(const PMap& o) const { return root_ == o.root_; }
};

// Copy-on-write fixed-size array; cloned only when a version holding the
// sole reference is not available.
template <typename T>
class CowVec {
  std::shared_ptr<const std::vector<T>> data_;

public:
  CowVec() : data_(std::make_shared<std::vector<T>>()) {}
  explicit CowVec(std::vector<T> v)
      : data_(std::make_shared<std::vector<T>>(std::move(v))) {}

  size_t size() const { return data_->size(); }
  const T& operator[](size_t i) const { return (*data_)[i]; }
  const std::vector<T>& get() const { return *data_; }

  CowVec with(size_t i, T v) const {
    auto copy = std::make_shared<std::vector<T>>(*data_);
    (*copy)[i] = std::move(v);
    CowVec out;
    out.data_ = std::move(copy);
    return out;
  }

  bool same_rep(const CowVec& o) const { return data_ == o.data_; }
};

}  // namespace wasym
