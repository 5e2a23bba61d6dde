#include "burstsim/metatree.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>
#include <vector>

namespace burstsim {

void MetaTree::update(Node* n) {
  n->height = 1 + std::max(node_height(n->left.get()),
                           node_height(n->right.get()));
}

std::unique_ptr<MetaTree::Node> MetaTree::rotate_left(std::unique_ptr<Node> n) {
  auto r = std::move(n->right);
  n->right = std::move(r->left);
  update(n.get());
  r->left = std::move(n);
  update(r.get());
  return r;
}

std::unique_ptr<MetaTree::Node> MetaTree::rotate_right(std::unique_ptr<Node> n) {
  auto l = std::move(n->left);
  n->left = std::move(l->right);
  update(n.get());
  l->right = std::move(n);
  update(l.get());
  return l;
}

std::unique_ptr<MetaTree::Node> MetaTree::rebalance(std::unique_ptr<Node> n) {
  update(n.get());
  const int bf = node_height(n->left.get()) - node_height(n->right.get());
  if (bf > 1) {
    if (node_height(n->left->left.get()) < node_height(n->left->right.get()))
      n->left = rotate_left(std::move(n->left));
    return rotate_right(std::move(n));
  }
  if (bf < -1) {
    if (node_height(n->right->right.get()) < node_height(n->right->left.get()))
      n->right = rotate_right(std::move(n->right));
    return rotate_left(std::move(n));
  }
  return n;
}

std::unique_ptr<MetaTree::Node> MetaTree::insert_at(std::unique_ptr<Node> n,
                                                    const MetaEntry& entry) {
  if (!n) {
    ++size_;
    auto fresh = std::make_unique<Node>();
    fresh->entry = entry;
    return fresh;
  }
  if (entry.key < n->entry.key) {
    n->left = insert_at(std::move(n->left), entry);
  } else if (n->entry.key < entry.key) {
    n->right = insert_at(std::move(n->right), entry);
  } else {
    n->entry = entry;  // rewrite of the same extent: newest location wins
    return n;
  }
  return rebalance(std::move(n));
}

void MetaTree::insert(const MetaEntry& entry) {
  root_ = insert_at(std::move(root_), entry);
}

void MetaTree::clear() {
  // iterative teardown; deep recursive unique_ptr chains can blow the stack
  std::vector<std::unique_ptr<Node>> pending;
  if (root_) pending.push_back(std::move(root_));
  while (!pending.empty()) {
    auto n = std::move(pending.back());
    pending.pop_back();
    if (n->left) pending.push_back(std::move(n->left));
    if (n->right) pending.push_back(std::move(n->right));
  }
  size_ = 0;
}

int MetaTree::height() const { return node_height(root_.get()); }

void MetaTree::for_each_in_order(
    const std::function<void(const MetaEntry&)>& fn) const {
  std::vector<const Node*> stack;
  const Node* cur = root_.get();
  while (cur || !stack.empty()) {
    while (cur) {
      stack.push_back(cur);
      cur = cur->left.get();
    }
    cur = stack.back();
    stack.pop_back();
    fn(cur->entry);
    cur = cur->right.get();
  }
}

bool MetaTree::validate() const {
  struct Frame {
    bool ok;
    int height;
  };
  std::function<Frame(const Node*, const MetaKey*, const MetaKey*)> walk =
      [&](const Node* n, const MetaKey* lo, const MetaKey* hi) -> Frame {
    if (!n) return {true, 0};
    if (lo && !(*lo < n->entry.key)) return {false, 0};
    if (hi && !(n->entry.key < *hi)) return {false, 0};
    Frame l = walk(n->left.get(), lo, &n->entry.key);
    Frame r = walk(n->right.get(), &n->entry.key, hi);
    bool ok = l.ok && r.ok && std::abs(l.height - r.height) <= 1 &&
              n->height == 1 + std::max(l.height, r.height);
    return {ok, 1 + std::max(l.height, r.height)};
  };
  return walk(root_.get(), nullptr, nullptr).ok;
}

}  // namespace burstsim
