// AVL index over buffered writes, keyed by (file, original offset). In-order
// traversal yields the offset-sorted flush order; duplicate keys overwrite in
// place so rewrites keep one entry.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>

namespace burstsim {

struct MetaKey {
  uint32_t file = 0;
  uint64_t offset = 0;

  friend auto operator<=>(const MetaKey&, const MetaKey&) = default;
};

struct MetaEntry {
  MetaKey key;
  uint64_t size = 0;
  uint32_t region = 0;      // buffer region holding the data
  uint64_t ssd_offset = 0;  // byte offset within that region
};

class MetaTree {
 public:
  MetaTree() = default;
  MetaTree(MetaTree&&) = default;
  MetaTree& operator=(MetaTree&&) = default;

  void insert(const MetaEntry& entry);
  void clear();

  size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  int height() const;

  // Serialized index cost at 24 bytes per entry.
  static constexpr uint64_t kBytesPerEntry = 24;
  uint64_t footprint_bytes() const { return size_ * kBytesPerEntry; }

  void for_each_in_order(const std::function<void(const MetaEntry&)>& fn) const;

  // Checks BST ordering and AVL balance on every node.
  bool validate() const;

 private:
  struct Node {
    MetaEntry entry;
    int height = 1;
    std::unique_ptr<Node> left, right;
  };

  static int node_height(const Node* n) { return n ? n->height : 0; }
  static void update(Node* n);
  static std::unique_ptr<Node> rotate_left(std::unique_ptr<Node> n);
  static std::unique_ptr<Node> rotate_right(std::unique_ptr<Node> n);
  static std::unique_ptr<Node> rebalance(std::unique_ptr<Node> n);
  std::unique_ptr<Node> insert_at(std::unique_ptr<Node> n,
                                  const MetaEntry& entry);

  std::unique_ptr<Node> root_;
  size_t size_ = 0;
};

}  // namespace burstsim
