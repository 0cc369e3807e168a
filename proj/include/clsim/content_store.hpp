#pragma once

#include <cstddef>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

#include "clsim/error.hpp"
#include "clsim/model.hpp"

namespace clsim {

/// Fixed-capacity LRU stack of chunk ids. Front is MRU, back is the next victim.
class ContentStore {
 public:
  explicit ContentStore(std::size_t capacity_chunks = 0) : capacity_(capacity_chunks) {}

  // The index holds list iterators, so a copy must rebuild it.
  ContentStore(const ContentStore& other)
      : capacity_(other.capacity_), order_(other.order_), index_(other.index_) {
    repoint();
  }
  ContentStore& operator=(const ContentStore& other) {
    if (this != &other) {
      capacity_ = other.capacity_;
      order_ = other.order_;
      index_ = other.index_;
      repoint();
    }
    return *this;
  }
  ContentStore(ContentStore&&) noexcept = default;
  ContentStore& operator=(ContentStore&&) noexcept = default;

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }

  bool contains(const ChunkId& id) const { return index_.count(id) != 0; }

  /// Probe; a hit promotes the chunk to MRU.
  bool lookup(const ChunkId& id) {
    auto it = index_.find(id);
    if (it == index_.end()) return false;
    order_.splice(order_.begin(), order_, it->second);
    return true;
  }

  /// Inserts at MRU and returns the LRU victim if the store was full.
  /// Inserting a resident chunk is a caller bug.
  std::optional<ChunkId> insert(const ChunkId& id) {
    if (contains(id)) {
      throw ProtocolViolation("content store: double insert of chunk " + to_string(id));
    }
    if (capacity_ == 0) return id;
    std::optional<ChunkId> victim;
    if (order_.size() >= capacity_) {
      victim = order_.back();
      index_.erase(order_.back());
      order_.pop_back();
    }
    order_.push_front(id);
    index_.emplace(id, order_.begin());
    return victim;
  }

  /// Deletes without touching the relative order of the other entries.
  bool remove(const ChunkId& id) {
    auto it = index_.find(id);
    if (it == index_.end()) return false;
    order_.erase(it->second);
    index_.erase(it);
    return true;
  }

  /// Iteration runs from most to least recently used.
  auto begin() const { return order_.cbegin(); }
  auto end() const { return order_.cend(); }

  /// MRU-first snapshot.
  std::vector<ChunkId> entries() const { return {order_.begin(), order_.end()}; }

 private:
  // After copying both containers, point the index at this list.
  void repoint() {
    for (auto it = order_.begin(); it != order_.end(); ++it) index_.find(*it)->second = it;
  }

  std::size_t capacity_;
  std::list<ChunkId> order_;
  std::unordered_map<ChunkId, std::list<ChunkId>::iterator, ChunkIdHash> index_;
};

}  // namespace clsim
