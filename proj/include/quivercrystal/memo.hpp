#pragma once

// Write-once concurrent map: readers share a lock, the first insert for a key wins.

#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <utility>

namespace qc {

template <class K, class V, class Compare = std::less<K>>
class ConcurrentMemo {
 public:
  std::optional<V> find(const K& key) const {
    std::shared_lock lock(mutex_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  /// Inserts unless present; returns the stored value either way.
  V insert(const K& key, V value) {
    std::unique_lock lock(mutex_);
    auto [it, inserted] = map_.try_emplace(key, std::move(value));
    return it->second;
  }

  template <class Fn>
  V get_or_compute(const K& key, Fn&& compute) {
    if (auto hit = find(key)) return *hit;
    return insert(key, compute());
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
  }

  void clear() {
    std::unique_lock lock(mutex_);
    map_.clear();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<K, V, Compare> map_;
};

}  // namespace qc
