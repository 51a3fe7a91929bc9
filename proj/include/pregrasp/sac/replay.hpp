#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pregrasp/rng.hpp"

namespace pregrasp::sac {

struct Transition {
  std::array<double, 7> state{};
  std::array<double, 3> action{};  // physical (bounded) action
  double reward = 0.0;
  std::array<double, 7> next_state{};
  bool absorbing = false;
};

// Fixed-capacity ring with FIFO overwrite and uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    data_.reserve(std::min<std::size_t>(capacity, 1 << 20));
  }

  void push(const Transition& t) {
    if (data_.size() < capacity_) {
      data_.push_back(t);
    } else {
      data_[head_] = t;
      head_ = (head_ + 1) % capacity_;
    }
  }

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& operator[](std::size_t i) const { return data_[i]; }

  std::vector<std::size_t> sample_indices(std::size_t n, Rng& rng) const {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = rng.uniform_index(data_.size());
    return idx;
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<Transition> data_;
};

}  // namespace pregrasp::sac
