#pragma once

#include <cstdint>
#include <vector>

namespace tsched::mdp {

// Feasibility mask over the N+1 placement actions: indices 0..N-1 are
// Assign(node i), index N is Defer. Defer is always allowed, so the mask
// always has at least one true entry.
struct ActionMask {
  std::vector<std::uint8_t> allowed;

  std::size_t size() const { return allowed.size(); }
  std::size_t defer_index() const { return allowed.size() - 1; }
  bool at(std::size_t i) const { return allowed[i] != 0; }

  std::size_t count_allowed() const {
    std::size_t n = 0;
    for (auto a : allowed) n += (a != 0);
    return n;
  }
};

}  // namespace tsched::mdp
