#include "partition.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "tv.hpp"

namespace smmdist {

StatePartition partition_from_keys(const std::vector<int>& key_of_state) {
  const int n = static_cast<int>(key_of_state.size());
  // map arbitrary keys to block ids ordered by lowest member
  std::map<int, std::vector<int>> groups;
  for (int s = 0; s < n; ++s) groups[key_of_state[s]].push_back(s);
  std::vector<std::vector<int>> blocks;
  blocks.reserve(groups.size());
  for (auto& [k, members] : groups) blocks.push_back(std::move(members));
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  StatePartition p;
  p.block_of.assign(n, -1);
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
    for (int s : blocks[b]) p.block_of[s] = b;
  }
  p.blocks = std::move(blocks);
  return p;
}

StatePartition initial_partition(const SmmModel& model) {
  const int n = model.state_count();
  using Key = std::tuple<bool, std::set<std::string>, int, Rational, Rational>;
  std::map<Key, int> seen;
  std::vector<int> keys(n);
  for (int s = 0; s < n; ++s) {
    Key k;
    if (model.absorbing[s]) {
      k = Key{true, model.labels[s], -1, Rational(0), Rational(0)};
    } else {
      const auto& r = *model.residence[s];
      k = Key{false, model.labels[s], static_cast<int>(r.kind), r.a, r.b};
    }
    auto [it, inserted] = seen.emplace(std::move(k), static_cast<int>(seen.size()));
    keys[s] = it->second;
  }
  return partition_from_keys(keys);
}

StatePartition refine_once(const SmmModel& model, const StatePartition& p) {
  const int n = model.state_count();
  // signature: old block plus the exact mass sent into every block
  std::map<std::pair<int, std::vector<Rational>>, int> seen;
  std::vector<int> keys(n);
  for (int s = 0; s < n; ++s) {
    std::vector<Rational> masses(p.block_count(), Rational(0));
    if (!model.absorbing[s]) {
      const auto& row = *model.transitions[s];
      for (int t = 0; t < n; ++t) {
        if (row[t] != 0) masses[p.block_of[t]] += row[t];
      }
    }
    auto key = std::make_pair(p.block_of[s], std::move(masses));
    auto [it, inserted] = seen.emplace(std::move(key), static_cast<int>(seen.size()));
    keys[s] = it->second;
  }
  return partition_from_keys(keys);
}

StatePartition bisimilarity_partition(const SmmModel& model) {
  StatePartition p = initial_partition(model);
  for (;;) {
    StatePartition next = refine_once(model, p);
    if (next.block_count() == p.block_count()) return next;
    p = std::move(next);
  }
}

}  // namespace smmdist
