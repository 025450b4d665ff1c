#include "worddist.hpp"

#include <algorithm>
#include <stdexcept>

namespace smmdist {

namespace {

void check_shared_residence(const SmmModel& model) {
  const ResidenceDist* first = nullptr;
  for (int s = 0; s < model.state_count(); ++s) {
    if (model.absorbing[s]) continue;
    if (!first) {
      first = &*model.residence[s];
    } else if (!(*first == *model.residence[s])) {
      throw std::invalid_argument(
          "absorbed-word analysis needs a shared residence-time distribution on all "
          "non-absorbing states");
    }
  }
}

}  // namespace

WordDistribution absorbed_word_distribution(const SmmModel& model, int start, int depth_cap) {
  require_valid(model);
  check_shared_residence(model);
  if (start < 0 || start >= model.state_count()) throw std::invalid_argument("unknown state id");
  if (depth_cap < 0) throw std::invalid_argument("depth cap must be nonnegative");

  WordDistribution out;
  out.class_labels = model.label_class_sets();
  const auto class_of = model.label_class_ids();
  const int n = model.state_count();

  // frontier: word prefix -> state-indexed mass still alive at the word's end
  std::map<std::vector<int>, std::vector<Rational>> frontier;
  {
    std::vector<int> word{class_of[start]};
    if (model.absorbing[start]) {
      out.words[word] = 1;
    } else {
      std::vector<Rational> mass(n, Rational(0));
      mass[start] = 1;
      frontier.emplace(std::move(word), std::move(mass));
    }
  }

  for (int depth = 0; depth < depth_cap && !frontier.empty(); ++depth) {
    std::map<std::vector<int>, std::vector<Rational>> next;
    for (const auto& [word, mass] : frontier) {
      for (int s = 0; s < n; ++s) {
        if (mass[s] == 0) continue;
        const auto& row = *model.transitions[s];
        for (int t = 0; t < n; ++t) {
          if (row[t] == 0) continue;
          const Rational p = mass[s] * row[t];
          std::vector<int> extended = word;
          extended.push_back(class_of[t]);
          if (model.absorbing[t]) {
            out.words[extended] += p;
          } else {
            auto [it, inserted] = next.emplace(std::move(extended), std::vector<Rational>());
            if (inserted) it->second.assign(n, Rational(0));
            it->second[t] += p;
          }
        }
      }
    }
    frontier = std::move(next);
  }

  out.residual = 0;
  for (const auto& [word, mass] : frontier) {
    for (const auto& m : mass) out.residual += m;
  }
  return out;
}

DeltaBounds trace_distance_bounds(const SmmModel& model, int s1, int s2, int depth_cap) {
  const WordDistribution a = absorbed_word_distribution(model, s1, depth_cap);
  const WordDistribution b = absorbed_word_distribution(model, s2, depth_cap);
  Rational l1(0);
  auto ia = a.words.begin();
  auto ib = b.words.begin();
  while (ia != a.words.end() || ib != b.words.end()) {
    if (ib == b.words.end() || (ia != a.words.end() && ia->first < ib->first)) {
      l1 += ia->second;
      ++ia;
    } else if (ia == a.words.end() || ib->first < ia->first) {
      l1 += ib->second;
      ++ib;
    } else {
      l1 += ia->second > ib->second ? ia->second - ib->second : ib->second - ia->second;
      ++ia;
      ++ib;
    }
  }
  DeltaBounds bounds;
  bounds.lower = l1 / 2;
  bounds.upper = bounds.lower + std::max(a.residual, b.residual);
  if (bounds.upper > 1) bounds.upper = 1;
  return bounds;
}

}  // namespace smmdist
