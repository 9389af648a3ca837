#include <algorithm>
#include <compare>

#include "batchsim/fairbatch.hpp"

namespace batchsim {

std::uint64_t Selector::next_random() {
  // xorshift64*
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

// Three-way quickselect for the element of rank (n-1)/2 under `cmp`. On
// return items is arranged as [before median | equal to median | after
// median] over the whole span, and [eq_begin, eq_end) is the middle block.
void Selector::median_partition(std::span<std::size_t> items, const Compare& cmp,
                                std::size_t& eq_begin, std::size_t& eq_end) {
  const std::size_t rank = (items.size() - 1) / 2;
  std::size_t lo = 0;
  std::size_t hi = items.size();
  for (;;) {
    if (hi - lo == 1) {
      eq_begin = lo;
      eq_end = hi;
      return;
    }
    const std::size_t pivot = items[lo + next_random() % (hi - lo)];
    std::size_t lt = lo;
    std::size_t i = lo;
    std::size_t gt = hi;
    while (i < gt) {
      const std::strong_ordering c = cmp(items[i], pivot);
      if (c < 0) {
        std::swap(items[lt++], items[i++]);
      } else if (c > 0) {
        std::swap(items[i], items[--gt]);
      } else {
        ++i;
      }
    }
    if (rank < lt) {
      hi = lt;
    } else if (rank >= gt) {
      lo = gt;
    } else {
      eq_begin = lt;
      eq_end = gt;
      return;
    }
  }
}

void Selector::weighted_prefix(std::span<const SchedState> states, std::span<std::size_t> items,
                               Time budget, const Compare& cmp, std::vector<std::size_t>& out) {
  if (items.empty()) return;
  auto work = [&](std::span<const std::size_t> part) {
    Time w = 0;
    for (std::size_t j : part) w += states[j].remaining;
    return w;
  };
  if (items.size() == 1 || work(items) <= budget) {
    out.insert(out.end(), items.begin(), items.end());
    return;
  }

  std::size_t eq_begin = 0;
  std::size_t eq_end = 0;
  median_partition(items, cmp, eq_begin, eq_end);
  const auto preferred = items.subspan(0, eq_begin);
  const auto tied = items.subspan(eq_begin, eq_end - eq_begin);
  const auto rest = items.subspan(eq_end);

  const Time preferred_work = work(preferred);
  if (preferred_work > budget) {
    weighted_prefix(states, preferred, budget, cmp, out);
    return;
  }
  out.insert(out.end(), preferred.begin(), preferred.end());
  Time left = budget - preferred_work;
  if (left == 0) return;

  const Time tied_work = work(tied);
  if (tied_work >= left) {
    if (tied_work == left || tied.size() == 1) {
      out.insert(out.end(), tied.begin(), tied.end());
    } else {
      // Equal ratios: fall back to index order inside the tie block.
      const Compare by_job_index = [this](std::size_t a, std::size_t b) {
        ++stats_.comparisons;
        return a <=> b;
      };
      weighted_prefix(states, tied, left, by_job_index, out);
    }
    return;
  }
  out.insert(out.end(), tied.begin(), tied.end());
  left -= tied_work;
  weighted_prefix(states, rest, left, cmp, out);
}

Selector::Compare Selector::ratio_order(std::span<const SchedState> states, SortOrder order) {
  return [this, states, order](std::size_t a, std::size_t b) {
    ++stats_.comparisons;
    const std::strong_ordering c = states[a].ratio <=> states[b].ratio;
    // "less" means dispatched earlier.
    return order == SortOrder::Descending ? 0 <=> c : c;
  };
}

namespace {

void check_select_args(std::span<const std::size_t> live, Time budget) {
  if (live.empty()) throw Error(Errc::EmptySet, "select on an empty live set");
  if (budget < 1) throw Error(Errc::NonPositiveBudget, "select budget must be >= 1");
}

}  // namespace

std::vector<std::size_t> Selector::select(std::span<const SchedState> states,
                                          std::span<const std::size_t> live, Time budget,
                                          SortOrder order) {
  check_select_args(live, budget);
  ++stats_.calls;
  stats_.live_total += live.size();
  std::vector<std::size_t> items(live.begin(), live.end());
  std::vector<std::size_t> out;
  weighted_prefix(states, std::span<std::size_t>(items), budget,
                  ratio_order(states, order), out);
  return out;
}

SelectPartition Selector::partition(std::span<const SchedState> states,
                                    std::span<const std::size_t> live, Time budget,
                                    SortOrder order) {
  check_select_args(live, budget);
  std::vector<std::size_t> items(live.begin(), live.end());
  std::size_t eq_begin = 0;
  std::size_t eq_end = 0;
  median_partition(std::span<std::size_t>(items),
                   ratio_order(states, order), eq_begin, eq_end);
  SelectPartition p;
  p.m = states[items[eq_begin]].ratio;
  p.budget = budget;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::size_t j = items[i];
    if (i < eq_begin) {
      p.preferred.push_back(j);
      p.preferred_work += states[j].remaining;
    } else if (i < eq_end) {
      p.tied.push_back(j);
      p.tied_work += states[j].remaining;
    } else {
      p.rest.push_back(j);
      p.rest_work += states[j].remaining;
    }
  }
  return p;
}

}  // namespace batchsim
