#include "batchsim/oracles.hpp"

namespace batchsim {

Time oracle_group_waiting(std::span<const Time> chosen_remaining, std::size_t live_count, Time tq) {
  const std::size_t k = chosen_remaining.size();
  if (k == 0 || k > live_count || tq < 1) {
    throw Error(Errc::DomainError, "group waiting needs 1 <= k <= n and tq >= 1");
  }
  Time total = 0;
  Time ahead = 0;
  for (Time rt : chosen_remaining) {
    if (rt < 1) throw Error(Errc::DomainError, "remaining time must be >= 1");
    total += ahead;
    ahead += rt;
  }
  return total + static_cast<Time>(live_count - k) * tq;
}

Time oracle_group_response(std::span<const GroupMember> chosen, std::size_t fresh_not_chosen,
                           Time tq) {
  if (chosen.empty() || tq < 1) {
    throw Error(Errc::DomainError, "group response needs k >= 1 and tq >= 1");
  }
  Time total = 0;
  Time ahead = 0;
  for (const GroupMember& p : chosen) {
    if (p.remaining < 1 || p.remaining > p.burst) {
      throw Error(Errc::DomainError, "need 1 <= remaining <= burst");
    }
    if (p.remaining == p.burst) total += ahead;
    ahead += p.remaining;
  }
  return total + static_cast<Time>(fresh_not_chosen) * tq;
}

std::size_t oracle_remaining_jobs(std::size_t r_prev, std::size_t p_k, RemainingMode mode) {
  if (p_k > r_prev) throw Error(Errc::DomainError, "p_k exceeds R_prev");
  if (mode == RemainingMode::MaxAlive) {
    if (p_k < 1) throw Error(Errc::DomainError, "every cycle dispatches at least one job");
    return r_prev - p_k + 1;
  }
  return r_prev - p_k;
}

Rational oracle_min_avg_response(std::size_t n, Time k) {
  if (n < 1 || k < 1) throw Error(Errc::DomainError, "need n >= 1 and k >= 1");
  const auto nn = static_cast<std::int64_t>(n);
  return Rational(k * (nn - 1), 2);
}

}  // namespace batchsim
