#include "d2dsim/ibp.hpp"

#include <stdexcept>
#include <string>

namespace d2dsim {

IbpState::IbpState(double alpha) : alpha_(alpha) {
  if (!(alpha > 0)) throw std::domain_error("IbpState: alpha must be > 0");
}

double IbpState::prior_probability(ContentId content, std::size_t n) const {
  if (n != users_seen_ + 1)
    throw std::logic_error("prior_probability: expected user " +
                           std::to_string(users_seen_ + 1) + ", got " +
                           std::to_string(n));
  const auto it = counts_.find(content);
  if (it == counts_.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(n);
}

double IbpState::prior_mass(std::size_t n) const {
  if (n != users_seen_ + 1)
    throw std::logic_error("prior_mass: expected user " +
                           std::to_string(users_seen_ + 1) + ", got " +
                           std::to_string(n));
  double sum = 0.0;
  for (const auto& [_, count] : counts_) sum += count;
  return sum / static_cast<double>(n);
}

SelectionOutcome IbpState::select_next(Rng& rng) {
  const std::size_t n = users_seen_ + 1;
  SelectionOutcome outcome;
  outcome.user_index = n;

  for (const auto& [content, count] : counts_) {
    const double p = static_cast<double>(count) / static_cast<double>(n);
    if (rng.bernoulli(p)) outcome.old_contents.push_back(content);
  }
  for (ContentId content : outcome.old_contents) ++counts_[content];

  const long long fresh = rng.poisson(alpha_ / static_cast<double>(n));
  for (long long i = 0; i < fresh; ++i) {
    const ContentId id = next_content_id_++;
    counts_.emplace(id, 1);
    outcome.new_contents.push_back(id);
  }

  ++users_seen_;
  return outcome;
}

double expected_old_count(double alpha, std::size_t n) {
  if (!(alpha > 0)) throw std::domain_error("expected_old_count: alpha must be > 0");
  if (n < 1) throw std::domain_error("expected_old_count: n must be >= 1");
  return (static_cast<double>(n) - 1.0) * alpha / static_cast<double>(n);
}

}  // namespace d2dsim
