#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "d2dsim/rng.hpp"

namespace d2dsim {

using ContentId = std::uint64_t;

// What one user session selected: previously-seen contents plus freshly
// created ones. m_n = total, m_n^0 = new, m_n^h = old.
struct SelectionOutcome {
  std::size_t user_index = 0;              // n, 1-based
  std::vector<ContentId> old_contents;     // sorted, disjoint from new
  std::vector<ContentId> new_contents;     // sorted

  std::size_t total() const { return old_contents.size() + new_contents.size(); }
  std::size_t new_count() const { return new_contents.size(); }
  std::size_t old_count() const { return old_contents.size(); }
};

// Indian Buffet Process state. The infinite catalog is lazy: only contents
// with at least one selector are materialized; unseen contents appear only
// through the Poisson(alpha/n) new-content draw. Selection sessions are
// strictly sequential.
class IbpState {
 public:
  explicit IbpState(double alpha);

  double alpha() const { return alpha_; }
  std::size_t users_seen() const { return users_seen_; }
  std::size_t catalog_size() const { return counts_.size(); }  // K_h
  const std::map<ContentId, std::uint32_t>& counts() const { return counts_; }

  // m_k^{n-1} / n for the user about to select (n must be users_seen + 1);
  // 0 for contents that were never selected.
  double prior_probability(ContentId content, std::size_t n) const;

  // Sum over the catalog of m_k^{n-1} / n, the expected-old-content mass
  // entering the eNB utility.
  double prior_mass(std::size_t n) const;

  // Runs user n = users_seen + 1: each stored content is taken with
  // probability m_k^{n-1}/n, new contents arrive as Poisson(alpha/n), and
  // all counts are updated.
  SelectionOutcome select_next(Rng& rng);

 private:
  double alpha_;
  std::size_t users_seen_ = 0;
  std::map<ContentId, std::uint32_t> counts_;
  ContentId next_content_id_ = 1;
};

// mu = E[m_n^h] = (n-1) * alpha / n.
double expected_old_count(double alpha, std::size_t n);

}  // namespace d2dsim
