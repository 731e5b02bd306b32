#include "qcav/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcav/errors.hpp"

namespace qcav {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double peak = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(peak)) return peak;
  CompensatedSum acc;
  for (double x : xs) acc.add(std::exp(x - peak));
  return peak + std::log(acc.value());
}

double log_mean_exp(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("log_mean_exp: empty sample set");
  return log_sum_exp(xs) - std::log(static_cast<double>(xs.size()));
}

BlockPartition::BlockPartition(std::span<const std::span<const double>> chains,
                               std::size_t blocks_per_chain) {
  if (blocks_per_chain == 0) blocks_per_chain = 1;
  for (const auto& chain : chains) {
    const std::size_t n = chain.size();
    if (n == 0) continue;
    const std::size_t nb = std::min(n, blocks_per_chain);
    const std::size_t base = n / nb;
    const std::size_t extra = n % nb;
    std::size_t offset = 0;
    for (std::size_t b = 0; b < nb; ++b) {
      const std::size_t len = base + (b < extra ? 1 : 0);
      blocks_.push_back(chain.subspan(offset, len));
      offset += len;
    }
    total_ += n;
  }
}

std::optional<double> jackknife_error(std::span<const double> leave_one_out) {
  const std::size_t nb = leave_one_out.size();
  if (nb < 2) return std::nullopt;
  CompensatedSum s;
  for (double v : leave_one_out) s.add(v);
  const double centre = s.value() / static_cast<double>(nb);
  CompensatedSum ss;
  for (double v : leave_one_out) ss.add((v - centre) * (v - centre));
  return std::sqrt(static_cast<double>(nb - 1) / static_cast<double>(nb) * ss.value());
}

Estimate blocked_mean(const BlockPartition& blocks) {
  const std::size_t nb = blocks.block_count();
  if (nb == 0) throw DomainError("blocked_mean: empty sample set");
  std::vector<double> sums(nb);
  CompensatedSum total;
  for (std::size_t b = 0; b < nb; ++b) {
    CompensatedSum s;
    for (double x : blocks.block(b)) s.add(x);
    sums[b] = s.value();
    total.add(sums[b]);
  }
  const double n = static_cast<double>(blocks.sample_count());
  Estimate out{total.value() / n, std::nullopt};
  if (nb >= 2) {
    std::vector<double> loo(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      const double nb_len = static_cast<double>(blocks.block(b).size());
      loo[b] = (total.value() - sums[b]) / (n - nb_len);
    }
    out.error = jackknife_error(loo);
  }
  return out;
}

Estimate blocked_log_mean_exp(const BlockPartition& blocks) {
  const std::size_t nb = blocks.block_count();
  if (nb == 0) throw DomainError("blocked_log_mean_exp: empty sample set");
  std::vector<double> block_lse(nb);
  for (std::size_t b = 0; b < nb; ++b) block_lse[b] = log_sum_exp(blocks.block(b));
  const double n = static_cast<double>(blocks.sample_count());
  Estimate out{log_sum_exp(block_lse) - std::log(n), std::nullopt};
  if (nb >= 2) {
    std::vector<double> loo(nb);
    std::vector<double> others;
    others.reserve(nb - 1);
    for (std::size_t b = 0; b < nb; ++b) {
      others.clear();
      for (std::size_t c = 0; c < nb; ++c) {
        if (c != b) others.push_back(block_lse[c]);
      }
      const double remaining = n - static_cast<double>(blocks.block(b).size());
      loo[b] = log_sum_exp(others) - std::log(remaining);
    }
    out.error = jackknife_error(loo);
  }
  return out;
}

}  // namespace qcav
