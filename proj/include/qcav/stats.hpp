#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qcav {

/// Compensated (Neumaier) summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// log(sum_i exp(x_i)), shifted by the maximum. Empty input gives -inf.
double log_sum_exp(std::span<const double> xs);

/// log((1/n) sum_i exp(x_i)). Throws DomainError on empty input.
double log_mean_exp(std::span<const double> xs);

/// Point estimate with an optional standard error. The error is absent when
/// fewer than two blocks are available.
struct Estimate {
  double value = 0.0;
  std::optional<double> error;
};

/// Each chain is cut into `blocks_per_chain` contiguous blocks (fewer when a
/// chain is shorter) and the delete-one-block jackknife runs over the pooled
/// block set. Blocks absorb autocorrelation shorter than the block length.
class BlockPartition {
 public:
  BlockPartition(std::span<const std::span<const double>> chains, std::size_t blocks_per_chain);

  std::size_t block_count() const { return blocks_.size(); }
  std::size_t sample_count() const { return total_; }
  std::span<const double> block(std::size_t b) const { return blocks_[b]; }

 private:
  std::vector<std::span<const double>> blocks_;
  std::size_t total_ = 0;
};

/// Sample mean with blocked-jackknife error.
Estimate blocked_mean(const BlockPartition& blocks);

/// log of the sample mean of exp(x), with blocked-jackknife error.
Estimate blocked_log_mean_exp(const BlockPartition& blocks);

/// Jackknife standard error from leave-one-out estimates.
std::optional<double> jackknife_error(std::span<const double> leave_one_out);

}  // namespace qcav
