#ifndef TCAMSPLIT_HARNESS_H
#define TCAMSPLIT_HARNESS_H

#include <cstdint>
#include <optional>

#include "tcamsplit/core_model.h"

namespace tcamsplit {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

// C(2^W - 1, k - 1), saturating at 2^64 - 1.
std::uint64_t ordered_partition_count(unsigned width, std::size_t k);

// Ordered partitions of 2^W into k positive parts, in lexicographic order.
class PartitionStream {
 public:
  PartitionStream(unsigned width, std::size_t k, std::uint64_t budget = kDefaultBudget);
  bool next(Partition& out);
  std::uint64_t total() const { return total_; }

 private:
  unsigned width_;
  std::size_t k_;
  std::uint64_t total_;
  std::vector<std::uint64_t> parts_;
  bool started_ = false;
};

std::vector<Partition> enumerate_partitions(unsigned width, std::size_t k,
                                            std::uint64_t budget = kDefaultBudget);

// Partitions of n into exactly k parts, each in non-decreasing order.
std::vector<std::vector<std::uint64_t>> unordered_partitions(std::uint64_t n, std::size_t k);

struct ReportRow {
  WeightVector partition;
  std::size_t lambda = 0;
  std::size_t min_n = 0;
  std::size_t gap = 0;
};

struct OptimalityReport {
  unsigned width = 0;
  std::optional<std::size_t> k;  // empty: every k
  std::uint64_t unordered = 0;
  std::uint64_t ordered = 0;
  std::vector<ReportRow> rows;  // gap > 0 only, every ordering, sorted
};

OptimalityReport segment_optimality_report(unsigned width, std::optional<std::size_t> k,
                                           unsigned jobs = 1,
                                           std::uint64_t budget = kDefaultBudget);

std::string format_report_csv(const OptimalityReport& r);

}  // namespace tcamsplit

#endif  // TCAMSPLIT_HARNESS_H
