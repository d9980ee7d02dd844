#include "tcamsplit/harness.h"

#include <algorithm>
#include <exception>
#include <thread>

#include "tcamsplit/bit_matcher.h"
#include "tcamsplit/order_search.h"

namespace tcamsplit {

std::uint64_t ordered_partition_count(unsigned width, std::size_t k) {
  if (width >= 64) return UINT64_MAX;
  const std::uint64_t n = (std::uint64_t{1} << width) - 1;
  if (k == 0 || k - 1 > n) return 0;
  const std::uint64_t r = std::min<std::uint64_t>(k - 1, n - (k - 1));
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    c = c * (n - r + i) / i;
    if (c > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(c);
}

PartitionStream::PartitionStream(unsigned width, std::size_t k, std::uint64_t budget)
    : width_(width), k_(k), total_(ordered_partition_count(width, k)) {
  if (width >= 63) throw Error(ErrorCode::BudgetExceeded, "width " + std::to_string(width));
  if (total_ > budget)
    throw Error(ErrorCode::BudgetExceeded, std::to_string(total_) + " ordered partitions");
}

bool PartitionStream::next(Partition& out) {
  const std::uint64_t n = std::uint64_t{1} << width_;
  if (k_ == 0 || k_ > n) return false;
  if (!started_) {
    parts_.assign(k_, 1);
    parts_.back() = n - (k_ - 1);
    started_ = true;
  } else {
    bool advanced = false;
    std::uint64_t suffix = parts_.back();
    for (std::size_t i = k_ - 1; i-- > 0;) {
      // suffix holds parts_[i+1..k-1]; it has slack when above its minimum.
      if (suffix > k_ - 1 - i) {
        ++parts_[i];
        for (std::size_t j = i + 1; j + 1 < k_; ++j) parts_[j] = 1;
        parts_.back() = suffix - 1 - (k_ - 2 - i);
        advanced = true;
        break;
      }
      suffix += parts_[i];
    }
    if (!advanced) return false;
  }
  out.width = width_;
  out.weights.assign(parts_.begin(), parts_.end());
  return true;
}

std::vector<Partition> enumerate_partitions(unsigned width, std::size_t k, std::uint64_t budget) {
  PartitionStream s(width, k, budget);
  std::vector<Partition> out;
  Partition p;
  while (s.next(p)) out.push_back(p);
  return out;
}

std::vector<std::vector<std::uint64_t>> unordered_partitions(std::uint64_t n, std::size_t k) {
  std::vector<std::vector<std::uint64_t>> out;
  std::vector<std::uint64_t> cur;
  auto rec = [&](auto&& self, std::uint64_t rem, std::size_t left, std::uint64_t lo) -> void {
    if (left == 0) {
      if (rem == 0) out.push_back(cur);
      return;
    }
    for (std::uint64_t v = lo; v * left <= rem; ++v) {
      cur.push_back(v);
      self(self, rem - v, left - 1, v);
      cur.pop_back();
    }
  };
  if (k > 0) rec(rec, n, k, 1);
  return out;
}

OptimalityReport segment_optimality_report(unsigned width, std::optional<std::size_t> k, unsigned jobs,
                                           std::uint64_t budget) {
  if (width >= 20) throw Error(ErrorCode::BudgetExceeded, "width " + std::to_string(width));
  const std::uint64_t n = std::uint64_t{1} << width;
  OptimalityReport rep;
  rep.width = width;
  rep.k = k;
  std::vector<std::vector<std::uint64_t>> work;
  std::uint64_t kmin = k ? *k : 1, kmax = k ? *k : n;
  for (std::uint64_t kk = kmin; kk <= kmax; ++kk) {
    auto part = unordered_partitions(n, kk);
    if (work.size() + part.size() > budget)
      throw Error(ErrorCode::BudgetExceeded, "too many unordered partitions");
    work.insert(work.end(), part.begin(), part.end());
  }
  rep.unordered = work.size();

  jobs = std::max(1u, jobs);
  std::vector<std::vector<ReportRow>> shard_rows(jobs);
  std::vector<std::uint64_t> shard_ordered(jobs, 0);
  std::vector<std::exception_ptr> errors(jobs);
  auto run = [&](unsigned shard) {
    try {
      for (std::size_t i = shard; i < work.size(); i += jobs) {
        Partition p = validate_partition(WeightVector(work[i].begin(), work[i].end()), width);
        shard_ordered[shard] += distinct_orderings(p);
        const OrderSearchReport r = exhaustive_best_order(p);
        if (r.gap == 0) continue;
        WeightVector seq = p.weights;
        do shard_rows[shard].push_back({seq, r.lambda, r.best_n, r.gap});
        while (std::next_permutation(seq.begin(), seq.end()));
      }
    } catch (...) {
      errors[shard] = std::current_exception();
    }
  };
  if (jobs == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned s = 0; s < jobs; ++s) threads.emplace_back(run, s);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (unsigned s = 0; s < jobs; ++s) {
    rep.ordered += shard_ordered[s];
    rep.rows.insert(rep.rows.end(), shard_rows[s].begin(), shard_rows[s].end());
  }
  std::sort(rep.rows.begin(), rep.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.partition.size() != b.partition.size()) return a.partition.size() < b.partition.size();
    return a.partition < b.partition;
  });
  return rep;
}

std::string format_report_csv(const OptimalityReport& r) {
  std::string s = "partition,lambda,minN,gap\n";
  for (const auto& row : r.rows)
    s += "\"" + format_partition(row.partition) + "\"," + std::to_string(row.lambda) + "," +
         std::to_string(row.min_n) + "," + std::to_string(row.gap) + "\n";
  s += "# width=" + std::to_string(r.width) + " k=" + (r.k ? std::to_string(*r.k) : std::string("all")) +
       " unordered=" + std::to_string(r.unordered) + " ordered=" + std::to_string(r.ordered) +
       " gap_rows=" + std::to_string(r.rows.size()) + "\n";
  return s;
}

}  // namespace tcamsplit
