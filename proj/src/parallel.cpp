#include "posthoc/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

#include "posthoc/errors.hpp"

namespace posthoc {

TrialAccumulator run_trials_blocked(const ModelConfig& config, std::int64_t n_trials,
                                    RngSeed seed, int workers) {
  if (n_trials < 1) throw PreconditionError("n_trials must be positive");
  if (workers < 1) workers = 1;

  const std::int64_t n_blocks = (n_trials + kTrialBlockSize - 1) / kTrialBlockSize;
  std::vector<TrialAccumulator> block_acc(static_cast<std::size_t>(n_blocks));

  const auto run_block = [&](std::int64_t block, TrialWorkspace& ws) {
    const std::int64_t begin = block * kTrialBlockSize;
    const std::int64_t end = std::min(begin + kTrialBlockSize, n_trials);
    TrialAccumulator& acc = block_acc[static_cast<std::size_t>(block)];
    for (std::int64_t trial = begin; trial < end; ++trial) {
      acc.add_pair(run_paired_trial(config, trial, seed, ws));
    }
  };

  if (workers == 1 || n_blocks == 1) {
    TrialWorkspace ws;
    for (std::int64_t block = 0; block < n_blocks; ++block) run_block(block, ws);
  } else {
    if (workers > n_blocks) workers = static_cast<int>(n_blocks);
    std::atomic<std::int64_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        TrialWorkspace ws;
        for (;;) {
          const std::int64_t block = cursor.fetch_add(1, std::memory_order_relaxed);
          if (block >= n_blocks) return;
          run_block(block, ws);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  TrialAccumulator total;
  for (const TrialAccumulator& acc : block_acc) total.merge(acc);
  return total;
}

}  // namespace posthoc
