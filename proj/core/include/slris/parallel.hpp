#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace slris {

/// Persistent worker pool for data-parallel loops. Jobs are claimed from a
/// shared counter, so callers that need reproducible sums must accumulate
/// into per-job (not per-thread) buffers and reduce them in job order.
class ParallelRunner {
public:
    /// threads == 0 picks the hardware concurrency.
    explicit ParallelRunner(unsigned threads = 0);
    ~ParallelRunner();

    ParallelRunner(const ParallelRunner&) = delete;
    ParallelRunner& operator=(const ParallelRunner&) = delete;

    unsigned thread_count() const { return static_cast<unsigned>(workers_.size()) + 1; }

    /// Runs fn(0) .. fn(job_count - 1), blocking until all jobs finish.
    /// The calling thread participates. Exceptions from jobs are rethrown.
    void run(std::size_t job_count, const std::function<void(std::size_t)>& fn);

private:
    void worker_loop();
    bool claim_and_execute();

    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    const std::function<void(std::size_t)>* job_fn_ = nullptr;
    std::size_t job_count_ = 0;
    std::size_t next_job_ = 0;
    std::size_t jobs_done_ = 0;
    std::uint64_t generation_ = 0;
    std::exception_ptr error_;
    bool stopping_ = false;
};

}  // namespace slris
