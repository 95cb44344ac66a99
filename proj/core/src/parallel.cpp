#include "slris/parallel.hpp"

namespace slris {

ParallelRunner::ParallelRunner(unsigned threads) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    for (unsigned i = 1; i < threads; ++i)
        workers_.emplace_back([this] { worker_loop(); });
}

ParallelRunner::~ParallelRunner() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    start_cv_.notify_all();
    for (std::thread& w : workers_) w.join();
}

bool ParallelRunner::claim_and_execute() {
    std::size_t job;
    const std::function<void(std::size_t)>* fn;
    {
        std::lock_guard lock(mutex_);
        if (next_job_ >= job_count_) return false;
        job = next_job_++;
        fn = job_fn_;
    }
    try {
        (*fn)(job);
    } catch (...) {
        std::lock_guard lock(mutex_);
        if (!error_) error_ = std::current_exception();
    }
    {
        std::lock_guard lock(mutex_);
        if (++jobs_done_ == job_count_) done_cv_.notify_all();
    }
    return true;
}

void ParallelRunner::worker_loop() {
    std::uint64_t seen_generation = 0;
    for (;;) {
        {
            std::unique_lock lock(mutex_);
            start_cv_.wait(lock, [&] { return stopping_ || generation_ != seen_generation; });
            if (stopping_) return;
            seen_generation = generation_;
        }
        while (claim_and_execute()) {
        }
    }
}

void ParallelRunner::run(std::size_t job_count, const std::function<void(std::size_t)>& fn) {
    if (job_count == 0) return;
    {
        std::lock_guard lock(mutex_);
        job_fn_ = &fn;
        job_count_ = job_count;
        next_job_ = 0;
        jobs_done_ = 0;
        error_ = nullptr;
        ++generation_;
    }
    start_cv_.notify_all();
    while (claim_and_execute()) {
    }
    std::unique_lock lock(mutex_);
    done_cv_.wait(lock, [&] { return jobs_done_ == job_count_; });
    job_count_ = 0;
    if (error_) std::rethrow_exception(error_);
}

}  // namespace slris
