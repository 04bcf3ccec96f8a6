#ifndef LEXMIX_PARALLEL_H_
#define LEXMIX_PARALLEL_H_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace lexmix {

// Order-preserving parallel map over a stream of items.
//
// `next` feeds items (called from one producer thread), `fn` runs on the
// worker pool, `sink` receives results strictly in input order on the
// calling thread. Output is therefore byte-identical for any worker
// count. Items move through bounded block queues, so peak memory is
// independent of stream length. Exceptions from any stage re-throw on
// the calling thread.
//
// Deadlock-freedom: blocks leave the input queue in FIFO order, so the
// block the sink waits for is either parked already or held by a worker,
// and the reorder window never blocks the worker holding seq ==
// next_emit.
template <typename In, typename Out>
void ordered_parallel_map(const std::function<std::optional<In>()>& next,
                          const std::function<Out(In&&)>& fn,
                          const std::function<void(Out&&)>& sink, unsigned workers,
                          size_t block_items = 256) {
  if (workers <= 1) {
    while (std::optional<In> item = next()) sink(fn(std::move(*item)));
    return;
  }

  struct Shared {
    std::mutex mu;
    std::condition_variable in_cv;   // producer <-> workers
    std::condition_variable out_cv;  // workers <-> sink
    std::deque<std::pair<uint64_t, std::vector<In>>> in_queue;
    std::map<uint64_t, std::vector<Out>> out_buffer;
    uint64_t next_emit = 0;
    uint64_t blocks_produced = 0;
    bool in_done = false;
    bool aborted = false;
    std::exception_ptr error;

    void fail(std::exception_ptr e) {
      std::lock_guard<std::mutex> lock(mu);
      if (!error) error = e;
      aborted = true;
      in_cv.notify_all();
      out_cv.notify_all();
    }
  };
  Shared shared;
  const size_t in_capacity = 2 * workers;
  const size_t out_window = 2 * workers + 2;

  std::thread producer([&] {
    try {
      uint64_t seq = 0;
      bool eof = false;
      while (!eof) {
        std::vector<In> block;
        block.reserve(block_items);
        while (block.size() < block_items) {
          std::optional<In> item = next();
          if (!item) {
            eof = true;
            break;
          }
          block.push_back(std::move(*item));
        }
        if (!block.empty()) {
          std::unique_lock<std::mutex> lock(shared.mu);
          shared.in_cv.wait(lock, [&] {
            return shared.aborted || shared.in_queue.size() < in_capacity;
          });
          if (shared.aborted) return;
          shared.in_queue.emplace_back(seq++, std::move(block));
          shared.in_cv.notify_all();
        }
      }
      std::lock_guard<std::mutex> lock(shared.mu);
      shared.blocks_produced = seq;
      shared.in_done = true;
      shared.in_cv.notify_all();
      shared.out_cv.notify_all();
    } catch (...) {
      shared.fail(std::current_exception());
    }
  });

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (;;) {
          uint64_t seq;
          std::vector<In> block;
          {
            std::unique_lock<std::mutex> lock(shared.mu);
            shared.in_cv.wait(lock, [&] {
              return shared.aborted || !shared.in_queue.empty() || shared.in_done;
            });
            if (shared.aborted) return;
            if (shared.in_queue.empty()) return;  // produced everything, queue drained
            seq = shared.in_queue.front().first;
            block = std::move(shared.in_queue.front().second);
            shared.in_queue.pop_front();
            shared.in_cv.notify_all();
          }
          std::vector<Out> results;
          results.reserve(block.size());
          for (In& item : block) results.push_back(fn(std::move(item)));
          {
            std::unique_lock<std::mutex> lock(shared.mu);
            shared.out_cv.wait(lock, [&] {
              return shared.aborted || seq < shared.next_emit + out_window;
            });
            if (shared.aborted) return;
            shared.out_buffer.emplace(seq, std::move(results));
            shared.out_cv.notify_all();
          }
        }
      } catch (...) {
        shared.fail(std::current_exception());
      }
    });
  }

  // Ordered sink loop on the calling thread.
  try {
    for (;;) {
      std::vector<Out> results;
      {
        std::unique_lock<std::mutex> lock(shared.mu);
        shared.out_cv.wait(lock, [&] {
          return shared.aborted || shared.out_buffer.count(shared.next_emit) > 0 ||
                 (shared.in_done && shared.next_emit >= shared.blocks_produced);
        });
        if (shared.aborted) break;
        const auto it = shared.out_buffer.find(shared.next_emit);
        if (it == shared.out_buffer.end()) break;  // all blocks emitted
        results = std::move(it->second);
        shared.out_buffer.erase(it);
        ++shared.next_emit;
        shared.out_cv.notify_all();
      }
      for (Out& r : results) sink(std::move(r));
    }
  } catch (...) {
    shared.fail(std::current_exception());
  }

  producer.join();
  for (std::thread& t : pool) t.join();
  if (shared.error) std::rethrow_exception(shared.error);
}

}  // namespace lexmix

#endif  // LEXMIX_PARALLEL_H_
