#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace asmsearch {

// Applies fn to every element of a batch using `workers` threads over
// contiguous stripes. The output order equals the input order, so results are
// identical for any worker count; worker count only changes wall-clock time.
template <typename In, typename Out, typename Fn>
std::vector<Out> map_batch(const std::vector<In>& batch, unsigned workers,
                           Fn fn) {
    std::vector<Out> out(batch.size());
    if (batch.empty())
        return out;
    if (workers <= 1) {
        for (std::size_t i = 0; i < batch.size(); ++i)
            out[i] = fn(batch[i]);
        return out;
    }
    std::size_t stripe = (batch.size() + workers - 1) / workers;
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t begin = w * stripe;
        if (begin >= batch.size())
            break;
        std::size_t end = std::min(batch.size(), begin + stripe);
        threads.emplace_back([&, w, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i)
                    out[i] = fn(batch[i]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (std::thread& t : threads)
        t.join();
    for (const std::exception_ptr& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

// Batch size used by the streaming CLI stages. Fixed (not worker-derived) so
// batching never depends on the worker count.
inline constexpr std::size_t kStreamBatchLines = 1024;

} // namespace asmsearch
