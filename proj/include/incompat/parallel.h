// Copyright 2026 The incompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INCOMPAT_PARALLEL_H
#define INCOMPAT_PARALLEL_H

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace incompat {

/// Runs fn(i) for i in [0, count) on up to `jobs` threads using contiguous
/// index blocks. fn must only write to slots owned by i; the caller reduces
/// afterwards, so results never depend on the job count.
template <typename Fn>
void parallel_for(size_t count, int jobs, Fn &&fn) {
    size_t workers = std::clamp<size_t>(jobs <= 0 ? 1 : static_cast<size_t>(jobs), 1, std::max<size_t>(count, 1));
    if (workers == 1) {
        for (size_t i = 0; i < count; i++) {
            fn(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (size_t w = 0; w < workers; w++) {
        size_t begin = count * w / workers;
        size_t end = count * (w + 1) / workers;
        threads.emplace_back([&, w, begin, end] {
            try {
                for (size_t i = begin; i < end; i++) {
                    fn(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : threads) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace incompat

#endif
