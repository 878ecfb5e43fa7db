// Copyright 2026 The collabkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace collabkit {

// Runs `fn(begin, end)` over contiguous chunks of [0, n) and returns the
// per-chunk results in chunk order. Chunk boundaries depend only on `n` and
// never on `workers`, so merging results chunk-by-chunk yields output that is
// identical for any worker count.
template <typename R, typename Fn>
std::vector<R> map_chunked(size_t n, int workers, Fn&& fn) {
  constexpr size_t kChunk = 16384;
  std::vector<std::pair<size_t, size_t>> chunks;
  for (size_t b = 0; b < n; b += kChunk) {
    chunks.emplace_back(b, std::min(n, b + kChunk));
  }
  std::vector<R> results(chunks.size());
  if (chunks.empty()) return results;
  size_t n_threads = workers < 1 ? 1 : static_cast<size_t>(workers);
  n_threads = std::min(n_threads, chunks.size());
  if (n_threads <= 1) {
    for (size_t c = 0; c < chunks.size(); ++c) {
      results[c] = fn(chunks[c].first, chunks[c].second);
    }
    return results;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(n_threads);
  for (size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (size_t c = t; c < chunks.size(); c += n_threads) {
          results[c] = fn(chunks[c].first, chunks[c].second);
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

// Splits text into line views. A trailing newline does not produce an empty
// final line; interior empty lines are kept so line numbers stay accurate.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

}  // namespace collabkit
