// Copyright 2025-present the gazekit project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace gazekit {

/// splitmix64 finalizer. Good avalanche, trivially reproducible anywhere.
inline std::uint64_t
splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic sub-stream seed for (participant, session) under one master
/// seed. Documented splitting rule: three chained splitmix64 rounds, so any
/// session can be regenerated in isolation.
inline std::uint64_t
derive_seed(std::uint64_t master, std::uint64_t participant, std::uint64_t session) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ splitmix64(0x5e4d11 + participant));
    h = splitmix64(h ^ splitmix64(0xa5c3b7 + session));
    return h;
}

/// FNV-1a over a byte string; used for config fingerprints in reports.
inline std::uint64_t
fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Run fn(i) for i in [0, n) on up to `jobs` threads. jobs <= 1 runs inline.
/// fn must not throw across threads; work items are independent by contract.
inline void
parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    if (n == 0) {
        return;
    }
    if (jobs <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    unsigned workers = jobs;
    if (workers > n) {
        workers = static_cast<unsigned>(n);
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic_size_t next{0};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) {
                    return;
                }
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace gazekit
