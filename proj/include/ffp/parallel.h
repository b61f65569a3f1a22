// Copyright 2026 The ffprotect Authors
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

#ifndef FFP_PARALLEL_H
#define FFP_PARALLEL_H

#include <cstddef>
#include <functional>

namespace ffp {

/// Environment variable consulted when no explicit worker count is given.
inline constexpr const char* kWorkersEnv = "FFP_WORKERS";

/// requested > 0 is returned as is; 0 falls back to FFP_WORKERS, then to the hardware thread count.
int resolve_workers(int requested);

/// Runs fn(block) for each block in [0, n_blocks) on up to `workers` threads.
/// Callers write into per-block slots and reduce them in block order afterwards,
/// so results never depend on the worker count. The first exception thrown by
/// any block is rethrown on the calling thread.
void parallel_for_blocks(std::size_t n_blocks, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace ffp

#endif  // FFP_PARALLEL_H
