// SPDX-License-Identifier: Apache-2.0
//
// starisac: STAR-RIS integrated sensing and communication simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#pragma once

#include <cstddef>
#include <functional>

namespace starisac {

/// Worker count: STARISAC_JOBS wins over the requested value; 0 means
/// hardware concurrency.
unsigned resolve_jobs(unsigned requested);

/// Runs body(begin, end) over [0, count) split into contiguous chunks on at
/// most `jobs` threads. The first exception thrown by any chunk is rethrown
/// after all workers stop.
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t, std::size_t)>& body);

} // namespace starisac
