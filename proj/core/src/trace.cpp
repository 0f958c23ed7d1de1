// Copyright 2026 The bayesex Authors.
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

#include "bayesex/trace.hpp"

namespace bayesex {

bool AuditReport::pass() const { return first_failure() == nullptr; }

const AuditEntry* AuditReport::first_failure() const {
  for (const auto& e : entries) {
    if (!e.pass) return &e;
  }
  return nullptr;
}

std::size_t EpisodeTrace::open_phase(PhaseRecord record) {
  phases.push_back(std::move(record));
  return phases.size() - 1;
}

}  // namespace bayesex
