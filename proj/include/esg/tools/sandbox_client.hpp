// Copyright 2026 The ESG Agent Authors.
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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "esg/common/subprocess.hpp"

namespace esg::tools {

struct ExecRequest {
  std::string code;
  int timeout_s = 30;
  int mem_limit_mb = 512;
  std::filesystem::path workdir;
};

struct ExecResult {
  int exit_code = 0;
  std::string stdout_text;
  std::string stderr_text;
  std::int64_t wall_ms = 0;
  std::vector<std::filesystem::path> artifacts;  // absolute, under workdir
  bool timed_out = false;
};

// Client for the out-of-process code runner. Requests and results travel as
// one JSON object per line over the runner's stdin/stdout. The runner is
// started lazily and restarted on the next request after it dies.
class SandboxClient {
 public:
  explicit SandboxClient(std::vector<std::string> runner_argv);

  // Throws SandboxUnavailable when the runner cannot be reached or crashes
  // mid-request, and Timeout when no reply arrives within timeout_s + 2 s.
  // A nonzero exit or timed-out run is returned, not thrown.
  ExecResult execute(const ExecRequest& request);

  bool configured() const { return !argv_.empty(); }

 private:
  std::vector<std::string> argv_;
  std::mutex mu_;
  std::unique_ptr<LineChannel> channel_;
};

}  // namespace esg::tools
