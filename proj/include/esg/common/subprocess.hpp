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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace esg {

struct ProcessOptions {
  std::vector<std::string> argv;
  std::filesystem::path cwd;
  std::chrono::milliseconds timeout{30000};
  std::string stdin_data;
  std::optional<std::uint64_t> mem_limit_mb;
};

struct ProcessResult {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
  bool timed_out = false;
  std::int64_t wall_ms = 0;
};

// Runs argv to completion in its own process group. On timeout the whole
// group is killed and `timed_out` is set.
ProcessResult run_process(const ProcessOptions& options);

// A long-lived child speaking a line-delimited protocol on stdin/stdout.
class LineChannel {
 public:
  explicit LineChannel(std::vector<std::string> argv);
  ~LineChannel();

  LineChannel(const LineChannel&) = delete;
  LineChannel& operator=(const LineChannel&) = delete;

  void start();
  bool running() const;
  void stop();

  void write_line(const std::string& line);
  // Returns nullopt on timeout; throws esg::Error(kIoError) if the child closed
  // its stdout.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);

 private:
  std::vector<std::string> argv_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

}  // namespace esg
