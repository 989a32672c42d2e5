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

#include "esg/tools/sandbox_client.hpp"

#include "esg/common/error.hpp"
#include "esg/common/files.hpp"

namespace esg::tools {

SandboxClient::SandboxClient(std::vector<std::string> runner_argv) : argv_(std::move(runner_argv)) {}

ExecResult SandboxClient::execute(const ExecRequest& request) {
  if (argv_.empty()) throw Error(ErrorKind::kSandboxUnavailable, "no code runner is configured");
  std::lock_guard lock(mu_);
  if (!channel_ || !channel_->running()) {
    channel_ = std::make_unique<LineChannel>(argv_);
    channel_->start();
  }
  const fs::path workdir = fs::absolute(request.workdir);
  const Json wire = {{"code", request.code},
                     {"timeout_s", request.timeout_s},
                     {"mem_limit_mb", request.mem_limit_mb},
                     {"workdir", workdir.string()}};
  std::optional<std::string> line;
  try {
    channel_->write_line(dump_line(wire));
    line = channel_->read_line(std::chrono::seconds(request.timeout_s + 2));
  } catch (const Error& e) {
    channel_.reset();
    throw Error(ErrorKind::kSandboxUnavailable, std::string("code runner failed: ") + e.what());
  }
  if (!line) {
    channel_.reset();
    throw Error(ErrorKind::kTimeout, "code runner gave no reply within " + std::to_string(request.timeout_s + 2) + " s");
  }
  const auto j = Json::parse(*line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    channel_.reset();
    throw Error(ErrorKind::kSandboxUnavailable, "code runner sent a malformed reply");
  }
  ExecResult r;
  r.exit_code = j.value("exit_code", -1);
  r.stdout_text = j.value("stdout", std::string());
  r.stderr_text = j.value("stderr", std::string());
  r.wall_ms = j.value("wall_ms", std::int64_t{0});
  r.timed_out = j.value("timed_out", false);
  if (j.contains("artifacts") && j["artifacts"].is_array()) {
    for (const auto& a : j["artifacts"]) {
      if (!a.is_string()) continue;
      fs::path p = a.get<std::string>();
      if (p.is_relative()) p = workdir / p;
      r.artifacts.push_back(p.lexically_normal());
    }
  }
  return r;
}

}  // namespace esg::tools
