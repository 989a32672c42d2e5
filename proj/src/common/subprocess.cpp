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

#include "esg/common/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>

#include "esg/common/error.hpp"

namespace esg {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<char*> make_argv(const std::vector<std::string>& argv) {
  std::vector<char*> out;
  out.reserve(argv.size() + 1);
  for (const auto& a : argv) out.push_back(const_cast<char*>(a.c_str()));
  out.push_back(nullptr);
  return out;
}

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

int exit_code_of(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

}  // namespace

ProcessResult run_process(const ProcessOptions& options) {
  if (options.argv.empty()) throw Error(ErrorKind::kArgValidation, "empty argv");
  std::array<int, 2> in_pipe{-1, -1};
  std::array<int, 2> out_pipe{-1, -1};
  std::array<int, 2> err_pipe{-1, -1};
  if (::pipe2(in_pipe.data(), O_CLOEXEC) != 0 || ::pipe2(out_pipe.data(), O_CLOEXEC) != 0 ||
      ::pipe2(err_pipe.data(), O_CLOEXEC) != 0) {
    throw Error(ErrorKind::kIoError, std::string("pipe: ") + std::strerror(errno));
  }

  const auto started = Clock::now();
  auto argv = make_argv(options.argv);
  const pid_t pid = ::fork();
  if (pid < 0) throw Error(ErrorKind::kIoError, std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    if (!options.cwd.empty() && ::chdir(options.cwd.c_str()) != 0) _exit(126);
    if (options.mem_limit_mb) {
      rlimit lim{};
      lim.rlim_cur = lim.rlim_max = *options.mem_limit_mb * 1024ULL * 1024ULL;
      ::setrlimit(RLIMIT_AS, &lim);
    }
    ::execvp(argv[0], argv.data());
    _exit(127);
  }
  ::setpgid(pid, pid);
  close_fd(in_pipe[0]);
  close_fd(out_pipe[1]);
  close_fd(err_pipe[1]);

  std::size_t written = 0;
  if (options.stdin_data.empty()) close_fd(in_pipe[1]);
  else ::fcntl(in_pipe[1], F_SETFL, O_NONBLOCK);

  ProcessResult result;
  const auto deadline = started + options.timeout;
  std::array<char, 4096> buf{};
  while (out_pipe[0] >= 0 || err_pipe[0] >= 0) {
    const auto now = Clock::now();
    if (now >= deadline) {
      result.timed_out = true;
      break;
    }
    std::array<pollfd, 3> fds{};
    nfds_t n = 0;
    int out_slot = -1, err_slot = -1, in_slot = -1;
    if (out_pipe[0] >= 0) { fds[n] = {out_pipe[0], POLLIN, 0}; out_slot = static_cast<int>(n++); }
    if (err_pipe[0] >= 0) { fds[n] = {err_pipe[0], POLLIN, 0}; err_slot = static_cast<int>(n++); }
    if (in_pipe[1] >= 0) { fds[n] = {in_pipe[1], POLLOUT, 0}; in_slot = static_cast<int>(n++); }
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    const int rc = ::poll(fds.data(), n, static_cast<int>(std::min<long long>(remaining, 100)));
    if (rc < 0 && errno != EINTR) break;
    auto drain = [&](int slot, int& fd, std::string& sink) {
      if (slot < 0 || !(fds[slot].revents & (POLLIN | POLLHUP | POLLERR))) return;
      const auto got = ::read(fd, buf.data(), buf.size());
      if (got > 0) sink.append(buf.data(), static_cast<std::size_t>(got));
      else close_fd(fd);
    };
    drain(out_slot, out_pipe[0], result.stdout_text);
    drain(err_slot, err_pipe[0], result.stderr_text);
    if (in_slot >= 0 && (fds[in_slot].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const auto w = ::write(in_pipe[1], options.stdin_data.data() + written,
                             options.stdin_data.size() - written);
      if (w > 0) written += static_cast<std::size_t>(w);
      if (w < 0 || written >= options.stdin_data.size()) close_fd(in_pipe[1]);
    }
  }

  int status = 0;
  if (result.timed_out) {
    ::killpg(pid, SIGKILL);
    ::waitpid(pid, &status, 0);
    result.exit_code = 124;
  } else {
    // stdout closed; the child may still be running briefly or hold the pipe
    // open via a grandchild, so bound the wait by the same deadline.
    while (true) {
      const pid_t r = ::waitpid(pid, &status, WNOHANG);
      if (r == pid) break;
      if (Clock::now() >= deadline) {
        ::killpg(pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        result.timed_out = true;
        break;
      }
      ::usleep(2000);
    }
    result.exit_code = result.timed_out ? 124 : exit_code_of(status);
  }
  ::killpg(pid, SIGKILL);  // stray grandchildren
  close_fd(in_pipe[1]);
  close_fd(out_pipe[0]);
  close_fd(err_pipe[0]);
  result.wall_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
  return result;
}

LineChannel::LineChannel(std::vector<std::string> argv) : argv_(std::move(argv)) {}

LineChannel::~LineChannel() { stop(); }

void LineChannel::start() {
  if (running()) return;
  if (argv_.empty()) throw Error(ErrorKind::kSandboxUnavailable, "no runner command configured");
  std::array<int, 2> in_pipe{-1, -1};
  std::array<int, 2> out_pipe{-1, -1};
  if (::pipe2(in_pipe.data(), O_CLOEXEC) != 0 || ::pipe2(out_pipe.data(), O_CLOEXEC) != 0) {
    throw Error(ErrorKind::kSandboxUnavailable, std::string("pipe: ") + std::strerror(errno));
  }
  // Probe for the executable first so a missing runner is reported as such.
  std::array<int, 2> probe{-1, -1};
  if (::pipe2(probe.data(), O_CLOEXEC) != 0) {
    throw Error(ErrorKind::kSandboxUnavailable, "pipe failed");
  }
  auto argv = make_argv(argv_);
  const pid_t pid = ::fork();
  if (pid < 0) throw Error(ErrorKind::kSandboxUnavailable, "fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execvp(argv[0], argv.data());
    const char fail = 1;
    [[maybe_unused]] auto ignored = ::write(probe[1], &fail, 1);
    _exit(127);
  }
  ::close(probe[1]);
  char flag = 0;
  const auto got = ::read(probe[0], &flag, 1);
  ::close(probe[0]);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (got > 0) {
    ::waitpid(pid, nullptr, 0);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw Error(ErrorKind::kSandboxUnavailable, "cannot execute " + argv_.front());
  }
  ::signal(SIGPIPE, SIG_IGN);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
}

bool LineChannel::running() const {
  if (pid_ < 0) return false;
  return ::waitpid(pid_, nullptr, WNOHANG) == 0;
}

void LineChannel::stop() {
  close_fd(to_child_);
  close_fd(from_child_);
  if (pid_ > 0) {
    ::killpg(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
  }
  pid_ = -1;
  buffer_.clear();
}

void LineChannel::write_line(const std::string& line) {
  std::string payload = line + "\n";
  std::size_t off = 0;
  while (off < payload.size()) {
    const auto w = ::write(to_child_, payload.data() + off, payload.size() - off);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::kIoError, "runner stdin closed");
    }
    off += static_cast<std::size_t>(w);
  }
}

std::optional<std::string> LineChannel::read_line(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  std::array<char, 4096> buf{};
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto now = Clock::now();
    if (now >= deadline) return std::nullopt;
    pollfd fd{from_child_, POLLIN, 0};
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    const int rc = ::poll(&fd, 1, static_cast<int>(std::min<long long>(remaining, 200)));
    if (rc < 0 && errno != EINTR) throw Error(ErrorKind::kIoError, "poll failed");
    if (rc > 0) {
      const auto got = ::read(from_child_, buf.data(), buf.size());
      if (got <= 0) throw Error(ErrorKind::kIoError, "runner stdout closed");
      buffer_.append(buf.data(), static_cast<std::size_t>(got));
    }
  }
}

}  // namespace esg
