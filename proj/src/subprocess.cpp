// SPDX-License-Identifier: Apache-2.0
#include "qbb/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <stdexcept>

namespace qbb {

namespace {

using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
      deadline - Clock::now());
  if (left.count() <= 0) return 0;
  return static_cast<int>(std::min<long long>(left.count(), 1000));
}

void close_fd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

}  // namespace

SubprocessResult run_subprocess(const std::string& command, const std::string& input,
                                double timeout_s) {
  // A child that exits before consuming its stdin must not kill us.
  ::signal(SIGPIPE, SIG_IGN);

  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) throw std::runtime_error("subprocess: pipe failed");
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw std::runtime_error("subprocess: pipe failed");
  }

  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    throw std::runtime_error("subprocess: fork failed");
  }
  if (pid == 0) {
    // Lead a fresh process group so a deadline kill reaps the shell and
    // everything it spawned, not just the shell itself.
    ::setpgid(0, 0);
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  // Both sides set the group to close the fork/exec race; failure here means
  // the child already did it itself.
  ::setpgid(pid, pid);

  int wfd = to_child[1];
  int rfd = from_child[0];
  ::close(to_child[0]);
  ::close(from_child[1]);
  ::fcntl(wfd, F_SETFL, O_NONBLOCK);
  ::fcntl(rfd, F_SETFL, O_NONBLOCK);

  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double>(timeout_s));
  SubprocessResult result;
  std::size_t written = 0;
  char buf[4096];

  while (rfd >= 0 || wfd >= 0) {
    if (Clock::now() >= deadline) {
      result.timed_out = true;
      break;
    }
    struct pollfd fds[2];
    int nfds = 0;
    int widx = -1;
    int ridx = -1;
    if (wfd >= 0) {
      widx = nfds;
      fds[nfds++] = {wfd, POLLOUT, 0};
    }
    if (rfd >= 0) {
      ridx = nfds;
      fds[nfds++] = {rfd, POLLIN, 0};
    }
    const int rc = ::poll(fds, nfds, remaining_ms(deadline));
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (widx >= 0 && (fds[widx].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (written < input.size() && (fds[widx].revents & POLLOUT)) {
        const ssize_t w = ::write(wfd, input.data() + written, input.size() - written);
        if (w > 0) written += static_cast<std::size_t>(w);
        else if (w < 0 && errno != EAGAIN && errno != EINTR) close_fd(wfd);
      }
      if (written >= input.size() || (fds[widx].revents & (POLLERR | POLLHUP))) {
        close_fd(wfd);
      }
    }
    if (ridx >= 0 && (fds[ridx].revents & (POLLIN | POLLHUP | POLLERR))) {
      const ssize_t r = ::read(rfd, buf, sizeof(buf));
      if (r > 0) result.output.append(buf, static_cast<std::size_t>(r));
      else if (r == 0) close_fd(rfd);
      else if (errno != EAGAIN && errno != EINTR) close_fd(rfd);
    }
  }
  close_fd(wfd);
  close_fd(rfd);

  const auto kill_tree = [pid] {
    ::kill(-pid, SIGKILL);  // whole group: the shell and its descendants
    ::kill(pid, SIGKILL);
  };

  if (result.timed_out) kill_tree();
  // Bound the wait: a child may keep running after closing stdout.
  int status = 0;
  for (;;) {
    const pid_t done = ::waitpid(pid, &status, result.timed_out ? 0 : WNOHANG);
    if (done == pid) break;
    if (done < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (Clock::now() >= deadline) {
      result.timed_out = true;
      kill_tree();
      while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
      break;
    }
    ::poll(nullptr, 0, 5);
  }
  if (WIFEXITED(status)) result.exit_status = WEXITSTATUS(status);
  else if (WIFSIGNALED(status)) result.exit_status = 128 + WTERMSIG(status);
  return result;
}

}  // namespace qbb
