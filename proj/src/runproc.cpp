#include "pocketeval/runproc.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <sstream>

#include "pocketeval/common.hpp"

namespace pocketeval {

RunResult run_process(const std::vector<std::string>& argv, double timeout_sec,
                      const std::optional<std::string>& workdir) {
  if (argv.empty()) throw Error("run_process: empty argv");
  int pipefd[2];
  if (pipe(pipefd) != 0) throw Error("run_process: pipe failed");

  pid_t pid = fork();
  if (pid < 0) {
    close(pipefd[0]);
    close(pipefd[1]);
    throw Error("run_process: fork failed");
  }
  if (pid == 0) {
    // Own process group so a timeout can kill the tool and its children.
    setpgid(0, 0);
    close(pipefd[0]);
    dup2(pipefd[1], STDOUT_FILENO);
    dup2(pipefd[1], STDERR_FILENO);
    close(pipefd[1]);
    if (workdir && chdir(workdir->c_str()) != 0) _exit(127);
    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }

  close(pipefd[1]);
  // Non-blocking reads so the timeout check keeps running even when the
  // child produces nothing.
  fcntl(pipefd[0], F_SETFL, O_NONBLOCK);

  RunResult result;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration<double>(timeout_sec > 0 ? timeout_sec : 0);
  bool child_done = false;
  int status = 0;
  int drain_spins = 0;
  char buf[4096];
  auto poll_child = [&]() {
    if (child_done) return;
    pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) {
      child_done = true;
      return;
    }
    if (timeout_sec > 0 && std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);  // in case setpgid lost the race
      waitpid(pid, &status, 0);
      child_done = true;
      result.timed_out = true;
    }
  };
  while (true) {
    ssize_t n = read(pipefd[0], buf, sizeof buf);
    if (n > 0) {
      result.output.append(buf, size_t(n));
      continue;
    }
    bool readable = n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR);
    poll_child();
    if (!readable && child_done) break;  // EOF (or read error) and the child is gone
    if (readable && child_done && ++drain_spins > 100) {
      break;  // an orphaned grandchild still holds the pipe; stop waiting
    }
    usleep(2000);
  }
  close(pipefd[0]);
  if (!child_done) waitpid(pid, &status, 0);

  if (result.timed_out) {
    result.exit_code = -1;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

std::vector<std::string> expand_command(const std::string& command_template,
                                        const std::string& receptor, const std::string& ligand,
                                        const std::string& out, double cx, double cy, double cz) {
  auto number = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };
  std::vector<std::string> argv;
  std::istringstream in{command_template};
  std::string word;
  while (in >> word) {
    std::string expanded;
    size_t pos = 0;
    while (pos < word.size()) {
      size_t open = word.find('{', pos);
      if (open == std::string::npos) {
        expanded += word.substr(pos);
        break;
      }
      size_t close = word.find('}', open);
      if (close == std::string::npos) {
        expanded += word.substr(pos);
        break;
      }
      expanded += word.substr(pos, open - pos);
      std::string key = word.substr(open + 1, close - open - 1);
      if (key == "receptor") expanded += receptor;
      else if (key == "ligand") expanded += ligand;
      else if (key == "out") expanded += out;
      else if (key == "cx") expanded += number(cx);
      else if (key == "cy") expanded += number(cy);
      else if (key == "cz") expanded += number(cz);
      else throw Error("command template: unknown placeholder {" + key + "}");
      pos = close + 1;
    }
    argv.push_back(expanded);
  }
  if (argv.empty()) throw Error("command template: empty command");
  return argv;
}

}  // namespace pocketeval
