#include "xlate/util/subprocess.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace xlate::util {

namespace {

// Build a null-terminated argv array pointing into `args`.
std::vector<char*> make_argv(const std::vector<std::string>& args) {
    std::vector<char*> v;
    v.reserve(args.size() + 1);
    for (const auto& a : args) v.push_back(const_cast<char*>(a.c_str()));
    v.push_back(nullptr);
    return v;
}

long now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// Drain available bytes from fd into out; returns false when fd hit EOF.
bool drain(int fd, std::string& out) {
    char buf[4096];
    for (;;) {
        ssize_t n = ::read(fd, buf, sizeof buf);
        if (n > 0) {
            out.append(buf, static_cast<size_t>(n));
            continue;
        }
        if (n == 0) return false;
        if (errno == EAGAIN || errno == EWOULDBLOCK) return true;
        if (errno == EINTR) continue;
        return false;
    }
}

void set_nonblock(int fd) {
    int fl = fcntl(fd, F_GETFL, 0);
    fcntl(fd, F_SETFL, fl | O_NONBLOCK);
}

} // namespace

CommandResult run_command(const std::vector<std::string>& argv,
                          const std::string& cwd,
                          long timeout_ms) {
    CommandResult res;
    if (argv.empty()) return res;

    int out_pipe[2], err_pipe[2];
    if (pipe(out_pipe) != 0) return res;
    if (pipe(err_pipe) != 0) {
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        return res;
    }

    pid_t pid = fork();
    if (pid < 0) {
        ::close(out_pipe[0]); ::close(out_pipe[1]);
        ::close(err_pipe[0]); ::close(err_pipe[1]);
        return res;
    }
    if (pid == 0) {
        // Child: wire pipes, detach stdin, exec.
        ::close(out_pipe[0]);
        ::close(err_pipe[0]);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        ::close(out_pipe[1]);
        ::close(err_pipe[1]);
        int devnull = ::open("/dev/null", O_RDONLY);
        if (devnull >= 0) {
            dup2(devnull, STDIN_FILENO);
            ::close(devnull);
        }
        if (!cwd.empty() && chdir(cwd.c_str()) != 0) _exit(127);
        auto cargv = make_argv(argv);
        execvp(cargv[0], cargv.data());
        _exit(127);
    }

    ::close(out_pipe[1]);
    ::close(err_pipe[1]);
    set_nonblock(out_pipe[0]);
    set_nonblock(err_pipe[0]);

    const long deadline = timeout_ms > 0 ? now_ms() + timeout_ms : 0;
    bool out_open = true, err_open = true;
    while (out_open || err_open) {
        struct pollfd fds[2];
        nfds_t nfds = 0;
        if (out_open) fds[nfds++] = {out_pipe[0], POLLIN, 0};
        if (err_open) fds[nfds++] = {err_pipe[0], POLLIN, 0};

        int wait_ms = -1;
        if (deadline != 0) {
            long rem = deadline - now_ms();
            if (rem <= 0) {
                ::kill(pid, SIGKILL);
                res.timed_out = true;
                break;
            }
            wait_ms = static_cast<int>(rem);
        }
        int rc = ::poll(fds, nfds, wait_ms);
        if (rc < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (rc == 0) continue; // re-check deadline
        for (nfds_t i = 0; i < nfds; ++i) {
            if (!(fds[i].revents & (POLLIN | POLLHUP))) continue;
            if (fds[i].fd == out_pipe[0]) {
                if (!drain(out_pipe[0], res.out)) out_open = false;
            } else {
                if (!drain(err_pipe[0], res.err)) err_open = false;
            }
        }
    }

    // Final drain after the child closed its ends (or was killed).
    drain(out_pipe[0], res.out);
    drain(err_pipe[0], res.err);
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
    if (res.timed_out) {
        res.exit_code = -1;
    } else if (WIFEXITED(status)) {
        res.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        res.exit_code = 128 + WTERMSIG(status);
    }
    return res;
}

Spawn::~Spawn() {
    if (pid_ > 0) kill();
    if (in_fd_ >= 0) ::close(in_fd_);
    if (out_fd_ >= 0) ::close(out_fd_);
}

bool Spawn::start(const std::vector<std::string>& argv, const std::string& cwd) {
    if (argv.empty()) {
        error_ = "empty argv";
        return false;
    }
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0) {
        error_ = std::strerror(errno);
        return false;
    }
    if (pipe(from_child) != 0) {
        error_ = std::strerror(errno);
        ::close(to_child[0]);
        ::close(to_child[1]);
        return false;
    }
    pid_t pid = fork();
    if (pid < 0) {
        error_ = std::strerror(errno);
        ::close(to_child[0]); ::close(to_child[1]);
        ::close(from_child[0]); ::close(from_child[1]);
        return false;
    }
    if (pid == 0) {
        ::close(to_child[1]);
        ::close(from_child[0]);
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        ::close(to_child[0]);
        ::close(from_child[1]);
        if (!cwd.empty() && chdir(cwd.c_str()) != 0) _exit(127);
        auto cargv = make_argv(argv);
        execvp(cargv[0], cargv.data());
        _exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    pid_ = pid;
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
    // Writes to a dead child should fail with EPIPE, not kill the parent.
    ::signal(SIGPIPE, SIG_IGN);
    return true;
}

bool Spawn::running() const {
    if (pid_ <= 0) return false;
    int status = 0;
    pid_t r = waitpid(pid_, &status, WNOHANG);
    return r == 0;
}

bool Spawn::write_all(std::string_view data) {
    if (in_fd_ < 0) return false;
    size_t off = 0;
    while (off < data.size()) {
        ssize_t n = ::write(in_fd_, data.data() + off, data.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            error_ = std::strerror(errno);
            return false;
        }
        off += static_cast<size_t>(n);
    }
    return true;
}

size_t Spawn::read_some(char* buf, size_t max, long timeout_ms, bool* timed_out) {
    if (timed_out) *timed_out = false;
    if (out_fd_ < 0) return 0;
    struct pollfd pfd{out_fd_, POLLIN, 0};
    for (;;) {
        int rc = ::poll(&pfd, 1, timeout_ms > 0 ? static_cast<int>(timeout_ms) : -1);
        if (rc < 0) {
            if (errno == EINTR) continue;
            return 0;
        }
        if (rc == 0) {
            if (timed_out) *timed_out = true;
            return 0;
        }
        break;
    }
    ssize_t n = ::read(out_fd_, buf, max);
    return n > 0 ? static_cast<size_t>(n) : 0;
}

void Spawn::close_stdin() {
    if (in_fd_ >= 0) {
        ::close(in_fd_);
        in_fd_ = -1;
    }
}

void Spawn::kill() {
    if (pid_ <= 0) return;
    ::kill(pid_, SIGTERM);
    // Give it a short grace period, then force.
    for (int i = 0; i < 20; ++i) {
        int status = 0;
        pid_t r = waitpid(pid_, &status, WNOHANG);
        if (r == pid_) {
            pid_ = -1;
            return;
        }
        usleep(10 * 1000);
    }
    ::kill(pid_, SIGKILL);
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
}

int Spawn::wait() {
    if (pid_ <= 0) return -1;
    int status = 0;
    while (waitpid(pid_, &status, 0) < 0 && errno == EINTR) {}
    pid_ = -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
    return -1;
}

} // namespace xlate::util
