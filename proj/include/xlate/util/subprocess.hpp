#pragma once

#include <optional>
#include <string>
#include <vector>

namespace xlate::util {

// Result of running a command to completion.
struct CommandResult {
    int exit_code = -1;       // process exit status, or -1 on spawn failure
    bool timed_out = false;   // true if the process was killed on deadline
    std::string out;          // captured stdout
    std::string err;          // captured stderr
};

// Run argv[0] with the given arguments, capture stdout/stderr, and wait.
// `cwd` switches the child's working directory when non-empty.
// `timeout_ms` of 0 means no deadline. On timeout the child is killed
// (SIGKILL) and timed_out is set.
CommandResult run_command(const std::vector<std::string>& argv,
                          const std::string& cwd = "",
                          long timeout_ms = 0);

// A long-lived child process with pipes on stdin/stdout. stderr is
// inherited from the parent so diagnostics stay visible. Used for
// protocol servers that speak over stdio.
class Spawn {
public:
    Spawn() = default;
    ~Spawn();
    Spawn(const Spawn&) = delete;
    Spawn& operator=(const Spawn&) = delete;

    // Start the child; returns false (and sets error()) on failure.
    bool start(const std::vector<std::string>& argv, const std::string& cwd = "");

    bool running() const;
    int pid() const { return pid_; }
    const std::string& error() const { return error_; }

    // Write all bytes to the child's stdin. Returns false on EPIPE/error.
    bool write_all(std::string_view data);

    // Read up to `max` bytes from the child's stdout, blocking up to
    // `timeout_ms` (0 = block indefinitely). Returns bytes read; 0 means
    // EOF or timeout (check `timed_out`).
    size_t read_some(char* buf, size_t max, long timeout_ms, bool* timed_out = nullptr);

    // Close our end of the child's stdin (signals EOF).
    void close_stdin();

    // Terminate the child (SIGTERM then SIGKILL) and reap it.
    void kill();

    // Wait for exit without signaling; returns exit code or -1.
    int wait();

private:
    int pid_ = -1;
    int in_fd_ = -1;   // parent writes -> child stdin
    int out_fd_ = -1;  // parent reads <- child stdout
    std::string error_;
};

} // namespace xlate::util
