#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <set>
#include <thread>

namespace sdmm {

/// Stateless TCP worker answering framed COMPUTE requests with RESULT frames
/// (or ERROR frames for protocol violations; the connection stays open).
/// Each accepted connection is served on its own thread. Pass port 0 to let
/// the kernel pick one; port() reports the bound port either way.
class WorkerServer {
public:
    explicit WorkerServer(std::uint16_t port);
    ~WorkerServer();

    WorkerServer(const WorkerServer&) = delete;
    WorkerServer& operator=(const WorkerServer&) = delete;

    std::uint16_t port() const { return port_; }

    /// Accept loop; returns once request_stop() has been called.
    void run();

    /// run() on a background thread.
    void start();

    /// Async-signal-safe: unblocks the accept loop. Safe to call repeatedly.
    void request_stop();

    /// request_stop(), then unblocks open connections and waits for their
    /// handlers to drain.
    void stop();

private:
    void handle_connection(int fd);

    int listen_fd_;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::thread accept_thread_;
    std::mutex mutex_;
    std::condition_variable idle_cv_;
    std::set<int> active_fds_;
    int active_handlers_ = 0;
};

/// Blocking entry point used by the CLI: serves until request_stop() is
/// invoked on the passed server (e.g. from a signal handler).
void serve(WorkerServer& server);

}  // namespace sdmm
