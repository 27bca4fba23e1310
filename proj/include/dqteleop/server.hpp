#pragma once

#include "dqteleop/simulator.hpp"

#include <atomic>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace dqteleop {

struct ServerOptions {
    std::string host = "127.0.0.1";
    /// 0 picks an ephemeral port.
    int port = 0;
    /// State frames per second of simulated time.
    double frame_rate = 50.0;
    /// Simulated seconds per wall-clock second; 0 runs unpaced.
    double realtime_factor = 1.0;
    /// Stop after this many ticks; unset runs until stop().
    std::optional<std::size_t> ticks;
    /// Inbound messages are appended here with the tick they were applied at.
    std::string record_path;
    /// Polled once per tick; lets a signal handler end the session.
    const std::atomic<bool>* interrupt = nullptr;
};

/// Live session: one simulation loop on the calling thread and one socket
/// thread. They share only the inbound message queue and the outbound frame
/// queue.
class SimServer {
public:
    SimServer(Simulator& sim, ServerOptions options);
    ~SimServer();
    SimServer(const SimServer&) = delete;
    SimServer& operator=(const SimServer&) = delete;

    int port() const { return port_; }

    /// Runs the simulation loop; returns when the tick budget is used up or stop() is called.
    void run(TelemetryWriter* writer = nullptr);
    /// Thread-safe.
    void stop() { stop_.store(true); }
    std::size_t clients_served() const { return clients_served_.load(); }

private:
    struct Inbound {
        int client;
        InboundMessage message;
    };
    struct Outbound {
        std::optional<int> client;  // unset: broadcast
        std::string bytes;
    };

    void io_loop();
    void push_outbound(std::optional<int> client, std::string bytes);
    void wake();

    Simulator& sim_;
    ServerOptions options_;
    int listen_fd_ = -1;
    int wake_pipe_[2] = {-1, -1};
    int port_ = 0;
    std::atomic<bool> stop_{false};
    std::atomic<bool> io_stop_{false};
    std::atomic<std::size_t> clients_served_{0};

    std::mutex in_mutex_;
    std::vector<Inbound> inbound_;
    std::mutex out_mutex_;
    std::vector<Outbound> outbound_;
};

}  // namespace dqteleop
