#include "dqteleop/server.hpp"

#include "dqteleop/protocol.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>
#include <system_error>
#include <thread>

namespace dqteleop {

namespace {

// A client whose unsent output grows past this is disconnected.
constexpr std::size_t max_pending_output = 8u << 20;

[[noreturn]] void throw_errno(const std::string& what)
{
    throw std::system_error(errno, std::generic_category(), what);
}

void set_nonblocking(int fd)
{
    const int flags = fcntl(fd, F_GETFL, 0);
    if (flags < 0 || fcntl(fd, F_SETFL, flags | O_NONBLOCK) < 0) {
        throw_errno("fcntl");
    }
}

struct Client {
    int fd = -1;
    FrameDecoder decoder;
    std::string out;
    bool closing = false;
};

}  // namespace

SimServer::SimServer(Simulator& sim, ServerOptions options) : sim_(sim), options_(std::move(options))
{
    if (!(options_.frame_rate > 0.0)) {
        throw std::invalid_argument("frame rate must be positive");
    }
    if (options_.realtime_factor < 0.0) {
        throw std::invalid_argument("realtime factor must be non-negative");
    }
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) {
        throw_errno("socket");
    }
    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(options_.port));
    if (::inet_pton(AF_INET, options_.host.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        throw std::invalid_argument("bad listen address '" + options_.host + "'");
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
        const int err = errno;
        ::close(listen_fd_);
        throw std::system_error(err, std::generic_category(), "bind to port " + std::to_string(options_.port));
    }
    if (::listen(listen_fd_, 8) < 0) {
        ::close(listen_fd_);
        throw_errno("listen");
    }
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    set_nonblocking(listen_fd_);
    if (::pipe(wake_pipe_) < 0) {
        ::close(listen_fd_);
        throw_errno("pipe");
    }
    set_nonblocking(wake_pipe_[0]);
    set_nonblocking(wake_pipe_[1]);
}

SimServer::~SimServer()
{
    for (const int fd : {listen_fd_, wake_pipe_[0], wake_pipe_[1]}) {
        if (fd >= 0) {
            ::close(fd);
        }
    }
}

void SimServer::wake()
{
    const char c = 1;
    // A full pipe already guarantees a pending wake-up.
    [[maybe_unused]] const auto n = ::write(wake_pipe_[1], &c, 1);
}

void SimServer::push_outbound(std::optional<int> client, std::string bytes)
{
    {
        const std::lock_guard lock(out_mutex_);
        outbound_.push_back({client, std::move(bytes)});
    }
    wake();
}

void SimServer::run(TelemetryWriter* writer)
{
    stop_.store(false);
    io_stop_.store(false);
    std::thread io([this] { io_loop(); });

    std::ofstream record;
    if (!options_.record_path.empty()) {
        record.open(options_.record_path);
        if (!record) {
            io_stop_.store(true);
            wake();
            io.join();
            throw std::runtime_error("cannot open record file '" + options_.record_path + "'");
        }
    }

    const double ts = sim_.controller_config().sampling_time;
    const auto decimation =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1.0 / (options_.frame_rate * ts))));
    const auto start = std::chrono::steady_clock::now();
    std::size_t done = 0;
    std::vector<Inbound> batch;

    try {
        while (!stop_.load() && !(options_.interrupt && options_.interrupt->load()) &&
               (!options_.ticks || done < *options_.ticks)) {
            {
                const std::lock_guard lock(in_mutex_);
                batch.swap(inbound_);
            }
            for (const auto& in : batch) {
                try {
                    sim_.apply(in.message);
                    if (record) {
                        write_script_entry(record, {sim_.tick(), in.message});
                    }
                } catch (const std::invalid_argument& e) {
                    push_outbound(in.client, encode_message(error_message("rejected", e.what())));
                }
            }
            batch.clear();

            const auto& row = sim_.step();
            ++done;
            if (writer) {
                writer->write(row);
            }
            if ((sim_.tick() - 1) % decimation == 0) {
                push_outbound(std::nullopt, encode_message(sim_.state_frame()));
            }
            if (options_.realtime_factor > 0.0) {
                const auto due = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                             std::chrono::duration<double>(static_cast<double>(done) * ts /
                                                                           options_.realtime_factor));
                std::this_thread::sleep_until(due);
            }
        }
    } catch (...) {
        io_stop_.store(true);
        wake();
        io.join();
        throw;
    }
    // Let the socket thread flush the last frames.
    io_stop_.store(true);
    wake();
    io.join();
}

void SimServer::io_loop()
{
    std::map<int, Client> clients;
    int next_id = 0;
    std::vector<pollfd> fds;
    std::vector<int> ids;
    char buf[65536];

    const auto send_pending = [](Client& c) {
        while (!c.out.empty()) {
            const auto n = ::send(c.fd, c.out.data(), c.out.size(), MSG_NOSIGNAL);
            if (n < 0) {
                if (errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
                    c.closing = true;
                }
                return;
            }
            c.out.erase(0, static_cast<std::size_t>(n));
        }
    };

    while (true) {
        const bool stopping = io_stop_.load();
        // Move queued frames into client buffers.
        std::vector<Outbound> pending;
        {
            const std::lock_guard lock(out_mutex_);
            pending.swap(outbound_);
        }
        for (auto& o : pending) {
            for (auto& [id, c] : clients) {
                if (!o.client || *o.client == id) {
                    c.out += o.bytes;
                    if (c.out.size() > max_pending_output) {
                        c.closing = true;
                    }
                }
            }
        }
        for (auto& [id, c] : clients) {
            send_pending(c);
        }
        for (auto it = clients.begin(); it != clients.end();) {
            if (it->second.closing) {
                ::close(it->second.fd);
                it = clients.erase(it);
            } else {
                ++it;
            }
        }
        if (stopping) {
            break;
        }

        fds.clear();
        ids.clear();
        fds.push_back({wake_pipe_[0], POLLIN, 0});
        fds.push_back({listen_fd_, POLLIN, 0});
        for (auto& [id, c] : clients) {
            const short events = static_cast<short>(POLLIN | (c.out.empty() ? 0 : POLLOUT));
            fds.push_back({c.fd, events, 0});
            ids.push_back(id);
        }
        if (::poll(fds.data(), fds.size(), 100) < 0) {
            if (errno == EINTR) {
                continue;
            }
            break;
        }
        if (fds[0].revents & POLLIN) {
            while (::read(wake_pipe_[0], buf, sizeof buf) > 0) {
            }
        }
        if (fds[1].revents & POLLIN) {
            while (true) {
                const int fd = ::accept(listen_fd_, nullptr, nullptr);
                if (fd < 0) {
                    break;
                }
                set_nonblocking(fd);
                const int one = 1;
                ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
                clients[next_id++].fd = fd;
                ++clients_served_;
            }
        }
        for (std::size_t k = 2; k < fds.size(); ++k) {
            const int id = ids[k - 2];
            auto& c = clients[id];
            if (fds[k].revents & (POLLERR | POLLHUP | POLLNVAL)) {
                if (!(fds[k].revents & POLLIN)) {
                    c.closing = true;
                    continue;
                }
            }
            if (!(fds[k].revents & POLLIN)) {
                continue;
            }
            const auto n = ::recv(c.fd, buf, sizeof buf, 0);
            if (n <= 0) {
                if (n == 0 || (errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR)) {
                    c.closing = true;
                }
                continue;
            }
            c.decoder.feed(buf, static_cast<std::size_t>(n));
            try {
                while (auto payload = c.decoder.next()) {
                    try {
                        const auto j = nlohmann::json::parse(*payload);
                        auto msg = message_from_json(j, sim_.scenario().robots.size());
                        const std::lock_guard lock(in_mutex_);
                        inbound_.push_back({id, std::move(msg)});
                    } catch (const nlohmann::json::exception& e) {
                        c.out += encode_message(error_message("bad_json", e.what()));
                    } catch (const std::invalid_argument& e) {
                        c.out += encode_message(error_message("bad_message", e.what()));
                    }
                }
            } catch (const std::length_error& e) {
                c.out += encode_message(error_message("frame_too_large", e.what()));
                send_pending(c);
                c.closing = true;
            }
        }
    }
    for (auto& [id, c] : clients) {
        ::close(c.fd);
    }
}

}  // namespace dqteleop
