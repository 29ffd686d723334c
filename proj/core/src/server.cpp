#include "sdmm/server.hpp"

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

#include "sdmm/matrix.hpp"
#include "sdmm/protocol.hpp"
#include "socket_io.hpp"

namespace sdmm {

WorkerServer::WorkerServer(std::uint16_t port) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0)
        throw std::runtime_error("WorkerServer: socket() failed: " + std::string(strerror(errno)));
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(port);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        const int err = errno;
        ::close(listen_fd_);
        throw std::runtime_error("WorkerServer: cannot bind port " + std::to_string(port) + ": " +
                                 strerror(err));
    }
    if (::listen(listen_fd_, 64) < 0) {
        const int err = errno;
        ::close(listen_fd_);
        throw std::runtime_error("WorkerServer: listen() failed: " + std::string(strerror(err)));
    }
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
}

WorkerServer::~WorkerServer() {
    stop();
    if (listen_fd_ >= 0)
        ::close(listen_fd_);
}

void WorkerServer::run() {
    while (!stopping_.load()) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR)
                continue;
            break;  // listener shut down
        }
        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (stopping_.load()) {
                ::close(fd);
                break;
            }
            active_fds_.insert(fd);
            ++active_handlers_;
        }
        std::thread([this, fd] { handle_connection(fd); }).detach();
    }
}

void WorkerServer::start() {
    accept_thread_ = std::thread([this] { run(); });
}

void WorkerServer::request_stop() {
    stopping_.store(true);
    ::shutdown(listen_fd_, SHUT_RDWR);
}

void WorkerServer::stop() {
    request_stop();
    if (accept_thread_.joinable())
        accept_thread_.join();
    std::unique_lock<std::mutex> lock(mutex_);
    for (int fd : active_fds_)
        ::shutdown(fd, SHUT_RDWR);  // unblock handlers; they close their own fd
    idle_cv_.wait(lock, [this] { return active_handlers_ == 0; });
}

void WorkerServer::handle_connection(int fd) {
    // One request per frame; protocol errors answer an ERROR frame and keep
    // the connection open. Truncation or I/O failure ends the connection.
    while (!stopping_.load()) {
        net::FrameRead frame = net::read_frame(fd, wire::kMaxPayloadBytes);
        if (frame.status == net::ReadStatus::Eof)
            break;
        if (frame.status == net::ReadStatus::Truncated) {
            net::write_frame_bytes(fd, wire::encode_error(wire::ErrorCode::Malformed));
            break;
        }
        if (frame.oversized) {
            net::write_frame_bytes(fd, wire::encode_error(wire::ErrorCode::Malformed));
            break;  // stream position is unknown past an oversized header
        }

        auto parsed = wire::parse_payload(frame.payload);
        if (std::holds_alternative<wire::ErrorCode>(parsed)) {
            if (!net::write_frame_bytes(fd, wire::encode_error(std::get<wire::ErrorCode>(parsed))))
                break;
            continue;
        }
        const wire::Message& msg = std::get<wire::Message>(parsed);
        const auto* request = std::get_if<wire::ComputeRequest>(&msg);
        if (request == nullptr) {
            // RESULT or ERROR is not a valid request
            if (!net::write_frame_bytes(fd, wire::encode_error(wire::ErrorCode::Malformed)))
                break;
            continue;
        }

        std::vector<std::uint8_t> reply;
        try {
            PrimeField field(request->modulus);
            Matrix product = multiply(request->share_a, request->share_b, field);
            reply = wire::encode_result({std::move(product)});
        } catch (const std::exception&) {
            // non-prime modulus or a shape the codec let through
            reply = wire::encode_error(wire::ErrorCode::Malformed);
        }
        if (!net::write_frame_bytes(fd, reply))
            break;
    }
    std::lock_guard<std::mutex> lock(mutex_);
    active_fds_.erase(fd);
    ::close(fd);
    if (--active_handlers_ == 0)
        idle_cv_.notify_all();
}

void serve(WorkerServer& server) {
    server.run();
}

}  // namespace sdmm
