#include "socket_io.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace sdmm::net {

ReadStatus read_exact(int fd, std::uint8_t* buf, std::size_t n) {
    std::size_t got = 0;
    while (got < n) {
        ssize_t r = ::recv(fd, buf + got, n - got, 0);
        if (r == 0)
            return got == 0 ? ReadStatus::Eof : ReadStatus::Truncated;
        if (r < 0) {
            if (errno == EINTR)
                continue;
            return got == 0 ? ReadStatus::Eof : ReadStatus::Truncated;
        }
        got += static_cast<std::size_t>(r);
    }
    return ReadStatus::Ok;
}

bool write_all(int fd, const std::uint8_t* buf, std::size_t n) {
    std::size_t sent = 0;
    while (sent < n) {
        ssize_t w = ::send(fd, buf + sent, n - sent, MSG_NOSIGNAL);
        if (w < 0) {
            if (errno == EINTR)
                continue;
            return false;
        }
        sent += static_cast<std::size_t>(w);
    }
    return true;
}

FrameRead read_frame(int fd, std::uint32_t max_payload) {
    std::uint8_t len_bytes[4];
    ReadStatus s = read_exact(fd, len_bytes, 4);
    if (s != ReadStatus::Ok)
        return {s, false, {}};
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i)
        len |= static_cast<std::uint32_t>(len_bytes[i]) << (8 * i);
    if (len > max_payload)
        return {ReadStatus::Ok, true, {}};
    std::vector<std::uint8_t> payload(len);
    if (len > 0) {
        s = read_exact(fd, payload.data(), len);
        if (s != ReadStatus::Ok)
            return {ReadStatus::Truncated, false, {}};
    }
    return {ReadStatus::Ok, false, std::move(payload)};
}

bool write_frame_bytes(int fd, const std::vector<std::uint8_t>& frame) {
    return write_all(fd, frame.data(), frame.size());
}

void set_io_timeout(int fd, std::chrono::milliseconds timeout) {
    timeval tv{};
    tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
    tv.tv_usec = static_cast<suseconds_t>(timeout.count() % 1000 * 1000);
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

std::optional<int> connect_to(const std::string& host, std::uint16_t port,
                              std::chrono::milliseconds timeout) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* results = nullptr;
    const std::string port_str = std::to_string(port);
    if (::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &results) != 0)
        return std::nullopt;

    int fd = -1;
    for (addrinfo* ai = results; ai != nullptr; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_NONBLOCK, ai->ai_protocol);
        if (fd < 0)
            continue;
        int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
        if (rc < 0 && errno == EINPROGRESS) {
            pollfd pfd{fd, POLLOUT, 0};
            rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
            if (rc == 1) {
                int err = 0;
                socklen_t len = sizeof(err);
                ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
                rc = err == 0 ? 0 : -1;
            } else {
                rc = -1;
            }
        }
        if (rc == 0) {
            // back to blocking mode with explicit timeouts
            int flags = ::fcntl(fd, F_GETFL, 0);
            ::fcntl(fd, F_SETFL, flags & ~O_NONBLOCK);
            set_io_timeout(fd, timeout);
            break;
        }
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(results);
    if (fd < 0)
        return std::nullopt;
    return fd;
}

}  // namespace sdmm::net
