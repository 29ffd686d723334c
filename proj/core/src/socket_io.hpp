#pragma once

// Internal blocking-socket helpers shared by the worker server and the
// remote-run client. Not installed.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdmm::net {

/// Reads exactly n bytes; false on EOF before any byte, throws on errors
/// after a partial read (treated as truncation by callers).
enum class ReadStatus { Ok, Eof, Truncated };

ReadStatus read_exact(int fd, std::uint8_t* buf, std::size_t n);

/// Writes all bytes; returns false when the peer is gone.
bool write_all(int fd, const std::uint8_t* buf, std::size_t n);

/// Reads one length-prefixed frame payload. Status Eof means a clean close
/// between frames; Truncated means the stream died mid-frame. A length above
/// max_payload yields std::nullopt in payload with status Ok, signalling a
/// malformed frame (the remaining bytes are unread; callers should close).
struct FrameRead {
    ReadStatus status;
    bool oversized = false;
    std::vector<std::uint8_t> payload;
};

FrameRead read_frame(int fd, std::uint32_t max_payload);

bool write_frame_bytes(int fd, const std::vector<std::uint8_t>& frame);

/// Connects to host:port with a timeout; returns the fd or nullopt.
std::optional<int> connect_to(const std::string& host, std::uint16_t port,
                              std::chrono::milliseconds timeout);

void set_io_timeout(int fd, std::chrono::milliseconds timeout);

}  // namespace sdmm::net
