#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "sdmm/matrix.hpp"

namespace sdmm::wire {

// Framing: u32 payload length, then the payload. Payload: 4 magic bytes,
// u8 version, u8 message type, body. All integers little-endian.
inline constexpr std::array<std::uint8_t, 4> kMagic{0x53, 0x44, 0x4D, 0x4D};  // "SDMM"
inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 6;  // magic + version + type

// Frames above this are rejected as malformed before any allocation.
inline constexpr std::uint32_t kMaxPayloadBytes = 64u << 20;

enum class MsgType : std::uint8_t {
    Compute = 0x01,
    Result = 0x02,
    Error = 0xFF,
};

enum class ErrorCode : std::uint32_t {
    BadMagic = 1,          // wrong magic bytes or unsupported version
    Malformed = 2,         // body does not parse or sizes disagree
    DimensionMismatch = 3, // a declared dimension is zero or unusable
    ElementOutOfRange = 4, // element >= q
};

/// Body of a COMPUTE request: modulus q plus the two shares; share_b always
/// has share_a.cols() rows, as implied by the dims on the wire.
struct ComputeRequest {
    std::uint64_t modulus;
    Matrix share_a;
    Matrix share_b;

    bool operator==(const ComputeRequest&) const = default;
};

struct ResultMessage {
    Matrix product;

    bool operator==(const ResultMessage&) const = default;
};

struct ErrorMessage {
    ErrorCode code;

    bool operator==(const ErrorMessage&) const = default;
};

using Message = std::variant<ComputeRequest, ResultMessage, ErrorMessage>;

/// Full frame bytes (length prefix included) for each message type.
std::vector<std::uint8_t> encode_compute(const ComputeRequest& request);
std::vector<std::uint8_t> encode_result(const ResultMessage& result);
std::vector<std::uint8_t> encode_error(ErrorCode code);

/// Parses one payload (the bytes after the length prefix). A protocol-level
/// problem comes back as the ErrorCode the peer should be sent.
std::variant<Message, ErrorCode> parse_payload(std::span<const std::uint8_t> payload);

}  // namespace sdmm::wire
