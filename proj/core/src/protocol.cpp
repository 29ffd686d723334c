#include "sdmm/protocol.hpp"

#include <cstring>

namespace sdmm::wire {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int shift = 0; shift < 64; shift += 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

    std::size_t remaining() const { return data_.size() - pos_; }

    std::optional<std::uint32_t> u32() {
        if (remaining() < 4)
            return std::nullopt;
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::optional<std::uint64_t> u64() {
        if (remaining() < 8)
            return std::nullopt;
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> make_frame(MsgType type, std::size_t body_size) {
    std::vector<std::uint8_t> out;
    out.reserve(4 + kHeaderSize + body_size);
    put_u32(out, static_cast<std::uint32_t>(kHeaderSize + body_size));
    out.insert(out.end(), kMagic.begin(), kMagic.end());
    out.push_back(kVersion);
    out.push_back(static_cast<std::uint8_t>(type));
    return out;
}

bool read_elements(Reader& r, Matrix& m) {
    for (std::uint64_t& e : m.entries()) {
        auto v = r.u64();
        if (!v)
            return false;
        e = *v;
    }
    return true;
}

}  // namespace

std::vector<std::uint8_t> encode_compute(const ComputeRequest& request) {
    const std::size_t elems = request.share_a.size() + request.share_b.size();
    std::vector<std::uint8_t> out = make_frame(MsgType::Compute, 8 + 12 + 8 * elems);
    put_u64(out, request.modulus);
    put_u32(out, static_cast<std::uint32_t>(request.share_a.rows()));
    put_u32(out, static_cast<std::uint32_t>(request.share_a.cols()));
    put_u32(out, static_cast<std::uint32_t>(request.share_b.cols()));
    for (std::uint64_t e : request.share_a.entries())
        put_u64(out, e);
    for (std::uint64_t e : request.share_b.entries())
        put_u64(out, e);
    return out;
}

std::vector<std::uint8_t> encode_result(const ResultMessage& result) {
    std::vector<std::uint8_t> out = make_frame(MsgType::Result, 8 + 8 * result.product.size());
    put_u32(out, static_cast<std::uint32_t>(result.product.rows()));
    put_u32(out, static_cast<std::uint32_t>(result.product.cols()));
    for (std::uint64_t e : result.product.entries())
        put_u64(out, e);
    return out;
}

std::vector<std::uint8_t> encode_error(ErrorCode code) {
    std::vector<std::uint8_t> out = make_frame(MsgType::Error, 4);
    put_u32(out, static_cast<std::uint32_t>(code));
    return out;
}

std::variant<Message, ErrorCode> parse_payload(std::span<const std::uint8_t> payload) {
    if (payload.size() < kHeaderSize)
        return ErrorCode::Malformed;
    if (!std::equal(kMagic.begin(), kMagic.end(), payload.begin()))
        return ErrorCode::BadMagic;
    if (payload[4] != kVersion)
        return ErrorCode::BadMagic;
    const std::uint8_t type = payload[5];
    Reader r(payload.subspan(kHeaderSize));

    switch (static_cast<MsgType>(type)) {
    case MsgType::Compute: {
        auto modulus = r.u64();
        auto rows_a = r.u32();
        auto cols_a = r.u32();
        auto cols_b = r.u32();
        if (!modulus || !rows_a || !cols_a || !cols_b)
            return ErrorCode::Malformed;
        if (*rows_a == 0 || *cols_a == 0 || *cols_b == 0)
            return ErrorCode::DimensionMismatch;
        if (*modulus < 2)
            return ErrorCode::Malformed;
        const auto a_elems = static_cast<unsigned __int128>(*rows_a) * *cols_a;
        const auto b_elems = static_cast<unsigned __int128>(*cols_a) * *cols_b;
        if (r.remaining() != 8 * (a_elems + b_elems))
            return ErrorCode::Malformed;
        ComputeRequest req;
        req.modulus = *modulus;
        req.share_a = Matrix(*rows_a, *cols_a);
        req.share_b = Matrix(*cols_a, *cols_b);
        read_elements(r, req.share_a);
        read_elements(r, req.share_b);
        for (std::uint64_t e : req.share_a.entries())
            if (e >= req.modulus)
                return ErrorCode::ElementOutOfRange;
        for (std::uint64_t e : req.share_b.entries())
            if (e >= req.modulus)
                return ErrorCode::ElementOutOfRange;
        return Message{std::move(req)};
    }
    case MsgType::Result: {
        auto rows = r.u32();
        auto cols = r.u32();
        if (!rows || !cols)
            return ErrorCode::Malformed;
        if (*rows == 0 || *cols == 0)
            return ErrorCode::DimensionMismatch;
        const auto elems = static_cast<unsigned __int128>(*rows) * *cols;
        if (r.remaining() != 8 * elems)
            return ErrorCode::Malformed;
        ResultMessage res;
        res.product = Matrix(*rows, *cols);
        read_elements(r, res.product);
        return Message{std::move(res)};
    }
    case MsgType::Error: {
        auto code = r.u32();
        if (!code || r.remaining() != 0)
            return ErrorCode::Malformed;
        return Message{ErrorMessage{static_cast<ErrorCode>(*code)}};
    }
    default:
        return ErrorCode::Malformed;
    }
}

}  // namespace sdmm::wire
