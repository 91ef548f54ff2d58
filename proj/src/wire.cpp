// SPDX-License-Identifier: Apache-2.0
#include "fhsplit/wire.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fhsplit::wire {
namespace {

template <typename T>
void put_be(std::uint8_t* out, T value)
{
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out[i] = static_cast<std::uint8_t>(value >> (8 * (sizeof(T) - 1 - i)));
    }
}

template <typename T>
T get_be(const std::uint8_t* in)
{
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        value = static_cast<T>((value << 8) | in[i]);
    }
    return value;
}

}  // namespace

std::string_view to_string(MalformedReason r)
{
    switch (r) {
    case MalformedReason::Short: return "short";
    case MalformedReason::Size: return "size";
    case MalformedReason::ZeroBlocks: return "zero_blocks";
    case MalformedReason::LengthMismatch: return "length_mismatch";
    case MalformedReason::Stale: return "stale";
    case MalformedReason::Inconsistent: return "inconsistent";
    case MalformedReason::Duplicate: return "duplicate";
    }
    return "unknown";
}

std::array<std::uint8_t, kHeaderSize> encode_header(const SplitHeader& h)
{
    if (h.size < kHeaderSize || h.size >= kSizeLimit) {
        throw std::invalid_argument("header size " + std::to_string(h.size) +
                                    " outside [22, 65508)");
    }
    if (h.num_blocks == 0) {
        throw std::invalid_argument("header num_blocks must be at least 1");
    }
    std::array<std::uint8_t, kHeaderSize> out{};
    put_be(out.data() + 0, h.timestamp);
    put_be(out.data() + 8, h.num_blocks);
    put_be(out.data() + 10, h.content_type);
    put_be(out.data() + 12, h.size);
    put_be(out.data() + 14, h.sender_clock);
    return out;
}

std::variant<SplitHeader, Malformed> decode_header(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < kHeaderSize) {
        return Malformed{MalformedReason::Short};
    }
    const std::uint8_t* p = bytes.data();
    SplitHeader h;
    h.timestamp = get_be<std::uint64_t>(p + 0);
    h.num_blocks = get_be<std::uint16_t>(p + 8);
    h.content_type = get_be<std::uint16_t>(p + 10);
    h.size = get_be<std::uint16_t>(p + 12);
    h.sender_clock = get_be<std::uint64_t>(p + 14);
    if (h.size < kHeaderSize || h.size >= kSizeLimit) {
        return Malformed{MalformedReason::Size};
    }
    if (h.num_blocks == 0) {
        return Malformed{MalformedReason::ZeroBlocks};
    }
    return h;
}

std::vector<Chunk> chunk_subframe(std::uint64_t timestamp, std::uint16_t content_type,
                                  std::span<const std::uint8_t> payload,
                                  std::size_t max_datagram, std::uint64_t sender_clock)
{
    if (payload.empty()) {
        throw std::invalid_argument("cannot chunk an empty payload");
    }
    if (max_datagram <= kHeaderSize || max_datagram > kMaxDatagram) {
        throw std::invalid_argument("max_datagram " + std::to_string(max_datagram) +
                                    " outside [23, 65507]");
    }
    const std::size_t per_chunk = max_datagram - kHeaderSize;
    const std::size_t count = (payload.size() + per_chunk - 1) / per_chunk;
    if (count > 0xFFFF) {
        throw std::invalid_argument("payload of " + std::to_string(payload.size()) +
                                    " bytes needs more than 65535 chunks");
    }

    std::vector<Chunk> chunks;
    chunks.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto piece = payload.subspan(i * per_chunk, std::min(per_chunk, payload.size() - i * per_chunk));
        Chunk c;
        c.header.timestamp = timestamp;
        c.header.num_blocks = static_cast<std::uint16_t>(count);
        c.header.content_type = content_type;
        c.header.size = static_cast<std::uint16_t>(kHeaderSize + piece.size());
        c.header.sender_clock = sender_clock + i;
        c.payload.assign(piece.begin(), piece.end());
        chunks.push_back(std::move(c));
    }
    return chunks;
}

Bytes to_datagram(const Chunk& c)
{
    if (c.payload.size() + kHeaderSize != c.header.size) {
        throw std::invalid_argument("chunk payload length disagrees with header size");
    }
    auto header = encode_header(c.header);
    Bytes out(c.header.size);
    std::copy(header.begin(), header.end(), out.begin());
    std::copy(c.payload.begin(), c.payload.end(), out.begin() + kHeaderSize);
    return out;
}

std::variant<Chunk, Malformed> parse_datagram(std::span<const std::uint8_t> datagram)
{
    auto decoded = decode_header(datagram);
    if (auto* bad = std::get_if<Malformed>(&decoded)) {
        return *bad;
    }
    Chunk c;
    c.header = std::get<SplitHeader>(decoded);
    if (datagram.size() != c.header.size) {
        return Malformed{MalformedReason::LengthMismatch};
    }
    c.payload.assign(datagram.begin() + kHeaderSize, datagram.end());
    return c;
}

ReassemblyBuffer::ReassemblyBuffer(std::chrono::nanoseconds timeout, ReassemblyOrder order)
    : timeout_(timeout), order_(order)
{
    if (timeout <= std::chrono::nanoseconds::zero()) {
        throw std::invalid_argument("reassembly timeout must be positive");
    }
}

std::optional<std::uint64_t> ReassemblyBuffer::current_timestamp() const
{
    if (!current_) return std::nullopt;
    return current_->timestamp;
}

std::size_t ReassemblyBuffer::chunks_received() const
{
    return current_ ? current_->chunks.size() : 0;
}

std::optional<Instant> ReassemblyBuffer::deadline() const
{
    if (!current_) return std::nullopt;
    return current_->deadline;
}

std::optional<Complete> ReassemblyBuffer::start(Chunk chunk, Instant now)
{
    current_ = Assembly{chunk.header.timestamp, chunk.header.num_blocks,
                        chunk.header.content_type, now + timeout_, {}};
    current_->chunks.reserve(chunk.header.num_blocks);
    current_->chunks.push_back(std::move(chunk));
    if (current_->chunks.size() == current_->num_blocks) {
        return finish();
    }
    return std::nullopt;
}

Complete ReassemblyBuffer::finish()
{
    Assembly done = std::move(*current_);
    current_.reset();
    last_closed_ = done.timestamp;

    if (order_ == ReassemblyOrder::SenderClock) {
        std::sort(done.chunks.begin(), done.chunks.end(), [](const Chunk& a, const Chunk& b) {
            return a.header.sender_clock < b.header.sender_clock;
        });
    }
    std::size_t total = 0;
    for (const auto& c : done.chunks) total += c.payload.size();

    Complete out{done.timestamp, done.content_type, {}};
    out.payload.reserve(total);
    for (const auto& c : done.chunks) {
        out.payload.insert(out.payload.end(), c.payload.begin(), c.payload.end());
    }
    return out;
}

ReassemblyEvent ReassemblyBuffer::accept(Chunk chunk, Instant now)
{
    const SplitHeader& h = chunk.header;

    if (!current_) {
        if (last_closed_ && h.timestamp <= *last_closed_) {
            return Malformed{MalformedReason::Stale};
        }
        if (auto done = start(std::move(chunk), now)) {
            return std::move(*done);
        }
        return Progress{};
    }

    if (h.timestamp < current_->timestamp) {
        return Malformed{MalformedReason::Stale};
    }

    if (h.timestamp > current_->timestamp) {
        Jumbled j{current_->timestamp, h.timestamp, std::nullopt};
        last_closed_ = current_->timestamp;
        current_.reset();
        j.completed = start(std::move(chunk), now);
        return j;
    }

    if (h.num_blocks != current_->num_blocks || h.content_type != current_->content_type) {
        return Malformed{MalformedReason::Inconsistent};
    }
    if (order_ == ReassemblyOrder::SenderClock) {
        for (const auto& c : current_->chunks) {
            if (c.header.sender_clock == h.sender_clock) {
                return Malformed{MalformedReason::Duplicate};
            }
        }
    }
    current_->chunks.push_back(std::move(chunk));
    if (current_->chunks.size() == current_->num_blocks) {
        return finish();
    }
    return Progress{};
}

std::optional<Timeout> ReassemblyBuffer::poll_timeout(Instant now)
{
    if (!current_ || now < current_->deadline) {
        return std::nullopt;
    }
    Timeout t{current_->timestamp, static_cast<std::uint16_t>(current_->chunks.size()),
              current_->num_blocks};
    last_closed_ = current_->timestamp;
    current_.reset();
    return t;
}

}  // namespace fhsplit::wire
