// SPDX-License-Identifier: Apache-2.0
//
// Split transport framing. Every datagram starts with a 22-byte header,
// all integers big-endian:
//
//   offset  size  field
//        0     8  timestamp      subframe identifier
//        8     2  num_blocks     chunks composing the subframe
//       10     2  content_type   payload format
//       12     2  size           datagram bytes, header included
//       14     8  sender_clock   emission time, nanoseconds
//
// The header carries no block index. Chunks are sequenced by arrival in
// the default mode, or by sender_clock in strict mode, which is why the
// sender stamps chunks of one subframe with strictly increasing clocks.
#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace fhsplit::wire {

inline constexpr std::size_t kHeaderSize = 22;
/// Exclusive bound on header.size: 2^16 - 8 (UDP header) - 20 (IPv4 header).
inline constexpr std::size_t kSizeLimit = 65'508;
inline constexpr std::size_t kMaxDatagram = kSizeLimit - 1;
inline constexpr std::size_t kDefaultMaxDatagram = 1'472;

namespace content {
inline constexpr std::uint16_t kDlHardBits = 0;
inline constexpr std::uint16_t kUlSoftBits = 1;
inline constexpr std::uint16_t kDlControl = 2;
inline constexpr std::uint16_t kUlCqiReport = 3;
}  // namespace content

using Bytes = std::vector<std::uint8_t>;
using Instant = std::chrono::nanoseconds;

struct SplitHeader {
    std::uint64_t timestamp = 0;
    std::uint16_t num_blocks = 1;
    std::uint16_t content_type = 0;
    std::uint16_t size = kHeaderSize;
    std::uint64_t sender_clock = 0;

    friend bool operator==(const SplitHeader&, const SplitHeader&) = default;
};

enum class MalformedReason {
    Short,         // fewer than 22 bytes
    Size,          // size field outside [22, 65508)
    ZeroBlocks,    // num_blocks == 0
    LengthMismatch,// datagram length differs from the size field
    Stale,         // timestamp older than the subframe under assembly or already finished
    Inconsistent,  // num_blocks or content_type disagrees with the subframe's first chunk
    Duplicate,     // strict mode: sender_clock already seen in this subframe
};

std::string_view to_string(MalformedReason r);

struct Malformed {
    MalformedReason reason;
    friend bool operator==(const Malformed&, const Malformed&) = default;
};

/// Throws std::invalid_argument if h violates the header invariants.
std::array<std::uint8_t, kHeaderSize> encode_header(const SplitHeader& h);

/// Reads the first 22 bytes; trailing bytes are ignored.
std::variant<SplitHeader, Malformed> decode_header(std::span<const std::uint8_t> bytes);

struct Chunk {
    SplitHeader header;
    Bytes payload;

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

/// Splits payload into ceil(len / (max_datagram - 22)) chunks. Chunk i is
/// stamped with sender_clock + i.
///
/// Throws std::invalid_argument for an empty payload, max_datagram outside
/// [23, 65507], or more than 65535 chunks.
std::vector<Chunk> chunk_subframe(std::uint64_t timestamp, std::uint16_t content_type,
                                  std::span<const std::uint8_t> payload,
                                  std::size_t max_datagram = kDefaultMaxDatagram,
                                  std::uint64_t sender_clock = 0);

/// Header followed by payload.
Bytes to_datagram(const Chunk& c);

/// Decodes a datagram and checks that its length equals the size field.
std::variant<Chunk, Malformed> parse_datagram(std::span<const std::uint8_t> datagram);

// Reassembly -----------------------------------------------------------------

struct Progress {
    friend bool operator==(const Progress&, const Progress&) = default;
};

struct Complete {
    std::uint64_t timestamp;
    std::uint16_t content_type;
    Bytes payload;
    friend bool operator==(const Complete&, const Complete&) = default;
};

struct Timeout {
    std::uint64_t timestamp;
    std::uint16_t chunks_received;
    std::uint16_t num_blocks;
    friend bool operator==(const Timeout&, const Timeout&) = default;
};

/// A chunk of a newer subframe arrived before the current one completed.
/// The partial subframe was discarded. If the newer chunk was a whole
/// subframe by itself (num_blocks == 1) it is delivered in `completed`.
struct Jumbled {
    std::uint64_t old_timestamp;
    std::uint64_t new_timestamp;
    std::optional<Complete> completed;
    friend bool operator==(const Jumbled&, const Jumbled&) = default;
};

using ReassemblyEvent = std::variant<Progress, Complete, Timeout, Jumbled, Malformed>;

enum class ReassemblyOrder {
    Arrival,      // payload concatenated in arrival order
    SenderClock,  // payload concatenated by ascending sender_clock
};

/// Receive-side state for one content stream. At most one subframe is
/// under assembly. Single owner; not safe for concurrent use.
///
/// accept() does not look at the deadline. Callers poll_timeout() with the
/// chunk's arrival instant before accepting it.
class ReassemblyBuffer {
public:
    explicit ReassemblyBuffer(std::chrono::nanoseconds timeout = std::chrono::milliseconds(1),
                              ReassemblyOrder order = ReassemblyOrder::Arrival);

    ReassemblyEvent accept(Chunk chunk, Instant now);
    std::optional<Timeout> poll_timeout(Instant now);

    bool assembling() const { return current_.has_value(); }
    std::optional<std::uint64_t> current_timestamp() const;
    std::size_t chunks_received() const;
    std::optional<Instant> deadline() const;
    std::chrono::nanoseconds timeout() const { return timeout_; }

private:
    struct Assembly {
        std::uint64_t timestamp;
        std::uint16_t num_blocks;
        std::uint16_t content_type;
        Instant deadline;
        std::vector<Chunk> chunks;
    };

    // Starts a new assembly from chunk; returns Complete if it is a
    // single-chunk subframe.
    std::optional<Complete> start(Chunk chunk, Instant now);
    Complete finish();

    std::chrono::nanoseconds timeout_;
    ReassemblyOrder order_;
    std::optional<Assembly> current_;
    // Highest timestamp whose assembly ended (complete, timeout, jumbled).
    std::optional<std::uint64_t> last_closed_;
};

}  // namespace fhsplit::wire
