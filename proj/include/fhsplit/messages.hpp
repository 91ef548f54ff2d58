// SPDX-License-Identifier: Apache-2.0
//
// Typed subframe payloads carried over the split transport.
//
// Payload encodings (big-endian):
//   HardBits   raw coded bits, 8 per byte
//   SoftBits   u32 LLR count, then codes packed MSB-first at the soft-bit width
//   ControlDl  64 bytes, see encode_control_dl()
//   CqiReport  8 bytes: u32 report index, u8 wideband CQI, u8 rank, u16 reserved
#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "fhsplit/llr.hpp"
#include "fhsplit/split_models.hpp"
#include "fhsplit/wire.hpp"

namespace fhsplit {

struct HardBits {
    wire::Bytes bits;
    friend bool operator==(const HardBits&, const HardBits&) = default;
};

struct SoftBits {
    unsigned width = 8;
    std::vector<std::int16_t> codes;
    friend bool operator==(const SoftBits&, const SoftBits&) = default;
};

/// Downlink scheduling semantics the RU needs for modulation and mapping.
struct ControlDl {
    static constexpr std::size_t kEncodedSize = 64;
    static constexpr std::size_t kMaxDci = 8;

    std::uint8_t dci_count = 0;
    // Starting CCE of each DCI in the control region.
    std::array<std::uint16_t, kMaxDci> dci_positions{};
    std::uint8_t pdcch_symbols = 1;
    std::uint8_t phich_groups = 0;
    std::uint8_t mcs = 0;
    std::uint16_t rb_start = 0;
    std::uint16_t rb_count = 0;
    // Transmit power offset in hundredths of a dB.
    std::int16_t power_offset_cdb = 0;

    friend bool operator==(const ControlDl&, const ControlDl&) = default;
};

struct CqiReport {
    static constexpr std::size_t kEncodedSize = 8;

    std::uint32_t report_index = 0;
    std::uint8_t wideband_cqi = 0;  // 0..15
    std::uint8_t rank = 1;

    friend bool operator==(const CqiReport&, const CqiReport&) = default;
};

using MessageKind = std::variant<HardBits, SoftBits, ControlDl, CqiReport>;

/// One typed payload for one subframe and direction.
class SubframeMessage {
public:
    /// Throws std::invalid_argument when the kind does not belong to the
    /// direction (hard bits and control are downlink only, soft bits and
    /// CQI reports uplink only).
    SubframeMessage(Direction direction, std::uint64_t timestamp, MessageKind kind);

    Direction direction() const { return direction_; }
    std::uint64_t timestamp() const { return timestamp_; }
    const MessageKind& kind() const { return kind_; }
    std::uint16_t content_type() const;

    wire::Bytes encode() const;
    /// Throws std::invalid_argument on a malformed payload or an unknown
    /// content type.
    static SubframeMessage decode(std::uint64_t timestamp, std::uint16_t content_type,
                                  std::span<const std::uint8_t> payload,
                                  unsigned soft_bit_width);

    friend bool operator==(const SubframeMessage&, const SubframeMessage&) = default;

private:
    Direction direction_;
    std::uint64_t timestamp_;
    MessageKind kind_;
};

wire::Bytes encode_control_dl(const ControlDl& c);
ControlDl decode_control_dl(std::span<const std::uint8_t> bytes);
wire::Bytes encode_cqi_report(const CqiReport& r);
CqiReport decode_cqi_report(std::span<const std::uint8_t> bytes);

/// Payload bytes of a soft-bit message carrying count LLRs.
constexpr std::size_t soft_bits_payload_size(std::size_t count, unsigned width)
{
    return 4 + packed_size(count, width);
}

}  // namespace fhsplit
