// SPDX-License-Identifier: Apache-2.0
#include "fhsplit/messages.hpp"

#include <stdexcept>
#include <string>

namespace fhsplit {
namespace {

void put16(wire::Bytes& out, std::size_t at, std::uint16_t v)
{
    out[at] = static_cast<std::uint8_t>(v >> 8);
    out[at + 1] = static_cast<std::uint8_t>(v);
}

void put32(wire::Bytes& out, std::size_t at, std::uint32_t v)
{
    put16(out, at, static_cast<std::uint16_t>(v >> 16));
    put16(out, at + 2, static_cast<std::uint16_t>(v));
}

std::uint16_t get16(std::span<const std::uint8_t> in, std::size_t at)
{
    return static_cast<std::uint16_t>((in[at] << 8) | in[at + 1]);
}

std::uint32_t get32(std::span<const std::uint8_t> in, std::size_t at)
{
    return (std::uint32_t{get16(in, at)} << 16) | get16(in, at + 2);
}

}  // namespace

// ControlDl layout:
//   0 dci_count   1 mcs   2-3 rb_start   4-5 rb_count   6-7 power_offset_cdb
//   8 pdcch_symbols   9 phich_groups   10-11 reserved
//   12-27 dci_positions[8]   28-63 reserved (zero)
wire::Bytes encode_control_dl(const ControlDl& c)
{
    if (c.dci_count > ControlDl::kMaxDci) {
        throw std::invalid_argument("too many DCIs in one subframe");
    }
    wire::Bytes out(ControlDl::kEncodedSize, 0);
    out[0] = c.dci_count;
    out[1] = c.mcs;
    put16(out, 2, c.rb_start);
    put16(out, 4, c.rb_count);
    put16(out, 6, static_cast<std::uint16_t>(c.power_offset_cdb));
    out[8] = c.pdcch_symbols;
    out[9] = c.phich_groups;
    for (std::size_t i = 0; i < ControlDl::kMaxDci; ++i) {
        put16(out, 12 + 2 * i, c.dci_positions[i]);
    }
    return out;
}

ControlDl decode_control_dl(std::span<const std::uint8_t> in)
{
    if (in.size() != ControlDl::kEncodedSize) {
        throw std::invalid_argument("control payload must be 64 bytes");
    }
    ControlDl c;
    c.dci_count = in[0];
    if (c.dci_count > ControlDl::kMaxDci) {
        throw std::invalid_argument("control payload announces too many DCIs");
    }
    c.mcs = in[1];
    c.rb_start = get16(in, 2);
    c.rb_count = get16(in, 4);
    c.power_offset_cdb = static_cast<std::int16_t>(get16(in, 6));
    c.pdcch_symbols = in[8];
    c.phich_groups = in[9];
    for (std::size_t i = 0; i < ControlDl::kMaxDci; ++i) {
        c.dci_positions[i] = get16(in, 12 + 2 * i);
    }
    return c;
}

wire::Bytes encode_cqi_report(const CqiReport& r)
{
    if (r.wideband_cqi > 15) {
        throw std::invalid_argument("CQI must be in [0, 15]");
    }
    wire::Bytes out(CqiReport::kEncodedSize, 0);
    put32(out, 0, r.report_index);
    out[4] = r.wideband_cqi;
    out[5] = r.rank;
    return out;
}

CqiReport decode_cqi_report(std::span<const std::uint8_t> in)
{
    if (in.size() != CqiReport::kEncodedSize) {
        throw std::invalid_argument("CQI payload must be 8 bytes");
    }
    CqiReport r;
    r.report_index = get32(in, 0);
    r.wideband_cqi = in[4];
    r.rank = in[5];
    if (r.wideband_cqi > 15) {
        throw std::invalid_argument("CQI must be in [0, 15]");
    }
    return r;
}

SubframeMessage::SubframeMessage(Direction direction, std::uint64_t timestamp, MessageKind kind)
    : direction_(direction), timestamp_(timestamp), kind_(std::move(kind))
{
    bool downlink_kind = std::holds_alternative<HardBits>(kind_) ||
                         std::holds_alternative<ControlDl>(kind_);
    if (downlink_kind != (direction == Direction::Downlink)) {
        throw std::invalid_argument("message kind does not match direction " +
                                    std::string(to_string(direction)));
    }
}

std::uint16_t SubframeMessage::content_type() const
{
    switch (kind_.index()) {
    case 0: return wire::content::kDlHardBits;
    case 1: return wire::content::kUlSoftBits;
    case 2: return wire::content::kDlControl;
    default: return wire::content::kUlCqiReport;
    }
}

wire::Bytes SubframeMessage::encode() const
{
    if (const auto* h = std::get_if<HardBits>(&kind_)) {
        return h->bits;
    }
    if (const auto* s = std::get_if<SoftBits>(&kind_)) {
        wire::Bytes out(4);
        put32(out, 0, static_cast<std::uint32_t>(s->codes.size()));
        auto packed = pack_soft_bits(s->codes, s->width);
        out.insert(out.end(), packed.begin(), packed.end());
        return out;
    }
    if (const auto* c = std::get_if<ControlDl>(&kind_)) {
        return encode_control_dl(*c);
    }
    return encode_cqi_report(std::get<CqiReport>(kind_));
}

SubframeMessage SubframeMessage::decode(std::uint64_t timestamp, std::uint16_t content_type,
                                        std::span<const std::uint8_t> payload,
                                        unsigned soft_bit_width)
{
    switch (content_type) {
    case wire::content::kDlHardBits:
        return {Direction::Downlink, timestamp, HardBits{{payload.begin(), payload.end()}}};
    case wire::content::kUlSoftBits: {
        if (payload.size() < 4) {
            throw std::invalid_argument("soft-bit payload shorter than its count field");
        }
        std::uint32_t count = get32(payload, 0);
        if (payload.size() != soft_bits_payload_size(count, soft_bit_width)) {
            throw std::invalid_argument("soft-bit payload length disagrees with its count");
        }
        return {Direction::Uplink, timestamp,
                SoftBits{soft_bit_width, unpack_soft_bits(payload.subspan(4), count, soft_bit_width)}};
    }
    case wire::content::kDlControl:
        return {Direction::Downlink, timestamp, decode_control_dl(payload)};
    case wire::content::kUlCqiReport:
        return {Direction::Uplink, timestamp, decode_cqi_report(payload)};
    default:
        throw std::invalid_argument("unknown content type " + std::to_string(content_type));
    }
}

}  // namespace fhsplit
