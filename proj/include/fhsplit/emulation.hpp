// SPDX-License-Identifier: Apache-2.0
//
// DU <-> RU fronthaul emulation over the split 7.3 transport.
//
// Each 1 ms subframe the DU sends a control message and the hard bits it
// scheduled; the RU sends quantized soft bits for its uplink allocation
// and, periodically, a CQI report. Payloads are synthetic (pseudorandom
// bits and LLRs); only their volume is meaningful. A meter counts bytes
// on the wire per direction, headers included.
#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fhsplit/channel.hpp"
#include "fhsplit/split_models.hpp"
#include "fhsplit/wire.hpp"

namespace fhsplit {

inline constexpr std::chrono::milliseconds kSubframe{1};

/// Constant-bit-rate user traffic.
struct TrafficProfile {
    std::uint64_t goodput_bps = 0;
    std::uint32_t packet_size_bytes = 1'400;
    std::uint64_t duration_subframes = 1'000;

    /// Throws ConfigError.
    void validate() const;
};

/// Air-interface bits one subframe can carry: n_sc * layers * Om * symbols
/// per ms; the uplink figure is in soft bits (times the soft-bit width).
std::uint64_t subframe_capacity_bits(const CellConfig& cfg, Direction direction);

/// Emits whole packets at a constant rate. Packet arrivals are spread by
/// exact integer accumulation, so the long-run rate equals goodput_bps.
class CbrTrafficGenerator {
public:
    explicit CbrTrafficGenerator(const TrafficProfile& profile);
    /// Offered bits in the next subframe.
    std::uint64_t next_subframe_bits();

private:
    std::uint64_t goodput_bps_;
    std::uint64_t packet_bits_;
    // Pending credit in bit-milliseconds.
    std::uint64_t credit_ = 0;
};

/// Per-subframe scheduler with a bounded carry-over queue.
class SubframeScheduler {
public:
    SubframeScheduler(std::uint64_t capacity_bits, std::uint64_t queue_limit_subframes = 10);

    /// Queues offered_bits, dropping what does not fit in the queue, then
    /// returns min(backlog, capacity) and removes it from the queue.
    std::uint64_t schedule_subframe(std::uint64_t offered_bits);

    std::uint64_t capacity_bits() const { return capacity_; }
    std::uint64_t backlog_bits() const { return backlog_; }
    std::uint64_t dropped_bits() const { return dropped_; }

private:
    std::uint64_t capacity_;
    std::uint64_t queue_limit_;
    std::uint64_t backlog_ = 0;
    std::uint64_t dropped_ = 0;
};

struct EmulationOptions {
    std::size_t max_datagram = wire::kDefaultMaxDatagram;
    std::chrono::nanoseconds reassembly_timeout = kSubframe;
    wire::ReassemblyOrder order = wire::ReassemblyOrder::Arrival;
    double llr_clip = 8.0;
    std::uint32_t cqi_period_subframes = 5;
    std::uint64_t queue_limit_subframes = 10;

    /// Throws ConfigError.
    void validate() const;
};

struct SubframeRecord {
    std::uint64_t subframe = 0;
    std::uint64_t offered_bits = 0;
    std::uint64_t dl_bits = 0;  // on the wire, headers included
    std::uint64_t ul_bits = 0;
    std::uint32_t completes = 0;
    std::uint32_t timeouts = 0;
    std::uint32_t jumbled = 0;

    friend bool operator==(const SubframeRecord&, const SubframeRecord&) = default;
};

/// Totals for one direction.
struct LinkTotals {
    std::uint64_t wire_bytes = 0;
    std::uint64_t datagrams_sent = 0;
    std::uint64_t datagrams_received = 0;
    std::uint64_t scheduled_bits = 0;  // air-interface bits (soft bits in UL)
    std::uint64_t messages_sent = 0;
    std::uint64_t payload_bytes_sent = 0;
    std::uint64_t payload_bytes_delivered = 0;
    // Payload of messages that never completed reassembly.
    std::uint64_t payload_bytes_discarded = 0;
    std::uint64_t completes = 0;
    std::uint64_t timeouts = 0;
    std::uint64_t jumbled = 0;
    std::uint64_t malformed = 0;
    std::uint64_t decode_errors = 0;

    friend bool operator==(const LinkTotals&, const LinkTotals&) = default;
};

struct EmulationReport {
    std::vector<SubframeRecord> series;
    LinkTotals dl;
    LinkTotals ul;
    std::uint64_t offered_bits = 0;
    std::uint64_t dropped_bits = 0;  // offered but over the queue limit (DL)
    std::uint64_t goodput_bps = 0;
    std::uint64_t seed = 0;
    bool complete = true;
    std::string error;

    double duration_s() const { return static_cast<double>(series.size()) * 1e-3; }
    double mean_offered_bps() const;
    double mean_dl_bps() const;
    double mean_ul_bps() const;

    friend bool operator==(const EmulationReport&, const EmulationReport&) = default;
};

/// Runs profile.duration_subframes subframes, then keeps draining until
/// the channel is idle and every partial subframe has resolved. Every
/// sent message gets one outcome, charged to the record of the subframe
/// it belongs to; a message of which nothing arrived is a timeout.
///
/// Arrivals at an instant are processed before deadlines expiring at the
/// same instant. A channel failure ends the run early with complete=false.
EmulationReport run_emulation(const CellConfig& cfg, const TrafficProfile& profile,
                              DatagramChannel& channel, std::uint64_t seed,
                              const EmulationOptions& options = {});

/// One run per goodput over a fresh SimulatedChannel each, all seeded with
/// seed. Runs are independent and evaluated in parallel.
std::vector<EmulationReport> run_sweep(const CellConfig& cfg, const TrafficProfile& base,
                                       std::span<const std::uint64_t> goodputs,
                                       const Impairments& impairments, std::uint64_t seed,
                                       const EmulationOptions& options = {});
/// Reference for run_sweep: same runs, one after the other.
std::vector<EmulationReport> run_sweep_serial(const CellConfig& cfg, const TrafficProfile& base,
                                              std::span<const std::uint64_t> goodputs,
                                              const Impairments& impairments, std::uint64_t seed,
                                              const EmulationOptions& options = {});

/// n evenly spaced goodputs from 0 to peak_bps inclusive (n >= 2).
std::vector<std::uint64_t> goodput_grid(std::uint64_t peak_bps, std::size_t n);

}  // namespace fhsplit
