// SPDX-License-Identifier: Apache-2.0
#include "fhsplit/emulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "fhsplit/kernels.hpp"
#include "fhsplit/llr.hpp"
#include "fhsplit/messages.hpp"

namespace fhsplit {

void TrafficProfile::validate() const
{
    if (packet_size_bytes < 1) {
        throw ConfigError("packet_size_bytes", "must be at least 1");
    }
    if (duration_subframes < 1) {
        throw ConfigError("duration_subframes", "must be at least 1");
    }
}

void EmulationOptions::validate() const
{
    if (max_datagram <= wire::kHeaderSize || max_datagram > wire::kMaxDatagram) {
        throw ConfigError("max_datagram", "must be in [23, 65507]");
    }
    if (reassembly_timeout <= std::chrono::nanoseconds::zero()) {
        throw ConfigError("timeout_us", "must be positive");
    }
    if (!(std::isfinite(llr_clip) && llr_clip > 0.0)) {
        throw ConfigError("llr_clip", "must be positive");
    }
    if (cqi_period_subframes < 1) {
        throw ConfigError("cqi_period", "must be at least 1");
    }
    if (queue_limit_subframes < 1) {
        throw ConfigError("queue_limit_subframes", "must be at least 1");
    }
}

std::uint64_t subframe_capacity_bits(const CellConfig& cfg, Direction direction)
{
    if (cfg.symbols_per_second() % 1000 != 0) {
        throw ConfigError("symbols_per_second", "must be a whole number of symbols per ms");
    }
    std::uint64_t bits =
        cfg.n_sc() * cfg.n_layers() * cfg.mod_order() * (cfg.symbols_per_second() / 1000);
    return direction == Direction::Uplink ? bits * cfg.soft_bit_width() : bits;
}

CbrTrafficGenerator::CbrTrafficGenerator(const TrafficProfile& profile)
    : goodput_bps_(profile.goodput_bps), packet_bits_(8ULL * profile.packet_size_bytes)
{
    profile.validate();
}

std::uint64_t CbrTrafficGenerator::next_subframe_bits()
{
    credit_ += goodput_bps_;
    std::uint64_t packets = credit_ / (packet_bits_ * 1000);
    credit_ -= packets * packet_bits_ * 1000;
    return packets * packet_bits_;
}

SubframeScheduler::SubframeScheduler(std::uint64_t capacity_bits,
                                     std::uint64_t queue_limit_subframes)
    : capacity_(capacity_bits), queue_limit_(capacity_bits * queue_limit_subframes)
{
}

std::uint64_t SubframeScheduler::schedule_subframe(std::uint64_t offered_bits)
{
    backlog_ += offered_bits;
    if (backlog_ > queue_limit_) {
        dropped_ += backlog_ - queue_limit_;
        backlog_ = queue_limit_;
    }
    std::uint64_t scheduled = std::min(backlog_, capacity_);
    backlog_ -= scheduled;
    return scheduled;
}

double EmulationReport::mean_offered_bps() const
{
    return series.empty() ? 0.0 : static_cast<double>(offered_bits) / duration_s();
}

double EmulationReport::mean_dl_bps() const
{
    return series.empty() ? 0.0 : 8.0 * static_cast<double>(dl.wire_bytes) / duration_s();
}

double EmulationReport::mean_ul_bps() const
{
    return series.empty() ? 0.0 : 8.0 * static_cast<double>(ul.wire_bytes) / duration_s();
}

namespace {

__extension__ using u128 = unsigned __int128;

using StreamKey = std::pair<std::uint16_t, std::uint64_t>;  // content type, timestamp

// Payload generator streams; distinct per subframe and message.
enum Stream : std::uint64_t { kHardBitsStream = 0, kSoftBitsStream = 1, kControlStream = 2 };

std::uint64_t stream_id(std::uint64_t subframe, Stream s)
{
    return (subframe << 2) | s;
}

std::uint8_t mcs_for(Modulation m)
{
    switch (m) {
    case Modulation::Qpsk: return 9;
    case Modulation::Qam16: return 16;
    case Modulation::Qam64: return 28;
    case Modulation::Qam256: return 27;
    }
    return 0;
}

/// Send path of one endpoint: chunking, stamping, metering.
class Transmitter {
public:
    Transmitter(Direction link, DatagramChannel& channel, const EmulationOptions& options,
                LinkTotals& totals)
        : link_(link), channel_(channel), options_(options), totals_(totals)
    {
    }

    /// Returns bits put on the wire.
    std::uint64_t send(const SubframeMessage& msg, wire::Instant now)
    {
        wire::Bytes payload = msg.encode();
        auto chunks = wire::chunk_subframe(msg.timestamp(), msg.content_type(), payload,
                                           options_.max_datagram, channel_.sender_clock(now));
        std::uint64_t bytes = 0;
        for (const auto& chunk : chunks) {
            wire::Bytes datagram = wire::to_datagram(chunk);
            bytes += datagram.size();
            channel_.send(link_, std::move(datagram), now);
            ++totals_.datagrams_sent;
        }
        totals_.wire_bytes += bytes;
        totals_.messages_sent += 1;
        totals_.payload_bytes_sent += payload.size();
        sent_[{msg.content_type(), msg.timestamp()}] = payload.size();
        return 8 * bytes;
    }

    const std::map<StreamKey, std::size_t>& sent() const { return sent_; }

private:
    Direction link_;
    DatagramChannel& channel_;
    const EmulationOptions& options_;
    LinkTotals& totals_;
    std::map<StreamKey, std::size_t> sent_;
};

enum class Outcome { Complete, Timeout, Jumbled };

/// Receive path of one endpoint: one reassembly buffer per content type.
/// Records the outcome of every subframe message it hears about.
class Receiver {
public:
    Receiver(const EmulationOptions& options, unsigned soft_bit_width, LinkTotals& totals)
        : options_(options), soft_bit_width_(soft_bit_width), totals_(totals)
    {
    }

    void on_delivery(Delivery d)
    {
        ++totals_.datagrams_received;
        auto parsed = wire::parse_datagram(d.datagram);
        if (std::holds_alternative<wire::Malformed>(parsed)) {
            ++totals_.malformed;
            return;
        }
        auto chunk = std::get<wire::Chunk>(std::move(parsed));
        // Arrivals at an instant win over deadlines expiring at that instant.
        poll(d.arrival - std::chrono::nanoseconds(1));
        const std::uint16_t type = chunk.header.content_type;
        handle(type, buffer_for(type).accept(std::move(chunk), d.arrival));
    }

    void poll(wire::Instant now)
    {
        for (auto& [type, buffer] : buffers_) {
            if (auto t = buffer.poll_timeout(now)) {
                outcomes_[{type, t->timestamp}] = Outcome::Timeout;
            }
        }
    }

    bool idle() const
    {
        return std::none_of(buffers_.begin(), buffers_.end(),
                            [](const auto& kv) { return kv.second.assembling(); });
    }

    const std::map<StreamKey, Outcome>& outcomes() const { return outcomes_; }
    const std::map<StreamKey, std::size_t>& delivered() const { return delivered_; }

private:
    wire::ReassemblyBuffer& buffer_for(std::uint16_t content_type)
    {
        auto it = buffers_.find(content_type);
        if (it == buffers_.end()) {
            it = buffers_
                     .emplace(content_type,
                              wire::ReassemblyBuffer(options_.reassembly_timeout, options_.order))
                     .first;
        }
        return it->second;
    }

    void complete(const wire::Complete& c)
    {
        outcomes_[{c.content_type, c.timestamp}] = Outcome::Complete;
        delivered_[{c.content_type, c.timestamp}] = c.payload.size();
        totals_.payload_bytes_delivered += c.payload.size();
        try {
            (void)SubframeMessage::decode(c.timestamp, c.content_type, c.payload, soft_bit_width_);
        } catch (const std::invalid_argument&) {
            ++totals_.decode_errors;
        }
    }

    void handle(std::uint16_t type, const wire::ReassemblyEvent& ev)
    {
        if (const auto* c = std::get_if<wire::Complete>(&ev)) {
            complete(*c);
        } else if (const auto* j = std::get_if<wire::Jumbled>(&ev)) {
            outcomes_[{type, j->old_timestamp}] = Outcome::Jumbled;
            if (j->completed) complete(*j->completed);
        } else if (std::holds_alternative<wire::Malformed>(ev)) {
            ++totals_.malformed;
        }
    }

    const EmulationOptions& options_;
    unsigned soft_bit_width_;
    LinkTotals& totals_;
    std::map<std::uint16_t, wire::ReassemblyBuffer> buffers_;
    std::map<StreamKey, Outcome> outcomes_;
    std::map<StreamKey, std::size_t> delivered_;
};

ControlDl make_control(const CellConfig& cfg, std::uint64_t scheduled_bits, std::uint64_t key)
{
    ControlDl c;
    if (scheduled_bits == 0) {
        return c;
    }
    const std::uint64_t bits_per_rb =
        12 * cfg.n_layers() * cfg.mod_order() * (cfg.symbols_per_second() / 1000);
    const std::uint64_t max_rb = std::max<std::uint64_t>(1, cfg.n_sc() / 12);
    c.dci_count = static_cast<std::uint8_t>(1 + key % 3);
    for (std::size_t i = 0; i < c.dci_count; ++i) {
        c.dci_positions[i] = static_cast<std::uint16_t>(8 * i);
    }
    c.pdcch_symbols = 2;
    c.phich_groups = 1;
    c.mcs = mcs_for(cfg.modulation());
    c.rb_start = 0;
    c.rb_count = static_cast<std::uint16_t>(
        std::min(max_rb, (scheduled_bits + bits_per_rb - 1) / bits_per_rb));
    c.power_offset_cdb = 0;
    return c;
}

// One outcome per sent message, charged to the message's own subframe. A
// message of which no chunk ever arrived counts as a timeout.
void settle(EmulationReport& report, LinkTotals& totals, const Transmitter& tx, const Receiver& rx)
{
    for (const auto& [key, size] : tx.sent()) {
        auto it = rx.outcomes().find(key);
        Outcome outcome = it == rx.outcomes().end() ? Outcome::Timeout : it->second;
        SubframeRecord* rec = key.second < report.series.size() ? &report.series[key.second] : nullptr;
        switch (outcome) {
        case Outcome::Complete:
            ++totals.completes;
            if (rec) ++rec->completes;
            break;
        case Outcome::Timeout:
            ++totals.timeouts;
            if (rec) ++rec->timeouts;
            break;
        case Outcome::Jumbled:
            ++totals.jumbled;
            if (rec) ++rec->jumbled;
            break;
        }
        if (outcome != Outcome::Complete) {
            totals.payload_bytes_discarded += size;
        }
    }
}

}  // namespace

EmulationReport run_emulation(const CellConfig& cfg, const TrafficProfile& profile,
                              DatagramChannel& channel, std::uint64_t seed,
                              const EmulationOptions& options)
{
    profile.validate();
    options.validate();

    EmulationReport report;
    report.goodput_bps = profile.goodput_bps;
    report.seed = seed;
    report.series.reserve(profile.duration_subframes);

    const std::uint64_t capacity = subframe_capacity_bits(cfg, Direction::Downlink);
    const auto soft_width = static_cast<unsigned>(cfg.soft_bit_width());
    const LlrQuantizer quantizer(soft_width, options.llr_clip);
    const float llr_scale = static_cast<float>(1.5 * options.llr_clip);

    CbrTrafficGenerator traffic(profile);
    SubframeScheduler dl_sched(capacity, options.queue_limit_subframes);
    // Uplink is scheduled in coded bits; each becomes one soft bit.
    SubframeScheduler ul_sched(capacity, options.queue_limit_subframes);

    Transmitter du_tx(Direction::Downlink, channel, options, report.dl);
    Transmitter ru_tx(Direction::Uplink, channel, options, report.ul);
    Receiver ru_rx(options, soft_width, report.dl);
    Receiver du_rx(options, soft_width, report.ul);

    std::vector<float> llrs;
    auto exchange = [&](wire::Instant until) {
        for (auto& d : channel.receive(Direction::Downlink, until)) ru_rx.on_delivery(std::move(d));
        ru_rx.poll(until);
        for (auto& d : channel.receive(Direction::Uplink, until)) du_rx.on_delivery(std::move(d));
        du_rx.poll(until);
    };

    try {
        for (std::uint64_t k = 0; k < profile.duration_subframes; ++k) {
            const wire::Instant now = k * kSubframe;
            SubframeRecord rec;
            rec.subframe = k;
            rec.offered_bits = traffic.next_subframe_bits();
            report.offered_bits += rec.offered_bits;

            // DU: control every subframe, hard bits when something is scheduled.
            std::uint64_t dl_bits = dl_sched.schedule_subframe(rec.offered_bits);
            report.dl.scheduled_bits += dl_bits;
            std::uint64_t key = kernels::mix64(kernels::stream_key(seed, stream_id(k, kControlStream)));
            rec.dl_bits += du_tx.send(
                SubframeMessage(Direction::Downlink, k, make_control(cfg, dl_bits, key)), now);
            if (dl_bits > 0) {
                HardBits hb;
                hb.bits.resize((dl_bits + 7) / 8);
                kernels::omp::fill_bytes(seed, stream_id(k, kHardBitsStream), hb.bits);
                rec.dl_bits += du_tx.send(SubframeMessage(Direction::Downlink, k, std::move(hb)), now);
            }

            // RU: soft bits for the uplink allocation, CQI every period.
            std::uint64_t ul_coded = ul_sched.schedule_subframe(rec.offered_bits);
            report.ul.scheduled_bits += ul_coded * soft_width;
            if (ul_coded > 0) {
                llrs.resize(ul_coded);
                kernels::omp::generate_llrs(seed, stream_id(k, kSoftBitsStream), llrs, llr_scale);
                SoftBits sb{soft_width, std::vector<std::int16_t>(ul_coded)};
                kernels::omp::quantize(llrs, quantizer, sb.codes);
                rec.ul_bits += ru_tx.send(SubframeMessage(Direction::Uplink, k, std::move(sb)), now);
            }
            if (k % options.cqi_period_subframes == 0) {
                CqiReport cqi;
                cqi.report_index = static_cast<std::uint32_t>(k / options.cqi_period_subframes);
                cqi.wideband_cqi = static_cast<std::uint8_t>((key >> 8) % 16);
                cqi.rank = static_cast<std::uint8_t>(std::min<std::uint64_t>(cfg.n_layers(), 4));
                rec.ul_bits += ru_tx.send(SubframeMessage(Direction::Uplink, k, cqi), now);
            }

            report.series.push_back(rec);
            exchange(now + kSubframe - std::chrono::nanoseconds(1));
        }

        // Let in-flight datagrams land and partial subframes resolve.
        const auto min_drain = static_cast<std::uint64_t>(2 + options.reassembly_timeout / kSubframe);
        for (std::uint64_t step = 0; step < 100'000; ++step) {
            const wire::Instant now = (profile.duration_subframes + step) * kSubframe;
            exchange(now + kSubframe - std::chrono::nanoseconds(1));
            if (step + 1 >= min_drain && channel.idle() &&
                ru_rx.idle() && du_rx.idle()) {
                break;
            }
        }
    } catch (const std::runtime_error& e) {
        report.complete = false;
        report.error = e.what();
    }

    report.dropped_bits = dl_sched.dropped_bits();
    settle(report, report.dl, du_tx, ru_rx);
    settle(report, report.ul, ru_tx, du_rx);
    return report;
}

std::vector<std::uint64_t> goodput_grid(std::uint64_t peak_bps, std::size_t n)
{
    if (n < 2) {
        throw std::invalid_argument("a goodput grid needs at least two points");
    }
    std::vector<std::uint64_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<std::uint64_t>(
            (static_cast<u128>(peak_bps) * i) / (n - 1));
    }
    return out;
}

std::vector<EmulationReport> run_sweep_serial(const CellConfig& cfg, const TrafficProfile& base,
                                              std::span<const std::uint64_t> goodputs,
                                              const Impairments& impairments, std::uint64_t seed,
                                              const EmulationOptions& options)
{
    std::vector<EmulationReport> out;
    out.reserve(goodputs.size());
    for (std::uint64_t g : goodputs) {
        TrafficProfile p = base;
        p.goodput_bps = g;
        SimulatedChannel channel(impairments, seed);
        out.push_back(run_emulation(cfg, p, channel, seed, options));
    }
    return out;
}

std::vector<EmulationReport> run_sweep(const CellConfig& cfg, const TrafficProfile& base,
                                       std::span<const std::uint64_t> goodputs,
                                       const Impairments& impairments, std::uint64_t seed,
                                       const EmulationOptions& options)
{
    base.validate();
    options.validate();
    impairments.validate();

    std::vector<EmulationReport> out(goodputs.size());
    std::vector<std::exception_ptr> errors(goodputs.size());
    const auto n = static_cast<std::int64_t>(goodputs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            TrafficProfile p = base;
            p.goodput_bps = goodputs[static_cast<std::size_t>(i)];
            SimulatedChannel channel(impairments, seed);
            out[static_cast<std::size_t>(i)] = run_emulation(cfg, p, channel, seed, options);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace fhsplit
