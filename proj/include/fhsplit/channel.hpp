// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "fhsplit/split_models.hpp"
#include "fhsplit/wire.hpp"

namespace fhsplit {

struct Delivery {
    wire::Bytes datagram;
    wire::Instant arrival;
};

/// Two unidirectional datagram links between a DU and an RU: Downlink is
/// DU -> RU, Uplink is RU -> DU. Instants are measured from the start of
/// the run.
class DatagramChannel {
public:
    virtual ~DatagramChannel() = default;

    /// Throws std::runtime_error when the link fails.
    virtual void send(Direction link, wire::Bytes datagram, wire::Instant now) = 0;
    /// Datagrams that have arrived by `until`, in arrival order.
    virtual std::vector<Delivery> receive(Direction link, wire::Instant until) = 0;
    /// Value for the header's sender_clock field when emitting at `now`.
    virtual std::uint64_t sender_clock(wire::Instant now) const = 0;
    /// True when nothing is in flight on either link.
    virtual bool idle() const = 0;
};

struct Impairments {
    double loss_rate = 0.0;
    double reorder_rate = 0.0;
    std::chrono::microseconds delay{0};
    // Extra delay of a reordered datagram. At 1.5 subframes it lands
    // behind the first datagrams of the next subframe. Datagrams with equal
    // arrival instants keep their send order.
    std::chrono::microseconds reorder_hold{1500};

    /// Throws ConfigError for rates outside [0, 1] or a negative delay.
    void validate() const;
};

/// In-process channel with seeded loss, reordering and fixed delay. The
/// sender clock is the emulation clock itself.
class SimulatedChannel final : public DatagramChannel {
public:
    SimulatedChannel(Impairments impairments, std::uint64_t seed);

    void send(Direction link, wire::Bytes datagram, wire::Instant now) override;
    std::vector<Delivery> receive(Direction link, wire::Instant until) override;
    std::uint64_t sender_clock(wire::Instant now) const override;
    bool idle() const override;

    std::uint64_t dropped() const { return dropped_; }
    std::uint64_t reordered() const { return reordered_; }

private:
    // Keyed by (arrival, send sequence) so equal arrivals keep send order.
    using Queue = std::map<std::pair<wire::Instant, std::uint64_t>, wire::Bytes>;

    Queue& queue(Direction link) { return link == Direction::Downlink ? dl_ : ul_; }

    Impairments imp_;
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    Queue dl_;
    Queue ul_;
    std::uint64_t seq_ = 0;
    std::uint64_t dropped_ = 0;
    std::uint64_t reordered_ = 0;
};

/// "host:port" pair for each endpoint. Port 0 binds an ephemeral port.
struct UdpEndpoints {
    std::string du_addr = "127.0.0.1:47100";
    std::string ru_addr = "127.0.0.1:47101";
};

/// Real UDP sockets, one bound per endpoint. Emulation instants map onto
/// the steady clock from construction: send() paces to `now`, receive()
/// waits until `until`. A background thread per socket drains the kernel
/// buffer and stamps arrivals. The sender clock is wall-clock nanoseconds.
class UdpChannel final : public DatagramChannel {
public:
    /// Throws std::runtime_error if an address does not resolve or a bind
    /// fails.
    explicit UdpChannel(const UdpEndpoints& endpoints);
    ~UdpChannel() override;
    UdpChannel(const UdpChannel&) = delete;
    UdpChannel& operator=(const UdpChannel&) = delete;

    void send(Direction link, wire::Bytes datagram, wire::Instant now) override;
    std::vector<Delivery> receive(Direction link, wire::Instant until) override;
    std::uint64_t sender_clock(wire::Instant now) const override;
    bool idle() const override;

private:
    struct Socket {
        int fd = -1;
        std::thread pump;
        mutable std::mutex mutex;
        std::deque<Delivery> inbox;
    };

    wire::Instant elapsed() const;
    void wait_until(wire::Instant t) const;
    void pump(Socket& s);

    std::chrono::steady_clock::time_point start_;
    Socket du_;  // receives uplink
    Socket ru_;  // receives downlink
    std::vector<std::uint8_t> du_peer_;  // sockaddr of the DU
    std::vector<std::uint8_t> ru_peer_;  // sockaddr of the RU
    std::atomic<bool> stop_{false};
};

}  // namespace fhsplit
