// SPDX-License-Identifier: Apache-2.0
#include "fhsplit/channel.hpp"

#include <cmath>

namespace fhsplit {

void Impairments::validate() const
{
    auto rate = [](double v, const char* field) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(field, "must be in [0, 1]");
    };
    rate(loss_rate, "loss_rate");
    rate(reorder_rate, "reorder_rate");
    if (delay.count() < 0) throw ConfigError("delay_us", "must be non-negative");
    if (reorder_hold.count() < 0) throw ConfigError("reorder_hold_us", "must be non-negative");
}

SimulatedChannel::SimulatedChannel(Impairments impairments, std::uint64_t seed)
    : imp_(impairments), rng_(seed)
{
    imp_.validate();
}

void SimulatedChannel::send(Direction link, wire::Bytes datagram, wire::Instant now)
{
    // Two draws per datagram regardless of outcome keep the random stream
    // aligned across parameter changes.
    bool lost = unit_(rng_) < imp_.loss_rate;
    bool held = unit_(rng_) < imp_.reorder_rate;
    if (lost) {
        ++dropped_;
        return;
    }
    wire::Instant arrival = now + imp_.delay;
    if (held) {
        arrival += imp_.reorder_hold;
        ++reordered_;
    }
    queue(link).emplace(std::pair{arrival, seq_++}, std::move(datagram));
}

std::vector<Delivery> SimulatedChannel::receive(Direction link, wire::Instant until)
{
    Queue& q = queue(link);
    std::vector<Delivery> out;
    while (!q.empty() && q.begin()->first.first <= until) {
        auto node = q.extract(q.begin());
        out.push_back(Delivery{std::move(node.mapped()), node.key().first});
    }
    return out;
}

std::uint64_t SimulatedChannel::sender_clock(wire::Instant now) const
{
    return static_cast<std::uint64_t>(now.count());
}

bool SimulatedChannel::idle() const
{
    return dl_.empty() && ul_.empty();
}

}  // namespace fhsplit
