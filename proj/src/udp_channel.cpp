// SPDX-License-Identifier: Apache-2.0
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

#include "fhsplit/channel.hpp"

namespace fhsplit {
namespace {

std::vector<std::uint8_t> resolve(const std::string& addr, socklen_t& len)
{
    auto colon = addr.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == addr.size()) {
        throw std::runtime_error("address '" + addr + "' is not host:port");
    }
    std::string host = addr.substr(0, colon);
    std::string port = addr.substr(colon + 1);
    if (host.size() > 2 && host.front() == '[' && host.back() == ']') {
        host = host.substr(1, host.size() - 2);
    }

    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_DGRAM;
    addrinfo* res = nullptr;
    if (int rc = getaddrinfo(host.c_str(), port.c_str(), &hints, &res); rc != 0) {
        throw std::runtime_error("cannot resolve '" + addr + "': " + gai_strerror(rc));
    }
    std::vector<std::uint8_t> out(res->ai_addrlen);
    std::memcpy(out.data(), res->ai_addr, res->ai_addrlen);
    len = res->ai_addrlen;
    freeaddrinfo(res);
    return out;
}

int open_bound(const std::vector<std::uint8_t>& sa, socklen_t len, const std::string& addr)
{
    auto family = reinterpret_cast<const sockaddr*>(sa.data())->sa_family;
    int fd = ::socket(family, SOCK_DGRAM, 0);
    if (fd < 0) {
        throw std::runtime_error("socket(): " + std::string(std::strerror(errno)));
    }
    int rcvbuf = 8 << 20;
    ::setsockopt(fd, SOL_SOCKET, SO_RCVBUF, &rcvbuf, sizeof(rcvbuf));
    if (::bind(fd, reinterpret_cast<const sockaddr*>(sa.data()), len) != 0) {
        int err = errno;
        ::close(fd);
        throw std::runtime_error("bind " + addr + ": " + std::strerror(err));
    }
    return fd;
}

// Replaces sa with the bound address, which resolves a port of 0.
void read_bound(int fd, std::vector<std::uint8_t>& sa)
{
    sockaddr_storage ss{};
    socklen_t len = sizeof(ss);
    if (::getsockname(fd, reinterpret_cast<sockaddr*>(&ss), &len) == 0) {
        sa.assign(reinterpret_cast<const std::uint8_t*>(&ss),
                  reinterpret_cast<const std::uint8_t*>(&ss) + len);
    }
}

}  // namespace

UdpChannel::UdpChannel(const UdpEndpoints& endpoints) : start_(std::chrono::steady_clock::now())
{
    socklen_t du_len = 0;
    socklen_t ru_len = 0;
    du_peer_ = resolve(endpoints.du_addr, du_len);
    ru_peer_ = resolve(endpoints.ru_addr, ru_len);
    du_peer_.resize(du_len);
    ru_peer_.resize(ru_len);
    du_.fd = open_bound(du_peer_, du_len, endpoints.du_addr);
    try {
        ru_.fd = open_bound(ru_peer_, ru_len, endpoints.ru_addr);
    } catch (...) {
        ::close(du_.fd);
        throw;
    }
    read_bound(du_.fd, du_peer_);
    read_bound(ru_.fd, ru_peer_);
    du_.pump = std::thread([this] { pump(du_); });
    ru_.pump = std::thread([this] { pump(ru_); });
}

UdpChannel::~UdpChannel()
{
    stop_ = true;
    for (Socket* s : {&du_, &ru_}) {
        if (s->pump.joinable()) s->pump.join();
        if (s->fd >= 0) ::close(s->fd);
    }
}

wire::Instant UdpChannel::elapsed() const
{
    return std::chrono::duration_cast<wire::Instant>(std::chrono::steady_clock::now() - start_);
}

void UdpChannel::wait_until(wire::Instant t) const
{
    std::this_thread::sleep_until(start_ + t);
}

void UdpChannel::pump(Socket& s)
{
    std::vector<std::uint8_t> buf(65'536);
    pollfd pfd{s.fd, POLLIN, 0};
    while (!stop_) {
        if (::poll(&pfd, 1, 20) <= 0) continue;
        ssize_t n = ::recv(s.fd, buf.data(), buf.size(), 0);
        if (n < 0) continue;
        Delivery d{wire::Bytes(buf.begin(), buf.begin() + n), elapsed()};
        std::lock_guard lock(s.mutex);
        s.inbox.push_back(std::move(d));
    }
}

void UdpChannel::send(Direction link, wire::Bytes datagram, wire::Instant now)
{
    wait_until(now);
    const Socket& from = link == Direction::Downlink ? du_ : ru_;
    const auto& to = link == Direction::Downlink ? ru_peer_ : du_peer_;
    ssize_t n = ::sendto(from.fd, datagram.data(), datagram.size(), 0,
                         reinterpret_cast<const sockaddr*>(to.data()),
                         static_cast<socklen_t>(to.size()));
    if (n != static_cast<ssize_t>(datagram.size())) {
        throw std::runtime_error("sendto: " + std::string(std::strerror(errno)));
    }
}

std::vector<Delivery> UdpChannel::receive(Direction link, wire::Instant until)
{
    wait_until(until);
    Socket& at = link == Direction::Downlink ? ru_ : du_;
    std::vector<Delivery> out;
    std::lock_guard lock(at.mutex);
    while (!at.inbox.empty() && at.inbox.front().arrival <= until) {
        out.push_back(std::move(at.inbox.front()));
        at.inbox.pop_front();
    }
    return out;
}

std::uint64_t UdpChannel::sender_clock(wire::Instant) const
{
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                          std::chrono::system_clock::now().time_since_epoch())
                                          .count());
}

bool UdpChannel::idle() const
{
    std::scoped_lock lock(du_.mutex, ru_.mutex);
    return du_.inbox.empty() && ru_.inbox.empty();
}

}  // namespace fhsplit
