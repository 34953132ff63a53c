// Copyright 2026 The Radar Testbed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "rtb/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace rtb {

const char* to_string(Topic t) { return t == Topic::kAsterix ? "asterix" : "nmea"; }

std::optional<Datagram> Subscription::poll() {
  std::lock_guard lock(mu_);
  if (queue_.empty()) return std::nullopt;
  Datagram d = std::move(queue_.front());
  queue_.pop_front();
  return d;
}

std::optional<Datagram> Subscription::wait_for(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  Datagram d = std::move(queue_.front());
  queue_.pop_front();
  return d;
}

std::size_t Subscription::pending() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

void Subscription::push(Datagram d) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    queue_.push_back(std::move(d));
  }
  cv_.notify_one();
}

void Subscription::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

bool Subscription::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

void InprocBus::publish(const Datagram& d) {
  std::lock_guard lock(mu_);
  for (auto it = subs_.begin(); it != subs_.end();) {
    auto sub = it->second.lock();
    if (!sub) {
      it = subs_.erase(it);
      continue;
    }
    if (it->first == d.topic) sub->push(d);
    ++it;
  }
}

std::shared_ptr<Subscription> InprocBus::subscribe(Topic topic) {
  auto sub = std::make_shared<Subscription>();
  std::lock_guard lock(mu_);
  subs_.emplace_back(topic, sub);
  return sub;
}

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw TransportError(what + ": " + std::strerror(errno));
}

sockaddr_in make_addr(const std::string& host, std::uint16_t port) {
  sockaddr_in a{};
  a.sin_family = AF_INET;
  a.sin_port = htons(port);
  if (inet_pton(AF_INET, host.c_str(), &a.sin_addr) != 1)
    throw TransportError("bad IPv4 address: " + host);
  return a;
}

}  // namespace

UdpBus::UdpBus(UdpConfig config) : config_(std::move(config)) {
  send_fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (send_fd_ < 0) fail("socket");
  const unsigned char ttl = static_cast<unsigned char>(config_.ttl);
  const unsigned char loop = config_.loopback ? 1 : 0;
  in_addr ifa{};
  inet_pton(AF_INET, config_.interface.c_str(), &ifa);
  if (::setsockopt(send_fd_, IPPROTO_IP, IP_MULTICAST_TTL, &ttl, sizeof ttl) < 0 ||
      ::setsockopt(send_fd_, IPPROTO_IP, IP_MULTICAST_LOOP, &loop, sizeof loop) < 0 ||
      ::setsockopt(send_fd_, IPPROTO_IP, IP_MULTICAST_IF, &ifa, sizeof ifa) < 0) {
    ::close(send_fd_);
    fail("setsockopt");
  }
}

UdpBus::~UdpBus() {
  stop_ = true;
  for (auto& r : readers_) {
    if (r->thread.joinable()) r->thread.join();
    ::close(r->fd);
    r->sub->close();
  }
  if (send_fd_ >= 0) ::close(send_fd_);
}

const Endpoint& UdpBus::endpoint(Topic t) const {
  return t == Topic::kAsterix ? config_.asterix : config_.nmea;
}

void UdpBus::publish(const Datagram& d) {
  const Endpoint& ep = endpoint(d.topic);
  const sockaddr_in to = make_addr(ep.group, ep.port);
  const ssize_t n = ::sendto(send_fd_, d.payload.data(), d.payload.size(), 0,
                             reinterpret_cast<const sockaddr*>(&to), sizeof to);
  if (n < 0 || static_cast<std::size_t>(n) != d.payload.size()) fail("sendto");
}

std::shared_ptr<Subscription> UdpBus::subscribe(Topic topic) {
  const Endpoint& ep = endpoint(topic);
  const int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd < 0) fail("socket");
  const int one = 1;
  // Several listeners share the group port, like devices on the bridge LAN.
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEPORT, &one, sizeof one);
  sockaddr_in bind_addr{};
  bind_addr.sin_family = AF_INET;
  bind_addr.sin_port = htons(ep.port);
  bind_addr.sin_addr.s_addr = htonl(INADDR_ANY);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&bind_addr), sizeof bind_addr) < 0) {
    ::close(fd);
    fail("bind");
  }
  ip_mreq mreq{};
  inet_pton(AF_INET, ep.group.c_str(), &mreq.imr_multiaddr);
  inet_pton(AF_INET, config_.interface.c_str(), &mreq.imr_interface);
  if (::setsockopt(fd, IPPROTO_IP, IP_ADD_MEMBERSHIP, &mreq, sizeof mreq) < 0) {
    ::close(fd);
    fail("IP_ADD_MEMBERSHIP");
  }
  auto reader = std::make_unique<Reader>();
  reader->fd = fd;
  reader->sub = std::make_shared<Subscription>();
  reader->topic = topic;
  Reader* raw = reader.get();
  auto sub = reader->sub;
  std::lock_guard lock(mu_);
  readers_.push_back(std::move(reader));
  raw->thread = std::thread([this, raw] { read_loop(raw); });
  return sub;
}

void UdpBus::read_loop(Reader* r) {
  std::vector<std::uint8_t> buf(65536);
  while (!stop_) {
    pollfd p{r->fd, POLLIN, 0};
    const int rc = ::poll(&p, 1, 50);
    if (rc <= 0) continue;
    sockaddr_in from{};
    socklen_t len = sizeof from;
    const ssize_t n = ::recvfrom(r->fd, buf.data(), buf.size(), 0,
                                 reinterpret_cast<sockaddr*>(&from), &len);
    if (n < 0) continue;
    char host[INET_ADDRSTRLEN] = {};
    inet_ntop(AF_INET, &from.sin_addr, host, sizeof host);
    Datagram d;
    d.topic = r->topic;
    d.payload.assign(buf.begin(), buf.begin() + n);
    d.source = std::string(host) + ":" + std::to_string(ntohs(from.sin_port));
    d.time = to_micros(std::chrono::duration<double>(
                           std::chrono::steady_clock::now().time_since_epoch())
                           .count());
    r->sub->push(std::move(d));
  }
}

BusMode bus_mode_from(const std::string& s) {
  if (s == "inproc") return BusMode::kInproc;
  if (s == "udp") return BusMode::kUdp;
  throw std::invalid_argument("unknown bus mode: " + s);
}

std::unique_ptr<Bus> open_bus(BusMode mode, const UdpConfig& udp) {
  if (mode == BusMode::kUdp) return std::make_unique<UdpBus>(udp);
  return std::make_unique<InprocBus>();
}

}  // namespace rtb
