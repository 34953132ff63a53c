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


#ifndef RTB_TRANSPORT_HPP_
#define RTB_TRANSPORT_HPP_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rtb/sector.hpp"

namespace rtb {

enum class Topic : std::uint8_t { kAsterix = 0, kNmea = 1 };

const char* to_string(Topic t);

struct Datagram {
  Topic topic = Topic::kAsterix;
  std::vector<std::uint8_t> payload;
  std::string source;  // "address:port" as seen by receivers
  Micros time = 0;     // simulation time of emission
  int publisher = 0;   // ground truth tag, never visible on a real wire
};

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Receive side of a subscription. Handles may be moved to other threads.
class Subscription {
 public:
  std::optional<Datagram> poll();
  std::optional<Datagram> wait_for(std::chrono::milliseconds timeout);
  std::size_t pending() const;

  void push(Datagram d);
  void close();
  bool closed() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Datagram> queue_;
  bool closed_ = false;
};

class Bus {
 public:
  virtual ~Bus() = default;
  virtual void publish(const Datagram& d) = 0;
  virtual std::shared_ptr<Subscription> subscribe(Topic topic) = 0;
};

// Shared-medium emulation: every subscriber of a topic receives every
// datagram, its own included, in publish order.
class InprocBus : public Bus {
 public:
  void publish(const Datagram& d) override;
  std::shared_ptr<Subscription> subscribe(Topic topic) override;

 private:
  std::mutex mu_;
  std::vector<std::pair<Topic, std::weak_ptr<Subscription>>> subs_;
};

struct Endpoint {
  std::string group = "239.192.0.1";
  std::uint16_t port = 4000;
};

struct UdpConfig {
  Endpoint asterix{"239.192.0.1", 4000};
  Endpoint nmea{"239.192.0.2", 10110};
  std::string interface = "127.0.0.1";
  int ttl = 1;
  bool loopback = true;
};

class UdpBus : public Bus {
 public:
  explicit UdpBus(UdpConfig config = {});
  ~UdpBus() override;

  UdpBus(const UdpBus&) = delete;
  UdpBus& operator=(const UdpBus&) = delete;

  void publish(const Datagram& d) override;
  std::shared_ptr<Subscription> subscribe(Topic topic) override;

 private:
  struct Reader {
    int fd = -1;
    std::shared_ptr<Subscription> sub;
    Topic topic;
    std::thread thread;
  };
  const Endpoint& endpoint(Topic t) const;
  void read_loop(Reader* r);

  UdpConfig config_;
  int send_fd_ = -1;
  std::atomic<bool> stop_{false};
  std::mutex mu_;
  std::vector<std::unique_ptr<Reader>> readers_;
};

enum class BusMode { kInproc, kUdp };

BusMode bus_mode_from(const std::string& s);
std::unique_ptr<Bus> open_bus(BusMode mode, const UdpConfig& udp = {});

}  // namespace rtb

#endif  // RTB_TRANSPORT_HPP_
