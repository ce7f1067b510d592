#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>

namespace uavlight {

// IPv4 endpoint, address in host byte order.
struct Endpoint {
  uint32_t addr = 0;
  uint16_t port = 0;

  std::string str() const;
  bool operator==(const Endpoint& o) const {
    return addr == o.addr && port == o.port;
  }
  bool operator<(const Endpoint& o) const {
    return std::tie(addr, port) < std::tie(o.addr, o.port);
  }
};

Endpoint make_endpoint(const std::string& host, uint16_t port);
// Accepts "a.b.c.d:port" or bare "a.b.c.d" (default_port then applies).
Endpoint parse_endpoint(const std::string& text, uint16_t default_port);

struct Datagram {
  std::string payload;
  Endpoint from;
};

// Thin RAII wrapper over one bound UDP socket.
class UdpSocket {
public:
  // Binds 0.0.0.0 on the given port; 0 picks an ephemeral port.
  explicit UdpSocket(uint16_t port = 0);
  ~UdpSocket();
  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;
  UdpSocket(UdpSocket&& o) noexcept;
  UdpSocket& operator=(UdpSocket&& o) noexcept;

  uint16_t port() const { return port_; }
  void send_to(const std::string& payload, const Endpoint& to);
  // Waits up to timeout_s for one datagram; nullopt on timeout.
  std::optional<Datagram> recv(double timeout_s);

private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

}  // namespace uavlight
