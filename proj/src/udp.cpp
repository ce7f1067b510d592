#include "uavlight/udp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>

#include "uavlight/errors.hpp"

namespace uavlight {

std::string Endpoint::str() const {
  in_addr a;
  a.s_addr = htonl(addr);
  char buf[INET_ADDRSTRLEN];
  inet_ntop(AF_INET, &a, buf, sizeof buf);
  return std::string(buf) + ":" + std::to_string(port);
}

Endpoint make_endpoint(const std::string& host, uint16_t port) {
  in_addr a;
  if (inet_pton(AF_INET, host.c_str(), &a) != 1)
    throw LinkError("not an IPv4 address: " + host);
  return Endpoint{ntohl(a.s_addr), port};
}

Endpoint parse_endpoint(const std::string& text, uint16_t default_port) {
  size_t colon = text.find(':');
  if (colon == std::string::npos) return make_endpoint(text, default_port);
  std::string host = text.substr(0, colon);
  std::string port_s = text.substr(colon + 1);
  int port = 0;
  for (char c : port_s) {
    if (c < '0' || c > '9') throw LinkError("bad port in endpoint: " + text);
    port = port * 10 + (c - '0');
    if (port > 65535) throw LinkError("bad port in endpoint: " + text);
  }
  if (port == 0) throw LinkError("bad port in endpoint: " + text);
  return make_endpoint(host, static_cast<uint16_t>(port));
}

UdpSocket::UdpSocket(uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0) throw LinkError(std::string("socket: ") + std::strerror(errno));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    int e = errno;
    ::close(fd_);
    fd_ = -1;
    throw LinkError(std::string("bind: ") + std::strerror(e));
  }
  socklen_t len = sizeof addr;
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) < 0) {
    int e = errno;
    ::close(fd_);
    fd_ = -1;
    throw LinkError(std::string("getsockname: ") + std::strerror(e));
  }
  port_ = ntohs(addr.sin_port);
}

UdpSocket::~UdpSocket() {
  if (fd_ >= 0) ::close(fd_);
}

UdpSocket::UdpSocket(UdpSocket&& o) noexcept : fd_(o.fd_), port_(o.port_) {
  o.fd_ = -1;
  o.port_ = 0;
}

UdpSocket& UdpSocket::operator=(UdpSocket&& o) noexcept {
  if (this != &o) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = o.fd_;
    port_ = o.port_;
    o.fd_ = -1;
    o.port_ = 0;
  }
  return *this;
}

void UdpSocket::send_to(const std::string& payload, const Endpoint& to) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(to.addr);
  addr.sin_port = htons(to.port);
  ssize_t n = ::sendto(fd_, payload.data(), payload.size(), 0,
                       reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  if (n < 0) throw LinkError(std::string("sendto: ") + std::strerror(errno));
}

std::optional<Datagram> UdpSocket::recv(double timeout_s) {
  int timeout_ms = 0;
  if (timeout_s > 0.0)
    timeout_ms = static_cast<int>(std::ceil(timeout_s * 1000.0));

  pollfd pfd{fd_, POLLIN, 0};
  int r = ::poll(&pfd, 1, timeout_ms);
  if (r < 0) {
    if (errno == EINTR) return std::nullopt;
    throw LinkError(std::string("poll: ") + std::strerror(errno));
  }
  if (r == 0) return std::nullopt;

  char buf[2048];
  sockaddr_in from{};
  socklen_t len = sizeof from;
  ssize_t n = ::recvfrom(fd_, buf, sizeof buf, 0,
                         reinterpret_cast<sockaddr*>(&from), &len);
  if (n < 0) throw LinkError(std::string("recvfrom: ") + std::strerror(errno));

  Datagram d;
  d.payload.assign(buf, static_cast<size_t>(n));
  d.from = Endpoint{ntohl(from.sin_addr.s_addr), ntohs(from.sin_port)};
  return d;
}

}  // namespace uavlight
