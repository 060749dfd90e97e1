#include "glass/oracle/transport.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

namespace glass::oracle {
namespace {

[[noreturn]] void fail(const std::string& what) {
  throw TransportError(what + ": " + std::strerror(errno));
}

std::pair<std::string, std::string> split_address(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == address.size()) {
    throw TransportError("address must be host:port, got \"" + address + "\"");
  }
  return {address.substr(0, colon), address.substr(colon + 1)};
}

struct AddrInfo {
  addrinfo* list = nullptr;
  ~AddrInfo() {
    if (list) freeaddrinfo(list);
  }
};

}  // namespace

FdTransport::FdTransport(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {}

FdTransport::~FdTransport() {
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  if (read_fd_ >= 0) ::close(read_fd_);
}

void FdTransport::close_write() {
  if (write_fd_ < 0) return;
  if (write_fd_ == read_fd_) {
    ::shutdown(write_fd_, SHUT_WR);
  } else {
    ::close(write_fd_);
  }
  write_fd_ = -1;
}

void FdTransport::send_line(std::string_view line) {
  if (write_fd_ < 0) throw TransportError("transport closed for writing");
  std::string data(line);
  data.push_back('\n');
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::write(write_fd_, data.data() + sent, data.size() - sent);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("write to oracle failed");
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string FdTransport::receive_line(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw TransportError("timed out waiting for oracle");
    pollfd pfd{read_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1 << 30)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      fail("poll on oracle failed");
    }
    if (ready == 0) continue;
    char chunk[65536];
    const ssize_t n = ::read(read_fd_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("read from oracle failed");
    }
    if (n == 0) throw TransportError("oracle closed the connection");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

ProcessTransport::ProcessTransport(const std::string& command) {
  // A dead child must surface as a write error, not kill the engine.
  ::signal(SIGPIPE, SIG_IGN);
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) fail("pipe");
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    fail("pipe");
  }
  pid_ = ::fork();
  if (pid_ < 0) fail("fork");
  if (pid_ == 0) {
    ::setpgid(0, 0);
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  // Own process group, so termination also reaches anything the shell spawned.
  ::setpgid(pid_, pid_);
  ::close(to_child[0]);
  ::close(from_child[1]);
  fds_ = std::make_unique<FdTransport>(from_child[0], to_child[1]);
}

ProcessTransport::~ProcessTransport() {
  fds_->close_write();
  int status = 0;
  for (int i = 0; i < 50; ++i) {
    if (::waitpid(pid_, &status, WNOHANG) != 0) return;
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  ::kill(-pid_, SIGTERM);
  ::waitpid(pid_, &status, 0);
}

std::unique_ptr<FdTransport> connect_tcp(const std::string& address) {
  ::signal(SIGPIPE, SIG_IGN);
  const auto [host, port] = split_address(address);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  AddrInfo info;
  if (const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &info.list); rc != 0) {
    throw TransportError("cannot resolve " + address + ": " + gai_strerror(rc));
  }
  for (addrinfo* ai = info.list; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      return std::make_unique<FdTransport>(fd, fd);
    }
    ::close(fd);
  }
  fail("cannot connect to " + address);
}

std::pair<int, int> listen_tcp(const std::string& address) {
  const auto [host, port] = split_address(address);
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  AddrInfo info;
  if (const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &info.list); rc != 0) {
    throw TransportError("cannot resolve " + address + ": " + gai_strerror(rc));
  }
  const int fd = ::socket(info.list->ai_family, info.list->ai_socktype, info.list->ai_protocol);
  if (fd < 0) fail("socket");
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd, info.list->ai_addr, info.list->ai_addrlen) != 0 || ::listen(fd, 1) != 0) {
    ::close(fd);
    fail("cannot listen on " + address);
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
  return {fd, ntohs(bound.sin_port)};
}

std::unique_ptr<FdTransport> accept_one(int listen_fd) {
  for (;;) {
    const int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd >= 0) return std::make_unique<FdTransport>(fd, fd);
    if (errno != EINTR) fail("accept");
  }
}

std::pair<std::unique_ptr<FdTransport>, std::unique_ptr<FdTransport>> socket_pair() {
  ::signal(SIGPIPE, SIG_IGN);
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) fail("socketpair");
  return {std::make_unique<FdTransport>(fds[0], fds[0]),
          std::make_unique<FdTransport>(fds[1], fds[1])};
}

}  // namespace glass::oracle
