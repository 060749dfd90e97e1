#pragma once

#include <sys/types.h>

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "glass/oracle/protocol.hpp"

namespace glass::oracle {

/// Timeout, EOF or I/O failure on a transport.
class TransportError : public OracleError {
 public:
  using OracleError::OracleError;
};

/// Newline-delimited UTF-8 message stream.
class LineTransport {
 public:
  virtual ~LineTransport() = default;
  virtual void send_line(std::string_view line) = 0;
  /// Blocks until a full line arrives; throws TransportError on timeout or EOF.
  virtual std::string receive_line(std::chrono::milliseconds timeout) = 0;
};

/// Line transport over a pair of file descriptors (may be the same socket).
class FdTransport : public LineTransport {
 public:
  FdTransport(int read_fd, int write_fd);
  ~FdTransport() override;
  FdTransport(const FdTransport&) = delete;
  FdTransport& operator=(const FdTransport&) = delete;

  void send_line(std::string_view line) override;
  std::string receive_line(std::chrono::milliseconds timeout) override;

  /// Closes the write side so the peer sees EOF.
  void close_write();

 private:
  int read_fd_;
  int write_fd_;
  std::string buffer_;
};

/// Runs `/bin/sh -c command` in its own process group and talks to its
/// stdin/stdout; stderr is inherited. Destruction closes the child's stdin,
/// waits up to 1 s, then terminates the group.
class ProcessTransport : public LineTransport {
 public:
  explicit ProcessTransport(const std::string& command);
  ~ProcessTransport() override;

  void send_line(std::string_view line) override { fds_->send_line(line); }
  std::string receive_line(std::chrono::milliseconds timeout) override {
    return fds_->receive_line(timeout);
  }
  pid_t pid() const { return pid_; }

 private:
  std::unique_ptr<FdTransport> fds_;
  pid_t pid_ = -1;
};

/// Connects to "host:port".
std::unique_ptr<FdTransport> connect_tcp(const std::string& address);

/// Listens on "host:port" (port 0 picks one). Returns the socket and bound port.
std::pair<int, int> listen_tcp(const std::string& address);

/// Accepts one connection on a listening socket.
std::unique_ptr<FdTransport> accept_one(int listen_fd);

/// Two connected in-memory endpoints.
std::pair<std::unique_ptr<FdTransport>, std::unique_ptr<FdTransport>> socket_pair();

}  // namespace glass::oracle
