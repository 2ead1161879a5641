#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rltqap/message.hpp"

namespace rltqap {

/// Bulk-synchronous mesh: every phase, each worker sends one message to every
/// peer and receives one back. All transports move the wire encoding, so byte
/// accounting and codec behaviour are identical in-process and over sockets.
class Transport {
   public:
    virtual ~Transport() = default;
    virtual int worker() const = 0;
    virtual int workers() const = 0;

    /// Sends outgoing[w] to every peer w != worker() and blocks until one
    /// message per peer arrived. Returned messages are sorted by source.
    /// Validates phase and iteration of everything received (PhaseDesync /
    /// IterationMismatch) and accumulates sent+received payload bytes.
    virtual std::vector<PhaseMessage> exchange(Phase phase, std::uint32_t iteration,
                                               const std::vector<PhaseMessage>& outgoing,
                                               std::uint64_t* bytes = nullptr) = 0;
};

/// Shared mailbox hub for threads of one process. Create the hub, hand each
/// worker thread its endpoint(w).
class InProcessHub {
   public:
    InProcessHub(int workers, int precision_bits = 64, int expected_n = 0,
                 int receive_timeout_ms = 600000);
    ~InProcessHub();

    /// Valid for the hub's lifetime; call once per worker id.
    std::unique_ptr<Transport> endpoint(int worker);

   private:
    friend class InProcessEndpoint;
    struct Mailbox {
        std::mutex mutex;
        std::condition_variable cv;
        std::deque<std::vector<std::uint8_t>> queue;
    };
    int workers_;
    int precision_bits_;
    int expected_n_;
    int receive_timeout_ms_;
    std::vector<std::unique_ptr<Mailbox>> boxes_;  // dest * workers + src

    Mailbox& box(int dest, int src) { return *boxes_[static_cast<size_t>(dest) * workers_ + src]; }
};

/// TCP full mesh. `endpoints` lists "host:port" for every worker in id order;
/// worker w listens on its own port, connects to lower ids, accepts higher
/// ids. Frames are u32-LE length + encoded message. Connection loss raises
/// PeerDisconnected.
class SocketTransport : public Transport {
   public:
    SocketTransport(int worker, const std::vector<std::string>& endpoints, int precision_bits = 64,
                    int expected_n = 0, int connect_timeout_ms = 15000,
                    int receive_timeout_ms = 600000);
    ~SocketTransport() override;

    int worker() const override { return worker_; }
    int workers() const override { return static_cast<int>(fds_.size()); }
    std::vector<PhaseMessage> exchange(Phase phase, std::uint32_t iteration,
                                       const std::vector<PhaseMessage>& outgoing,
                                       std::uint64_t* bytes = nullptr) override;

   private:
    int worker_;
    int precision_bits_;
    int expected_n_;
    std::vector<int> fds_;  // per worker id, -1 for self
};

}  // namespace rltqap
