#include "rltqap/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstring>
#include <thread>

#include "rltqap/errors.hpp"

namespace rltqap {

namespace {

void validate(const PhaseMessage& msg, Phase phase, std::uint32_t iteration) {
    if (msg.phase != phase)
        throw PhaseDesync(std::string("expected ") + phase_name(phase) + ", peer " +
                          std::to_string(msg.source) + " sent " + phase_name(msg.phase));
    if (msg.iteration != iteration)
        throw IterationMismatch("peer " + std::to_string(msg.source) + " is at iteration " +
                                std::to_string(msg.iteration) + ", expected " +
                                std::to_string(iteration));
}

}  // namespace

// ---------------------------------------------------------------- in-process

class InProcessEndpoint : public Transport {
   public:
    InProcessEndpoint(InProcessHub* hub, int worker) : hub_(hub), worker_(worker) {}

    int worker() const override { return worker_; }
    int workers() const override { return hub_->workers_; }

    std::vector<PhaseMessage> exchange(Phase phase, std::uint32_t iteration,
                                       const std::vector<PhaseMessage>& outgoing,
                                       std::uint64_t* bytes) override {
        int w = hub_->workers_;
        if (static_cast<int>(outgoing.size()) < w)
            throw DimensionMismatch("one outgoing message per worker required");
        for (int peer = 0; peer < w; ++peer) {
            if (peer == worker_) continue;
            auto buf = encode(outgoing[peer], hub_->precision_bits_);
            if (bytes) *bytes += buf.size();
            auto& mb = hub_->box(peer, worker_);
            {
                std::lock_guard<std::mutex> lock(mb.mutex);
                mb.queue.push_back(std::move(buf));
            }
            mb.cv.notify_one();
        }
        std::vector<PhaseMessage> received;
        received.reserve(w - 1);
        for (int peer = 0; peer < w; ++peer) {
            if (peer == worker_) continue;
            auto& mb = hub_->box(worker_, peer);
            std::vector<std::uint8_t> buf;
            {
                std::unique_lock<std::mutex> lock(mb.mutex);
                if (!mb.cv.wait_for(lock, std::chrono::milliseconds(hub_->receive_timeout_ms_),
                                    [&] { return !mb.queue.empty(); }))
                    throw PeerDisconnected("no message from worker " + std::to_string(peer) +
                                           " within the receive timeout");
                buf = std::move(mb.queue.front());
                mb.queue.pop_front();
            }
            if (bytes) *bytes += buf.size();
            auto msg = decode(buf, hub_->precision_bits_, hub_->expected_n_);
            validate(msg, phase, iteration);
            received.push_back(std::move(msg));
        }
        return received;
    }

   private:
    InProcessHub* hub_;
    int worker_;
};

InProcessHub::InProcessHub(int workers, int precision_bits, int expected_n, int receive_timeout_ms)
    : workers_(workers),
      precision_bits_(precision_bits),
      expected_n_(expected_n),
      receive_timeout_ms_(receive_timeout_ms) {
    boxes_.resize(static_cast<size_t>(workers) * workers);
    for (auto& b : boxes_) b = std::make_unique<Mailbox>();
}

InProcessHub::~InProcessHub() = default;

std::unique_ptr<Transport> InProcessHub::endpoint(int worker) {
    return std::make_unique<InProcessEndpoint>(this, worker);
}

// -------------------------------------------------------------------- socket

namespace {

void write_all(int fd, const void* data, std::size_t len) {
    const char* p = static_cast<const char*>(data);
    while (len > 0) {
        ssize_t w = ::send(fd, p, len, MSG_NOSIGNAL);
        if (w <= 0) throw PeerDisconnected("send failed: " + std::string(std::strerror(errno)));
        p += w;
        len -= static_cast<std::size_t>(w);
    }
}

void read_all(int fd, void* data, std::size_t len) {
    char* p = static_cast<char*>(data);
    while (len > 0) {
        ssize_t r = ::recv(fd, p, len, 0);
        if (r <= 0) throw PeerDisconnected("peer closed the connection");
        p += r;
        len -= static_cast<std::size_t>(r);
    }
}

std::pair<std::string, std::uint16_t> split_endpoint(const std::string& ep) {
    auto pos = ep.rfind(':');
    if (pos == std::string::npos) throw Error("endpoint must be host:port, got " + ep);
    return {ep.substr(0, pos), static_cast<std::uint16_t>(std::stoi(ep.substr(pos + 1)))};
}

int listen_on(std::uint16_t port) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw Error("socket() failed");
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(port);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
        ::listen(fd, 64) != 0) {
        ::close(fd);
        throw Error("cannot listen on port " + std::to_string(port));
    }
    return fd;
}

int connect_with_retry(const std::string& host, std::uint16_t port, int timeout_ms) {
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    for (;;) {
        addrinfo* res = nullptr;
        if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) == 0) {
            int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
            if (fd >= 0 && ::connect(fd, res->ai_addr, res->ai_addrlen) == 0) {
                ::freeaddrinfo(res);
                return fd;
            }
            if (fd >= 0) ::close(fd);
            ::freeaddrinfo(res);
        }
        if (std::chrono::steady_clock::now() >= deadline)
            throw PeerDisconnected("cannot connect to " + host + ":" + std::to_string(port));
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
}

}  // namespace

SocketTransport::SocketTransport(int worker, const std::vector<std::string>& endpoints,
                                 int precision_bits, int expected_n, int connect_timeout_ms,
                                 int receive_timeout_ms)
    : worker_(worker), precision_bits_(precision_bits), expected_n_(expected_n) {
    int w = static_cast<int>(endpoints.size());
    fds_.assign(w, -1);
    auto [self_host, self_port] = split_endpoint(endpoints[worker]);
    (void)self_host;
    int listener = w > 1 ? listen_on(self_port) : -1;

    // Deadlock-free bring-up: connect to lower ids while accepting higher ids.
    std::exception_ptr err;
    std::thread connector([&] {
        try {
            for (int peer = 0; peer < worker_; ++peer) {
                auto [host, port] = split_endpoint(endpoints[peer]);
                int fd = connect_with_retry(host, port, connect_timeout_ms);
                std::uint32_t hello = static_cast<std::uint32_t>(worker_);
                write_all(fd, &hello, 4);
                fds_[peer] = fd;
            }
        } catch (...) {
            err = std::current_exception();
        }
    });
    try {
        for (int peer = worker_ + 1; peer < w; ++peer) {
            int fd = ::accept(listener, nullptr, nullptr);
            if (fd < 0) throw PeerDisconnected("accept failed");
            std::uint32_t hello;
            read_all(fd, &hello, 4);
            if (hello >= static_cast<std::uint32_t>(w) || fds_[hello] != -1) {
                ::close(fd);
                throw PeerDisconnected("unexpected peer id " + std::to_string(hello));
            }
            fds_[hello] = fd;
        }
        connector.join();
    } catch (...) {
        if (connector.joinable()) connector.join();
        if (listener >= 0) ::close(listener);
        for (int fd : fds_)
            if (fd >= 0) ::close(fd);
        throw;
    }
    if (listener >= 0) ::close(listener);
    if (err) std::rethrow_exception(err);
    timeval tv{receive_timeout_ms / 1000, (receive_timeout_ms % 1000) * 1000};
    for (int fd : fds_)
        if (fd >= 0) ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
}

SocketTransport::~SocketTransport() {
    for (int fd : fds_)
        if (fd >= 0) ::close(fd);
}

std::vector<PhaseMessage> SocketTransport::exchange(Phase phase, std::uint32_t iteration,
                                                    const std::vector<PhaseMessage>& outgoing,
                                                    std::uint64_t* bytes) {
    int w = workers();
    if (static_cast<int>(outgoing.size()) < w)
        throw DimensionMismatch("one outgoing message per worker required");

    // Sends run on a helper thread so a full send buffer cannot deadlock
    // against peers that are also mid-send.
    std::uint64_t sent = 0;
    std::exception_ptr send_err;
    std::thread sender([&] {
        try {
            for (int peer = 0; peer < w; ++peer) {
                if (peer == worker_) continue;
                auto buf = encode(outgoing[peer], precision_bits_);
                std::uint32_t len = static_cast<std::uint32_t>(buf.size());
                write_all(fds_[peer], &len, 4);
                write_all(fds_[peer], buf.data(), buf.size());
                sent += buf.size();
            }
        } catch (...) {
            send_err = std::current_exception();
        }
    });

    std::vector<PhaseMessage> received;
    try {
        received.reserve(w - 1);
        for (int peer = 0; peer < w; ++peer) {
            if (peer == worker_) continue;
            std::uint32_t len;
            read_all(fds_[peer], &len, 4);
            std::vector<std::uint8_t> buf(len);
            read_all(fds_[peer], buf.data(), len);
            if (bytes) *bytes += len;
            auto msg = decode(buf, precision_bits_, expected_n_);
            validate(msg, phase, iteration);
            received.push_back(std::move(msg));
        }
    } catch (...) {
        sender.join();
        throw;
    }
    sender.join();
    if (send_err) std::rethrow_exception(send_err);
    if (bytes) *bytes += sent;
    std::sort(received.begin(), received.end(),
              [](const PhaseMessage& a, const PhaseMessage& b) { return a.source < b.source; });
    return received;
}

}  // namespace rltqap
