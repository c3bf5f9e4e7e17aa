#include "cegen/engine/remote_engine.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include <nlohmann/json.hpp>

namespace cegen::engine {

namespace {

using nlohmann::json;

class FdChannel final : public LineChannel {
public:
    FdChannel(int read_fd, int write_fd, bool owns)
        : read_fd_(read_fd), write_fd_(write_fd), owns_(owns) {}

    ~FdChannel() override {
        if (owns_) {
            ::close(read_fd_);
            if (write_fd_ != read_fd_) ::close(write_fd_);
        }
    }

    void write_line(const std::string& line) override {
        std::string framed = line + "\n";
        std::size_t off = 0;
        while (off < framed.size()) {
            ssize_t n = ::write(write_fd_, framed.data() + off, framed.size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw AdapterError(std::string("adapter write failed: ") + std::strerror(errno));
            }
            off += static_cast<std::size_t>(n);
        }
    }

    std::string read_line(int timeout_ms) override {
        while (true) {
            auto nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return line;
            }
            struct pollfd pfd {read_fd_, POLLIN, 0};
            int rc = ::poll(&pfd, 1, timeout_ms);
            if (rc < 0) {
                if (errno == EINTR) continue;
                throw AdapterError(std::string("adapter poll failed: ") + std::strerror(errno));
            }
            if (rc == 0) throw AdapterTimeout("adapter timed out after " +
                                              std::to_string(timeout_ms) + " ms");
            char chunk[4096];
            ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw AdapterError(std::string("adapter read failed: ") + std::strerror(errno));
            }
            if (n == 0) throw AdapterError("adapter closed the connection");
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

private:
    int read_fd_;
    int write_fd_;
    bool owns_;
    std::string buffer_;
};

}  // namespace

std::unique_ptr<LineChannel> make_fd_channel(int read_fd, int write_fd, bool owns) {
    return std::make_unique<FdChannel>(read_fd, write_fd, owns);
}

std::unique_ptr<LineChannel> connect_tcp(const std::string& address, int timeout_ms) {
    auto colon = address.rfind(':');
    if (colon == std::string::npos)
        throw AdapterError("tcp address must be host:port, got '" + address + "'");
    std::string host = address.substr(0, colon);
    std::string port = address.substr(colon + 1);

    struct addrinfo hints {};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    struct addrinfo* res = nullptr;
    int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res);
    if (rc != 0) throw AdapterError(std::string("cannot resolve ") + address + ": " +
                                    gai_strerror(rc));

    int fd = -1;
    for (struct addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw AdapterError("cannot connect to " + address);
    (void)timeout_ms;
    return make_fd_channel(fd, fd, true);
}

RemoteEngine::RemoteEngine(std::unique_ptr<LineChannel> channel, int timeout_ms)
    : channel_(std::move(channel)), timeout_ms_(timeout_ms) {}

RemoteEngine::~RemoteEngine() = default;

CompletionResult RemoteEngine::complete(const SourceBuffer& buf, std::size_t caret) {
    const std::uint64_t id = next_id_++;
    json request = {{"id", id}, {"text", buf.text()}, {"caret", caret}};
    channel_->write_line(request.dump());

    json reply;
    try {
        reply = json::parse(channel_->read_line(timeout_ms_));
    } catch (const json::exception& e) {
        throw AdapterError(std::string("bad reply from completion adapter: ") + e.what());
    }
    if (!reply.is_object() || reply.value("id", std::uint64_t{0}) != id)
        throw AdapterError("completion adapter reply id mismatch");
    const std::string status = reply.value("status", "");
    if (status == "unknown") return CompletionResult::unknown();
    if (status == "ok") {
        std::vector<std::string> completions;
        for (const auto& c : reply.at("completions")) completions.push_back(c.get<std::string>());
        return CompletionResult::of(std::move(completions));
    }
    if (status == "error")
        throw AdapterError("completion adapter error: " + reply.value("msg", "(no message)"));
    throw AdapterError("completion adapter returned unknown status '" + status + "'");
}

}  // namespace cegen::engine
