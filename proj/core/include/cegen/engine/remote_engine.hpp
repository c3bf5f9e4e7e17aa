#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "cegen/adapter.hpp"
#include "cegen/engine/completion.hpp"

namespace cegen::engine {

/// Newline-delimited transport for the external engine protocol. Concrete
/// channels wrap a pair of file descriptors (pipes, socketpair, stdio) or a
/// TCP connection.
class LineChannel {
public:
    virtual ~LineChannel() = default;
    virtual void write_line(const std::string& line) = 0;
    virtual std::string read_line(int timeout_ms) = 0;
};

/// Channel over existing file descriptors. Takes ownership unless told not
/// to (pass owns=false for stdin/stdout).
std::unique_ptr<LineChannel> make_fd_channel(int read_fd, int write_fd, bool owns = true);

/// Connects to "host:port". Throws AdapterError on failure.
std::unique_ptr<LineChannel> connect_tcp(const std::string& address, int timeout_ms = 2000);

/// Client for an external completion service speaking one JSON object per
/// line:
///   request:  {"id":u64, "text":string, "caret":u64}
///   response: {"id":u64, "status":"ok", "completions":[string...]}
///           | {"id":u64, "status":"unknown"}
///           | {"id":u64, "status":"error", "msg":string}
/// Requests are serialized per connection.
class RemoteEngine final : public CompletionEngine {
public:
    explicit RemoteEngine(std::unique_ptr<LineChannel> channel, int timeout_ms = 2000);
    ~RemoteEngine() override;

    CompletionResult complete(const SourceBuffer& buf, std::size_t caret) override;

private:
    std::unique_ptr<LineChannel> channel_;
    int timeout_ms_;
    std::uint64_t next_id_ = 1;
};

}  // namespace cegen::engine
