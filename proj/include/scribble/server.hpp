#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "scribble/session.hpp"

namespace scribble {

inline constexpr int kProtocolVersion = 1;

// Framing: every message is a little-endian uint32 byte length followed by the
// payload. Control messages are JSON text; a "frame" header is followed by one
// binary message holding width*height*3 RGB bytes.

/// Throws Error("io") on a broken connection.
void write_message(int fd, std::string_view payload);
/// Empty optional on orderly shutdown by the peer.
std::optional<std::string> read_message(int fd);

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 0;               // 0 picks a free port
    double autoplay_fps = 0.0;  // 0: frames advance only on "tick" messages
    bool send_frames = true;
};

/// Serves one client over TCP. The serving thread is the single owner of the
/// session, so every command and frame step is applied in one total order.
class SessionServer {
public:
    SessionServer(Session& session, FrameSource& source, ServerOptions options = {});
    ~SessionServer();

    SessionServer(const SessionServer&) = delete;
    SessionServer& operator=(const SessionServer&) = delete;

    int port() const { return port_; }

    /// Accepts one client and runs until it says "bye", disconnects, or stop().
    void serve();
    void stop() { stop_ = true; }

private:
    void send_json(int fd, const nlohmann::json& j);
    void send_step(int fd, const StepResult& r);
    void send_shown_frame(int fd);
    void handle(int fd, const nlohmann::json& msg, bool& done);
    void advance(int fd);

    Session& session_;
    FrameSource& source_;
    ServerOptions options_;
    int listen_fd_ = -1;
    int port_ = 0;
    std::atomic<bool> stop_{false};
    std::optional<RgbImage> last_image_;
    std::optional<SessionFrame> primed_;  // shown at handshake, stepped on the first advance
    std::int64_t shown_index_ = -1;
};

/// Minimal blocking client for the same protocol.
class SessionClient {
public:
    SessionClient(const std::string& host, int port);
    ~SessionClient();

    SessionClient(const SessionClient&) = delete;
    SessionClient& operator=(const SessionClient&) = delete;

    void send(const nlohmann::json& j);
    /// Next JSON message; binary frame payloads are read and dropped.
    std::optional<nlohmann::json> receive();
    /// Next message of `type`, discarding others. Empty when the stream ends.
    std::optional<nlohmann::json> receive_until(std::string_view type);

private:
    int fd_ = -1;
};

}  // namespace scribble
