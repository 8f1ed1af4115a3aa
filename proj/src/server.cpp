#include "scribble/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "scribble/render.hpp"

namespace scribble {

using nlohmann::json;

namespace {

void write_all(int fd, const char* data, std::size_t n) {
    while (n > 0) {
        const ssize_t w = ::send(fd, data, n, MSG_NOSIGNAL);
        if (w < 0) {
            if (errno == EINTR) continue;
            throw Error("io", std::strerror(errno));
        }
        data += w;
        n -= static_cast<std::size_t>(w);
    }
}

bool read_all(int fd, char* data, std::size_t n) {
    std::size_t got = 0;
    while (got < n) {
        const ssize_t r = ::recv(fd, data + got, n - got, 0);
        if (r == 0) {
            if (got == 0) return false;
            throw Error("io", "connection closed mid-message");
        }
        if (r < 0) {
            if (errno == EINTR) continue;
            throw Error("io", std::strerror(errno));
        }
        got += static_cast<std::size_t>(r);
    }
    return true;
}

constexpr std::uint32_t kMaxMessage = 64u << 20;

}  // namespace

void write_message(int fd, std::string_view payload) {
    const auto n = static_cast<std::uint32_t>(payload.size());
    const char header[4] = {static_cast<char>(n & 0xff), static_cast<char>((n >> 8) & 0xff),
                            static_cast<char>((n >> 16) & 0xff), static_cast<char>((n >> 24) & 0xff)};
    write_all(fd, header, 4);
    write_all(fd, payload.data(), payload.size());
}

std::optional<std::string> read_message(int fd) {
    unsigned char header[4];
    if (!read_all(fd, reinterpret_cast<char*>(header), 4)) return std::nullopt;
    const std::uint32_t n = header[0] | (header[1] << 8) | (header[2] << 16) | (static_cast<std::uint32_t>(header[3]) << 24);
    if (n > kMaxMessage) throw Error("io", "message too large");
    std::string payload(n, '\0');
    if (n > 0 && !read_all(fd, payload.data(), n)) throw Error("io", "connection closed mid-message");
    return payload;
}

SessionServer::SessionServer(Session& session, FrameSource& source, ServerOptions options)
    : session_(session), source_(source), options_(std::move(options)) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw Error("io", std::strerror(errno));
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(options_.port));
    if (::inet_pton(AF_INET, options_.host.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        throw Error("io", "bad host " + options_.host);
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listen_fd_, 1) < 0) {
        const std::string msg = std::strerror(errno);
        ::close(listen_fd_);
        throw Error("io", msg);
    }
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

SessionServer::~SessionServer() {
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

void SessionServer::send_json(int fd, const json& j) { write_message(fd, j.dump()); }

void SessionServer::send_shown_frame(int fd) {
    if (!options_.send_frames || !last_image_) return;
    const RgbImage& img = *last_image_;
    send_json(fd, {{"type", "frame"},
                   {"frame", shown_index_},
                   {"width", img.width()},
                   {"height", img.height()},
                   {"channels", 3},
                   {"bytes", img.bytes().size()}});
    write_message(fd, std::string_view(reinterpret_cast<const char*>(img.bytes().data()), img.bytes().size()));
}

void SessionServer::send_step(int fd, const StepResult& r) {
    for (const Event& e : r.events) send_json(fd, {{"type", "event"}, {"event", event_to_json(e)}});
    if (r.advanced) send_shown_frame(fd);
    send_json(fd, {{"type", "overlay"}, {"frame", r.overlay.frame_index}, {"svg", emit_svg(r.overlay)}});
}

void SessionServer::advance(int fd) {
    if (session_.mode() != SessionMode::Playing) return;
    std::optional<SessionFrame> next;
    if (primed_) {
        next = std::move(primed_);
        primed_.reset();
    } else {
        next = source_.next();
        if (next) {
            last_image_ = next->image;
            ++shown_index_;
        }
    }
    send_step(fd, session_.step(std::move(next)));
}

void SessionServer::handle(int fd, const json& msg, bool& done) {
    const std::string type = msg.value("type", std::string());
    if (type == "command") {
        std::vector<Event> events;
        try {
            events = session_.apply(command_from_json(msg.at("command")));
        } catch (const Error& e) {
            events = {error_event(e.code(), e.what())};
        } catch (const json::exception& e) {
            events = {error_event("schema(command)", e.what())};
        }
        for (const Event& e : events) send_json(fd, {{"type", "event"}, {"event", event_to_json(e)}});
        const FrameOverlay& o = session_.last_overlay();
        send_json(fd, {{"type", "overlay"}, {"frame", o.frame_index}, {"svg", emit_svg(o)}});
    } else if (type == "tick") {
        advance(fd);
    } else if (type == "bye") {
        done = true;
    } else {
        send_json(fd, {{"type", "event"}, {"event", event_to_json(error_event("unknown-message", type))}});
    }
}

void SessionServer::serve() {
    int fd = -1;
    while (!stop_) {
        pollfd p{listen_fd_, POLLIN, 0};
        const int ready = ::poll(&p, 1, 100);
        if (ready > 0) {
            fd = ::accept(listen_fd_, nullptr, nullptr);
            if (fd >= 0) break;
        }
    }
    if (fd < 0) return;
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);

    try {
        const FrameSize size = session_.scene().frame_size;
        send_json(fd, {{"type", "hello"},
                       {"protocol", kProtocolVersion},
                       {"frame_size", {size.width, size.height}},
                       {"mode", session_.mode() == SessionMode::Paused ? "paused" : "playing"}});

        auto first = read_message(fd);
        json hello = first ? json::parse(*first, nullptr, false) : json();
        if (!hello.is_object() || hello.value("type", "") != "hello" || hello.value("protocol", -1) != kProtocolVersion) {
            send_json(fd, {{"type", "event"}, {"event", event_to_json(error_event("protocol-version"))}});
            ::close(fd);
            return;
        }

        if (shown_index_ < 0) {
            if (auto f = source_.next()) {
                last_image_ = f->image;
                shown_index_ = 0;
                session_.show(*f);
                primed_ = std::move(f);
            }
        }
        send_shown_frame(fd);
        const FrameOverlay& o = session_.last_overlay();
        send_json(fd, {{"type", "overlay"}, {"frame", o.frame_index}, {"svg", emit_svg(o)}});

        using Clock = std::chrono::steady_clock;
        const auto interval = options_.autoplay_fps > 0
                                  ? std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(1.0 / options_.autoplay_fps))
                                  : Clock::duration::zero();
        auto next_tick = Clock::now() + interval;

        bool done = false;
        while (!done && !stop_) {
            int timeout_ms = 100;
            if (options_.autoplay_fps > 0 && session_.mode() == SessionMode::Playing) {
                const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(next_tick - Clock::now());
                timeout_ms = static_cast<int>(std::max<std::int64_t>(0, wait.count()));
            }
            pollfd p{fd, POLLIN, 0};
            const int ready = ::poll(&p, 1, timeout_ms);
            if (ready > 0) {
                auto raw = read_message(fd);
                if (!raw) break;
                json msg = json::parse(*raw, nullptr, false);
                if (msg.is_discarded()) {
                    send_json(fd, {{"type", "event"}, {"event", event_to_json(error_event("syntax"))}});
                    continue;
                }
                handle(fd, msg, done);
            }
            if (options_.autoplay_fps > 0 && session_.mode() == SessionMode::Playing && Clock::now() >= next_tick) {
                advance(fd);
                next_tick += interval;
                if (next_tick < Clock::now()) next_tick = Clock::now() + interval;
            }
        }
    } catch (const Error&) {
        // client went away
    }
    ::close(fd);
}

SessionClient::SessionClient(const std::string& host, int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw Error("io", std::strerror(errno));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    ::inet_pton(AF_INET, host.c_str(), &addr.sin_addr);
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
        const std::string msg = std::strerror(errno);
        ::close(fd_);
        throw Error("io", msg);
    }
}

SessionClient::~SessionClient() {
    if (fd_ >= 0) ::close(fd_);
}

void SessionClient::send(const json& j) { write_message(fd_, j.dump()); }

std::optional<json> SessionClient::receive() {
    auto raw = read_message(fd_);
    if (!raw) return std::nullopt;
    json j = json::parse(*raw);
    if (j.value("type", "") == "frame") {
        auto payload = read_message(fd_);
        j["bytes_received"] = payload ? payload->size() : 0;
    }
    return j;
}

std::optional<json> SessionClient::receive_until(std::string_view type) {
    while (auto j = receive()) {
        if (j->value("type", "") == type) return j;
    }
    return std::nullopt;
}

}  // namespace scribble
