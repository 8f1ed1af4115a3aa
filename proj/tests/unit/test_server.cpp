#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <thread>

#include "scribble/server.hpp"
#include "support/command_fuzz.hpp"

using namespace scribble;
using nlohmann::json;

namespace {

const FrameSize kSize{96, 72};

Scene empty_scene() {
    Scene s;
    s.frame_size = kSize;
    return s;
}

struct Running {
    Session session;
    VectorFrameSource source;
    SessionServer server;
    std::thread thread;

    explicit Running(int frames, ServerOptions opts = {})
        : session(empty_scene()), source(fuzz::clip(kSize, frames)), server(session, source, opts) {
        thread = std::thread([this] { server.serve(); });
    }
    ~Running() {
        server.stop();
        thread.join();
    }
};

json command(const SessionCommand& c) { return {{"type", "command"}, {"command", command_to_json(c)}}; }

}  // namespace

TEST_CASE("handshake, commands and ticks over loopback") {
    Running r(3);
    SessionClient client("127.0.0.1", r.server.port());

    auto hello = client.receive();
    REQUIRE(hello);
    CHECK((*hello)["type"] == "hello");
    CHECK((*hello)["protocol"] == kProtocolVersion);
    CHECK((*hello)["frame_size"] == json::array({96, 72}));
    CHECK((*hello)["mode"] == "paused");
    client.send({{"type", "hello"}, {"protocol", kProtocolVersion}});

    auto frame = client.receive();
    REQUIRE(frame);
    CHECK((*frame)["type"] == "frame");
    CHECK((*frame)["frame"] == 0);
    CHECK((*frame)["bytes"] == 96 * 72 * 3);
    auto first = client.receive_until("overlay");
    REQUIRE(first);

    client.send(command(BeginStroke{}));
    CHECK(client.receive_until("overlay"));
    client.send(command(AppendPoints{{{1, 1}, {30, 20}}}));
    CHECK(client.receive_until("overlay"));
    client.send(command(EndStroke{}));
    CHECK(client.receive_until("overlay"));
    client.send(command(GroupElement{}));
    auto created = client.receive();
    REQUIRE(created);
    CHECK((*created)["type"] == "event");
    CHECK((*created)["event"]["type"] == "element_created");
    auto ov = client.receive();
    REQUIRE(ov);
    CHECK((*ov)["type"] == "overlay");
    CHECK((*ov)["svg"].get<std::string>().find("<path") != std::string::npos);

    client.send(command(ResumeVideo{}));
    auto mode = client.receive_until("event");
    REQUIRE(mode);
    CHECK((*mode)["event"]["mode"] == "playing");
    CHECK(client.receive_until("overlay"));

    // Three ticks step frames 0, 1 and 2; the fourth ends the stream.
    for (int i = 0; i < 3; ++i) {
        client.send({{"type", "tick"}});
        auto f = client.receive();
        REQUIRE(f);
        CHECK((*f)["type"] == "frame");
        CHECK((*f)["frame"] == i);
        auto o = client.receive();
        REQUIRE(o);
        CHECK((*o)["type"] == "overlay");
        CHECK((*o)["frame"] == i);
    }
    client.send({{"type", "tick"}});
    auto end = client.receive();
    REQUIRE(end);
    CHECK((*end)["event"]["type"] == "end_of_stream");
    CHECK(client.receive_until("overlay"));

    client.send({{"type", "launch"}});
    auto unknown = client.receive();
    REQUIRE(unknown);
    CHECK((*unknown)["event"]["rule"] == "unknown-message");

    client.send({{"type", "command"}, {"command", {{"type", "append_points"}}}});
    auto bad = client.receive();
    REQUIRE(bad);
    CHECK((*bad)["event"]["rule"] == "schema(points)");
    CHECK(client.receive_until("overlay"));

    client.send({{"type", "bye"}});
    CHECK_FALSE(client.receive_until("overlay"));
    CHECK(r.session.engine().frame_index() == 3);
}

TEST_CASE("wrong protocol version is refused") {
    Running r(1);
    SessionClient client("127.0.0.1", r.server.port());
    REQUIRE(client.receive());
    client.send({{"type", "hello"}, {"protocol", 99}});
    auto refusal = client.receive();
    REQUIRE(refusal);
    CHECK((*refusal)["event"]["rule"] == "protocol-version");
    CHECK_FALSE(client.receive());
}

TEST_CASE("autoplay advances without ticks") {
    ServerOptions opts;
    opts.autoplay_fps = 200;
    opts.send_frames = false;
    Running r(5, opts);
    SessionClient client("127.0.0.1", r.server.port());
    REQUIRE(client.receive());
    client.send({{"type", "hello"}, {"protocol", kProtocolVersion}});
    REQUIRE(client.receive_until("overlay"));
    client.send(command(ResumeVideo{}));
    std::optional<json> msg;
    while ((msg = client.receive())) {
        if ((*msg)["type"] == "event" && (*msg)["event"]["type"] == "end_of_stream") break;
    }
    REQUIRE(msg);
    client.send({{"type", "bye"}});
    client.receive_until("overlay");
    CHECK(r.session.engine().frame_index() == 5);
}
