#include "dqteleop/protocol.hpp"

#include <doctest.h>

#include <string>

using namespace dqteleop;

TEST_CASE("frames carry a big-endian length prefix")
{
    const std::string payload(300, 'x');
    const auto frame = encode_frame(payload);
    REQUIRE(frame.size() == 304);
    CHECK(static_cast<unsigned char>(frame[0]) == 0);
    CHECK(static_cast<unsigned char>(frame[1]) == 0);
    CHECK(static_cast<unsigned char>(frame[2]) == 1);
    CHECK(static_cast<unsigned char>(frame[3]) == 44);
    CHECK(frame.substr(4) == payload);
}

TEST_CASE("decoder reassembles frames split at arbitrary points")
{
    const std::string stream = encode_message({{"type", "a"}}) + encode_frame("") + encode_message({{"type", "b"}, {"v", 1.5}});
    for (std::size_t chunk = 1; chunk <= stream.size(); ++chunk) {
        FrameDecoder dec;
        std::vector<std::string> got;
        for (std::size_t pos = 0; pos < stream.size(); pos += chunk) {
            const auto n = std::min(chunk, stream.size() - pos);
            dec.feed(stream.data() + pos, n);
            while (auto p = dec.next()) {
                got.push_back(*p);
            }
        }
        REQUIRE(got.size() == 3);
        CHECK(nlohmann::json::parse(got[0]).at("type") == "a");
        CHECK(got[1].empty());
        CHECK(nlohmann::json::parse(got[2]).at("v") == 1.5);
        CHECK(dec.buffered() == 0);
    }
}

TEST_CASE("oversized frames are rejected")
{
    FrameDecoder dec;
    const unsigned char header[4] = {0x00, 0x20, 0x00, 0x01};
    dec.feed(reinterpret_cast<const char*>(header), 4);
    CHECK_THROWS_AS(dec.next(), std::length_error);
    CHECK_THROWS_AS(encode_frame(std::string(max_frame_bytes + 1, 'x')), std::length_error);
}

TEST_CASE("error message shape")
{
    const auto e = error_message("bad_json", "oops");
    CHECK(e.at("type") == "error");
    CHECK(e.at("code") == "bad_json");
    CHECK(e.at("detail") == "oops");
}
