#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace dqteleop {

/// Frames larger than this are rejected and the connection is dropped.
inline constexpr std::uint32_t max_frame_bytes = 1u << 20;

/// 4-byte big-endian payload length followed by the payload.
std::string encode_frame(const std::string& payload);
std::string encode_message(const nlohmann::json& message);

nlohmann::json error_message(const std::string& code, const std::string& detail);

/// Incremental decoder for a byte stream of frames.
class FrameDecoder {
public:
    void feed(const char* data, std::size_t size);
    /// Next complete payload, if any. Throws std::length_error on an oversized frame.
    std::optional<std::string> next();
    std::size_t buffered() const { return buffer_.size() - pos_; }

private:
    std::string buffer_;
    std::size_t pos_ = 0;
};

}  // namespace dqteleop
