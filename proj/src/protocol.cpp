#include "dqteleop/protocol.hpp"

#include <stdexcept>

namespace dqteleop {

std::string encode_frame(const std::string& payload)
{
    if (payload.size() > max_frame_bytes) {
        throw std::length_error("frame payload exceeds " + std::to_string(max_frame_bytes) + " bytes");
    }
    const auto n = static_cast<std::uint32_t>(payload.size());
    std::string out;
    out.reserve(4 + payload.size());
    out.push_back(static_cast<char>((n >> 24) & 0xff));
    out.push_back(static_cast<char>((n >> 16) & 0xff));
    out.push_back(static_cast<char>((n >> 8) & 0xff));
    out.push_back(static_cast<char>(n & 0xff));
    out += payload;
    return out;
}

std::string encode_message(const nlohmann::json& message) { return encode_frame(message.dump()); }

nlohmann::json error_message(const std::string& code, const std::string& detail)
{
    return {{"type", "error"}, {"code", code}, {"detail", detail}};
}

void FrameDecoder::feed(const char* data, std::size_t size)
{
    // Compact once the consumed prefix dominates the buffer.
    if (pos_ > 0 && pos_ * 2 > buffer_.size()) {
        buffer_.erase(0, pos_);
        pos_ = 0;
    }
    buffer_.append(data, size);
}

std::optional<std::string> FrameDecoder::next()
{
    if (buffered() < 4) {
        return std::nullopt;
    }
    const auto* p = reinterpret_cast<const unsigned char*>(buffer_.data() + pos_);
    const std::uint32_t n = (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
                            std::uint32_t(p[3]);
    if (n > max_frame_bytes) {
        throw std::length_error("incoming frame of " + std::to_string(n) + " bytes exceeds the limit");
    }
    if (buffered() < 4 + static_cast<std::size_t>(n)) {
        return std::nullopt;
    }
    std::string payload = buffer_.substr(pos_ + 4, n);
    pos_ += 4 + n;
    return payload;
}

}  // namespace dqteleop
