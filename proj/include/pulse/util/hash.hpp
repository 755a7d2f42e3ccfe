#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace pulse {

// FNV-1a, used for content checksums (tensor bytes, config text, files).
// Not cryptographic; stable across platforms.
class Fnv1a64 {
public:
    void update(const void* data, size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }
    void update(std::string_view s) { update(s.data(), s.size()); }

    uint64_t digest() const { return state_; }

private:
    uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline uint64_t fnv1a64(const void* data, size_t n) {
    Fnv1a64 h;
    h.update(data, n);
    return h.digest();
}

inline uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }

std::string hash_hex(uint64_t h);

// Hash of a whole file's bytes. Throws PulseError(io_error) if unreadable.
uint64_t hash_file(const std::string& path);

}  // namespace pulse
