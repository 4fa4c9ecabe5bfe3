#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace currikit {

// 64-bit FNV-1a, used for input/output fingerprints in run logs and file
// headers. Not cryptographic; only has to detect mixed-up artifacts.
class Fnv1a64 {
public:
    void update(std::string_view bytes) {
        for (unsigned char c : bytes) {
            hash_ ^= c;
            hash_ *= 0x100000001b3ULL;
        }
    }

    void update_u64(std::uint64_t v) {
        char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        update(std::string_view(buf, 8));
    }

    std::uint64_t digest() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a64(std::string_view bytes) {
    Fnv1a64 h;
    h.update(bytes);
    return h.digest();
}

inline std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::string fingerprint_file(const std::string& path);

}  // namespace currikit
