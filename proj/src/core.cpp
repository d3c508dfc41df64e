#include "swapsim/core.hpp"

#include <openssl/evp.h>

#include <limits>

namespace swapsim {

namespace {

DigestBytes sha256(const std::uint8_t* data, std::size_t len) {
    DigestBytes out{};
    unsigned int out_len = 0;
    if (EVP_Digest(data, len, out.data(), &out_len, EVP_sha256(), nullptr) != 1 ||
        out_len != kDigestSize) {
        throw std::runtime_error("sha256 digest failed");
    }
    return out;
}

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Amount add_amount(Amount a, Amount b) {
    if (a > std::numeric_limits<Amount>::max() - b) {
        throw std::overflow_error("amount addition overflow");
    }
    return a + b;
}

Amount sub_amount(Amount a, Amount b) {
    if (b > a) {
        throw std::underflow_error("amount subtraction below zero");
    }
    return a - b;
}

AmountDelta delta_of(Amount final_value, Amount initial_value) {
    if (final_value >= initial_value) {
        return static_cast<AmountDelta>(final_value - initial_value);
    }
    return -static_cast<AmountDelta>(initial_value - final_value);
}

Secret make_secret(std::string_view seed) {
    if (seed.empty()) {
        throw std::invalid_argument("make_secret: empty seed");
    }
    return Secret{sha256(reinterpret_cast<const std::uint8_t*>(seed.data()), seed.size())};
}

Hashlock hashlock(const Secret& s) {
    return Hashlock{sha256(s.bytes.data(), s.bytes.size())};
}

bool verify(const Hashlock& h, const Secret& s) {
    return hashlock(s) == h;
}

std::string to_hex(const DigestBytes& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

std::optional<DigestBytes> from_hex(std::string_view hex) {
    if (hex.size() != kDigestSize * 2) return std::nullopt;
    DigestBytes out{};
    for (std::size_t i = 0; i < kDigestSize; ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

}  // namespace swapsim
