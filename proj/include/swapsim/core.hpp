#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace swapsim {

// One round = one synchrony period: an action submitted in round r is
// finalized at the r -> r+1 boundary and visible to every party from r+1 on.
using Round = std::uint32_t;

using PartyId = std::string;
using ChainId = std::string;
using ContractId = std::string;

// Indivisible coin units on one chain. Balances never go negative;
// overflow is a checked error rather than a wrap.
using Amount = std::uint64_t;
using AmountDelta = std::int64_t;

Amount add_amount(Amount a, Amount b);
Amount sub_amount(Amount a, Amount b);
AmountDelta delta_of(Amount final_value, Amount initial_value);

constexpr std::size_t kDigestSize = 32;
using DigestBytes = std::array<std::uint8_t, kDigestSize>;

struct Secret {
    DigestBytes bytes{};
    auto operator<=>(const Secret&) const = default;
};

struct Hashlock {
    DigestBytes bytes{};
    auto operator<=>(const Hashlock&) const = default;
};

// Deterministic secret derivation: distinct seeds give distinct secrets.
// Empty seeds are rejected.
Secret make_secret(std::string_view seed);

Hashlock hashlock(const Secret& s);

bool verify(const Hashlock& h, const Secret& s);

std::string to_hex(const DigestBytes& bytes);
std::optional<DigestBytes> from_hex(std::string_view hex);

inline std::string to_hex(const Secret& s) { return to_hex(s.bytes); }
inline std::string to_hex(const Hashlock& h) { return to_hex(h.bytes); }

}  // namespace swapsim
