#include "cegen/hash.hpp"

#include <array>
#include <cstdio>

#include "cegen/rng.hpp"

namespace cegen {

namespace {
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
}

Hash128Builder& Hash128Builder::bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        a_ = (a_ ^ p[i]) * kFnvPrime;
        b_ = (b_ ^ p[i]) * kFnvPrime;
        b_ ^= b_ >> 29;
    }
    return *this;
}

Hash128Builder& Hash128Builder::u64(std::uint64_t v) {
    std::array<unsigned char, 8> buf;
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    return bytes(buf.data(), buf.size());
}

Hash128 Hash128Builder::finish() const {
    return Hash128{mix64(a_), mix64(b_ ^ (a_ * 3))};
}

std::string Hash128::hex() const {
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(hi),
                  static_cast<unsigned long long>(lo));
    return std::string(buf);
}

std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> salts) {
    std::uint64_t acc = mix64(seed);
    for (std::uint64_t s : salts) acc = mix64(acc ^ mix64(s * 0x9e3779b97f4a7c15ULL + 1));
    return Rng(acc);
}

}  // namespace cegen
