#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace cegen {

/// 128-bit hash value. Collisions are treated as impossible at the corpus
/// scales this project runs at.
struct Hash128 {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    friend bool operator==(const Hash128&, const Hash128&) = default;
    std::string hex() const;
};

struct Hash128Hasher {
    std::size_t operator()(const Hash128& h) const noexcept {
        return static_cast<std::size_t>(h.hi ^ (h.lo * 0x9e3779b97f4a7c15ULL));
    }
};

struct Hash128Less {
    bool operator()(const Hash128& a, const Hash128& b) const noexcept {
        return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
    }
};

class Hash128Builder {
public:
    Hash128Builder& bytes(const void* data, std::size_t n);
    Hash128Builder& str(std::string_view s) { return bytes(s.data(), s.size()); }
    Hash128Builder& u64(std::uint64_t v);
    Hash128 finish() const;

private:
    // Two independent FNV-1a lanes with distinct offset bases.
    std::uint64_t a_ = 0xcbf29ce484222325ULL;
    std::uint64_t b_ = 0x6c62272e07bb0142ULL;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace cegen
