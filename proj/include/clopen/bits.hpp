#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace clopen {

// Fixed-universe atom set as a word array.
struct AtomSet {
    std::vector<uint64_t> words;

    AtomSet() = default;
    explicit AtomSet(int universe) : words((static_cast<size_t>(universe) + 63) / 64, 0) {}

    void set(int i) { words[static_cast<size_t>(i) >> 6] |= uint64_t(1) << (i & 63); }
    bool test(int i) const { return (words[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1; }

    bool empty() const {
        for (uint64_t w : words)
            if (w) return false;
        return true;
    }

    int count() const {
        int c = 0;
        for (uint64_t w : words) c += __builtin_popcountll(w);
        return c;
    }

    AtomSet& operator&=(const AtomSet& o) {
        for (size_t i = 0; i < words.size(); ++i) words[i] &= o.words[i];
        return *this;
    }

    bool operator==(const AtomSet&) const = default;

    template <typename F>
    void for_each(F&& f) const {
        for (size_t wi = 0; wi < words.size(); ++wi) {
            uint64_t w = words[wi];
            while (w) {
                int bit = __builtin_ctzll(w);
                f(static_cast<int>(wi * 64) + bit);
                w &= w - 1;
            }
        }
    }

    std::vector<int> to_list() const {
        std::vector<int> out;
        for_each([&out](int i) { out.push_back(i); });
        return out;
    }
};

struct AtomSetHash {
    size_t operator()(const AtomSet& s) const {
        size_t h = 1469598103934665603ull;
        for (uint64_t w : s.words) {
            h ^= static_cast<size_t>(w);
            h *= 1099511628211ull;
        }
        return h;
    }
};

// Image of a set under a permutation.
inline AtomSet permute(const AtomSet& s, const std::vector<int>& pi) {
    AtomSet out(static_cast<int>(pi.size()));
    s.for_each([&](int i) { out.set(pi[static_cast<size_t>(i)]); });
    return out;
}

}  // namespace clopen
