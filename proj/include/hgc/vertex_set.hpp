#pragma once

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hgc/error.hpp"

namespace hgc {

using Vertex = std::uint32_t;

/// Fixed-universe bitset over vertices 0..n-1.
///
/// Set operations require both operands to share the same universe size.
/// Bits beyond `size()` are always zero, so word-level comparisons and
/// popcounts are exact.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    static VertexSet full(std::size_t n) {
        VertexSet s(n);
        std::fill(s.words_.begin(), s.words_.end(), ~std::uint64_t{0});
        s.trim();
        return s;
    }

    static VertexSet of(std::size_t n, std::initializer_list<Vertex> members) {
        VertexSet s(n);
        for (Vertex v : members) s.insert(v);
        return s;
    }

    template <typename Range>
    static VertexSet from_range(std::size_t n, const Range& members) {
        VertexSet s(n);
        for (auto v : members) s.insert(static_cast<Vertex>(v));
        return s;
    }

    /// Builds a set from the low `n` bits of `mask` (n <= 64).
    static VertexSet from_mask(std::size_t n, std::uint64_t mask) {
        VertexSet s(n);
        if (!s.words_.empty()) s.words_[0] = mask;
        s.trim();
        return s;
    }

    std::size_t size() const { return n_; }

    bool contains(Vertex v) const { return v < n_ && ((words_[v >> 6] >> (v & 63)) & 1u) != 0; }

    void insert(Vertex v) {
        check(v);
        words_[v >> 6] |= std::uint64_t{1} << (v & 63);
    }
    void erase(Vertex v) {
        check(v);
        words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool empty() const {
        return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
    }

    bool is_subset_of(const VertexSet& other) const {
        same_universe(other);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if ((words_[i] & ~other.words_[i]) != 0) return false;
        return true;
    }
    bool intersects(const VertexSet& other) const {
        same_universe(other);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if ((words_[i] & other.words_[i]) != 0) return true;
        return false;
    }

    VertexSet& operator|=(const VertexSet& o) { return apply(o, [](auto a, auto b) { return a | b; }); }
    VertexSet& operator&=(const VertexSet& o) { return apply(o, [](auto a, auto b) { return a & b; }); }
    VertexSet& operator-=(const VertexSet& o) { return apply(o, [](auto a, auto b) { return a & ~b; }); }

    friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
    friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
    friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

    /// Complement within the universe 0..n-1.
    VertexSet complement() const {
        VertexSet s = *this;
        for (auto& w : s.words_) w = ~w;
        s.trim();
        return s;
    }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;
    /// Numeric order of the bitmask (highest vertex most significant).
    friend bool operator<(const VertexSet& a, const VertexSet& b) {
        if (a.n_ != b.n_) return a.n_ < b.n_;
        for (std::size_t i = a.words_.size(); i-- > 0;)
            if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
        return false;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w != 0) {
                const int b = std::countr_zero(w);
                f(static_cast<Vertex>(i * 64 + static_cast<std::size_t>(b)));
                w &= w - 1;
            }
        }
    }

    std::vector<Vertex> to_vector() const {
        std::vector<Vertex> out;
        out.reserve(count());
        for_each([&](Vertex v) { out.push_back(v); });
        return out;
    }

    std::uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }
    const std::vector<std::uint64_t>& words() const { return words_; }

    std::size_t hash() const {
        std::size_t h = std::hash<std::size_t>{}(n_);
        for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

    /// Comma list, e.g. `0,2,5`; the empty set is the empty string.
    std::string to_list() const {
        std::string out;
        for_each([&](Vertex v) {
            if (!out.empty()) out += ',';
            out += std::to_string(v);
        });
        return out;
    }

    static VertexSet parse_list(std::size_t n, std::string_view text) {
        VertexSet s(n);
        if (text.empty()) return s;
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto comma = text.find(',', start);
            const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            std::uint64_t v = 0;
            const auto* first = item.data();
            const auto* last = item.data() + item.size();
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (item.empty() || ec != std::errc{} || ptr != last)
                throw InputError("bad vertex list item '" + std::string(item) + "'");
            if (v >= n) throw InputError("vertex " + std::to_string(v) + " out of range for n=" + std::to_string(n));
            s.insert(static_cast<Vertex>(v));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return s;
    }

private:
    void check(Vertex v) const {
        if (v >= n_) throw InputError("vertex " + std::to_string(v) + " out of range for n=" + std::to_string(n_));
    }
    void same_universe(const VertexSet& o) const {
        if (o.n_ != n_) throw std::invalid_argument("vertex sets over different universes");
    }
    template <typename Op>
    VertexSet& apply(const VertexSet& o, Op op) {
        same_universe(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] = op(words_[i], o.words_[i]);
        return *this;
    }
    void trim() {
        if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

struct VertexSetHash {
    std::size_t operator()(const VertexSet& s) const { return s.hash(); }
};

}  // namespace hgc
