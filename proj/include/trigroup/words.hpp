#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trigroup/rng.hpp"

namespace trigroup {

/// Generators are numbered 1..n.
using Generator = std::uint32_t;
using WordIndex = std::uint64_t;

/// A generator or its formal inverse. Letters are totally ordered as
/// g1 < G1 < g2 < G2 < ..., which is also the order of `position()`.
struct Letter {
    Generator generator = 1;
    bool inverted = false;

    constexpr Letter inverse() const noexcept { return {generator, !inverted}; }

    /// Zero-based position in the canonical letter order; doubles as the
    /// link-graph vertex id of this letter.
    constexpr std::uint32_t position() const noexcept {
        return 2 * (generator - 1) + (inverted ? 1u : 0u);
    }
    static constexpr Letter from_position(std::uint32_t pos) noexcept {
        return {pos / 2 + 1, (pos % 2) != 0};
    }

    std::string to_string() const;

    auto operator<=>(const Letter&) const = default;
};

constexpr Letter g(Generator k) noexcept { return {k, false}; }
constexpr Letter G(Generator k) noexcept { return {k, true}; }

/// True iff no two cyclically adjacent letters (including the last and
/// first) are mutually inverse.
constexpr bool is_cyclically_reduced(const std::array<Letter, 3>& w) noexcept {
    return w[1] != w[0].inverse() && w[2] != w[1].inverse() && w[0] != w[2].inverse();
}

/// A cyclically reduced word of length three.
class Word {
public:
    /// Throws std::invalid_argument unless the triple is cyclically reduced.
    Word(Letter a, Letter b, Letter c);

    const std::array<Letter, 3>& letters() const noexcept { return letters_; }
    Letter operator[](std::size_t i) const noexcept { return letters_[i]; }

    /// Number of letters equal to `s` or its inverse.
    int occurrences(Generator s) const noexcept;

    std::string to_string() const;

    auto operator<=>(const Word&) const = default;

private:
    std::array<Letter, 3> letters_;
};

/// Number of cyclically reduced words of length three over 2n letters,
/// 8n^3 - 12n^2 + 6n. Throws std::overflow_error if it exceeds 64 bits.
WordIndex count_words(std::uint64_t n);

/// Number of those words containing a fixed generator or its inverse,
/// 48 C(n-1, 2) + 24 (n-1) + 2.
WordIndex count_words_containing(std::uint64_t n);

inline constexpr std::uint32_t kEnumerationLimit = 12;

/// Every word over n generators, in canonical (lexicographic) order.
/// Throws std::invalid_argument when n > kEnumerationLimit.
std::vector<Word> enumerate_words(std::uint32_t n);

/// Position of `w` in the canonical order of words over n generators.
WordIndex encode_word(std::uint32_t n, const Word& w);
/// Inverse of encode_word; index must be below count_words(n).
Word decode_word(std::uint32_t n, WordIndex index);

struct Provenance {
    std::string model;      ///< "binomial" or "uniform"
    std::string parameter;  ///< "p=<value>" or "t=<value>"
    std::uint64_t seed = 0;

    bool operator==(const Provenance&) const = default;
};

/// Generator count plus a duplicate-free list of relations over 1..n.
class Presentation {
public:
    /// Throws std::invalid_argument on n == 0, on an out-of-range
    /// generator, or on a duplicated relation.
    Presentation(std::uint32_t n, std::vector<Word> relations,
                 std::optional<Provenance> provenance = std::nullopt);

    std::uint32_t generator_count() const noexcept { return n_; }
    const std::vector<Word>& relations() const noexcept { return relations_; }
    std::size_t relation_count() const noexcept { return relations_.size(); }
    const std::optional<Provenance>& provenance() const noexcept { return provenance_; }

    bool operator==(const Presentation&) const = default;

private:
    std::uint32_t n_;
    std::vector<Word> relations_;
    std::optional<Provenance> provenance_;
};

/// Binomial model: each word is kept independently with probability p.
/// Implemented as a Binomial(count_words(n), p) relation count followed by
/// that many distinct uniform word indices. Relations come back sorted.
Presentation sample_binomial(std::uint32_t n, double p, std::uint64_t seed);

/// Uniform model: a uniformly random t-subset of all words, sorted.
Presentation sample_uniform(std::uint32_t n, WordIndex t, std::uint64_t seed);

/// `count` distinct uniform values in [0, universe), ascending.
std::vector<WordIndex> sample_distinct_indices(WordIndex universe, WordIndex count,
                                               SplitMix64& rng);

class ParseError : public std::runtime_error {
public:
    enum class Kind { Malformed, IndexOutOfRange, NotCyclicallyReduced, DuplicateWord };

    ParseError(Kind kind, std::size_t line, const std::string& what);

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

/// Text format: `n=<int>` on the first non-comment line, then one relation
/// per line as three tokens g<k>/G<k>. Lines starting with '#' are comments;
/// a `# provenance model=... p=...|t=... seed=...` comment restores the
/// provenance record.
Presentation parse_presentation(std::string_view text);
std::string serialize_presentation(const Presentation& presentation);

}  // namespace trigroup
