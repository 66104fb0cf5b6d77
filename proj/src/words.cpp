#include "trigroup/words.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include <fmt/format.h>

namespace trigroup {

namespace {

__extension__ typedef unsigned __int128 u128;

WordIndex checked_u64(u128 value, const char* what) {
    if (value > std::numeric_limits<std::uint64_t>::max()) {
        throw std::overflow_error(fmt::format("{}: result does not fit in 64 bits", what));
    }
    return static_cast<WordIndex>(value);
}

// Layout of the canonical order, for fixed n. Letters are positions
// 0..2n-1. For a first letter a, the second letter ranges over every
// letter except a^-1; the third over every letter except a^-1 and b^-1.
// So the block for (a, b) has 2n-1 words when b == a and 2n-2 otherwise.
struct Layout {
    std::uint64_t letters;    // 2n
    std::uint64_t block;      // 2n - 2
    std::uint64_t per_first;  // (2n - 1) + (2n - 2)^2

    explicit Layout(std::uint32_t n)
        : letters(2ULL * n), block(2ULL * n - 2), per_first((2ULL * n - 1) + block * block) {}
};

// Index of letter `pos` in the ascending list of letters with `skip` removed.
constexpr std::uint64_t rank_skipping(std::uint64_t pos, std::uint64_t skip) {
    return pos < skip ? pos : pos - 1;
}

constexpr std::uint64_t unrank_skipping(std::uint64_t rank, std::uint64_t skip) {
    return rank < skip ? rank : rank + 1;
}

void check_generator_count(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("generator count must be at least 1");
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename T>
bool parse_uint(std::string_view s, T& out) {
    if (s.empty()) return false;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

}  // namespace

std::string Letter::to_string() const {
    return fmt::format("{}{}", inverted ? 'G' : 'g', generator);
}

Word::Word(Letter a, Letter b, Letter c) : letters_{a, b, c} {
    if (a.generator == 0 || b.generator == 0 || c.generator == 0) {
        throw std::invalid_argument("generator indices start at 1");
    }
    if (!is_cyclically_reduced(letters_)) {
        throw std::invalid_argument(fmt::format("word {} is not cyclically reduced", to_string()));
    }
}

int Word::occurrences(Generator s) const noexcept {
    return static_cast<int>(std::count_if(letters_.begin(), letters_.end(),
                                          [s](Letter l) { return l.generator == s; }));
}

std::string Word::to_string() const {
    return fmt::format("{} {} {}", letters_[0].to_string(), letters_[1].to_string(),
                       letters_[2].to_string());
}

WordIndex count_words(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("count_words: n must be at least 1");
    const u128 m = n;
    // 8n^3 - 12n^2 + 6n = 2n (4n^2 - 6n + 3), all terms nonnegative for n >= 1.
    return checked_u64(2 * m * (4 * m * m - 6 * m + 3), "count_words");
}

WordIndex count_words_containing(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("count_words_containing: n must be at least 1");
    const u128 k = n - 1;
    const u128 pairs = k * (k == 0 ? 0 : k - 1) / 2;
    return checked_u64(48 * pairs + 24 * k + 2, "count_words_containing");
}

std::vector<Word> enumerate_words(std::uint32_t n) {
    check_generator_count(n);
    if (n > kEnumerationLimit) {
        throw std::invalid_argument(
            fmt::format("enumerate_words: n = {} exceeds the limit {}", n, kEnumerationLimit));
    }
    const std::uint32_t letters = 2 * n;
    std::vector<Word> words;
    words.reserve(count_words(n));
    for (std::uint32_t a = 0; a < letters; ++a) {
        for (std::uint32_t b = 0; b < letters; ++b) {
            for (std::uint32_t c = 0; c < letters; ++c) {
                const std::array<Letter, 3> w{Letter::from_position(a), Letter::from_position(b),
                                              Letter::from_position(c)};
                if (is_cyclically_reduced(w)) words.emplace_back(w[0], w[1], w[2]);
            }
        }
    }
    return words;
}

WordIndex encode_word(std::uint32_t n, const Word& w) {
    check_generator_count(n);
    const Layout layout(n);
    const std::uint64_t a = w[0].position();
    const std::uint64_t b = w[1].position();
    const std::uint64_t c = w[2].position();
    if (a >= layout.letters || b >= layout.letters || c >= layout.letters) {
        throw std::invalid_argument("encode_word: generator index exceeds n");
    }
    const std::uint64_t inv_a = a ^ 1;
    const std::uint64_t inv_b = b ^ 1;
    const std::uint64_t a_slot = rank_skipping(a, inv_a);
    const std::uint64_t b_slot = rank_skipping(b, inv_a);

    std::uint64_t offset = 0;
    if (b_slot <= a_slot) {
        offset = b_slot * layout.block;
    } else {
        offset = a_slot * layout.block + (layout.block + 1) + (b_slot - a_slot - 1) * layout.block;
    }

    std::uint64_t c_rank = c;
    if (inv_a < c) --c_rank;
    if (inv_b != inv_a && inv_b < c) --c_rank;
    return a * layout.per_first + offset + c_rank;
}

Word decode_word(std::uint32_t n, WordIndex index) {
    check_generator_count(n);
    const Layout layout(n);
    if (index >= count_words(n)) {
        throw std::out_of_range(fmt::format("decode_word: index {} out of range", index));
    }
    const std::uint64_t a = index / layout.per_first;
    std::uint64_t rest = index % layout.per_first;
    const std::uint64_t inv_a = a ^ 1;
    const std::uint64_t a_slot = rank_skipping(a, inv_a);
    const std::uint64_t s = layout.block;

    std::uint64_t b_slot = 0;
    if (rest < a_slot * s) {
        b_slot = rest / s;
        rest %= s;
    } else if (rest < a_slot * s + s + 1) {
        b_slot = a_slot;
        rest -= a_slot * s;
    } else {
        rest -= a_slot * s + s + 1;
        b_slot = a_slot + 1 + rest / s;
        rest %= s;
    }
    const std::uint64_t b = unrank_skipping(b_slot, inv_a);

    std::uint64_t lo = inv_a;
    std::uint64_t hi = b ^ 1;
    if (lo > hi) std::swap(lo, hi);
    std::uint64_t c = rest;
    if (c >= lo) ++c;
    if (hi != lo && c >= hi) ++c;

    return Word(Letter::from_position(static_cast<std::uint32_t>(a)),
                Letter::from_position(static_cast<std::uint32_t>(b)),
                Letter::from_position(static_cast<std::uint32_t>(c)));
}

Presentation::Presentation(std::uint32_t n, std::vector<Word> relations,
                           std::optional<Provenance> provenance)
    : n_(n), relations_(std::move(relations)), provenance_(std::move(provenance)) {
    check_generator_count(n_);
    for (const auto& w : relations_) {
        for (const auto& letter : w.letters()) {
            if (letter.generator > n_) {
                throw std::invalid_argument(
                    fmt::format("relation {} uses a generator above n = {}", w.to_string(), n_));
            }
        }
    }
    std::vector<Word> sorted = relations_;
    std::sort(sorted.begin(), sorted.end());
    if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
        throw std::invalid_argument(fmt::format("duplicate relation {}", dup->to_string()));
    }
}

std::vector<WordIndex> sample_distinct_indices(WordIndex universe, WordIndex count,
                                               SplitMix64& rng) {
    if (count > universe) {
        throw std::invalid_argument(
            fmt::format("cannot draw {} distinct values from {}", count, universe));
    }
    std::vector<WordIndex> out;
    if (count > universe / 2) {
        // Dense case: draw the complement instead.
        const auto excluded = sample_distinct_indices(universe, universe - count, rng);
        out.reserve(count);
        auto skip = excluded.begin();
        for (WordIndex i = 0; i < universe; ++i) {
            if (skip != excluded.end() && *skip == i) {
                ++skip;
                continue;
            }
            out.push_back(i);
        }
        return out;
    }
    std::unordered_set<WordIndex> seen;
    seen.reserve(count * 2);
    out.reserve(count);
    while (out.size() < count) {
        const WordIndex candidate = rng.below(universe);
        if (seen.insert(candidate).second) out.push_back(candidate);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

Presentation presentation_from_indices(std::uint32_t n, const std::vector<WordIndex>& indices,
                                       Provenance provenance) {
    std::vector<Word> relations;
    relations.reserve(indices.size());
    for (WordIndex i : indices) relations.push_back(decode_word(n, i));
    return Presentation(n, std::move(relations), std::move(provenance));
}

}  // namespace

Presentation sample_binomial(std::uint32_t n, double p, std::uint64_t seed) {
    check_generator_count(n);
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(fmt::format("sample_binomial: p = {} is not in [0, 1]", p));
    }
    const WordIndex universe = count_words(n);
    SplitMix64 rng(seed);
    const WordIndex t = binomial_variate(rng, universe, p);
    return presentation_from_indices(n, sample_distinct_indices(universe, t, rng),
                                     {"binomial", fmt::format("p={:.17g}", p), seed});
}

Presentation sample_uniform(std::uint32_t n, WordIndex t, std::uint64_t seed) {
    check_generator_count(n);
    const WordIndex universe = count_words(n);
    if (t > universe) {
        throw std::invalid_argument(
            fmt::format("sample_uniform: t = {} exceeds the {} available words", t, universe));
    }
    SplitMix64 rng(seed);
    return presentation_from_indices(n, sample_distinct_indices(universe, t, rng),
                                     {"uniform", fmt::format("t={}", t), seed});
}

ParseError::ParseError(Kind kind, std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), kind_(kind), line_(line) {}

namespace {

Provenance parse_provenance(std::string_view body, std::size_t line_no) {
    Provenance prov;
    bool have_model = false;
    bool have_seed = false;
    for (auto token : split_ws(body)) {
        const auto eq = token.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(ParseError::Kind::Malformed, line_no,
                             fmt::format("bad provenance field '{}'", token));
        }
        const auto key = token.substr(0, eq);
        const auto value = token.substr(eq + 1);
        if (key == "model") {
            prov.model = std::string(value);
            have_model = true;
        } else if (key == "seed") {
            if (!parse_uint(value, prov.seed)) {
                throw ParseError(ParseError::Kind::Malformed, line_no, "bad provenance seed");
            }
            have_seed = true;
        } else if (key == "p" || key == "t") {
            prov.parameter = std::string(token);
        } else {
            throw ParseError(ParseError::Kind::Malformed, line_no,
                             fmt::format("unknown provenance field '{}'", key));
        }
    }
    if (!have_model || !have_seed) {
        throw ParseError(ParseError::Kind::Malformed, line_no, "incomplete provenance record");
    }
    return prov;
}

Letter parse_letter(std::string_view token, std::uint32_t n, std::size_t line_no) {
    if (token.size() < 2 || (token[0] != 'g' && token[0] != 'G')) {
        throw ParseError(ParseError::Kind::Malformed, line_no,
                         fmt::format("malformed letter '{}'", token));
    }
    std::uint64_t k = 0;
    if (!parse_uint(token.substr(1), k)) {
        throw ParseError(ParseError::Kind::Malformed, line_no,
                         fmt::format("malformed letter '{}'", token));
    }
    if (k < 1 || k > n) {
        throw ParseError(ParseError::Kind::IndexOutOfRange, line_no,
                         fmt::format("generator {} outside 1..{}", k, n));
    }
    return {static_cast<Generator>(k), token[0] == 'G'};
}

}  // namespace

Presentation parse_presentation(std::string_view text) {
    std::optional<std::uint32_t> n;
    std::optional<Provenance> provenance;
    std::vector<Word> relations;
    std::unordered_set<WordIndex> seen;

    constexpr std::string_view kProvenanceTag = "provenance";
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(start, end - start));
        ++line_no;
        start = end + 1;

        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto body = trim(line.substr(1));
            if (body.substr(0, kProvenanceTag.size()) == kProvenanceTag &&
                (body.size() == kProvenanceTag.size() || body[kProvenanceTag.size()] == ' ')) {
                provenance = parse_provenance(body.substr(kProvenanceTag.size()), line_no);
            }
            continue;
        }
        if (!n) {
            std::uint32_t value = 0;
            if (line.substr(0, 2) != "n=" || !parse_uint(trim(line.substr(2)), value) ||
                value == 0) {
                throw ParseError(ParseError::Kind::Malformed, line_no,
                                 "expected header 'n=<positive integer>'");
            }
            n = value;
            continue;
        }
        const auto tokens = split_ws(line);
        if (tokens.size() != 3) {
            throw ParseError(ParseError::Kind::Malformed, line_no,
                             fmt::format("expected three letters, found {} tokens", tokens.size()));
        }
        const std::array<Letter, 3> letters{parse_letter(tokens[0], *n, line_no),
                                            parse_letter(tokens[1], *n, line_no),
                                            parse_letter(tokens[2], *n, line_no)};
        if (!is_cyclically_reduced(letters)) {
            throw ParseError(ParseError::Kind::NotCyclicallyReduced, line_no,
                             fmt::format("'{}' is not cyclically reduced", line));
        }
        Word w(letters[0], letters[1], letters[2]);
        if (!seen.insert(encode_word(*n, w)).second) {
            throw ParseError(ParseError::Kind::DuplicateWord, line_no,
                             fmt::format("duplicate relation '{}'", w.to_string()));
        }
        relations.push_back(w);
    }
    if (!n) throw ParseError(ParseError::Kind::Malformed, line_no, "missing 'n=' header");
    return Presentation(*n, std::move(relations), std::move(provenance));
}

std::string serialize_presentation(const Presentation& presentation) {
    std::string out = fmt::format("n={}\n", presentation.generator_count());
    if (const auto& prov = presentation.provenance()) {
        out += fmt::format("# provenance model={}", prov->model);
        if (!prov->parameter.empty()) out += " " + prov->parameter;
        out += fmt::format(" seed={}\n", prov->seed);
    }
    for (const auto& w : presentation.relations()) {
        out += w.to_string();
        out += '\n';
    }
    return out;
}

}  // namespace trigroup
