#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace commitdistill {

namespace detail {

inline bool is_word_byte(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

/// Splits one underscore-free piece at lower->Upper, ACRONYMWord and letter/digit boundaries.
inline void split_camel(std::string_view piece, std::vector<std::string>& parts) {
    std::size_t start = 0;
    auto cls = [](unsigned char c) {
        if (std::isupper(c)) return 1;
        if (std::islower(c) || c >= 0x80) return 2;
        if (std::isdigit(c)) return 3;
        return 0;
    };
    for (std::size_t i = 1; i < piece.size(); ++i) {
        int prev = cls(static_cast<unsigned char>(piece[i - 1]));
        int cur = cls(static_cast<unsigned char>(piece[i]));
        bool boundary = false;
        if (prev == 2 && cur == 1) boundary = true;
        if ((prev == 3) != (cur == 3)) boundary = true;
        if (prev == 1 && cur == 1 && i + 1 < piece.size() && cls(static_cast<unsigned char>(piece[i + 1])) == 2)
            boundary = true;
        if (boundary) {
            parts.emplace_back(piece.substr(start, i - start));
            start = i;
        }
    }
    parts.emplace_back(piece.substr(start));
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace detail

/// Identifier-aware tokenizer. Words are runs of [A-Za-z0-9_] (plus non-ASCII
/// bytes), lower-cased. camelCase, snake_case and ALL_CAPS identifiers also
/// contribute their constituent words next to the original token; bare
/// digit fragments of a split identifier are dropped.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !detail::is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && detail::is_word_byte(static_cast<unsigned char>(text[j]))) ++j;
        if (j == i) break;
        std::string_view word = text.substr(i, j - i);
        i = j;
        while (!word.empty() && word.front() == '_') word.remove_prefix(1);
        while (!word.empty() && word.back() == '_') word.remove_suffix(1);
        if (word.empty()) continue;

        std::vector<std::string> parts;
        std::size_t p = 0;
        while (p < word.size()) {
            auto u = word.find('_', p);
            auto piece = word.substr(p, u == std::string_view::npos ? std::string_view::npos : u - p);
            if (!piece.empty()) detail::split_camel(piece, parts);
            if (u == std::string_view::npos) break;
            p = u + 1;
        }
        tokens.push_back(detail::lower(word));
        if (parts.size() > 1) {
            for (const auto& part : parts) {
                if (detail::all_digits(part)) continue;
                tokens.push_back(detail::lower(part));
            }
        }
    }
    return tokens;
}

inline std::map<std::string, std::size_t> term_frequencies(const std::vector<std::string>& tokens) {
    std::map<std::string, std::size_t> tf;
    for (const auto& t : tokens) ++tf[t];
    return tf;
}

}  // namespace commitdistill
