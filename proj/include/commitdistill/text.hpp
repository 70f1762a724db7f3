#pragma once

#include <boost/regex.hpp>

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace commitdistill::text {

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

/// Collapses every whitespace run to one space and trims both ends.
inline std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending = false;
    for (char c : s) {
        if (is_space(c)) {
            pending = !out.empty();
            continue;
        }
        if (pending) out.push_back(' ');
        pending = false;
        out.push_back(c);
    }
    return out;
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline bool istarts_with(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i])))
            return false;
    }
    return true;
}

inline bool icontains(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(), [](char a, char b) {
        return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
    });
    return it != haystack.end();
}

/// Largest prefix length <= n that does not split a UTF-8 sequence.
inline std::size_t utf8_floor(std::string_view s, std::size_t n) {
    if (n >= s.size()) return s.size();
    while (n > 0 && (static_cast<unsigned char>(s[n]) & 0xC0) == 0x80) --n;
    return n;
}

/// Verbatim prefix of at most max_len bytes, cut at the last word boundary.
/// Falls back to a hard (UTF-8 safe) cut when the first word alone is too long.
inline std::string truncate_at_word(std::string_view s, std::size_t max_len) {
    if (s.size() <= max_len) return std::string(s);
    if (is_space(s[max_len])) return trim(s.substr(0, max_len));
    auto head = s.substr(0, max_len);
    auto sp = head.find_last_of(" \t\n");
    if (sp == std::string_view::npos || trim(head.substr(0, sp)).empty()) {
        return std::string(s.substr(0, utf8_floor(s, max_len)));
    }
    return trim(head.substr(0, sp));
}

/// Removes fenced code blocks, inline code spans, stray backticks and HTML tags.
/// Whitespace and line structure are otherwise left alone.
inline std::string strip_markup(std::string_view s) {
    static const boost::regex fenced(R"(```[\s\S]*?(```|\z))");
    static const boost::regex inline_code(R"(`[^`\n]*`)");
    static const boost::regex html(R"(<(?:[A-Za-z/!])[^<>]*>)");
    std::string out(s);
    out = boost::regex_replace(out, fenced, " ");
    out = boost::regex_replace(out, inline_code, " ");
    out = boost::regex_replace(out, html, "");
    out.erase(std::remove(out.begin(), out.end(), '`'), out.end());
    return out;
}

/// Strip code and HTML, collapse whitespace.
inline std::string normalize(std::string_view s) {
    return collapse_whitespace(strip_markup(s));
}

/// Sentence segmentation over already-stripped text. Paragraph breaks (blank
/// lines) and bullet items always end a sentence; inside a paragraph a
/// sentence ends at '.', '!' or '?' followed by whitespace. Each returned
/// sentence is whitespace-collapsed and keeps its terminator.
inline std::vector<std::string> split_sentences(std::string_view s) {
    static const boost::regex block_break(R"(\n[ \t]*(?:\n|(?=[-*+][ \t])))");
    std::vector<std::string> out;
    std::string src(s);
    boost::sregex_token_iterator it(src.begin(), src.end(), block_break, -1), end;
    for (; it != end; ++it) {
        std::string para = collapse_whitespace(it->str());
        std::size_t start = 0;
        for (std::size_t i = 0; i < para.size(); ++i) {
            char c = para[i];
            if ((c == '.' || c == '!' || c == '?') && i + 1 < para.size() && para[i + 1] == ' ') {
                out.push_back(trim(std::string_view(para).substr(start, i + 1 - start)));
                start = i + 2;
            }
        }
        auto tail = trim(std::string_view(para).substr(std::min(start, para.size())));
        if (!tail.empty()) out.push_back(std::move(tail));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const std::string& x) { return x.empty(); }), out.end());
    return out;
}

}  // namespace commitdistill::text
