#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "podium/util.hpp"

namespace podium {

// Token with byte offsets into the source string. Offsets let quotation
// spans and sentence boundaries be mapped back onto token indices.
struct TokenSpan {
  std::string text;
  std::size_t begin = 0;  // byte offset, inclusive
  std::size_t end = 0;    // byte offset, exclusive
};

namespace detail {

inline bool is_word_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c >= 0x80;  // keep non-ASCII bytes inside tokens
}

// U+2019 RIGHT SINGLE QUOTATION MARK, used as an apostrophe in curly-quoted text.
inline bool is_curly_apostrophe(std::string_view s, std::size_t i) {
  return i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
         static_cast<unsigned char>(s[i + 1]) == 0x80 &&
         static_cast<unsigned char>(s[i + 2]) == 0x99;
}

inline const std::unordered_set<std::string>& clitic_suffixes() {
  static const std::unordered_set<std::string> s = {"'s", "'ve", "'re", "'ll", "'d", "'m"};
  return s;
}

}  // namespace detail

// Lowercases, splits "n't" and clitics ("'ve", "'s", ...) into their own
// tokens, keeps internal apostrophes, drops punctuation. Deterministic on
// the input bytes; no locale involvement.
inline std::vector<TokenSpan> tokenize_with_spans(std::string_view text) {
  std::vector<TokenSpan> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (!detail::is_word_char(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    std::string tok;
    while (i < n) {
      const unsigned char c = static_cast<unsigned char>(text[i]);
      if (detail::is_word_char(c)) {
        tok += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : text[i];
        ++i;
        continue;
      }
      // Apostrophe (straight or curly) is internal if flanked by word chars.
      std::size_t ap_len = 0;
      if (text[i] == '\'')
        ap_len = 1;
      else if (detail::is_curly_apostrophe(text, i))
        ap_len = 3;
      if (ap_len > 0 && i + ap_len < n &&
          detail::is_word_char(static_cast<unsigned char>(text[i + ap_len])) && i > begin) {
        tok += '\'';
        i += ap_len;
        continue;
      }
      break;
    }
    const std::size_t end = i;
    // Contraction split at the last apostrophe: "don't" -> do|n't, "i've" -> i|'ve.
    std::size_t ap = tok.rfind('\'');
    bool split_done = false;
    if (ap != std::string::npos && ap > 0) {
      if (ap >= 1 && tok[ap - 1] == 'n' && tok.substr(ap) == "'t" && tok.size() > 3) {
        out.push_back({tok.substr(0, ap - 1), begin, end});
        out.push_back({"n't", begin, end});
        split_done = true;
      } else if (detail::clitic_suffixes().count(tok.substr(ap)) > 0) {
        out.push_back({tok.substr(0, ap), begin, end});
        out.push_back({tok.substr(ap), begin, end});
        split_done = true;
      }
    }
    if (!split_done && !tok.empty()) out.push_back({tok, begin, end});
  }
  return out;
}

inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& ts : tokenize_with_spans(text)) out.push_back(std::move(ts.text));
  return out;
}

// Abbreviations that do not end a sentence when followed by a period.
inline const std::unordered_set<std::string>& sentence_abbreviations() {
  static const std::unordered_set<std::string> s = {"mr", "mrs", "dr", "sen",
                                                    "gov", "u.s", "st", "vs"};
  return s;
}

namespace detail {

inline bool is_quote_char_at(std::string_view s, std::size_t i, std::size_t* len) {
  const unsigned char c = static_cast<unsigned char>(s[i]);
  if (c == '"' || c == '\'') {
    *len = 1;
    return true;
  }
  // U+201C / U+201D / U+2018 / U+2019
  if (i + 2 < s.size() && c == 0xE2 && static_cast<unsigned char>(s[i + 1]) == 0x80) {
    const unsigned char b3 = static_cast<unsigned char>(s[i + 2]);
    if (b3 == 0x9C || b3 == 0x9D || b3 == 0x98 || b3 == 0x99) {
      *len = 3;
      return true;
    }
  }
  *len = 0;
  return false;
}

}  // namespace detail

// Splits at '.', '?', '!' followed by whitespace and a capital letter or
// quote, unless the period closes a known abbreviation. Every
// non-whitespace character lands in exactly one returned span.
inline std::vector<std::string> segment_sentences(std::string_view text) {
  std::vector<std::string> out;
  const std::size_t n = text.size();
  std::size_t start = 0;

  auto flush = [&](std::size_t end_excl) {
    std::string s = trim(text.substr(start, end_excl - start));
    if (!s.empty()) out.push_back(std::move(s));
    start = end_excl;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    if (c != '.' && c != '?' && c != '!') continue;
    // Absorb a run of terminal punctuation ("?!", "...").
    std::size_t j = i;
    while (j + 1 < n && (text[j + 1] == '.' || text[j + 1] == '?' || text[j + 1] == '!')) ++j;
    // Closing quote may precede the whitespace.
    std::size_t k = j + 1;
    std::size_t qlen = 0;
    if (k < n && detail::is_quote_char_at(text, k, &qlen)) k += qlen;
    if (k >= n) {
      i = j;
      continue;  // trailing punctuation; final flush handles it
    }
    if (text[k] != ' ' && text[k] != '\t' && text[k] != '\n' && text[k] != '\r') {
      i = j;
      continue;
    }
    std::size_t next = k;
    while (next < n && (text[next] == ' ' || text[next] == '\t' || text[next] == '\n' ||
                        text[next] == '\r'))
      ++next;
    if (next >= n) {
      i = j;
      continue;
    }
    std::size_t ql = 0;
    const bool upper_or_quote = (text[next] >= 'A' && text[next] <= 'Z') ||
                                detail::is_quote_char_at(text, next, &ql);
    if (!upper_or_quote) {
      i = j;
      continue;
    }
    if (c == '.' && j == i) {
      // Word ending right before this period, lowercased, dots kept ("U.S").
      std::size_t w = i;
      while (w > start) {
        const unsigned char pc = static_cast<unsigned char>(text[w - 1]);
        if (detail::is_word_char(pc) || pc == '.')
          --w;
        else
          break;
      }
      std::string word = ascii_lower(text.substr(w, i - w));
      if (!word.empty() && word.back() == '.') word.pop_back();  // "U.S." mid-scan
      if (sentence_abbreviations().count(word) > 0) {
        i = j;
        continue;
      }
    }
    flush(k);
    i = k - 1;
  }
  flush(n);
  return out;
}

// Embedded English stopword list used for the "content word" notion shared
// by the fuzzy matcher and the conversation-flow features.
inline const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> s = {
      "a",       "about",   "above",  "after",  "again",   "against", "all",    "am",
      "an",      "and",     "any",    "are",    "as",      "at",      "be",     "because",
      "been",    "before",  "being",  "below",  "between", "both",    "but",    "by",
      "can",     "cannot",  "could",  "did",    "do",      "does",    "doing",  "down",
      "during",  "each",    "few",    "for",    "from",    "further", "had",    "has",
      "have",    "having",  "he",     "her",    "here",    "hers",    "herself","him",
      "himself", "his",     "how",    "i",      "if",      "in",      "into",   "is",
      "it",      "its",     "itself", "just",   "me",      "more",    "most",   "my",
      "myself",  "no",      "nor",    "not",    "now",     "of",      "off",    "on",
      "once",    "only",    "or",     "other",  "ought",   "our",     "ours",   "ourselves",
      "out",     "over",    "own",    "same",   "she",     "should",  "so",     "some",
      "such",    "than",    "that",   "the",    "their",   "theirs",  "them",   "themselves",
      "then",    "there",   "these",  "they",   "this",    "those",   "through","to",
      "too",     "under",   "until",  "up",     "very",    "was",     "we",     "were",
      "what",    "when",    "where",  "which",  "while",   "who",     "whom",   "why",
      "will",    "with",    "would",  "you",    "your",    "yours",   "yourself","yourselves",
      "n't",     "'s",      "'ve",    "'re",    "'ll",     "'d",      "'m",     "also",
      "been",    "much",    "many",   "shall",  "upon",    "yet",     "well",   "get",
      "got",     "said",    "say",    "one",    "two",     "us",      "went",   "going",
      "go",      "think",   "know",   "like",   "want",    "every",   "let"};
  return s;
}

inline bool is_content_word(const std::string& token) {
  return token.size() >= 2 && stopwords().count(token) == 0;
}

}  // namespace podium
