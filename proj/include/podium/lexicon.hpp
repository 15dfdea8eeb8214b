#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "podium/text.hpp"
#include "podium/util.hpp"

namespace podium {

// A lexicon holds literal tokens, prefix patterns ("happi*") and multiword
// phrases ("sort of"). Matching is case-insensitive; phrase entries match
// contiguous token runs and consume them.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  bool empty() const { return literals_.empty() && prefixes_.empty() && phrases_.empty(); }

  void add_entry(const std::string& raw) {
    std::string e = ascii_lower(trim(raw));
    if (e.empty()) return;
    if (e.find(' ') != std::string::npos) {
      std::vector<std::string> toks;
      for (auto& p : split(e, ' '))
        if (!p.empty()) toks.push_back(p);
      if (toks.size() >= 2) {
        max_phrase_len_ = std::max(max_phrase_len_, toks.size());
        phrases_.insert(join_tokens(toks));
        return;
      }
      if (toks.size() == 1) e = toks[0];
      else return;
    }
    if (e.size() >= 2 && e.back() == '*') {
      prefixes_.push_back(e.substr(0, e.size() - 1));
    } else {
      literals_.insert(e);
    }
  }

  // Length of the entry matched at position i (phrase length in tokens,
  // longest first), or 0 if nothing matches.
  std::size_t match_at(const std::vector<std::string>& tokens, std::size_t i) const {
    for (std::size_t len = std::min(max_phrase_len_, tokens.size() - i); len >= 2; --len) {
      std::string key = tokens[i];
      for (std::size_t k = 1; k < len; ++k) key += " " + tokens[i + k];
      if (phrases_.count(key) > 0) return len;
    }
    if (literals_.count(tokens[i]) > 0) return 1;
    for (const auto& p : prefixes_)
      if (tokens[i].size() >= p.size() && tokens[i].compare(0, p.size(), p) == 0) return 1;
    return 0;
  }

  std::uint64_t fingerprint() const {
    std::vector<std::string> all(literals_.begin(), literals_.end());
    for (const auto& p : prefixes_) all.push_back(p + "*");
    all.insert(all.end(), phrases_.begin(), phrases_.end());
    std::sort(all.begin(), all.end());
    std::uint64_t h = fnv1a64(name_);
    for (const auto& e : all) h = fnv1a64(e, fnv1a64("\x1f", h));
    return h;
  }

 private:
  static std::string join_tokens(const std::vector<std::string>& toks) {
    std::string out = toks[0];
    for (std::size_t i = 1; i < toks.size(); ++i) out += " " + toks[i];
    return out;
  }

  std::string name_;
  std::unordered_set<std::string> literals_;
  std::vector<std::string> prefixes_;
  std::unordered_set<std::string> phrases_;  // tokens joined by single spaces
  std::size_t max_phrase_len_ = 1;
};

// Number of lexicon matches over the token sequence. Greedy left-to-right:
// at each position the longest matching entry counts once and its tokens
// are consumed.
inline int count_lexicon(const std::vector<std::string>& tokens, const Lexicon& lex) {
  int count = 0;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::size_t len = lex.match_at(tokens, i);
    if (len > 0) {
      ++count;
      i += len;
    } else {
      ++i;
    }
  }
  return count;
}

// Lexicon file format: UTF-8, one entry per line, '#' starts a comment,
// trailing '*' marks a prefix pattern, spaces form phrases.
inline Lexicon load_lexicon_file(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open lexicon file: " + path);
  Lexicon lex(name);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    lex.add_entry(line);
  }
  return lex;
}

inline Lexicon lexicon_from_entries(const std::string& name,
                                    const std::vector<std::string>& entries) {
  Lexicon lex(name);
  for (const auto& e : entries) lex.add_entry(e);
  return lex;
}

// The sentence-level lexicons used by the featurizer. Sentiment, hedge and
// pronoun lists are open word lists shipped under data/lexicons/ (LIWC is
// proprietary); negation, negative-conjunction and indefinite-article lists
// are small fixed lists with built-in defaults, overridable by files.
struct LexiconSet {
  Lexicon posemo;
  Lexicon negemo;
  Lexicon hedges;
  Lexicon pronoun_i;
  Lexicon pronoun_you;
  Lexicon pronoun_shehe;
  Lexicon pronoun_they;
  Lexicon pronoun_we;
  Lexicon negation;
  Lexicon negative_conj;
  Lexicon indefinite_articles;

  static Lexicon default_negation() {
    return lexicon_from_entries("negation", {"n't", "not", "no", "cannot"});
  }

  static Lexicon default_negative_conj() {
    return lexicon_from_entries("negative_conj",
                                {"although", "atho", "but", "nor", "whereas", "while", "though",
                                 "however", "otherwise", "tho", "unless"});
  }

  static Lexicon default_indefinite_articles() {
    return lexicon_from_entries("indefinite_articles", {"a", "an"});
  }

  static LexiconSet load_dir(const std::string& dir) {
    auto path = [&](const char* f) { return dir + "/" + f; };
    auto optional_file = [&](const char* f, Lexicon fallback) {
      std::ifstream probe(path(f));
      if (!probe) return fallback;
      return load_lexicon_file(path(f), fallback.name());
    };
    LexiconSet s;
    s.posemo = load_lexicon_file(path("posemo.txt"), "posemo");
    s.negemo = load_lexicon_file(path("negemo.txt"), "negemo");
    s.hedges = load_lexicon_file(path("hedges.txt"), "hedges");
    s.pronoun_i = load_lexicon_file(path("pronoun_i.txt"), "pronoun_i");
    s.pronoun_you = load_lexicon_file(path("pronoun_you.txt"), "pronoun_you");
    s.pronoun_shehe = load_lexicon_file(path("pronoun_shehe.txt"), "pronoun_shehe");
    s.pronoun_they = load_lexicon_file(path("pronoun_they.txt"), "pronoun_they");
    s.pronoun_we = load_lexicon_file(path("pronoun_we.txt"), "pronoun_we");
    s.negation = optional_file("negation.txt", default_negation());
    s.negative_conj = optional_file("negative_conjunctions.txt", default_negative_conj());
    s.indefinite_articles =
        optional_file("indefinite_articles.txt", default_indefinite_articles());
    return s;
  }

  std::uint64_t fingerprint() const {
    std::uint64_t h = fnv1a64("lexicon_set");
    for (const Lexicon* l :
         {&posemo, &negemo, &hedges, &pronoun_i, &pronoun_you, &pronoun_shehe, &pronoun_they,
          &pronoun_we, &negation, &negative_conj, &indefinite_articles})
      h = fnv1a64(hex64(l->fingerprint()), h);
    return h;
  }
};

}  // namespace podium
