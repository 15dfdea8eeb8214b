#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "podium/corpus.hpp"
#include "podium/lexicon.hpp"
#include "podium/ngramlm.hpp"
#include "podium/pairs.hpp"
#include "podium/text.hpp"

namespace podium {

// Ordered feature-name -> value mapping. All vectors produced under one
// featurizer share the same schema.
struct FeatureVector {
  std::uint64_t schema_id = 0;
  std::vector<double> values;
};

// Words ending in "est" (len >= 5) that are not superlatives.
inline const std::unordered_set<std::string>& superlative_exclusions() {
  static const std::unordered_set<std::string> s = {
      "interest", "honest",   "modest",   "protest",  "rest",      "west",     "test",
      "arrest",   "suggest",  "request",  "contest",  "digest",    "forest",   "harvest",
      "invest",   "manifest", "midwest",  "northwest","southwest", "priest",   "quest",
      "guest",    "chest",    "crest",    "unrest",   "earnest",   "attest",   "bequest",
      "conquest", "detest",   "inquest",  "infest",   "ingest",    "molest",   "tempest",
      "reinvest", "rearrest", "everest",  "budapest", "bucharest"};
  return s;
}

// Tokens ending in "est" (length >= 5, exclusion list applied) plus
// "most", "least" and "worst".
inline int superlative_count(const std::vector<std::string>& tokens) {
  int count = 0;
  for (const auto& t : tokens) {
    if (t == "most" || t == "least" || t == "worst") {
      ++count;
      continue;
    }
    if (t.size() >= 5 && t.compare(t.size() - 3, 3, "est") == 0 &&
        superlative_exclusions().count(t) == 0)
      ++count;
  }
  return count;
}

// Token-level longest common subsequence length.
inline int lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<int> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1])
        cur[j] = prev[j - 1] + 1;
      else
        cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Average token-level LCS length over all unordered pairs of sub-sentences
// (split at ',' or ';'). Fewer than two non-empty sub-sentences score 0.
inline double parallelism(const std::string& sentence_text) {
  std::vector<std::vector<std::string>> subs;
  std::string current;
  auto flush = [&] {
    auto toks = tokenize(current);
    if (!toks.empty()) subs.push_back(std::move(toks));
    current.clear();
  };
  for (char c : sentence_text) {
    if (c == ',' || c == ';')
      flush();
    else
      current += c;
  }
  flush();
  if (subs.size() < 2) return 0.0;
  double sum = 0.0;
  std::size_t n_pairs = 0;
  for (std::size_t i = 0; i < subs.size(); ++i)
    for (std::size_t j = i + 1; j < subs.size(); ++j) {
      sum += lcs_length(subs[i], subs[j]);
      ++n_pairs;
    }
  return sum / static_cast<double>(n_pairs);
}

struct FlowConfig {
  std::vector<int> windows = {-5, -4, -3, -2, -1, 1, 2, 3, 4, 5};

  void validate() const {
    for (int w : windows)
      if (w == 0) throw config_error("flow window 0 is not allowed");
  }
};

enum class FlowScope { self, other };

// Jaccard similarity between the sentence's content words and the union of
// content words of the |w| nearest turns before (w<0) or after (w>0) the
// sentence's turn, restricted to the same speaker (self) or any other
// speaker (other). Either set empty -> 0.
inline double jaccard_window(const Sentence& sentence, const Debate& debate, int w,
                             FlowScope scope) {
  if (w == 0) throw config_error("flow window 0 is not allowed");
  const Turn& home = debate.turns[static_cast<std::size_t>(sentence.turn_index)];

  std::set<std::string> words_s;
  for (const auto& t : sentence.tokens)
    if (is_content_word(t)) words_s.insert(t);

  std::set<std::string> window_words;
  const int step = w < 0 ? -1 : 1;
  int remaining = std::abs(w);
  for (int ti = sentence.turn_index + step;
       ti >= 0 && ti < static_cast<int>(debate.turns.size()) && remaining > 0; ti += step) {
    const Turn& turn = debate.turns[static_cast<std::size_t>(ti)];
    const bool same = turn.speaker == home.speaker;
    if ((scope == FlowScope::self) != same) continue;
    for (const auto& s : turn.sentences)
      for (const auto& tok : s.tokens)
        if (is_content_word(tok)) window_words.insert(tok);
    --remaining;
  }

  if (words_s.empty() || window_words.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& t : words_s) inter += window_words.count(t);
  const std::size_t uni = words_s.size() + window_words.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

// Computes every sentence-alone and conversation-flow feature under a fixed
// schema. Count features are emitted both raw and per-token.
class Featurizer {
 public:
  Featurizer(const LexiconSet& lexicons, const std::vector<LanguageModel>& lms,
             FlowConfig flow = FlowConfig())
      : lexicons_(lexicons), lms_(lms), flow_(std::move(flow)) {
    flow_.validate();
    build_schema();
  }

  const std::vector<std::string>& feature_names() const { return names_; }
  std::uint64_t schema_id() const { return schema_id_; }

  // Sentence-alone features from tokens and text only.
  std::map<std::string, double> sentence_features(const std::vector<std::string>& tokens,
                                                  const std::string& text) const {
    std::map<std::string, double> f;
    const double len = static_cast<double>(tokens.size());
    f["length"] = len;
    auto count_feature = [&](const std::string& name, int raw) {
      f[name] = static_cast<double>(raw);
      f[name + "_pertok"] = len > 0.0 ? static_cast<double>(raw) / len : 0.0;
    };
    count_feature("posemo", count_lexicon(tokens, lexicons_.posemo));
    count_feature("negemo", count_lexicon(tokens, lexicons_.negemo));
    count_feature("negation", count_lexicon(tokens, lexicons_.negation));
    count_feature("negative_conj", count_lexicon(tokens, lexicons_.negative_conj));
    count_feature("pronoun_i", count_lexicon(tokens, lexicons_.pronoun_i));
    count_feature("pronoun_you", count_lexicon(tokens, lexicons_.pronoun_you));
    count_feature("pronoun_shehe", count_lexicon(tokens, lexicons_.pronoun_shehe));
    count_feature("pronoun_they", count_lexicon(tokens, lexicons_.pronoun_they));
    count_feature("pronoun_we", count_lexicon(tokens, lexicons_.pronoun_we));
    count_feature("hedges", count_lexicon(tokens, lexicons_.hedges));
    count_feature("superlatives", superlative_count(tokens));
    count_feature("indef_articles", count_lexicon(tokens, lexicons_.indefinite_articles));
    f["parallelism"] = parallelism(text);
    for (const auto& lm : lms_)
      f["lm_" + std::to_string(lm.order()) + "gram"] = tokens.empty() ? 0.0 : lm.score(tokens);
    return f;
  }

  // Flow features for a sentence in its debate context.
  std::map<std::string, double> flow_features(const Sentence& sentence,
                                              const Debate& debate) const {
    std::map<std::string, double> f;
    for (int w : flow_.windows) {
      f[flow_name(w, FlowScope::self)] = jaccard_window(sentence, debate, w, FlowScope::self);
      f[flow_name(w, FlowScope::other)] = jaccard_window(sentence, debate, w, FlowScope::other);
    }
    return f;
  }

  FeatureVector vectorize(const std::map<std::string, double>& sentence_alone,
                          const std::map<std::string, double>& flow) const {
    FeatureVector v;
    v.schema_id = schema_id_;
    v.values.reserve(names_.size());
    for (const auto& name : names_) {
      if (auto it = sentence_alone.find(name); it != sentence_alone.end()) {
        v.values.push_back(it->second);
        continue;
      }
      auto it = flow.find(name);
      if (it == flow.end()) throw data_error("feature '" + name + "' missing from computed maps");
      v.values.push_back(it->second);
    }
    return v;
  }

  FeatureVector featurize(const Sentence& sentence, const Debate& debate) const {
    return vectorize(sentence_features(sentence.tokens, sentence.text),
                     flow_features(sentence, debate));
  }

  // Featurizes a pair member from its stored text and flow values; used when
  // re-featurizing from a pairs file without the corpus.
  FeatureVector featurize_member(const PairMember& member,
                                 const std::map<std::string, double>& stored_flow) const {
    return vectorize(sentence_features(member.tokens, member.text), stored_flow);
  }

  static std::string flow_name(int w, FlowScope scope) {
    const std::string dir = w < 0 ? "prev" : "post";
    const std::string sc = scope == FlowScope::self ? "self" : "other";
    return "jaccard_" + sc + "_" + dir + std::to_string(std::abs(w));
  }

 private:
  void build_schema() {
    names_ = {"length"};
    for (const char* n : {"posemo", "negemo", "negation", "negative_conj", "pronoun_i",
                          "pronoun_you", "pronoun_shehe", "pronoun_they", "pronoun_we", "hedges",
                          "superlatives", "indef_articles"}) {
      names_.push_back(n);
      names_.push_back(std::string(n) + "_pertok");
    }
    names_.push_back("parallelism");
    for (const auto& lm : lms_) names_.push_back("lm_" + std::to_string(lm.order()) + "gram");
    std::vector<int> ws = flow_.windows;
    std::sort(ws.begin(), ws.end());
    for (int w : ws) {
      names_.push_back(flow_name(w, FlowScope::self));
      names_.push_back(flow_name(w, FlowScope::other));
    }
    std::uint64_t h = fnv1a64("feature_schema_v1");
    for (const auto& n : names_) h = fnv1a64(n, fnv1a64("\x1f", h));
    h = fnv1a64(hex64(lexicons_.fingerprint()), h);
    for (const auto& lm : lms_) h = fnv1a64(hex64(lm.fingerprint()), h);
    schema_id_ = h;
  }

  const LexiconSet& lexicons_;
  const std::vector<LanguageModel>& lms_;
  FlowConfig flow_;
  std::vector<std::string> names_;
  std::uint64_t schema_id_ = 0;
};

// The 20-feature battery reported by the feature significance test: the
// sentence-alone features (raw counts) plus the three nearest-window
// conversation-flow features.
inline std::vector<std::string> battery_feature_names() {
  return {"length",          "posemo",        "negemo",        "negation",
          "negative_conj",   "pronoun_i",     "pronoun_you",   "pronoun_shehe",
          "pronoun_they",    "pronoun_we",    "hedges",        "superlatives",
          "indef_articles",  "parallelism",   "lm_1gram",      "lm_2gram",
          "lm_3gram",        "jaccard_self_prev1", "jaccard_self_post1",
          "jaccard_other_post1"};
}

// --- Bag-of-words -----------------------------------------------------------

// Unigram + bigram vocabulary over the training pairs; n-grams kept when
// they occur at least min_occurrences times.
struct BowVocabulary {
  std::vector<std::string> entries;  // "tok" or "tok_a tok_b", sorted
  std::map<std::string, std::size_t> index;
  std::uint64_t schema_id = 0;

  static BowVocabulary build(const std::vector<Pair>& train_pairs, int min_occurrences = 5) {
    std::map<std::string, int> counts;
    auto absorb = [&](const std::vector<std::string>& toks) {
      for (std::size_t i = 0; i < toks.size(); ++i) {
        ++counts[toks[i]];
        if (i + 1 < toks.size()) ++counts[toks[i] + " " + toks[i + 1]];
      }
    };
    for (const auto& p : train_pairs) {
      absorb(p.first.tokens);
      absorb(p.second.tokens);
    }
    BowVocabulary v;
    for (const auto& [ngram, c] : counts)
      if (c >= min_occurrences) v.entries.push_back(ngram);
    std::sort(v.entries.begin(), v.entries.end());
    for (std::size_t i = 0; i < v.entries.size(); ++i) v.index[v.entries[i]] = i;
    std::uint64_t h = fnv1a64("bow_schema_v1");
    for (const auto& e : v.entries) h = fnv1a64(e, fnv1a64("\x1f", h));
    v.schema_id = h;
    return v;
  }

  // Dense n-gram counts; n-grams outside the vocabulary contribute nothing.
  std::vector<double> apply(const std::vector<std::string>& tokens) const {
    std::vector<double> out(entries.size(), 0.0);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      auto it = index.find(tokens[i]);
      if (it != index.end()) out[it->second] += 1.0;
      if (i + 1 < tokens.size()) {
        auto it2 = index.find(tokens[i] + " " + tokens[i + 1]);
        if (it2 != index.end()) out[it2->second] += 1.0;
      }
    }
    return out;
  }
};

// Pair difference vector: features(first) - features(second); label 1 iff
// the first member is the highlight.
inline std::pair<std::vector<double>, int> pair_diff(const FeatureVector& first,
                                                     const FeatureVector& second,
                                                     PairLabel label) {
  if (first.schema_id != second.schema_id)
    throw data_error("pair members were featurized under different schemas");
  if (first.values.size() != second.values.size())
    throw data_error("pair members have different feature counts");
  std::vector<double> diff(first.values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = first.values[i] - second.values[i];
  return {std::move(diff), label == PairLabel::first_is_highlight ? 1 : 0};
}

}  // namespace podium
