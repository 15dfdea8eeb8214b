#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "podium/corpus.hpp"
#include "podium/quotematch.hpp"
#include "podium/util.hpp"

namespace podium {

struct PairConfig {
  int t = 10;                    // highlight percentile threshold, 1..10
  int turn_radius = 3;           // candidate negatives within this many turns
  double length_tolerance = 0.3; // token-length ratio band [1-tol, 1+tol]
  double train_fraction = 0.8;
  std::uint64_t seed = 1;

  void validate() const {
    if (t < 1 || t > 10) throw config_error("pair threshold t must be in 1..10");
    if (turn_radius < 1) throw config_error("turn_radius must be >= 1");
    if (length_tolerance <= 0.0) throw config_error("length_tolerance must be > 0");
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
      throw config_error("train_fraction must be in (0, 1)");
  }
};

enum class PairLabel { first_is_highlight, second_is_highlight };

struct PairMember {
  std::string sentence_id;
  std::string text;
  std::vector<std::string> tokens;
  int turn_index = 0;
  int sentence_index = 0;
  int total_count = 0;
};

struct Pair {
  std::string debate_id;
  DebateType debate_type = DebateType::general;
  int election_year = 0;
  std::string speaker;
  PairLabel label = PairLabel::first_is_highlight;
  int highlight_quote_count = 0;
  int prominence_pct = 10;  // smallest t in 1..10 at which the highlight qualifies
  PairMember first;
  PairMember second;

  const PairMember& highlight() const {
    return label == PairLabel::first_is_highlight ? first : second;
  }
  const PairMember& non_highlight() const {
    return label == PairLabel::first_is_highlight ? second : first;
  }
};

namespace detail {

struct RankedSentence {
  const Sentence* sentence = nullptr;
  const Turn* turn = nullptr;
  int count = 0;
  std::size_t position = 0;  // global document order
};

inline std::vector<RankedSentence> ranked_sentences(const Debate& debate,
                                                    const QuoteIndex& index) {
  std::vector<RankedSentence> all;
  std::size_t pos = 0;
  for (const auto& turn : debate.turns)
    for (const auto& s : turn.sentences) {
      all.push_back({&s, &turn, index.total_count(s.id), pos});
      ++pos;
    }
  std::stable_sort(all.begin(), all.end(), [](const RankedSentence& a, const RankedSentence& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.position < b.position;
  });
  return all;
}

}  // namespace detail

// Sentences whose quote count ranks in the top ceil(t% x S) of the debate,
// requiring at least one quote. Boundary ties go to higher count, then
// earlier position.
inline std::set<std::string> label_highlights(const Debate& debate, const QuoteIndex& index,
                                              int t, std::vector<Warning>* warnings = nullptr) {
  if (t < 1 || t > 10) throw config_error("highlight threshold t must be in 1..10");
  auto ranked = detail::ranked_sentences(debate, index);
  const std::size_t quota = static_cast<std::size_t>(
      std::ceil(static_cast<double>(t) / 100.0 * static_cast<double>(ranked.size())));
  std::set<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < quota; ++i) {
    if (ranked[i].count < 1) break;
    out.insert(ranked[i].sentence->id);
  }
  if (out.empty() && warnings)
    warnings->push_back({0, "debate '" + debate.id + "' has no quoted sentences; no highlights"});
  return out;
}

namespace detail {

inline int prominence_from_rank(std::size_t rank, std::size_t n_sentences) {
  for (int x = 1; x <= 10; ++x) {
    const std::size_t quota = static_cast<std::size_t>(
        std::ceil(static_cast<double>(x) / 100.0 * static_cast<double>(n_sentences)));
    if (rank < quota) return x;
  }
  return 10;
}

}  // namespace detail

// Smallest x in 1..10 such that the sentence would be labeled a highlight
// at threshold x. Used for the held-out prominence slices.
inline int prominence_pct(const Debate& debate, const QuoteIndex& index,
                          const std::string& sentence_id) {
  auto ranked = detail::ranked_sentences(debate, index);
  for (std::size_t i = 0; i < ranked.size(); ++i)
    if (ranked[i].sentence->id == sentence_id)
      return ranked[i].count < 1 ? 10 : detail::prominence_from_rank(i, ranked.size());
  return 10;
}

// Builds speaker- and situation-controlled pairs: each highlight is matched
// with the lowest-quote-count non-highlight sentence by the same speaker
// within turn_radius turns and within the length tolerance. A negative
// serves at most one pair; first/second order is randomized per pair.
inline std::vector<Pair> build_pairs(const Debate& debate, const QuoteIndex& index,
                                     const PairConfig& cfg,
                                     std::vector<Warning>* warnings = nullptr) {
  cfg.validate();
  const auto highlights = label_highlights(debate, index, cfg.t, warnings);
  SeededRng rng(cfg.seed ^ fnv1a64(debate.id));

  const auto ranked = detail::ranked_sentences(debate, index);
  std::map<std::string, int> prominence_of;
  for (std::size_t i = 0; i < ranked.size(); ++i)
    if (ranked[i].count >= 1)
      prominence_of[ranked[i].sentence->id] = detail::prominence_from_rank(i, ranked.size());

  std::set<std::string> used_negatives;
  std::vector<Pair> pairs;

  for (const auto& turn : debate.turns) {
    for (const auto& hl : turn.sentences) {
      if (highlights.count(hl.id) == 0) continue;
      const double hl_len = static_cast<double>(hl.tokens.size());

      struct Candidate {
        const Sentence* s;
        int count;
        double len_gap;
        int turn_gap;
      };
      std::optional<Candidate> best;
      const int lo = std::max(0, turn.index - cfg.turn_radius);
      const int hi = std::min(static_cast<int>(debate.turns.size()) - 1,
                              turn.index + cfg.turn_radius);
      for (int ti = lo; ti <= hi; ++ti) {
        const Turn& cand_turn = debate.turns[static_cast<std::size_t>(ti)];
        if (cand_turn.speaker != turn.speaker) continue;
        for (const auto& cand : cand_turn.sentences) {
          if (cand.id == hl.id || highlights.count(cand.id) > 0) continue;
          if (used_negatives.count(cand.id) > 0) continue;
          if (hl_len <= 0.0) continue;
          const double ratio = static_cast<double>(cand.tokens.size()) / hl_len;
          if (ratio < 1.0 - cfg.length_tolerance || ratio > 1.0 + cfg.length_tolerance) continue;
          Candidate c{&cand, index.total_count(cand.id),
                      std::abs(static_cast<double>(cand.tokens.size()) - hl_len),
                      std::abs(ti - turn.index)};
          const bool better =
              !best || c.count < best->count ||
              (c.count == best->count && c.len_gap < best->len_gap) ||
              (c.count == best->count && c.len_gap == best->len_gap &&
               c.turn_gap < best->turn_gap);
          if (better) best = c;
        }
      }
      if (!best) {
        if (warnings)
          warnings->push_back({0, "highlight " + hl.id + " skipped: no candidate negative"});
        continue;
      }
      used_negatives.insert(best->s->id);

      auto member = [&](const Sentence& s) {
        return PairMember{s.id,        s.text,          s.tokens,
                          s.turn_index, s.sentence_index, index.total_count(s.id)};
      };
      Pair p;
      p.debate_id = debate.id;
      p.debate_type = debate.debate_type;
      p.election_year = debate.election_year;
      p.speaker = turn.speaker;
      p.highlight_quote_count = index.total_count(hl.id);
      {
        auto it = prominence_of.find(hl.id);
        p.prominence_pct = it == prominence_of.end() ? 10 : it->second;
      }
      const bool highlight_first = rng.coin();
      if (highlight_first) {
        p.label = PairLabel::first_is_highlight;
        p.first = member(hl);
        p.second = member(*best->s);
      } else {
        p.label = PairLabel::second_is_highlight;
        p.first = member(*best->s);
        p.second = member(hl);
      }
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

// Seeded shuffle, then floor(train_fraction x n) pairs for training.
inline std::pair<std::vector<Pair>, std::vector<Pair>> split_train_test(std::vector<Pair> pairs,
                                                                        const PairConfig& cfg) {
  cfg.validate();
  if (pairs.empty()) throw data_error("cannot split an empty pair set");
  SeededRng rng(cfg.seed ^ fnv1a64("train_test_split"));
  rng.shuffle(pairs);
  const std::size_t n_train =
      static_cast<std::size_t>(std::floor(cfg.train_fraction * static_cast<double>(pairs.size())));
  std::vector<Pair> train(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<Pair> test(pairs.begin() + static_cast<std::ptrdiff_t>(n_train), pairs.end());
  return {std::move(train), std::move(test)};
}

}  // namespace podium
