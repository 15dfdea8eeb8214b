#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "podium/corpus.hpp"
#include "podium/lexicon.hpp"
#include "podium/text.hpp"

namespace podium {

// A quotation is any span enclosed in double quotation marks in an article.
struct Quotation {
  std::string article_id;
  std::size_t token_begin = 0;  // token offsets in the article body
  std::size_t token_end = 0;    // exclusive
  std::vector<std::string> tokens;
  std::vector<std::string> context_before;
  std::vector<std::string> context_after;
};

// A quote is a quotation matched to a debate turn.
struct QuoteMatch {
  std::size_t quotation_index = 0;
  std::string article_id;
  std::size_t token_begin = 0;  // quotation span in the article, token offsets
  std::size_t token_end = 0;
  std::string debate_id;
  int turn_index = -1;
  std::vector<std::string> matched_sentence_ids;
  double overlap_score = 0.0;
};

struct MatchConfig {
  double theta = 0.8;
  int min_quote_len = 5;
  int context_window = 15;  // tokens per side; 2 x 15 = 30 words around a quote
  // Quotations scoring within this margin below theta are logged; they are
  // the candidates for multi-turn or heavily edited quotes.
  double near_miss_margin = 0.1;
};

namespace detail {

// Double-quote delimiters only; apostrophes are not quotation marks here.
inline std::size_t double_quote_len(std::string_view s, std::size_t i) {
  if (s[i] == '"') return 1;
  if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
      static_cast<unsigned char>(s[i + 1]) == 0x80) {
    const unsigned char b3 = static_cast<unsigned char>(s[i + 2]);
    if (b3 == 0x9C || b3 == 0x9D) return 3;
  }
  return 0;
}

}  // namespace detail

// Maximal spans between paired double quotes with at least min_len tokens.
// The pairing automaton alternates open/close; a quote left open at the end
// of the body discards its span.
inline std::vector<Quotation> extract_quotations(const Article& article, int min_len,
                                                 int context_window) {
  std::vector<std::pair<std::size_t, std::size_t>> char_spans;
  bool open = false;
  std::size_t open_pos = 0;
  const std::string& body = article.body;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const std::size_t qlen = detail::double_quote_len(body, i);
    if (qlen == 0) continue;
    if (!open) {
      open = true;
      open_pos = i + qlen;
    } else {
      char_spans.emplace_back(open_pos, i);
      open = false;
    }
    i += qlen - 1;
  }

  // Token index ranges covered by each character span.
  std::vector<std::pair<std::size_t, std::size_t>> token_spans;
  for (const auto& [cb, ce] : char_spans) {
    std::size_t tb = article.tokens.size(), te = 0;
    for (std::size_t t = 0; t < article.tokens.size(); ++t) {
      if (article.tokens[t].begin >= cb && article.tokens[t].end <= ce) {
        tb = std::min(tb, t);
        te = std::max(te, t + 1);
      }
    }
    if (te > tb) token_spans.emplace_back(tb, te);
  }

  std::vector<bool> inside(article.tokens.size(), false);
  for (const auto& [tb, te] : token_spans)
    for (std::size_t t = tb; t < te; ++t) inside[t] = true;

  std::vector<Quotation> out;
  for (const auto& [tb, te] : token_spans) {
    if (te - tb < static_cast<std::size_t>(min_len)) continue;
    Quotation q;
    q.article_id = article.id;
    q.token_begin = tb;
    q.token_end = te;
    for (std::size_t t = tb; t < te; ++t) q.tokens.push_back(article.tokens[t].text);
    // Context: the window positions on each side, minus tokens that sit
    // inside any quotation span.
    const std::size_t before_lo =
        tb >= static_cast<std::size_t>(context_window) ? tb - static_cast<std::size_t>(context_window) : 0;
    for (std::size_t t = before_lo; t < tb; ++t)
      if (!inside[t]) q.context_before.push_back(article.tokens[t].text);
    const std::size_t after_hi =
        std::min(article.tokens.size(), te + static_cast<std::size_t>(context_window));
    for (std::size_t t = te; t < after_hi; ++t)
      if (!inside[t]) q.context_after.push_back(article.tokens[t].text);
    out.push_back(std::move(q));
  }
  return out;
}

namespace detail {

// Best containment overlap of the quotation multiset against any contiguous
// window of equal length in the turn, sliding one token at a time. Returns
// {score, window_begin}; earliest window wins ties.
inline std::pair<double, std::size_t> best_window_overlap(
    const std::vector<std::string>& quote_tokens, const std::vector<std::string>& turn_tokens) {
  if (quote_tokens.empty() || turn_tokens.empty()) return {0.0, 0};
  const std::size_t w = std::min(quote_tokens.size(), turn_tokens.size());

  std::unordered_map<std::string, int> need;
  for (const auto& t : quote_tokens) ++need[t];

  // window[t] - need[t] surplus bookkeeping: intersection size changes by
  // +-1 only when a token's window count crosses its needed count.
  std::unordered_map<std::string, int> have;
  std::size_t inter = 0;
  auto add = [&](const std::string& t) {
    auto it = need.find(t);
    if (it == need.end()) return;
    if (have[t] < it->second) ++inter;
    ++have[t];
  };
  auto remove = [&](const std::string& t) {
    auto it = need.find(t);
    if (it == need.end()) return;
    --have[t];
    if (have[t] < it->second) --inter;
  };

  for (std::size_t i = 0; i < w; ++i) add(turn_tokens[i]);
  std::size_t best_inter = inter, best_pos = 0;
  for (std::size_t i = w; i < turn_tokens.size(); ++i) {
    add(turn_tokens[i]);
    remove(turn_tokens[i - w]);
    if (inter > best_inter) {
      best_inter = inter;
      best_pos = i - w + 1;
    }
  }
  return {static_cast<double>(best_inter) / static_cast<double>(quote_tokens.size()), best_pos};
}

}  // namespace detail

// Matches a quotation against every turn of the debate and returns the
// best-scoring turn if its overlap reaches theta. A quotation matches at
// most one turn; ties go to the earliest turn.
inline std::optional<QuoteMatch> match_quotation(const Quotation& q, const Debate& debate,
                                                 double theta,
                                                 double* best_score_out = nullptr) {
  if (theta <= 0.0 || theta > 1.0) throw config_error("theta must be in (0, 1]");
  double best = -1.0;
  int best_turn = -1;
  std::size_t best_pos = 0;
  for (const auto& turn : debate.turns) {
    const auto turn_tokens = turn.all_tokens();
    auto [score, pos] = detail::best_window_overlap(q.tokens, turn_tokens);
    if (score > best + 1e-12) {
      best = score;
      best_turn = turn.index;
      best_pos = pos;
    }
  }
  if (best_score_out) *best_score_out = best < 0 ? 0.0 : best;
  if (best_turn < 0 || best < theta) return std::nullopt;

  const Turn& turn = debate.turns[static_cast<std::size_t>(best_turn)];
  const std::size_t w = std::min(q.tokens.size(), turn.all_tokens().size());

  QuoteMatch m;
  m.article_id = q.article_id;
  m.token_begin = q.token_begin;
  m.token_end = q.token_end;
  m.debate_id = debate.id;
  m.turn_index = best_turn;
  m.overlap_score = best;

  // Credit sentences that contribute at least one content token to the
  // best-scoring window.
  std::size_t offset = 0;
  for (const auto& s : turn.sentences) {
    const std::size_t s_begin = offset;
    const std::size_t s_end = offset + s.tokens.size();
    offset = s_end;
    const std::size_t lo = std::max(s_begin, best_pos);
    const std::size_t hi = std::min(s_end, best_pos + w);
    if (lo >= hi) continue;
    bool has_content = false;
    for (std::size_t t = lo; t < hi && !has_content; ++t)
      has_content = is_content_word(s.tokens[t - s_begin]);
    if (has_content) m.matched_sentence_ids.push_back(s.id);
  }
  if (m.matched_sentence_ids.empty()) return std::nullopt;
  return m;
}

// Per (sentence, outlet) quote counts and sentiment-context tallies.
struct QuoteIndex {
  struct Cell {
    int quote_count = 0;
    int pos_context = 0;
    int neg_context = 0;
  };

  std::string debate_id;
  std::map<std::pair<std::string, std::string>, Cell> cells;  // (sentence_id, outlet)
  std::map<std::string, int> sentence_totals;

  int total_count(const std::string& sentence_id) const {
    auto it = sentence_totals.find(sentence_id);
    return it == sentence_totals.end() ? 0 : it->second;
  }

  void add_match(const QuoteMatch& m, const std::string& outlet, int pos_hits, int neg_hits) {
    for (const auto& sid : m.matched_sentence_ids) {
      Cell& c = cells[{sid, outlet}];
      c.quote_count += 1;
      c.pos_context += pos_hits;
      c.neg_context += neg_hits;
      sentence_totals[sid] += 1;
    }
  }

  // Associative merge; partial indices built per worker combine in any order.
  void merge(const QuoteIndex& other) {
    for (const auto& [key, cell] : other.cells) {
      Cell& c = cells[key];
      c.quote_count += cell.quote_count;
      c.pos_context += cell.pos_context;
      c.neg_context += cell.neg_context;
    }
    for (const auto& [sid, n] : other.sentence_totals) sentence_totals[sid] += n;
  }
};

struct NearMiss {
  std::string article_id;
  std::size_t quotation_index = 0;
  double best_score = 0.0;
};

struct QuoteIndexResult {
  QuoteIndex index;
  std::vector<QuoteMatch> matches;
  std::vector<NearMiss> near_misses;
};

// Runs extraction and matching for every article of one debate and
// accumulates the quote index. Context sentiment hits are counted over the
// window tokens outside any quotation span.
inline QuoteIndexResult build_quote_index(const Debate& debate,
                                          const std::vector<Article>& articles,
                                          const Lexicon& posemo, const Lexicon& negemo,
                                          const MatchConfig& cfg) {
  QuoteIndexResult result;
  result.index.debate_id = debate.id;
  for (const auto& article : articles) {
    if (article.debate_id != debate.id) continue;
    const auto quotations = extract_quotations(article, cfg.min_quote_len, cfg.context_window);
    for (std::size_t qi = 0; qi < quotations.size(); ++qi) {
      const auto& q = quotations[qi];
      double best_score = 0.0;
      auto match = match_quotation(q, debate, cfg.theta, &best_score);
      if (!match) {
        if (best_score >= cfg.theta - cfg.near_miss_margin && best_score < cfg.theta)
          result.near_misses.push_back({article.id, qi, best_score});
        continue;
      }
      match->quotation_index = qi;
      std::vector<std::string> ctx = q.context_before;
      ctx.insert(ctx.end(), q.context_after.begin(), q.context_after.end());
      const int pos_hits = count_lexicon(ctx, posemo);
      const int neg_hits = count_lexicon(ctx, negemo);
      result.index.add_match(*match, article.outlet, pos_hits, neg_hits);
      result.matches.push_back(std::move(*match));
    }
  }
  return result;
}

struct MatcherEval {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<std::pair<std::string, int>> false_positives;  // (quotation key, turn)
  std::vector<std::pair<std::string, int>> false_negatives;
};

// Set-based precision/recall/F1 over (quotation key, turn index) pairs.
// Empty denominators report 0 by convention.
inline MatcherEval matcher_eval(const std::vector<std::pair<std::string, int>>& gold,
                                const std::vector<std::pair<std::string, int>>& predicted) {
  std::map<std::string, int> gold_map(gold.begin(), gold.end());
  std::map<std::string, int> pred_map(predicted.begin(), predicted.end());
  std::size_t tp = 0;
  MatcherEval e;
  for (const auto& [key, turn] : pred_map) {
    auto it = gold_map.find(key);
    if (it != gold_map.end() && it->second == turn)
      ++tp;
    else
      e.false_positives.emplace_back(key, turn);
  }
  for (const auto& [key, turn] : gold_map) {
    auto it = pred_map.find(key);
    if (it == pred_map.end() || it->second != turn) e.false_negatives.emplace_back(key, turn);
  }
  e.precision = pred_map.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(pred_map.size());
  e.recall = gold_map.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(gold_map.size());
  e.f1 = (e.precision + e.recall) == 0.0
             ? 0.0
             : 2.0 * e.precision * e.recall / (e.precision + e.recall);
  return e;
}

}  // namespace podium
