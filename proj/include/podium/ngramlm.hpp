#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "podium/util.hpp"

namespace podium {

// Interpolated n-gram language model (n in {1,2,3}) with add-k smoothed
// unigrams and maximum-likelihood higher orders. An order whose context is
// unseen falls back to the next lower order, so the conditional
// distribution sums to 1 for every context.
class LanguageModel {
 public:
  static constexpr int kUnkId = 0;
  static constexpr int kBosId = 1;  // sentence-start padding, never predicted

  struct Options {
    int order = 3;
    int min_count = 1;
    double add_k = 1.0;
    std::vector<double> lambdas;  // low order first; empty -> defaults
  };

  static std::vector<double> default_lambdas(int order) {
    // 0.7 on the highest order, the rest split evenly below it.
    if (order <= 1) return {1.0};
    std::vector<double> l(static_cast<std::size_t>(order), 0.3 / (order - 1));
    l.back() = 0.7;
    return l;
  }

  static LanguageModel train(const std::vector<std::vector<std::string>>& sentences,
                             const Options& opts) {
    if (opts.order < 1 || opts.order > 3)
      throw config_error("language model order must be 1, 2 or 3");
    if (opts.min_count < 1) throw config_error("min_count must be >= 1");
    if (opts.add_k <= 0.0) throw config_error("add_k must be > 0");

    std::size_t total = 0;
    std::map<std::string, long> raw;
    for (const auto& sent : sentences)
      for (const auto& tok : sent) {
        ++raw[tok];
        ++total;
      }
    if (total == 0) throw data_error("language model training corpus is empty");

    LanguageModel lm;
    lm.order_ = opts.order;
    lm.add_k_ = opts.add_k;
    lm.lambdas_ = opts.lambdas.empty() ? default_lambdas(opts.order) : opts.lambdas;
    if (static_cast<int>(lm.lambdas_.size()) != opts.order)
      throw config_error("expected one interpolation weight per order");
    double lsum = 0.0;
    for (double l : lm.lambdas_) {
      if (l < 0.0) throw config_error("interpolation weights must be nonnegative");
      lsum += l;
    }
    if (std::abs(lsum - 1.0) > 1e-9)
      throw config_error("interpolation weights must sum to 1");

    lm.id_of_["<unk>"] = kUnkId;
    lm.id_of_["<s>"] = kBosId;
    lm.word_of_ = {"<unk>", "<s>"};
    for (const auto& [word, count] : raw) {
      if (count >= opts.min_count && word != "<unk>" && word != "<s>") {
        lm.id_of_[word] = static_cast<int>(lm.word_of_.size());
        lm.word_of_.push_back(word);
      }
    }

    lm.unigram_.assign(lm.word_of_.size(), 0);
    lm.total_tokens_ = 0;
    for (const auto& sent : sentences) {
      std::vector<int> ids;
      ids.reserve(sent.size() + static_cast<std::size_t>(opts.order - 1));
      for (int k = 0; k < opts.order - 1; ++k) ids.push_back(kBosId);
      for (const auto& tok : sent) ids.push_back(lm.lookup(tok));
      const std::size_t pad = static_cast<std::size_t>(opts.order - 1);
      for (std::size_t i = pad; i < ids.size(); ++i) {
        ++lm.unigram_[static_cast<std::size_t>(ids[i])];
        ++lm.total_tokens_;
        if (opts.order >= 2) lm.bump(2, ctx_key(ids[i - 1]), ids[i]);
        if (opts.order >= 3) lm.bump(3, ctx_key(ids[i - 2], ids[i - 1]), ids[i]);
      }
    }
    return lm;
  }

  int order() const { return order_; }
  std::size_t vocab_size() const { return word_of_.size() - 1; }  // excludes <s>

  // Prediction vocabulary: every word type plus <unk>, excluding <s>.
  std::vector<std::string> prediction_vocab() const {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < word_of_.size(); ++i)
      if (static_cast<int>(i) != kBosId) v.push_back(word_of_[i]);
    return v;
  }

  // Interpolated P(word | context); context longer than order-1 is truncated
  // to its most recent tokens, shorter contexts are padded with <s>.
  double prob(const std::string& word, const std::vector<std::string>& context) const {
    int prev1 = kBosId, prev2 = kBosId;
    if (!context.empty()) prev1 = lookup(context.back());
    if (context.size() >= 2) prev2 = lookup(context[context.size() - 2]);
    return prob_ids(lookup(word), prev2, prev1);
  }

  // Mean natural-log probability per token; empty input scores 0.
  double score(const std::vector<std::string>& tokens) const {
    if (tokens.empty()) return 0.0;
    double sum = 0.0;
    int prev1 = kBosId, prev2 = kBosId;
    for (const auto& t : tokens) {
      const int id = lookup(t);
      sum += std::log(prob_ids(id, prev2, prev1));
      prev2 = prev1;
      prev1 = id;
    }
    return sum / static_cast<double>(tokens.size());
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["format"] = "podium-lm";
    j["format_version"] = 1;
    j["order"] = order_;
    j["add_k"] = add_k_;
    j["lambdas"] = lambdas_;
    j["vocab"] = word_of_;
    j["unigram"] = unigram_;
    j["total_tokens"] = total_tokens_;
    for (int k = 2; k <= order_; ++k) {
      std::vector<std::vector<long>> rows;
      const auto& table = k == 2 ? bigram_ : trigram_;
      for (const auto& [ctx, follows] : table) {
        for (const auto& [tok, count] : follows) {
          if (k == 2)
            rows.push_back({static_cast<long>(ctx), tok, count});
          else
            rows.push_back({static_cast<long>(ctx >> 32), static_cast<long>(ctx & 0xffffffffull),
                            tok, count});
        }
      }
      std::sort(rows.begin(), rows.end());
      j[k == 2 ? "bigram" : "trigram"] = rows;
    }
    return j;
  }

  static LanguageModel from_json(const nlohmann::json& j) {
    if (!j.contains("format") || j.at("format") != "podium-lm")
      throw data_error("not a podium language model file");
    if (j.at("format_version").get<int>() != 1)
      throw data_error("unsupported language model format version");
    LanguageModel lm;
    lm.order_ = j.at("order").get<int>();
    lm.add_k_ = j.at("add_k").get<double>();
    lm.lambdas_ = j.at("lambdas").get<std::vector<double>>();
    lm.word_of_ = j.at("vocab").get<std::vector<std::string>>();
    lm.unigram_ = j.at("unigram").get<std::vector<long>>();
    lm.total_tokens_ = j.at("total_tokens").get<long>();
    for (std::size_t i = 0; i < lm.word_of_.size(); ++i)
      lm.id_of_[lm.word_of_[i]] = static_cast<int>(i);
    if (lm.order_ >= 2)
      for (const auto& row : j.at("bigram"))
        lm.bigram_[static_cast<std::uint64_t>(row.at(0).get<long>())]
                  [row.at(1).get<int>()] = row.at(2).get<long>();
    if (lm.order_ >= 3)
      for (const auto& row : j.at("trigram")) {
        const std::uint64_t ctx = (static_cast<std::uint64_t>(row.at(0).get<long>()) << 32) |
                                  static_cast<std::uint64_t>(row.at(1).get<long>());
        lm.trigram_[ctx][row.at(2).get<int>()] = row.at(3).get<long>();
      }
    lm.rebuild_context_totals();
    return lm;
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write language model: " + path);
    out << to_json().dump(0) << "\n";
  }

  static LanguageModel load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open language model: " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw data_error("invalid language model file " + path + ": " + e.what());
    }
    return from_json(j);
  }

  std::uint64_t fingerprint() const { return fnv1a64(to_json().dump()); }

 private:
  static std::uint64_t ctx_key(int a) { return static_cast<std::uint64_t>(a); }
  static std::uint64_t ctx_key(int a, int b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
  }

  int lookup(const std::string& word) const {
    auto it = id_of_.find(word);
    return it == id_of_.end() ? kUnkId : it->second;
  }

  void bump(int k, std::uint64_t ctx, int tok) {
    auto& table = k == 2 ? bigram_ : trigram_;
    auto& totals = k == 2 ? bigram_ctx_total_ : trigram_ctx_total_;
    ++table[ctx][tok];
    ++totals[ctx];
  }

  void rebuild_context_totals() {
    bigram_ctx_total_.clear();
    trigram_ctx_total_.clear();
    for (const auto& [ctx, follows] : bigram_)
      for (const auto& [tok, c] : follows) bigram_ctx_total_[ctx] += c;
    for (const auto& [ctx, follows] : trigram_)
      for (const auto& [tok, c] : follows) trigram_ctx_total_[ctx] += c;
  }

  // P_1 with add-k smoothing over the prediction vocabulary.
  double unigram_prob(int tok) const {
    const double v = static_cast<double>(vocab_size());
    const double c = tok == kBosId ? 0.0 : static_cast<double>(unigram_[static_cast<std::size_t>(tok)]);
    return (c + add_k_) / (static_cast<double>(total_tokens_) + add_k_ * v);
  }

  // P_k with fallback to order k-1 when the context is unseen.
  double order_prob(int k, int tok, int prev2, int prev1) const {
    if (k == 1) return unigram_prob(tok);
    const std::uint64_t key = k == 2 ? ctx_key(prev1) : ctx_key(prev2, prev1);
    const auto& totals = k == 2 ? bigram_ctx_total_ : trigram_ctx_total_;
    auto tot = totals.find(key);
    if (tot == totals.end() || tot->second == 0) return order_prob(k - 1, tok, prev2, prev1);
    const auto& table = k == 2 ? bigram_ : trigram_;
    auto row = table.find(key);
    auto cell = row->second.find(tok);
    const long c = cell == row->second.end() ? 0 : cell->second;
    return static_cast<double>(c) / static_cast<double>(tot->second);
  }

  double prob_ids(int tok, int prev2, int prev1) const {
    double p = 0.0;
    for (int k = 1; k <= order_; ++k)
      p += lambdas_[static_cast<std::size_t>(k - 1)] * order_prob(k, tok, prev2, prev1);
    return p;
  }

  int order_ = 1;
  double add_k_ = 1.0;
  std::vector<double> lambdas_;
  std::unordered_map<std::string, int> id_of_;
  std::vector<std::string> word_of_;
  std::vector<long> unigram_;
  long total_tokens_ = 0;
  std::unordered_map<std::uint64_t, std::unordered_map<int, long>> bigram_;
  std::unordered_map<std::uint64_t, std::unordered_map<int, long>> trigram_;
  std::unordered_map<std::uint64_t, long> bigram_ctx_total_;
  std::unordered_map<std::uint64_t, long> trigram_ctx_total_;
};

}  // namespace podium
