#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "podium/text.hpp"
#include "podium/util.hpp"

namespace podium {

enum class DebateType { general, vice, democratic, republican };
enum class SpeakerRole { candidate, moderator, other };

inline std::string to_string(DebateType t) {
  switch (t) {
    case DebateType::general: return "general";
    case DebateType::vice: return "vice";
    case DebateType::democratic: return "democratic";
    case DebateType::republican: return "republican";
  }
  return "general";
}

inline std::string to_string(SpeakerRole r) {
  switch (r) {
    case SpeakerRole::candidate: return "candidate";
    case SpeakerRole::moderator: return "moderator";
    case SpeakerRole::other: return "other";
  }
  return "other";
}

inline DebateType debate_type_from(const std::string& s, int line) {
  if (s == "general") return DebateType::general;
  if (s == "vice") return DebateType::vice;
  if (s == "democratic") return DebateType::democratic;
  if (s == "republican") return DebateType::republican;
  throw data_error("line " + std::to_string(line) + ": unknown debate_type '" + s + "'");
}

inline SpeakerRole speaker_role_from(const std::string& s, int line) {
  if (s == "candidate") return SpeakerRole::candidate;
  if (s == "moderator") return SpeakerRole::moderator;
  if (s == "other") return SpeakerRole::other;
  throw data_error("line " + std::to_string(line) + ": unknown speaker_role '" + s + "'");
}

struct Sentence {
  std::string id;  // "<debate_id>:<turn_index>:<sentence_index>"
  std::string text;
  std::vector<std::string> tokens;
  int turn_index = 0;
  int sentence_index = 0;
};

struct Turn {
  int index = 0;
  std::string speaker;
  SpeakerRole speaker_role = SpeakerRole::other;
  std::vector<Sentence> sentences;
  std::string raw_text;

  std::vector<std::string> all_tokens() const {
    std::vector<std::string> out;
    for (const auto& s : sentences) out.insert(out.end(), s.tokens.begin(), s.tokens.end());
    return out;
  }
};

struct Debate {
  std::string id;
  int election_year = 0;
  DebateType debate_type = DebateType::general;
  CivilDate date;
  std::vector<Turn> turns;

  std::size_t sentence_count() const {
    std::size_t n = 0;
    for (const auto& t : turns) n += t.sentences.size();
    return n;
  }

  std::vector<const Sentence*> all_sentences() const {
    std::vector<const Sentence*> out;
    for (const auto& t : turns)
      for (const auto& s : t.sentences) out.push_back(&s);
    return out;
  }

  const Sentence* find_sentence(const std::string& sentence_id) const {
    for (const auto& t : turns)
      for (const auto& s : t.sentences)
        if (s.id == sentence_id) return &s;
    return nullptr;
  }
};

struct Article {
  std::string id;
  std::string outlet;
  CivilDate publish_date;
  std::string debate_id;
  std::string body;
  std::vector<TokenSpan> tokens;
};

struct Warning {
  int line = 0;  // 1-based input line, 0 when not file-bound
  std::string message;
};

inline std::string make_sentence_id(const std::string& debate_id, int turn, int sent) {
  return debate_id + ":" + std::to_string(turn) + ":" + std::to_string(sent);
}

// Splits turn text into Sentence records, tokenizing each.
inline std::vector<Sentence> build_sentences(const std::string& debate_id, int turn_index,
                                             const std::string& text) {
  std::vector<Sentence> out;
  int si = 0;
  for (auto& span : segment_sentences(text)) {
    Sentence s;
    s.text = span;
    s.tokens = tokenize(s.text);
    s.turn_index = turn_index;
    s.sentence_index = si;
    s.id = make_sentence_id(debate_id, turn_index, si);
    ++si;
    out.push_back(std::move(s));
  }
  return out;
}

namespace detail {

struct RawTurn {
  int line = 0;
  std::string debate_id;
  int election_year = 0;
  DebateType debate_type{};
  CivilDate date;
  std::string speaker;
  SpeakerRole role{};
  std::string text;
};

inline nlohmann::json parse_jsonl_line(const std::string& line, int lineno) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw data_error("line " + std::to_string(lineno) + ": invalid JSON: " + e.what());
  }
}

template <typename T>
T require_field(const nlohmann::json& j, const char* key, int lineno) {
  if (!j.contains(key))
    throw data_error("line " + std::to_string(lineno) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw data_error("line " + std::to_string(lineno) + ": field '" + key +
                     "' has the wrong type");
  }
}

}  // namespace detail

// Loads a transcript JSONL file (one object per turn, possibly several
// debates per file). Consecutive same-speaker turns are merged with a
// warning; empty turns are dropped with a warning.
inline std::vector<Debate> load_debates(std::istream& in, std::vector<Warning>* warnings) {
  std::vector<detail::RawTurn> raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto j = detail::parse_jsonl_line(line, lineno);
    detail::RawTurn t;
    t.line = lineno;
    t.debate_id = detail::require_field<std::string>(j, "debate_id", lineno);
    t.election_year = detail::require_field<int>(j, "election_year", lineno);
    t.debate_type = debate_type_from(
        detail::require_field<std::string>(j, "debate_type", lineno), lineno);
    t.date = parse_iso_date(detail::require_field<std::string>(j, "date", lineno));
    t.speaker = detail::require_field<std::string>(j, "speaker", lineno);
    t.role = speaker_role_from(detail::require_field<std::string>(j, "speaker_role", lineno),
                               lineno);
    t.text = detail::require_field<std::string>(j, "text", lineno);
    if (t.election_year < 1960 || t.election_year > 2100)
      throw data_error("line " + std::to_string(lineno) + ": election_year " +
                       std::to_string(t.election_year) + " outside [1960, 2100]");
    raw.push_back(std::move(t));
  }

  // Group turns by debate id, keeping first-seen order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<detail::RawTurn>> grouped;
  for (auto& t : raw) {
    if (grouped.find(t.debate_id) == grouped.end()) order.push_back(t.debate_id);
    grouped[t.debate_id].push_back(std::move(t));
  }

  std::vector<Debate> debates;
  for (const auto& id : order) {
    auto& turns = grouped[id];
    Debate d;
    d.id = id;
    d.election_year = turns.front().election_year;
    d.debate_type = turns.front().debate_type;
    d.date = turns.front().date;
    for (const auto& t : turns) {
      if (t.election_year != d.election_year || t.debate_type != d.debate_type ||
          !(t.date == d.date))
        throw data_error("line " + std::to_string(t.line) + ": debate '" + id +
                         "' has inconsistent metadata across turns");
    }
    int idx = 0;
    for (std::size_t i = 0; i < turns.size(); ++i) {
      std::string text = turns[i].text;
      const std::string speaker = turns[i].speaker;
      while (i + 1 < turns.size() && turns[i + 1].speaker == speaker) {
        if (warnings)
          warnings->push_back({turns[i + 1].line,
                               "debate '" + id + "': merged consecutive turn by '" + speaker +
                                   "' into previous turn"});
        text += " " + turns[i + 1].text;
        ++i;
      }
      Turn turn;
      turn.index = idx;
      turn.speaker = speaker;
      turn.speaker_role = turns[i].role;
      turn.raw_text = text;
      turn.sentences = build_sentences(id, idx, text);
      if (turn.sentences.empty()) {
        if (warnings)
          warnings->push_back({turns[i].line, "debate '" + id + "': dropped empty turn by '" +
                                                  speaker + "'"});
        continue;
      }
      d.turns.push_back(std::move(turn));
      ++idx;
    }
    if (d.turns.empty())
      throw data_error("debate '" + id + "' has no non-empty turns");
    debates.push_back(std::move(d));
  }
  return debates;
}

inline std::vector<Debate> load_debates_file(const std::string& path,
                                             std::vector<Warning>* warnings) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open transcript file: " + path);
  return load_debates(in, warnings);
}

inline Debate load_debate_file(const std::string& path, std::vector<Warning>* warnings) {
  auto all = load_debates_file(path, warnings);
  if (all.size() != 1)
    throw data_error("expected exactly one debate in " + path + ", found " +
                     std::to_string(all.size()));
  return std::move(all.front());
}

// Loads articles, rejecting (with a warning record) any article whose
// publish date is outside [debate date, debate date + 7 days] or whose
// debate_id is unknown.
inline std::vector<Article> load_articles(std::istream& in,
                                          const std::vector<Debate>& debates,
                                          std::vector<Warning>* warnings) {
  std::map<std::string, long> debate_days;
  for (const auto& d : debates) debate_days[d.id] = days_from_civil(d.date);

  std::vector<Article> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto j = detail::parse_jsonl_line(line, lineno);
    Article a;
    a.id = detail::require_field<std::string>(j, "article_id", lineno);
    a.outlet = detail::require_field<std::string>(j, "outlet", lineno);
    a.publish_date = parse_iso_date(detail::require_field<std::string>(j, "date", lineno));
    a.debate_id = detail::require_field<std::string>(j, "debate_id", lineno);
    a.body = detail::require_field<std::string>(j, "body", lineno);

    auto it = debate_days.find(a.debate_id);
    if (it == debate_days.end()) {
      if (warnings)
        warnings->push_back({lineno, "article '" + a.id + "' references unknown debate '" +
                                         a.debate_id + "'; skipped"});
      continue;
    }
    const long delta = days_from_civil(a.publish_date) - it->second;
    if (delta < 0 || delta > 7) {
      if (warnings)
        warnings->push_back({lineno, "article '" + a.id + "' dated " +
                                         std::to_string(delta) +
                                         " days from debate; outside the 7-day window; skipped"});
      continue;
    }
    a.tokens = tokenize_with_spans(a.body);
    out.push_back(std::move(a));
  }
  return out;
}

inline std::vector<Article> load_articles_file(const std::string& path,
                                               const std::vector<Debate>& debates,
                                               std::vector<Warning>* warnings) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open article file: " + path);
  return load_articles(in, debates, warnings);
}

// Normalized transcript dump: one turn per line, same schema as the input.
// load(serialize(load(x))) == load(x) once merging has happened.
inline std::string serialize_debates(const std::vector<Debate>& debates) {
  std::ostringstream out;
  for (const auto& d : debates) {
    for (const auto& t : d.turns) {
      nlohmann::json j;
      j["debate_id"] = d.id;
      j["election_year"] = d.election_year;
      j["debate_type"] = to_string(d.debate_type);
      j["date"] = format_iso_date(d.date);
      j["speaker"] = t.speaker;
      j["speaker_role"] = to_string(t.speaker_role);
      j["text"] = t.raw_text;
      out << j.dump() << "\n";
    }
  }
  return out.str();
}

}  // namespace podium
