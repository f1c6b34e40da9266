#pragma once

// Key-event log ingestion: the canonical CSV interchange format, key label
// canonicalization, press/release pairing and the in-memory corpus.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace kdv {

enum class Action { kPress, kRelease };

struct KeyEvent {
  std::string key;
  Action action = Action::kPress;
  double time_ms = 0.0;

  bool operator==(const KeyEvent&) const = default;
};

struct SessionKey {
  std::string user_id;
  std::string platform;
  int session_id = 0;

  auto operator<=>(const SessionKey&) const = default;
};

std::string to_string(const SessionKey& key);

struct SessionLog {
  std::string user_id;
  std::string platform;
  int session_id = 0;
  std::vector<KeyEvent> events;  // sorted by time_ms, stable on ties

  SessionKey key() const { return {user_id, platform, session_id}; }
  bool operator==(const SessionLog&) const = default;
};

struct PairedKeystroke {
  std::string key;
  double press_ms = 0.0;
  double release_ms = 0.0;

  double hold_ms() const { return release_ms - press_ms; }
  bool operator==(const PairedKeystroke&) const = default;
};

struct PairingSummary {
  std::size_t paired = 0;
  std::size_t dropped_repeats = 0;         // PRESS while the key was already down
  std::size_t dropped_orphan_releases = 0; // RELEASE without a pending PRESS
  std::size_t dropped_unreleased = 0;      // PRESS never released before log end
};

struct PairingResult {
  std::vector<PairedKeystroke> pairs;  // ordered by press_ms
  PairingSummary summary;
};

// Header line of the canonical log format.
inline constexpr std::string_view kLogHeader =
    "user_id,platform,session_id,key,action,time_ms";

// Maps raw logger key names onto canonical labels: printable characters are
// lowercased, special keys get fixed uppercase names ("Key.shift_r" -> SHIFT,
// "," -> COMMA). Returns an empty string for an empty input.
std::string canonical_key(std::string_view raw);

// Facebook -> F, Instagram -> I, Twitter/X -> T (case-insensitive); any other
// label passes through unchanged.
std::string canonical_platform(std::string_view raw);

// Printable text a key contributes to a word, or nullopt for non-printable
// keys (SPACE, SHIFT, arrows, ...).
std::optional<std::string> printable_text(std::string_view canonical);

bool is_modifier(std::string_view canonical);

struct RejectedRow {
  std::size_t row = 0;  // 1-based line number in the input
  std::string reason;
};

struct ParseOptions {
  // Strict parsing throws MALFORMED_ROW on the first bad row; lenient parsing
  // records it in ParseResult::rejected and keeps going.
  bool strict = true;
};

struct ParseResult {
  std::vector<SessionLog> logs;  // ordered by SessionKey
  std::vector<RejectedRow> rejected;
  std::size_t reordered_events = 0;  // rows that arrived earlier than their predecessor
};

ParseResult parse_log(std::string_view text, const ParseOptions& options = {});

PairingResult pair_events(const SessionLog& log);

class Corpus {
 public:
  // Throws DUPLICATE_SESSION if the (user, platform, session) key exists.
  void add(SessionLog log);

  const SessionLog* find(const SessionKey& key) const;
  const std::map<SessionKey, SessionLog>& logs() const { return logs_; }
  std::size_t size() const { return logs_.size(); }
  bool empty() const { return logs_.empty(); }

  // Sorted lexicographically, each user once.
  std::vector<std::string> roster() const;
  std::set<std::string> platforms() const;
  std::set<int> sessions(const std::string& user_id,
                         const std::string& platform) const;

  bool operator==(const Corpus&) const = default;

 private:
  std::map<SessionKey, SessionLog> logs_;
};

// Canonical CSV for every log in the corpus, ordered by SessionKey.
std::string serialize(const Corpus& corpus);
std::string serialize(const SessionLog& log);

struct LoadResult {
  Corpus corpus;
  std::vector<std::string> warnings;
};

// Reads one CSV file or every *.csv file in a directory (sorted by name).
// Throws IO_ERROR for unreadable paths.
LoadResult load_corpus(const std::vector<std::filesystem::path>& paths,
                       const ParseOptions& options = {});

std::string format_ms(double value);

}  // namespace kdv
