#include "kdv/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "kdv/error.hpp"

namespace kdv {
namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string upper_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Number of UTF-8 code points, assuming well-formed input.
std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

const std::unordered_map<std::string, std::string>& named_keys() {
  static const std::unordered_map<std::string, std::string> table = {
      {"space", "SPACE"},        {" ", "SPACE"},
      {"enter", "ENTER"},        {"return", "ENTER"},
      {"tab", "TAB"},            {"backspace", "BACKSPACE"},
      {"shift", "SHIFT"},        {"shift_l", "SHIFT"},
      {"shift_r", "SHIFT"},      {"lshift", "SHIFT"},
      {"rshift", "SHIFT"},       {"ctrl", "CTRL"},
      {"ctrl_l", "CTRL"},        {"ctrl_r", "CTRL"},
      {"control", "CTRL"},       {"alt", "ALT"},
      {"alt_l", "ALT"},          {"alt_r", "ALT"},
      {"alt_gr", "ALT"},         {"cmd", "META"},
      {"cmd_l", "META"},         {"cmd_r", "META"},
      {"meta", "META"},          {"super", "META"},
      {"win", "META"},           {"caps_lock", "CAPSLOCK"},
      {"capslock", "CAPSLOCK"},  {"esc", "ESC"},
      {"escape", "ESC"},         {"delete", "DELETE"},
      {"del", "DELETE"},         {"up", "UP"},
      {"down", "DOWN"},          {"left", "LEFT"},
      {"right", "RIGHT"},        {"home", "HOME"},
      {"end", "END"},            {"page_up", "PAGEUP"},
      {"page_down", "PAGEDOWN"}, {"insert", "INSERT"},
      {",", "COMMA"},            {"comma", "COMMA"},
      {"|", "PIPE"},             {"pipe", "PIPE"},
  };
  return table;
}

const std::set<std::string, std::less<>>& modifier_keys() {
  static const std::set<std::string, std::less<>> mods = {"SHIFT", "CTRL", "ALT",
                                                          "META", "CAPSLOCK"};
  return mods;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_double(std::string_view s) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

struct RowBuilder {
  SessionLog log;
  double last_time = -1.0;
};

}  // namespace

std::string to_string(const SessionKey& key) {
  return key.user_id + "/" + key.platform + "/" + std::to_string(key.session_id);
}

std::string canonical_key(std::string_view raw) {
  std::string_view s = raw;
  // pynput-style quoting: 'a'
  if (s.size() >= 3 && s.front() == '\'' && s.back() == '\'') {
    s = s.substr(1, s.size() - 2);
  }
  if (s.empty()) return {};

  if (s.size() > 4 && lower_ascii(s.substr(0, 4)) == "key.") s.remove_prefix(4);

  const std::string lowered = lower_ascii(s);
  if (const auto it = named_keys().find(lowered); it != named_keys().end()) {
    return it->second;
  }
  if (utf8_length(s) == 1) return lowered;
  // Already-canonical or unknown special key: uppercase, dots flattened.
  std::string name = upper_ascii(s);
  std::replace(name.begin(), name.end(), '.', '_');
  return name;
}

std::string canonical_platform(std::string_view raw) {
  const std::string lowered = lower_ascii(trim(raw));
  if (lowered == "f" || lowered == "facebook") return "F";
  if (lowered == "i" || lowered == "instagram") return "I";
  if (lowered == "t" || lowered == "twitter" || lowered == "x") return "T";
  return std::string(trim(raw));
}

std::optional<std::string> printable_text(std::string_view canonical) {
  if (canonical == "COMMA") return std::string(",");
  if (canonical == "PIPE") return std::string("|");
  if (!canonical.empty() && utf8_length(canonical) == 1) {
    const unsigned char c = static_cast<unsigned char>(canonical.front());
    if (c < 0x80 && (std::isspace(c) || !std::isprint(c))) return std::nullopt;
    return std::string(canonical);
  }
  return std::nullopt;
}

bool is_modifier(std::string_view canonical) {
  return modifier_keys().contains(canonical);
}

ParseResult parse_log(std::string_view text, const ParseOptions& options) {
  if (trim(text).empty()) throw Error(ErrorCode::kEmptyInput, "log is empty");

  ParseResult result;
  std::map<SessionKey, RowBuilder> builders;

  auto reject = [&](std::size_t row, std::string reason) {
    if (options.strict) {
      throw Error(ErrorCode::kMalformedRow,
                  "row " + std::to_string(row) + ": " + reason);
    }
    result.rejected.push_back({row, std::move(reason)});
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool seen_header = false;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }

    if (!seen_header) {
      seen_header = true;
      if (line != kLogHeader) {
        throw Error(ErrorCode::kMalformedRow,
                    "row " + std::to_string(line_no) + ": expected header '" +
                        std::string(kLogHeader) + "'");
      }
      continue;
    }

    const auto fields = split_fields(line);
    if (fields.size() != 6) {
      reject(line_no, "expected 6 fields, got " + std::to_string(fields.size()));
      continue;
    }
    const std::string_view user = fields[0];
    const std::string platform = canonical_platform(fields[1]);
    if (user.empty()) {
      reject(line_no, "empty user_id");
      continue;
    }
    if (platform.empty()) {
      reject(line_no, "empty platform");
      continue;
    }
    const auto session = parse_int(fields[2]);
    if (!session || *session < 1) {
      reject(line_no, "bad session_id '" + std::string(fields[2]) + "'");
      continue;
    }
    std::string key = canonical_key(fields[3]);
    if (key.empty()) {
      reject(line_no, "empty key");
      continue;
    }
    Action action;
    if (fields[4] == "P") {
      action = Action::kPress;
    } else if (fields[4] == "R") {
      action = Action::kRelease;
    } else {
      reject(line_no, "unknown action '" + std::string(fields[4]) + "'");
      continue;
    }
    const auto time = parse_double(fields[5]);
    if (!time || *time < 0.0) {
      reject(line_no, "malformed timestamp '" + std::string(fields[5]) + "'");
      continue;
    }

    SessionKey skey{std::string(user), platform, *session};
    auto [it, inserted] = builders.try_emplace(skey);
    RowBuilder& b = it->second;
    if (inserted) {
      b.log.user_id = skey.user_id;
      b.log.platform = skey.platform;
      b.log.session_id = skey.session_id;
    }
    if (*time < b.last_time) ++result.reordered_events;
    b.last_time = *time;
    b.log.events.push_back({std::move(key), action, *time});
  }

  if (builders.empty()) {
    if (!result.rejected.empty()) {
      // Nothing usable survived lenient parsing.
      throw Error(ErrorCode::kMalformedRow,
                  "row " + std::to_string(result.rejected.front().row) + ": " +
                      result.rejected.front().reason);
    }
    throw Error(ErrorCode::kEmptyInput, "log has no event rows");
  }

  result.logs.reserve(builders.size());
  for (auto& [_, b] : builders) {
    std::stable_sort(b.log.events.begin(), b.log.events.end(),
                     [](const KeyEvent& a, const KeyEvent& c) { return a.time_ms < c.time_ms; });
    result.logs.push_back(std::move(b.log));
  }
  return result;
}

PairingResult pair_events(const SessionLog& log) {
  struct Pending {
    double press_ms;
    std::size_t order;
  };
  struct Emitted {
    PairedKeystroke pair;
    std::size_t order;
  };

  PairingResult result;
  std::map<std::string, Pending, std::less<>> down;
  std::vector<Emitted> emitted;
  std::size_t order = 0;

  for (const KeyEvent& e : log.events) {
    if (e.action == Action::kPress) {
      if (down.contains(e.key)) {
        ++result.summary.dropped_repeats;
        continue;
      }
      down.emplace(e.key, Pending{e.time_ms, order++});
    } else {
      const auto it = down.find(e.key);
      if (it == down.end()) {
        ++result.summary.dropped_orphan_releases;
        continue;
      }
      emitted.push_back({{e.key, it->second.press_ms, e.time_ms}, it->second.order});
      down.erase(it);
    }
  }
  result.summary.dropped_unreleased = down.size();

  // Press order is the order in which presses were accepted.
  std::sort(emitted.begin(), emitted.end(),
            [](const Emitted& a, const Emitted& b) { return a.order < b.order; });
  result.pairs.reserve(emitted.size());
  for (auto& e : emitted) result.pairs.push_back(std::move(e.pair));
  result.summary.paired = result.pairs.size();
  return result;
}

void Corpus::add(SessionLog log) {
  SessionKey key = log.key();
  if (logs_.contains(key)) {
    throw Error(ErrorCode::kDuplicateSession, to_string(key));
  }
  logs_.emplace(std::move(key), std::move(log));
}

const SessionLog* Corpus::find(const SessionKey& key) const {
  const auto it = logs_.find(key);
  return it == logs_.end() ? nullptr : &it->second;
}

std::vector<std::string> Corpus::roster() const {
  std::set<std::string> users;
  for (const auto& [key, _] : logs_) users.insert(key.user_id);
  return {users.begin(), users.end()};
}

std::set<std::string> Corpus::platforms() const {
  std::set<std::string> out;
  for (const auto& [key, _] : logs_) out.insert(key.platform);
  return out;
}

std::set<int> Corpus::sessions(const std::string& user_id,
                               const std::string& platform) const {
  std::set<int> out;
  for (auto it = logs_.lower_bound(SessionKey{user_id, platform, 0});
       it != logs_.end() && it->first.user_id == user_id && it->first.platform == platform;
       ++it) {
    out.insert(it->first.session_id);
  }
  return out;
}

std::string format_ms(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

namespace {

void append_rows(std::string& out, const SessionLog& log) {
  const std::string prefix =
      log.user_id + "," + log.platform + "," + std::to_string(log.session_id) + ",";
  for (const KeyEvent& e : log.events) {
    out += prefix;
    out += e.key;
    out += e.action == Action::kPress ? ",P," : ",R,";
    out += format_ms(e.time_ms);
    out += '\n';
  }
}

}  // namespace

std::string serialize(const SessionLog& log) {
  std::string out(kLogHeader);
  out += '\n';
  append_rows(out, log);
  return out;
}

std::string serialize(const Corpus& corpus) {
  std::string out(kLogHeader);
  out += '\n';
  for (const auto& [_, log] : corpus.logs()) append_rows(out, log);
  return out;
}

LoadResult load_corpus(const std::vector<std::filesystem::path>& paths,
                       const ParseOptions& options) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p, ec)) {
      files.push_back(p);
    } else {
      throw Error(ErrorCode::kIo, "cannot read '" + p.string() + "'");
    }
  }

  LoadResult result;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open '" + file.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    ParseResult parsed;
    try {
      parsed = parse_log(buf.str(), options);
    } catch (const Error& e) {
      throw Error(e.code(), file.string() + ": " + e.what());
    }
    for (const auto& r : parsed.rejected) {
      result.warnings.push_back(file.string() + ": row " + std::to_string(r.row) +
                                " rejected: " + r.reason);
    }
    if (parsed.reordered_events > 0) {
      result.warnings.push_back(file.string() + ": " +
                                std::to_string(parsed.reordered_events) +
                                " out-of-order event(s) re-sorted");
    }
    for (auto& log : parsed.logs) result.corpus.add(std::move(log));
  }
  return result;
}

}  // namespace kdv
