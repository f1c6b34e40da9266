#include "kdv/features.hpp"

#include <algorithm>
#include <optional>

#include "kdv/error.hpp"

namespace kdv {

FeatureKinds parse_feature_kinds(std::string_view text) {
  if (text == "all") return FeatureKinds::kAll;
  FeatureKinds kinds = FeatureKinds::kNone;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find_first_of(",+", start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view token = text.substr(start, end - start);
    if (token == "unigraph") {
      kinds = kinds | FeatureKinds::kUnigraph;
    } else if (token == "digraph") {
      kinds = kinds | FeatureKinds::kDigraph;
    } else if (token == "word") {
      kinds = kinds | FeatureKinds::kWordHold;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown feature kind '" + std::string(token) + "'");
    }
    start = end + 1;
  }
  return kinds;
}

std::string to_string(FeatureKinds kinds) {
  if (kinds == FeatureKinds::kAll) return "all";
  std::string out;
  auto append = [&](FeatureKind k, const char* name) {
    if (!contains(kinds, k)) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  append(FeatureKind::kUnigraph, "unigraph");
  append(FeatureKind::kDigraph, "digraph");
  append(FeatureKind::kWordHold, "word");
  return out;
}

std::string to_string(const FeatureKey& key) {
  switch (key.kind) {
    case FeatureKind::kUnigraph: return "U:" + key.label;
    case FeatureKind::kDigraph: return "D:" + key.label;
    case FeatureKind::kWordHold: return "W:" + key.label;
  }
  return key.label;
}

FeatureKey parse_feature_key(std::string_view text) {
  if (text.size() >= 3 && text[1] == ':') {
    const std::string label(text.substr(2));
    switch (text[0]) {
      case 'U': return {FeatureKind::kUnigraph, label};
      case 'D':
        if (label.find('|') != std::string::npos) return {FeatureKind::kDigraph, label};
        break;
      case 'W': return {FeatureKind::kWordHold, label};
      default: break;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "bad feature key '" + std::string(text) + "'");
}

void FeatureDictionary::add(const FeatureKey& key, std::span<const double> values) {
  if (values.empty()) return;
  auto& dst = entries_[key];
  dst.insert(dst.end(), values.begin(), values.end());
}

std::span<const double> FeatureDictionary::values(const FeatureKey& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return {};
  return it->second;
}

std::size_t FeatureDictionary::value_count() const {
  std::size_t n = 0;
  for (const auto& [_, v] : entries_) n += v.size();
  return n;
}

FeatureDictionary FeatureDictionary::restricted_to(FeatureKinds kinds) const {
  FeatureDictionary out(provenance_);
  for (const auto& [key, values] : entries_) {
    if (kdv::contains(kinds, key.kind)) out.entries_.emplace(key, values);
  }
  return out;
}

FeatureDictionary extract_unigraphs(std::span<const PairedKeystroke> pairs) {
  FeatureDictionary dict;
  for (const auto& p : pairs) dict.add(FeatureKey::unigraph(p.key), p.hold_ms());
  return dict;
}

FeatureDictionary extract_digraphs(std::span<const PairedKeystroke> pairs) {
  FeatureDictionary dict;
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    const auto& prev = pairs[i - 1];
    const auto& next = pairs[i];
    dict.add(FeatureKey::digraph(prev.key, next.key), next.press_ms - prev.release_ms);
  }
  return dict;
}

FeatureDictionary extract_wordholds(std::span<const PairedKeystroke> pairs) {
  FeatureDictionary dict;
  std::string word;
  std::optional<double> first_press;
  double last_release = 0.0;

  auto flush = [&] {
    if (first_press) dict.add(FeatureKey::word(word), last_release - *first_press);
    word.clear();
    first_press.reset();
  };

  for (const auto& p : pairs) {
    if (const auto text = printable_text(p.key)) {
      if (!first_press) first_press = p.press_ms;
      word += *text;
      last_release = p.release_ms;
    } else if (!is_modifier(p.key)) {
      // Whitespace, BACKSPACE and every other non-printable key end the word.
      flush();
    }
  }
  flush();
  return dict;
}

FeatureDictionary extract_session(const SessionLog& log, FeatureKinds kinds) {
  const PairingResult paired = pair_events(log);
  FeatureDictionary dict(Provenance{log.user_id, {log.platform}, {log.session_id}});
  auto absorb = [&](const FeatureDictionary& part) {
    for (const auto& [key, values] : part.entries()) dict.add(key, values);
  };
  if (contains(kinds, FeatureKind::kUnigraph)) absorb(extract_unigraphs(paired.pairs));
  if (contains(kinds, FeatureKind::kDigraph)) absorb(extract_digraphs(paired.pairs));
  if (contains(kinds, FeatureKind::kWordHold)) absorb(extract_wordholds(paired.pairs));
  return dict;
}

FeatureDictionary merge(std::span<const FeatureDictionary> dicts) {
  FeatureDictionary out;
  bool first = true;
  for (const auto& d : dicts) {
    const Provenance& p = d.provenance();
    if (first) {
      out.provenance().user_id = p.user_id;
      first = false;
    } else if (p.user_id != out.provenance().user_id) {
      throw Error(ErrorCode::kMixedUser,
                  "'" + out.provenance().user_id + "' vs '" + p.user_id + "'");
    }
    out.provenance().platforms.insert(p.platforms.begin(), p.platforms.end());
    out.provenance().sessions.insert(p.sessions.begin(), p.sessions.end());
    for (const auto& [key, values] : d.entries()) out.add(key, values);
  }
  return out;
}

std::vector<FeatureKey> common_features(const FeatureDictionary& a, const FeatureDictionary& b) {
  std::vector<FeatureKey> common;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() && ib != b.entries().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      common.push_back(ia->first);
      ++ia;
      ++ib;
    }
  }
  return common;
}

}  // namespace kdv
