#include "kdv/profile_io.hpp"

#include <json.hpp>

#include "kdv/error.hpp"

namespace kdv {

std::string profile_to_json(const FeatureDictionary& profile, int indent) {
  nlohmann::ordered_json doc;
  const Provenance& p = profile.provenance();
  doc["user"] = p.user_id;
  doc["platforms"] = p.platforms;
  doc["sessions"] = p.sessions;
  nlohmann::ordered_json features = nlohmann::ordered_json::object();
  for (const auto& [key, values] : profile.entries()) features[to_string(key)] = values;
  doc["features"] = std::move(features);
  return doc.dump(indent);
}

FeatureDictionary profile_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    Provenance p;
    p.user_id = doc.at("user").get<std::string>();
    p.platforms = doc.at("platforms").get<std::set<std::string>>();
    p.sessions = doc.at("sessions").get<std::set<int>>();
    FeatureDictionary dict(std::move(p));
    for (const auto& [name, values] : doc.at("features").items()) {
      const auto list = values.get<std::vector<double>>();
      if (list.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "feature '" + name + "' has no values");
      }
      dict.add(parse_feature_key(name), list);
    }
    return dict;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("profile JSON: ") + e.what());
  }
}

}  // namespace kdv
