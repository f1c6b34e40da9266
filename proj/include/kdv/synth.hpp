#pragma once

// Reproducible synthetic typist corpora. Users share a population typing
// model; `separation` scales how far each user's parameters drift from it.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kdv/ingest.hpp"

namespace kdv {

struct LogNormalParams {
  double location = 0.0;  // mean of log(ms)
  double scale = 0.1;     // std of log(ms)
  bool operator==(const LogNormalParams&) const = default;
};

struct NormalParams {
  double mean = 0.0;  // ms
  double std = 1.0;   // ms
  bool operator==(const NormalParams&) const = default;
};

struct TypistModel {
  std::map<std::string, LogNormalParams> hold;  // canonical key label
  std::map<std::string, NormalParams> flight;   // "first|second"
  std::vector<std::string> vocabulary;
  std::vector<double> word_weights;
  std::map<std::string, double> verbosity;  // platform -> mean keystrokes per session

  bool operator==(const TypistModel&) const = default;
};

struct SynthSpec {
  std::uint64_t seed = 1;
  int n_users = 26;
  std::vector<std::string> platforms = {"F", "I", "T"};
  int sessions = 6;
  double separation = 1.0;
  unsigned jobs = 1;
};

// "u01", "u02", ... zero-padded to the width of n_users.
std::string synth_user_id(int index, int n_users);

std::vector<TypistModel> sample_models(const SynthSpec& spec);

// One session log per (user, platform, session); every keystroke is a
// PRESS/RELEASE pair with release after press.
Corpus generate_corpus(const SynthSpec& spec);

// Mean absolute difference of hold locations and flight means, averaged over
// all user pairs. Used to compare spread across separation levels.
double mean_pairwise_distance(const std::vector<TypistModel>& models);

}  // namespace kdv
