#pragma once

#include "json.hpp"  // vendored nlohmann/json

#include "memsplit/hyperparams.hpp"

namespace memsplit {

inline void to_json(nlohmann::json& j, const SchedulePhases& s) {
  j = nlohmann::json{{"constant", s.constant_frac},
                     {"anneal", s.anneal_frac},
                     {"final", s.final_frac}};
}

inline void from_json(const nlohmann::json& j, SchedulePhases& s) {
  j.at("constant").get_to(s.constant_frac);
  j.at("anneal").get_to(s.anneal_frac);
  j.at("final").get_to(s.final_frac);
}

inline void to_json(nlohmann::json& j, const Hyperparams& hp) {
  j = nlohmann::json{{"lr", hp.lr},
                     {"weight_decay", hp.weight_decay},
                     {"dropout", hp.dropout},
                     {"momentum", hp.momentum},
                     {"epochs", hp.epochs},
                     {"schedule", hp.schedule},
                     {"label_smoothing", hp.label_smoothing},
                     {"batch_size", hp.batch_size},
                     {"seed", hp.seed}};
}

inline void from_json(const nlohmann::json& j, Hyperparams& hp) {
  j.at("lr").get_to(hp.lr);
  j.at("weight_decay").get_to(hp.weight_decay);
  j.at("dropout").get_to(hp.dropout);
  j.at("momentum").get_to(hp.momentum);
  j.at("epochs").get_to(hp.epochs);
  j.at("schedule").get_to(hp.schedule);
  j.at("label_smoothing").get_to(hp.label_smoothing);
  j.at("batch_size").get_to(hp.batch_size);
  j.at("seed").get_to(hp.seed);
}

}  // namespace memsplit
