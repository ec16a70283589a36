#pragma once

// nlohmann::json bindings for the corpus types. The same shapes are used by
// the JSONL corpus files, the HTTP API and session snapshots.

#include <nlohmann/json.hpp>

#include "recipechat/corpus.hpp"

namespace recipechat {

void to_json(nlohmann::json& j, const Recipe& r);
/// Accepts `steps` as an array of strings; micro-steps are recomputed.
void from_json(const nlohmann::json& j, Recipe& r);

void to_json(nlohmann::json& j, const Turn& t);
void from_json(const nlohmann::json& j, Turn& t);

void to_json(nlohmann::json& j, const Conversation& c);
void from_json(const nlohmann::json& j, Conversation& c);

}  // namespace recipechat
