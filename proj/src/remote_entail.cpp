// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>
#include <json.hpp>

#include "internal/http_util.hpp"
#include "sampsel/errors.hpp"
#include "sampsel/scoring.hpp"

namespace sampsel::scoring {

bool HttpEntailmentPredicate::entails(std::string_view premise, std::string_view hypothesis) const {
  const auto url = internal::split_url(endpoint_);
  httplib::Client client(url.origin);
  client.set_connection_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
  client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);

  const std::string body =
      nlohmann::json{{"premise", std::string(premise)}, {"hypothesis", std::string(hypothesis)}}.dump();
  auto res = client.Post(url.base_path + "/entail", body, "application/json");
  if (!res) throw ScorerError("entail request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw ScorerError("entail service returned HTTP " + std::to_string(res->status));
  try {
    auto doc = nlohmann::json::parse(res->body);
    return doc.at("entails").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ScorerError(std::string("malformed entail response: ") + e.what());
  }
}

}  // namespace sampsel::scoring
