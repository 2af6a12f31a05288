// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>
#include <json.hpp>

#include "internal/http_util.hpp"
#include "sampsel/errors.hpp"
#include "sampsel/grammar.hpp"

namespace sampsel::grammar {

using json = nlohmann::json;

Parse remote_parse(std::string_view sentence, std::string_view endpoint,
                   const RemoteParseOptions& options) {
  const auto url = internal::split_url(endpoint);
  httplib::Client client(url.origin);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());

  const std::string body = json{{"sentence", std::string(sentence)}}.dump();
  auto res = client.Post(url.base_path + "/parse", body, "application/json");
  if (!res) {
    throw RetryableError("parse request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw RetryableError("parse service returned HTTP " + std::to_string(res->status));
  }

  json doc;
  try {
    doc = json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("parse response is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("tokens") || !doc["tokens"].is_array()) {
    throw ProtocolError("parse response lacks a \"tokens\" array");
  }
  Parse parse;
  for (const auto& token : doc["tokens"]) {
    if (!token.is_object()) throw ProtocolError("parse token is not an object");
    for (const char* field : {"text", "pos", "dep"}) {
      if (!token.contains(field) || !token[field].is_string()) {
        throw ProtocolError(std::string("parse token lacks string field \"") + field + "\"");
      }
    }
    parse.push_back({token["text"].get<std::string>(), token["pos"].get<std::string>(),
                     token["dep"].get<std::string>()});
  }
  const bool blank = sentence.find_first_not_of(" \t\r\n") == std::string_view::npos;
  if (parse.empty() && !blank) {
    throw ProtocolError("parse service returned no tokens for a non-empty sentence");
  }
  return parse;
}

}  // namespace sampsel::grammar
