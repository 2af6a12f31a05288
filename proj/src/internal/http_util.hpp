// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace sampsel::internal {

/// "http://host:8080/base/" -> {"http://host:8080", "/base"}.
struct SplitUrl {
  std::string origin;
  std::string base_path;
};

inline SplitUrl split_url(std::string_view url) {
  std::size_t scheme_end = url.find("://");
  std::size_t host_begin = scheme_end == std::string_view::npos ? 0 : scheme_end + 3;
  std::size_t path_begin = url.find('/', host_begin);
  SplitUrl out;
  if (path_begin == std::string_view::npos) {
    out.origin = std::string(url);
  } else {
    out.origin = std::string(url.substr(0, path_begin));
    out.base_path = std::string(url.substr(path_begin));
    while (!out.base_path.empty() && out.base_path.back() == '/') out.base_path.pop_back();
  }
  if (scheme_end == std::string_view::npos) out.origin = "http://" + out.origin;
  return out;
}

}  // namespace sampsel::internal
