// Copyright 2026 The actionctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace actions::text {

/// YYYY-MM-DD with a valid calendar day.
bool is_iso_date(std::string_view s);

/// YYYY-MM-DDThh:mm[:ss[.fff]] followed by Z or a +hh:mm / -hh:mm offset.
bool is_iso_datetime(std::string_view s);

/// scheme ":" rest, where scheme is ALPHA *( ALPHA / DIGIT / "+" / "-" / "." ).
bool is_iri(std::string_view s);

/// Accepts ISO dates and day-first dotted dates (D.M.YY or D.M.YYYY) and
/// returns the ISO form. Two-digit years pivot at 50: 00-49 map to 20xx,
/// 50-99 to 19xx.
std::optional<std::string> normalize_date(std::string_view s);

/// "checkinTime" -> "checkin time", "numAdults" -> "num adults".
std::string humanize(std::string_view camel);

std::string to_lower(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

/// RFC 3986 percent-encoding; only unreserved characters pass through.
std::string percent_encode(std::string_view s);
std::string percent_decode(std::string_view s);

using QueryParams = std::vector<std::pair<std::string, std::string>>;

/// Keys sorted lexicographically (stable for repeated keys), each key and
/// value percent-encoded. Empty input yields an empty string.
std::string canonical_query(QueryParams params);

QueryParams parse_query(std::string_view query);

struct UrlParts {
  std::string origin;  // scheme://host[:port]
  std::string path;    // starts with '/' (or empty)
  std::string query;   // without '?'
};

std::optional<UrlParts> split_url(std::string_view url);

}  // namespace actions::text
