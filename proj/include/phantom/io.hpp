#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "phantom/core.hpp"

namespace phantom {

/// Canonical serialization: keys sorted, floating point numbers at 17
/// significant digits, no insignificant whitespace, newline terminated.
/// Re-emitting a parsed document is byte-identical.
std::string canonical_json(const nlohmann::json& doc);

nlohmann::json profile_to_json(const Profile& v);

/// Accepts {"m": ..., "votes": [[...], ...]} with optional metadata.
Profile profile_from_json(const nlohmann::json& doc);

/// One voter per line, comma-separated shares; an optional header line
/// is skipped.
Profile profile_from_csv(std::istream& in);

/// Loads a profile from disk, dispatching on the extension (.json or
/// .csv; anything else is sniffed). Throws parse_error on unreadable or
/// malformed input.
Profile load_profile(const std::string& path);

/// Parses an inline division like "0.25,0.5,0.25".
Division division_from_string(const std::string& text);

nlohmann::json loss_report_to_json(const LossReport& report);

}  // namespace phantom
