#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "cubeadv/adversary.hpp"
#include "cubeadv/codes.hpp"
#include "cubeadv/packing.hpp"
#include "cubeadv/simulator.hpp"

namespace cubeadv {

using Json = nlohmann::ordered_json;

// All big integers are decimal strings and all rationals "p/q" strings.
// Coordinate indices in F are 1-based on disk.

Json to_json(const CodeFamily& family);
CodeFamily family_from_json(const Json& j);

Json to_json(const EpsilonPacking& p);
/// Rebuilds placed cubes from (k, word) pairs.
EpsilonPacking packing_from_json(const Json& j);

Json to_json(const InstanceStream& inst);
InstanceStream instance_from_json(const Json& j);

Json to_json(const SimReport& r);
SimReport report_from_json(const Json& j);

/// Two-space indent plus trailing newline; stable across runs.
std::string dump(const Json& j);
/// Throws InvalidArgument on malformed JSON.
Json parse_json(std::string_view text);

std::string to_string(CountKind k);
CountKind count_kind_from_string(std::string_view s);

}  // namespace cubeadv
