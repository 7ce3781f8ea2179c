/// @file json_io.hpp
/// Canonical JSON forms for the core types plus the report document
/// validator. nlohmann::json serializes object keys in sorted order, so
/// emitting the same data twice produces byte-identical text.
#pragma once

#include "choicelab/core.hpp"

namespace choicelab::io {

inline constexpr int kSchemaVersion = 1;

json to_json(const Universe& u);                       // ["f","g","h"]
Universe universe_from_json(const json& j);

json to_json(const RiskProfile& p);                    // {"values":[[...],...]}
RiskProfile profile_from_json(const json& j);

json to_json(const OrdinalProfile& p);                 // {"ranks":[[...],...]}
OrdinalProfile ordinal_from_json(const json& j);

json menu_to_json(const Menu& menu, const Universe& u);  // ["f","g"]
Menu menu_from_json(const json& j, const Universe& u);

/// [{"menu":[...],"chosen":[...]}, ...] in canonical menu order.
json to_json(const ChoiceCorrespondence& cc, const Universe& u);
ChoiceCorrespondence cc_from_json(const json& j, const Universe& u);

/// Standalone profile document: {"schema_version","kind":"risk_profile",
/// "universe","values"}. No timestamp, so rewrites are byte-identical.
json profile_document(const RiskProfile& p, const Universe& u);
std::pair<RiskProfile, Universe> profile_document_parse(const json& j);

/// Validates the document shape shared by every report kind plus the
/// kind-specific required fields. Throws ValidationError naming the first
/// offending field.
void validate_report(const json& j);

}  // namespace choicelab::io
