#pragma once

#include "json.hpp"

#include "poly/heat.hpp"
#include "poly/presets.hpp"
#include "poly/rewrite.hpp"
#include "poly/translation.hpp"

namespace poly {

using json = nlohmann::json;

json to_json(const ReductionTrace &t);
json to_json(const InterpTriple &t);
json to_json(const Certificate &c);
json to_json(const PresetReport &r);
json to_json(const DedupResult &d);
json critical_pairs_json(const Polygraph &p, const std::vector<CriticalPair> &pairs, const ConfluenceReport &rep);

// Round trip: polygraph_from_json(polygraph_json(p)) has the same canonical rules.
json polygraph_json(const Polygraph &p);
Polygraph polygraph_from_json(const json &j);

// Rule provenance and left-linearity of a translated system.
json translation_manifest(const Translation &tr);

} // namespace poly
