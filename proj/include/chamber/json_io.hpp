// JSON (de)serialization for the toolkit's value types. Matrices travel as
// row-major arrays of doubles with an explicit dimension; vectors as plain
// arrays.
#pragma once

#include "chamber/dense_subgroup.hpp"
#include "chamber/group_core.hpp"
#include "chamber/hopf.hpp"
#include "chamber/limit_cone.hpp"
#include "chamber/mixing.hpp"
#include "chamber/proximality.hpp"
#include "chamber/schottky.hpp"

#include <json.hpp>

#include <string>

namespace chamber {

using Json = nlohmann::json;

Json to_json(const Mat& m);
Json to_json(const Vec& v);
Json to_json(const CartanVector& v);
Json to_json(const Flag& f);
Json to_json(const HopfPoint& p);
Json to_json(const ProximalityCertificate& c);
Json to_json(const LoxodromicCertificate& c);
Json to_json(const SchottkyFamily& f);
Json to_json(const ProductEstimate& e);
Json to_json(const DensityReport& r);
Json to_json(const ApproxResult& r);
Json to_json(const ConeModel& c);
Json to_json(const MixingWitness& w);

Mat mat_from_json(const Json& j);
Vec vec_from_json(const Json& j);
Flag flag_from_json(const Json& j);
HopfPoint hopf_from_json(const Json& j);
std::vector<GroupElement> generators_from_json(const Json& j);

// Parses "1^3 2^5 1^2" into one-based generator blocks.
Word parse_word(const std::string& text);

}  // namespace chamber
