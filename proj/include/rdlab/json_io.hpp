#pragma once

#include <json.hpp>

#include "rdlab/barriers.hpp"
#include "rdlab/growth.hpp"
#include "rdlab/ode.hpp"
#include "rdlab/ode_oracle.hpp"
#include "rdlab/pde.hpp"
#include "rdlab/quadrature.hpp"
#include "rdlab/stationary.hpp"

namespace rdlab {

using json = nlohmann::ordered_json;

/// Every record carries "schema": 1. Non-finite numbers are written as strings.
constexpr int kJsonSchema = 1;

json num(double v);

json to_json(const GrowthSpec& g);
json to_json(const OsgoodResult& r);
json to_json(const RootReport& r);
json to_json(const DichotomyResult& r);
json to_json(const LongtimeReport& r);
json to_json(const OdeSolution& s);
json to_json(const ResidualReport& r);
json to_json(const StationaryReport& r);
json to_json(const UniquenessReport& r);
json to_json(const MinimalSolutionReport& r);

}  // namespace rdlab
