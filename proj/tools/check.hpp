#pragma once

#include <cqc/generate.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cqc::cli {

struct CheckLimits {
    int max_n = 6;  // largest random target
};

// A trial returns a counterexample description on failure.
using Trial = std::function<std::optional<std::string>(Rng&, const CheckLimits&)>;

struct Property {
    std::string name;
    Trial trial;
};

std::vector<Property> check_properties();
// The property named "gadget-<name>", or nullptr.
const Property* find_property(const std::vector<Property>& all, const std::string& name);

// Counts answers by enumerating every map of the query into the target.
BigInt naive_count(const Query& q, const Structure& t);
BigInt naive_dominating_sets(const Structure& g, int size);

}  // namespace cqc::cli
