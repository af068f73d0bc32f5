#pragma once

// Parsing helpers shared by the generator and terminal registries.

#include <string>
#include <string_view>
#include <vector>

namespace bsdelab::detail {

struct Call {
    std::string name;
    std::vector<double> args;
};

std::string_view trim(std::string_view s);

/// "name", "name()" or "name(1, -0.5, 2e-3)".
Call parse_call(std::string_view spec);

/// Parses a plain real number; throws PreconditionError on junk.
double parse_number(std::string_view s);

/// Shortest round-trippable decimal representation.
std::string format_number(double x);

}  // namespace bsdelab::detail
