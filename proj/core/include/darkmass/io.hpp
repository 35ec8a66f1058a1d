#pragma once

#include <string>

#include "darkmass/inference.hpp"
#include "darkmass/observation.hpp"

namespace darkmass {

/// Reads a catalog CSV with header columns x1,x2,v3[,sigma_v3] (any order).
/// Non-numeric or non-finite fields raise errors naming the offending line;
/// a header-only file is an empty-catalog error.
ObservationSet load_catalog(const std::string& path);

void save_catalog(const ObservationSet& data, const std::string& path);

/// Chain CSV: iteration,rho_1..rho_N,f_1..f_M,log_post with full round-trip
/// precision, so reloading reproduces the stored doubles bit-for-bit.
void save_chain_csv(const Chain& chain, const std::string& path);
Chain load_chain_csv(const std::string& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace darkmass
