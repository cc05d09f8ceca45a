#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "circlefeat/attention.hpp"

namespace circlefeat {

/// CSV with header `src,dst,dist,nsp,aa,jac,swing_plus,bridge`, rows in input
/// order. dist and nsp print as integers, the four real features with six
/// decimals, so identical inputs yield byte-identical files.
void write_features(std::span<const NodePair> pairs,
                    std::span<const PairFeatures> rows, std::ostream& out);

/// The whole command-line surface (gen, features, attend, eval) behind the
/// binary; args exclude the program name. Returns the process exit code:
/// 0 success, 2 usage or configuration error, 1 runtime error.
int run_cli(const std::vector<std::string>& args);

}  // namespace circlefeat
