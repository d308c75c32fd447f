#pragma once

// The lmtt command-line driver.
//
//   lmtt check FILE
//   lmtt nbe FILE [--def NAME]
//   lmtt equiv FILE NAME1 NAME2
//   lmtt corpus DIR
//
// Global flags: --fuel N bounds oracle reduction, --quiet suppresses
// per-item output. Exit status: 0 success, 1 a semantic "no", 2 an error.

#include <iosfwd>
#include <string>
#include <vector>

namespace lmtt {

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace lmtt
