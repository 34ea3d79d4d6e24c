#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sigtaylor/taylor.hpp"

namespace sigtaylor {

/// Entry point behind the `sigtaylor` binary; `args` excludes the program
/// name.  Returns 0 when every requested check passes, 1 when a bound or
/// certification check fails, and 2 for configuration or usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

/// Deterministic JSON rendering of derived scheme parameters.
std::string render_params_json(const TaylorParams& params);

/// Deterministic CSV with header s,t,N,omega,remainder,bound,ratio,next_term.
std::string render_remainder_csv(const std::vector<RemainderReport>& rows);

}  // namespace sigtaylor
