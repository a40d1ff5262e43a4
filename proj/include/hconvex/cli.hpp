#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hconvex/funclasses.hpp"
#include "hconvex/modulating.hpp"

namespace hconvex {

// Exit codes of run().
inline constexpr int kExitOk = 0;          // analysis finished, refutations included
inline constexpr int kExitConfig = 1;      // bad flags, config file, expression or parameters
inline constexpr int kExitEvaluation = 2;  // f or h undefined somewhere, indeterminate scan, I/O

// args excludes the program name. Without --out the report goes to `out`;
// errors are one JSON line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// convex, sconvex1:<s>, sconvex1-pinheiro:<s>, sconvex2:<s>, godunova-levin,
// pfunction, hconvex, hconcave, hmidconvex, hmidconcave, hconvex-geometric.
ClassSpec parse_class(std::string_view text, const ModulatingFn& h);

// Columns t, t^(1/2), t, t^(3/2), t^2 at n uniform points of [0, 1].
std::string figure1_csv(std::size_t n);
void emit_figure1(const std::filesystem::path& path, std::size_t n);

}  // namespace hconvex
