#ifndef SPINLIE_GEOMETRY_FILE_HPP
#define SPINLIE_GEOMETRY_FILE_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "spinlie/geometry.hpp"

namespace spinlie {

/// Parses the line-oriented chart format:
///
///     # comment
///     dim = 2
///     signature = [2, 0]
///     coords = [r, phi]
///     domain = [[1, 2], [0, 6.28]]        # optional, default [-1, 1] each
///
///     [metric]                            # one row per line, upper triangle
///     "1", "0"                            # (full rows are accepted if symmetric)
///     "r^2"
///
///     [vector_field rotation]
///     components = ["0", "1"]
///
///     [spinor_field psi]
///     re = ["1", "r"]
///     im = ["0", "0"]
///
///     [density_field rho]
///     rank = [0, 0]
///     weight = 1
///     components = ["r*phi"]
///
/// Throws InputError (ParseError for expression syntax) with a line number.
GeometrySpec parseGeometry(std::string_view text);
GeometrySpec loadGeometry(const std::filesystem::path& path);

}  // namespace spinlie

#endif  // SPINLIE_GEOMETRY_FILE_HPP
