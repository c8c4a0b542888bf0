#pragma once

#include <map>
#include <string>
#include <vector>

#include "riem/manifold.hpp"
#include "riem/stats.hpp"

namespace riem::io {

/// Simple `key = value` text files ('#' starts a comment). Later keys win.
std::map<std::string, std::string> read_key_value(const std::string& path);
std::map<std::string, std::string> parse_key_value(const std::string& text);

std::vector<double> parse_reals(const std::string& csv);

/// Manifold definition files:
///   kind   = builtin | registered
///   name   = surface_sc | m4 | sphere_param | flat | <registered name>
///   params = comma-separated reals (as the manifold requires)
Manifold manifold_from_file(const std::string& path);

/// Shorthand "name" or "name:p1,p2" accepted on the command line; falls
/// back to reading `spec` as a definition file when one exists.
Manifold manifold_from_spec(const std::string& spec);

/// Dataset CSV: one point per row, comma-separated coordinates,
/// '#' comments and blank lines ignored.
std::vector<Vec> read_points_csv(const std::string& path);
void write_points_csv(const std::vector<Vec>& points, const std::string& path);

std::string pga_model_to_json(const PgaModel& model, const Manifold& m);
void write_pga_model(const PgaModel& model, const Manifold& m, const std::string& path);

}  // namespace riem::io
