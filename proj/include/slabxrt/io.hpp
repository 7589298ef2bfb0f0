#pragma once

// JSON and CSV formats.
//
//   polynomial  [{"alpha":[e0,...,en], "re":x, "im":y}, ...]
//   field       {"n":int, "m":int, "modes":[{"j":int, "k":[int,...], "poly":<polynomial>}]}
//   interval    {"n":int, "m":int, "modes":[{"j":int, "poly":<polynomial>}]}
//   covering    {"n":int, "generators":[{"flip":bool, "A":[[int]], "c":[float]}]}
//   sinogram    CSV "a_1,...,a_n,re,im", one row per grid point, plus a JSON sidecar
//
// Parse failures throw ParseError carrying the JSON pointer of the offending
// value.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "slabxrt/kernel.hpp"
#include "slabxrt/twisted.hpp"
#include "slabxrt/xray.hpp"

namespace slabxrt {

using nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

json poly_to_json(const HomogeneousPoly& p);
/// Shape inferred from the entries; an empty list needs dim/degree hints.
HomogeneousPoly poly_from_json(const json& j, const std::string& path = "",
                               int dim_hint = -1, int degree_hint = -2);

json field_to_json(const FourierTensorField& f);
FourierTensorField field_from_json(const json& j, const std::string& path = "");

json interval_to_json(const IntervalField& h);
IntervalField interval_from_json(const json& j, const std::string& path = "");

json covering_to_json(const CoveringSpec& spec);
/// Closes the generators into a group and validates it; an invalid covering
/// is reported as a ParseError at /generators.
CoveringSpec covering_from_json(const json& j, const std::string& path = "");

json decomposition_to_json(const Decomposition& d, double c_g);

std::string sinogram_csv(const Sinogram& s);
json sinogram_sidecar(const Sinogram& s, int m);

json read_json_file(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Round-trip decimal form of a double (17 significant digits).
std::string format_double(double x);

}  // namespace slabxrt
