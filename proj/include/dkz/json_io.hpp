#pragma once

// JSON encoding: complex numbers as [re, im], matrices as row lists of
// complex numbers, numbers written with 17 significant digits.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dkz/integrator.hpp"
#include "dkz/tensor.hpp"

namespace dkz {

using Json = nlohmann::ordered_json;

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
Json matrix_to_json(const ComplexMatrix& a);
ComplexMatrix matrix_from_json(const Json& j);

/// {"segments":[{"type":"line","from":[re,im],"to":[re,im]},
///              {"type":"arc","center":[re,im],"radius":r,"arg_from":a0,"arg_to":a1}]}
Json path_to_json(const ComplexPath& path);
ComplexPath path_from_json(const Json& j);

/// Deterministic text: key order as inserted, "%.17g" numbers, non-finite as null.
std::string dump_json(const Json& j, int indent = 2);

/// Write to a temporary file next to `path`, then rename over it.
void write_json_atomic(const std::filesystem::path& path, const Json& j);

Json read_json_file(const std::filesystem::path& path);

}  // namespace dkz
