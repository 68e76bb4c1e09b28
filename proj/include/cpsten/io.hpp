#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "cpsten/applications.hpp"
#include "cpsten/rank_one.hpp"
#include "cpsten/tensor.hpp"

namespace cps {

using Json = nlohmann::ordered_json;

/// [re, im] pairs. Doubles are written in shortest round-trip form.
Json vector_to_json(std::span<const cplx> v);
/// Throws ParseError.
CVector vector_from_json(const Json& j);

/// {n, d, order, entries}; d is omitted for odd order.
Json tensor_to_json(const DenseTensor& t);
/// Reads "order", or "d" as half the order when "order" is absent. Throws ParseError, RangeError.
DenseTensor tensor_from_json(const Json& j);

/// {rows, cols, entries} row-major.
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

Json terms_to_json(std::span<const CpsTerm> terms);
Json eigenpair_to_json(const EigenPair& p);
Json report_to_json(const SolveReport& r);

/// {n, m, rho, patches: [{r, delta, sigma2}], s0_seed} or an explicit "s0" list in place of s0_seed.
RadarScenario scenario_from_json(const Json& j);
Json scenario_to_json(const RadarScenario& sc, std::uint64_t s0_seed);

/// Throws ParseError on unreadable files or malformed JSON.
Json read_json_file(const std::filesystem::path& path);
DenseTensor read_tensor_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace cps
