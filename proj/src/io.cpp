#include "cpsten/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cps {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("field '") + key + "': " + e.what());
  }
}

std::size_t count_field(const Json& j, const char* key) {
  const auto v = field<long long>(j, key);
  if (v < 0) parse_fail(std::string("field '") + key + "' is negative");
  return std::size_t(v);
}

}  // namespace

Json vector_to_json(std::span<const cplx> v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

CVector vector_from_json(const Json& j) {
  if (!j.is_array()) parse_fail("expected an array of [re, im] pairs");
  CVector v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (e.is_number()) {
      v.emplace_back(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      v.emplace_back(e[0].get<double>(), e[1].get<double>());
    } else {
      parse_fail("entry is neither a number nor an [re, im] pair");
    }
  }
  return v;
}

Json tensor_to_json(const DenseTensor& t) {
  Json j;
  j["n"] = t.dim();
  if (t.order() % 2 == 0) j["d"] = t.order() / 2;
  j["order"] = t.order();
  j["entries"] = vector_to_json(t.data());
  return j;
}

DenseTensor tensor_from_json(const Json& j) {
  const std::size_t n = count_field(j, "n");
  std::size_t order = 0;
  if (j.is_object() && j.contains("order")) {
    order = count_field(j, "order");
    if (j.contains("d") && 2 * count_field(j, "d") != order) parse_fail("fields 'd' and 'order' disagree");
  } else {
    order = 2 * count_field(j, "d");
  }
  if (!j.contains("entries")) parse_fail("missing field 'entries'");
  return DenseTensor::from_entries(n, order, vector_from_json(j["entries"]));
}

Json matrix_to_json(const CMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["entries"] = vector_to_json(m.data());
  return j;
}

CMatrix matrix_from_json(const Json& j) {
  const std::size_t r = count_field(j, "rows"), c = count_field(j, "cols");
  if (!j.contains("entries")) parse_fail("missing field 'entries'");
  return CMatrix(r, c, vector_from_json(j["entries"]));
}

Json terms_to_json(std::span<const CpsTerm> terms) {
  Json out = Json::array();
  for (const auto& t : terms) out.push_back({{"lambda", t.lambda}, {"a", vector_to_json(t.a)}});
  return out;
}

Json eigenpair_to_json(const EigenPair& p) {
  return {{"lambda", p.value.real()}, {"lambda_imag", p.value.imag()}, {"x", vector_to_json(p.x)}};
}

Json report_to_json(const SolveReport& r) {
  Json j;
  j["certified"] = r.certified;
  j["status"] = std::string(to_string(r.status));
  j["objective"] = r.objective;
  if (r.eigenpair) {
    j["lambda"] = r.eigenpair->value.real();
    j["x"] = vector_to_json(r.eigenpair->x);
    j["eigen_residual"] = r.eigen_residual;
  } else {
    j["lambda"] = nullptr;
    j["x"] = nullptr;
    j["eigen_residual"] = nullptr;
  }
  j["rank_one_ratio"] = r.rank_one_ratio;
  j["iterations"] = r.iterations;
  j["primal_residual"] = r.primal_residual;
  j["dual_residual"] = r.dual_residual;
  j["trace_residual"] = r.trace_residual;
  j["subspace_residual"] = r.subspace_residual;
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["X"] = matrix_to_json(r.x.matrix());
  return j;
}

RadarScenario scenario_from_json(const Json& j) {
  RadarScenario sc;
  sc.n = count_field(j, "n");
  sc.m = j.contains("m") ? count_field(j, "m") : sc.n;
  sc.rho = j.contains("rho") ? field<double>(j, "rho") : 30.0;
  if (!j.contains("patches") || !j["patches"].is_array()) parse_fail("missing array 'patches'");
  for (const auto& p : j["patches"]) {
    ClutterPatch patch;
    patch.r = count_field(p, "r");
    patch.delta = field<std::vector<std::size_t>>(p, "delta");
    patch.sigma2 = field<double>(p, "sigma2");
    sc.patches.push_back(std::move(patch));
  }
  if (j.contains("s0")) {
    sc.s0 = vector_from_json(j["s0"]);
  } else {
    sc.s0 = random_code(sc.n, j.contains("s0_seed") ? field<std::uint64_t>(j, "s0_seed") : 0);
  }
  validate_scenario(sc);
  return sc;
}

Json scenario_to_json(const RadarScenario& sc, std::uint64_t s0_seed) {
  Json j;
  j["n"] = sc.n;
  j["m"] = sc.m;
  j["rho"] = sc.rho;
  Json patches = Json::array();
  for (const auto& p : sc.patches) patches.push_back({{"r", p.r}, {"delta", p.delta}, {"sigma2", p.sigma2}});
  j["patches"] = patches;
  j["s0_seed"] = s0_seed;
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(path.string() + ": " + e.what());
  }
}

DenseTensor read_tensor_file(const std::filesystem::path& path) { return tensor_from_json(read_json_file(path)); }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << text;
}

}  // namespace cps
