#include <filesystem>
#include <random>

#include "cpsten/io.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cps;

TEST_CASE("tensor JSON round trip is exact") {
  std::mt19937_64 rng(4);
  for (std::size_t order : {3, 4, 6}) {
    const auto t = testutil::random_tensor(2, order, rng);
    const auto text = tensor_to_json(t).dump();
    const auto back = tensor_from_json(Json::parse(text));
    CHECK(back.order() == order);
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(back[k] == t[k]);
  }
  const auto tiny = DenseTensor::from_entries(1, 2, {cplx(1e-300, -3.0000000000000004)});
  CHECK(tensor_from_json(Json::parse(tensor_to_json(tiny).dump()))[0] == tiny[0]);
}

TEST_CASE("tensor JSON fields") {
  const Json by_d = Json::parse(R"({"n": 2, "d": 1, "entries": [[1,0],[0,2],[0,-2],3]})");
  const auto t = tensor_from_json(by_d);
  CHECK(t.order() == 2);
  CHECK(t.entry({1, 2}) == cplx(0, 2));
  CHECK(t.entry({2, 2}) == cplx(3, 0));
  CHECK_FALSE(tensor_to_json(DenseTensor::zero(2, 3)).contains("d"));

  CHECK_THROWS_WITH_AS(tensor_from_json(Json::parse(R"({"n": 2, "d": 1, "entries": [[1,0]]})")),
                       doctest::Contains("SizeMismatch"), Error);
  CHECK_THROWS_WITH_AS(tensor_from_json(Json::parse(R"({"d": 1, "entries": []})")), doctest::Contains("ParseError"),
                       Error);
  CHECK_THROWS_WITH_AS(tensor_from_json(Json::parse(R"({"n": 2, "d": 1, "entries": [[1,0,0],1,1,1]})")),
                       doctest::Contains("ParseError"), Error);
  CHECK_THROWS_WITH_AS(tensor_from_json(Json::parse(R"({"n": 2, "d": 1, "order": 4, "entries": []})")),
                       doctest::Contains("ParseError"), Error);
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "cpsten_io_test";
  std::filesystem::create_directories(dir);
  const auto t = testutil::gap_tensor();
  write_text_file(dir / "t.json", tensor_to_json(t).dump());
  CHECK(testutil::dist(read_tensor_file(dir / "t.json"), t) == 0.0);
  write_text_file(dir / "bad.json", "{\"n\": ");
  CHECK_THROWS_WITH_AS(read_tensor_file(dir / "bad.json"), doctest::Contains("ParseError"), Error);
  CHECK_THROWS_WITH_AS(read_tensor_file(dir / "missing.json"), doctest::Contains("ParseError"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("matrix and report JSON") {
  std::mt19937_64 rng(6);
  const auto m = testutil::random_matrix(3, 2, rng);
  const auto back = matrix_from_json(Json::parse(matrix_to_json(m).dump()));
  CHECK(testutil::dist(back, m) == 0.0);

  const auto r = solve_sdp(build_matrix_model(testutil::rank_one_cps(1.0, testutil::random_unit(2, rng), 2)));
  const Json j = report_to_json(r);
  CHECK(j["certified"].get<bool>());
  CHECK(j["status"] == "converged");
  CHECK(j["lambda"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(j["eigen_residual"].get<double>() <= eig_tol);
  CHECK(vector_from_json(j["x"]).size() == 2);

  SolveReport empty;
  empty.x = HermMatrix::identity(2);
  CHECK(report_to_json(empty)["lambda"].is_null());
}

TEST_CASE("scenario JSON") {
  const auto sc = default_scenario(5, 12);
  const auto back = scenario_from_json(Json::parse(scenario_to_json(sc, 12).dump()));
  CHECK(back.n == 5);
  CHECK(back.m == 5);
  CHECK(back.rho == 30.0);
  REQUIRE(back.patches.size() == 2);
  CHECK(back.patches[1].delta == sc.patches[1].delta);
  CHECK(testutil::dist(radar_tensor(back), radar_tensor(sc)) == 0.0);

  const Json explicit_code = Json::parse(
      R"({"n": 2, "m": 1, "rho": 1, "patches": [{"r": 0, "delta": [1], "sigma2": 2}], "s0": [[0.6, 0], [0, 0.8]]})");
  CHECK(scenario_from_json(explicit_code).s0[1] == cplx(0, 0.8));
  const Json bad = Json::parse(R"({"n": 3, "m": 2, "patches": [{"r": 3, "delta": [1], "sigma2": 1}]})");
  CHECK_THROWS_WITH_AS(scenario_from_json(bad), doctest::Contains("RangeError"), Error);
}
