#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>

#include "bmd/cli.hpp"
#include "bmd/json_io.hpp"

using namespace bmd;
namespace fs = std::filesystem;

namespace {

ErrorCode parse_error(const std::string& text) {
  try {
    gauge_from_json(json::parse(text));
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ErrorCode::InvalidInput;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("bmd_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(path(name)) << content;
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "bmd");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST(BodyJson, Kinds) {
  EXPECT_NEAR(gauge_from_json(json::parse(R"({"kind":"lp","p":"inf"})")).radius(pi / 4), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(gauge_from_json(json::parse(R"({"kind":"lp","p":1})")).radius(pi / 4), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_EQ(gauge_from_json(json::parse(R"({"kind":"circle"})")).radius(1.0), 1.0);
  EXPECT_EQ(gauge_from_json(json::parse(R"({"kind":"circle","radius":2.5})")).radius(1.0), 2.5);
  EXPECT_NEAR(gauge_from_json(json::parse(R"({"kind":"ellipse","params":[1,0.3,0]})")).radius(0), 1 / std::sqrt(1.3),
              1e-15);
  const Gauge poly = gauge_from_json(json::parse(R"({"kind":"polygon","vertices":[[1,1],[-1,1]],"symmetrize":true})"));
  EXPECT_EQ(poly.vertices().size(), 4u);
  const Gauge samples =
      gauge_from_json(json::parse(R"({"kind":"samples","samples":[1,1,1,1,1,1,1,1],"interpolation":"cubic"})"));
  EXPECT_EQ(samples.radius(0.3), 1.0);
}

TEST(BodyJson, Rejections) {
  EXPECT_EQ(parse_error(R"({"kind":"polygon","params":[1,0,0]})"), ErrorCode::InvalidInput);
  EXPECT_EQ(parse_error(R"({"kind":"polygon","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]],"p":2})"),
            ErrorCode::InvalidInput);
  EXPECT_EQ(parse_error(R"({"kind":"lp"})"), ErrorCode::InvalidInput);
  EXPECT_EQ(parse_error(R"({"kind":"hexagon"})"), ErrorCode::InvalidInput);
  EXPECT_EQ(parse_error(R"({"p":2})"), ErrorCode::InvalidInput);
  EXPECT_EQ(parse_error(R"({"kind":"lp","p":"big"})"), ErrorCode::InvalidExponent);
  EXPECT_EQ(parse_error(R"({"kind":"lp","p":0.5})"), ErrorCode::InvalidExponent);
  EXPECT_EQ(parse_error(R"({"kind":"ellipse","params":[1,2,0]})"), ErrorCode::NotInCone);
  EXPECT_EQ(parse_error(R"({"kind":"ellipse","params":[1,0]})"), ErrorCode::InvalidInput);
  EXPECT_EQ(parse_error(R"({"kind":"lp","p":2,"symmetrize":true})"), ErrorCode::InvalidInput);
  EXPECT_EQ(parse_error(R"({"kind":"polygon","vertices":[[1,1],[-1,1],[-1,-1]]})"), ErrorCode::NotSymmetric);
  EXPECT_EQ(parse_error(R"({"kind":"samples","samples":[1,2]})"), ErrorCode::TooFewSamples);
  EXPECT_EQ(parse_error(R"({"kind":"polygon","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]],"extra":1})"),
            ErrorCode::InvalidInput);
}

TEST(ReportJson, RoundTrip) {
  const Gauge g = gauge_from_lp(3.0);
  const SolveReport r = build_report(g, solve_uniform(g));
  const json j = report_to_json(r);
  for (const char* key : {"d2", "defect", "params_uniform", "params_inscribed", "T_hat", "x_points", "y_points",
                          "certificate", "cone_condition_ok"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["certificate"]["phi"].size(), 2u);
  EXPECT_EQ(j["certificate"]["psi"].size(), 2u);
  EXPECT_EQ(j["certificate"]["residuals"].size(), 4u);

  const SolveReport back = report_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.d2, r.d2);
  EXPECT_EQ(back.defect, r.defect);
  EXPECT_EQ(back.params_uniform, r.params_uniform);
  EXPECT_EQ(back.T_hat, r.T_hat);
  EXPECT_EQ(back.x_points, r.x_points);
  EXPECT_EQ(back.y_points, r.y_points);
  EXPECT_EQ(back.certificate.phi2, r.certificate.phi2);
  EXPECT_EQ(back.certificate.residuals, r.certificate.residuals);
  EXPECT_EQ(back.outline.size(), r.outline.size());
  EXPECT_EQ(report_to_json(back).dump(), j.dump());
}

TEST_F(Cli, SolveVerifyRender) {
  const std::string body = write("square.json", R"({"kind":"lp","p":"inf"})");
  ASSERT_EQ(run({"solve", "--input", body, "--out", path("r.json"), "--svg", path("r.svg")}), 0) << err_.str();
  const json rep = read_json_file(path("r.json"));
  EXPECT_NEAR(rep["d2"].get<double>(), std::sqrt(2.0), 1e-6);
  EXPECT_NE(slurp(path("r.svg")).find("<svg"), std::string::npos);

  EXPECT_EQ(run({"verify", "--input", body, "--report", path("r.json")}), 0) << out_.str();
  EXPECT_NE(out_.str().find("PASS"), std::string::npos);

  json tampered = rep;
  tampered["d2"] = rep["d2"].get<double>() * 1.001;
  write("t.json", tampered.dump());
  EXPECT_EQ(run({"verify", "--input", body, "--report", path("t.json")}), 1);
  EXPECT_NE(out_.str().find("FAIL"), std::string::npos);

  EXPECT_EQ(run({"render", "--report", path("r.json"), "--view", "image", "--out", path("i.svg")}), 0);
  EXPECT_NE(slurp(path("i.svg")).find("outer-circle"), std::string::npos);
}

TEST_F(Cli, Determinism) {
  const std::string body = write("b.json", R"({"kind":"polygon","vertices":[[2,0.3],[0.5,1],[-1.2,0.8]],"symmetrize":true})");
  ASSERT_EQ(run({"solve", "--input", body, "--out", path("a.json"), "--svg", path("a.svg")}), 0);
  ASSERT_EQ(run({"solve", "--input", body, "--out", path("b.json"), "--svg", path("b.svg")}), 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.svg")), slurp(path("b.svg")));
}

TEST_F(Cli, StdoutReportAndOracle) {
  const std::string body = write("c.json", R"({"kind":"circle"})");
  ASSERT_EQ(run({"solve", "--input", body}), 0);
  EXPECT_EQ(json::parse(out_.str())["d2"].get<double>(), 1.0);
  ASSERT_EQ(run({"oracle", "--input", body, "--n-a", "16", "--n-b", "16", "--n-theta", "8", "--n-phi", "64",
                 "--threads", "2"}),
            0)
      << err_.str();
  EXPECT_NEAR(json::parse(out_.str())["value"].get<double>(), 0.0, 1e-9);
}

TEST_F(Cli, ExitCodes) {
  const std::string bad = write("bad.json", R"({"kind":"polygon","params":[1,0,0]})");
  EXPECT_EQ(run({"solve", "--input", bad}), 2);
  EXPECT_NE(err_.str().find("InvalidInput"), std::string::npos);
  EXPECT_EQ(run({"solve", "--input", write("broken.json", "{not json")}), 2);
  EXPECT_EQ(run({"solve", "--input", path("missing.json")}), 2);
  EXPECT_EQ(run({"solve"}), 2);
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({"solve", "--input", write("sq.json", R"({"kind":"lp","p":"inf"})"), "--grid", "10"}), 2);
  EXPECT_EQ(run({"solve", "--input", path("sq.json"), "--tol", "1e-15", "--max-bisect", "2"}), 3);
  EXPECT_EQ(run({"--help"}), 0);
}
