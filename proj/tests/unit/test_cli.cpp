#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = ENSEMBLE_LAB_CLI;
const std::string kModels = ENSEMBLE_LAB_MODELS;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ensemble_lab_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string model(const std::string& name) { return kModels + "/" + name; }

std::size_t count(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(what); pos != std::string::npos; pos = text.find(what, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(Cli, ExitCodeTable) {
  const fs::path d = scratch("exit");
  write(d / "broken.json", "{\"W\": {\"profile\": ");
  write(d / "empty.csv", "");
  const std::string o = " --out-dir " + d.string();
  struct Row {
    std::string args;
    int code;
  };
  const std::vector<Row> rows = {
      {"validate --model " + model("vortex_gaussian.json") + o, 0},
      {"validate --model " + model("quadratic.json") + o, 1},
      {"validate --model " + (d / "broken.json").string() + o, 2},
      {"validate --model " + (d / "missing.json").string() + o, 2},
      {"validate" + o, 2},
      {"frobnicate", 2},
      {"micro --model " + model("vortex_gaussian.json") + " --e-grid nonsense" + o, 2},
      {"micro --model " + model("vortex_gaussian.json") + " --N 4 --e-grid -0.5:1.5:11 --samples 20000" + o, 0},
      {"plot " + (d / "empty.csv").string() + o, 2},
      {"duality" + o, 2},
      {"demo nonsense" + o, 2},
  };
  for (const Row& r : rows) EXPECT_EQ(run(r.args), r.code) << r.args;
}

TEST(Cli, ManifestListsEveryOutput) {
  const fs::path d = scratch("manifest");
  const std::string vortex = model("vortex_gaussian.json");
  struct Step {
    std::string sub;
    std::string args;
  };
  const std::vector<Step> steps = {
      {"micro", "micro --model " + vortex + " --N 4 --e-grid -0.5:1.5:11 --samples 20000"},
      {"macro", "macro --model " + vortex + " --beta-grid -6:2:17 --e-grid -0.15:0.6:6 --resolution 128"},
      {"duality", "duality --s-curve " + (d / "macro" / "macro_S.csv").string() + " --f-curve " +
                      (d / "macro" / "macro_F.csv").string()},
      {"plot", "plot " + (d / "micro" / "micro.csv").string() + " " + (d / "macro" / "macro_S.csv").string()},
  };
  for (const Step& s : steps) {
    const fs::path out = d / s.sub;
    const int code = run(s.args + " --out-dir " + out.string());
    ASSERT_LE(code, 1) << s.args;
    ASSERT_TRUE(fs::exists(out / "manifest.json")) << s.sub;
    const nlohmann::json m = nlohmann::json::parse(slurp(out / "manifest.json"));
    std::set<fs::path> listed;
    for (const auto& f : m.at("outputs")) listed.insert(fs::weakly_canonical(fs::path(f.get<std::string>())));
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(out)) {
      if (e.path().filename() == "manifest.json") continue;
      ++files;
      EXPECT_TRUE(listed.count(fs::weakly_canonical(e.path()))) << s.sub << ": " << e.path();
    }
    EXPECT_GT(files, 0u) << s.sub;
    EXPECT_EQ(m.at("exit_code").get<int>(), code);
    EXPECT_TRUE(m.contains("model_hash") || s.sub == "plot" || s.sub == "duality");
  }
}

TEST(Cli, ManifestWrittenOnFailure) {
  const fs::path d = scratch("fail");
  EXPECT_EQ(run("validate --model " + model("quadratic.json") + " --out-dir " + d.string()), 1);
  const nlohmann::json m = nlohmann::json::parse(slurp(d / "manifest.json"));
  EXPECT_EQ(m.at("exit_code").get<int>(), 1);
  EXPECT_FALSE(m.at("outputs").empty());
}

TEST(Cli, CsvIdenticalAcrossWorkerCounts) {
  const fs::path d = scratch("threads");
  const std::string vortex = model("vortex_gaussian.json");
  for (const char* w : {"1", "3"}) {
    const std::string env = std::string("ENSEMBLE_LAB_THREADS=") + w;
    const fs::path out = d / w;
    ASSERT_EQ(run("micro --model " + vortex + " --N 4 --e-grid -0.3:2.5:12 --samples 40000 --estimator dos "
                  "--wl-replicas 2 --wl-bins 16 --wl-log-f-final 1e-4 --out-dir " + out.string(),
                  env),
              0);
    ASSERT_LE(run("macro --model " + vortex + " --beta-grid -6:2:17 --e-grid -0.15:0.6:6 --resolution 128 --out-dir " +
                      out.string(),
                  env),
              1);
  }
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(d / "1")) {
    if (e.path().extension() != ".csv") continue;
    const fs::path other = d / "3" / e.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path().filename();
    ++compared;
  }
  EXPECT_GE(compared, 3u);
}

TEST(Cli, PlotDeterministicWithLegendAndFlags) {
  const fs::path d = scratch("plot");
  write(d / "alpha.csv", "e,value,stderr,flag\n0,0,0.01,0\n1,-1,0.01,0\n2,-3,0.01,1\n3,nan,0,1\n");
  write(d / "beta_curve.csv", "x,y\n0,-0.5\n1,-1.5\n2,-2\n");
  ASSERT_EQ(run("plot " + (d / "alpha.csv").string() + " --out " + (d / "one.svg").string() + " --out-dir " +
                d.string()),
            0);
  const std::string one = slurp(d / "one.svg");
  EXPECT_EQ(count(one, "<polyline"), 1u);
  EXPECT_EQ(count(one, "class=\"flagged\""), 1u);

  const std::string both = (d / "alpha.csv").string() + " " + (d / "beta_curve.csv").string();
  ASSERT_EQ(run("plot " + both + " --out " + (d / "a.svg").string() + " --out-dir " + d.string()), 0);
  ASSERT_EQ(run("plot " + both + " --out " + (d / "b.svg").string() + " --out-dir " + d.string()), 0);
  const std::string a = slurp(d / "a.svg");
  EXPECT_EQ(a, slurp(d / "b.svg"));
  EXPECT_EQ(count(a, "<polyline"), 2u);
  EXPECT_NE(a.find(">alpha<"), std::string::npos);
  EXPECT_NE(a.find(">beta_curve<"), std::string::npos);
}
