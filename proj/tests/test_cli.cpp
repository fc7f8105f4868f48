#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TEMPCAST_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("CLI subcommands and exit codes") {
  const fs::path dir = fs::temp_directory_path() / "tempcast_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string csv = (dir / "weather.csv").string();

  CHECK(run_cli("synth --n-days 500 --seed 7 --out " + csv) == 0);
  CHECK(fs::exists(csv));

  CHECK(run_cli("run --input " + csv + " --out " + (dir / "bundle").string()) == 0);
  for (const char* name : {"report.json", "summary.txt", "scatter.csv", "scatter.svg"}) {
    CHECK(fs::exists(dir / "bundle" / name));
  }
  CHECK(run_cli("select --input " + csv + " --out " + (dir / "sel").string()) == 0);
  CHECK(fs::exists(dir / "sel" / "selection.json"));
  CHECK(run_cli("train --input " + csv + " --split chronological --out " + (dir / "model").string()) == 0);
  CHECK(fs::exists(dir / "model" / "model.json"));
  CHECK(slurp(dir / "model" / "summary.txt").find("R-squared") != std::string::npos);

  CHECK(run_cli("evaluate --model " + (dir / "bundle" / "report.json").string() + " --out " +
                (dir / "eval").string()) == 0);
  CHECK(fs::exists(dir / "eval" / "scatter.csv"));
  CHECK(run_cli("evaluate --model " + (dir / "model" / "model.json").string() + " --input " + csv) == 0);

  // Column remapping through flags.
  std::string text = slurp(csv);
  text.replace(text.find("meantempm"), 9, "avg_temp");
  std::ofstream(dir / "renamed.csv") << text;
  CHECK(run_cli("run --input " + (dir / "renamed.csv").string() + " --out " + (dir / "r2").string()) == 1);
  CHECK(run_cli("run --input " + (dir / "renamed.csv").string() + " --column meantempm=avg_temp --out " +
                (dir / "r2").string()) == 0);

  // Stage errors exit 1, usage errors exit 2.
  CHECK(run_cli("run --input " + (dir / "nope.csv").string() + " --out " + (dir / "x").string()) == 1);
  CHECK(run_cli("run --corr-threshold 0.999 --out " + (dir / "y").string()) == 1);
  CHECK_FALSE(fs::exists(dir / "y" / "report.json"));
  CHECK(run_cli("run --split sideways") == 2);
  CHECK(run_cli("run --alpha 1.5") == 2);
  CHECK(run_cli("run --column nonsense") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("--help") == 0);

  fs::remove_all(dir);
}
