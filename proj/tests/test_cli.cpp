#include <doctest.h>

#include <filesystem>

#include "cli_runner.hpp"
#include "topcorr/io.hpp"

using testing_support::run_cli;

namespace {

std::string temp_path(const std::string& name)
{
  const auto dir = std::filesystem::temp_directory_path() / "topcorr_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

} // namespace

TEST_SUITE("cli_orchestration")
{
  TEST_CASE("classify")
  {
    const auto r = run_cli("classify --state werner:0.6");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("#! command = classify") == 0);
    CHECK(r.out.find("class,steerable_local") != std::string::npos);
  }

  TEST_CASE("map over a luminosity table")
  {
    const auto r = run_cli("map --lumi builtin:lhc-toy --beta-points 3 --theta-points 2 --beta-max 0.9");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\n0,0,") != std::string::npos);
    CHECK(r.out.find("\n0.9,0,") != std::string::npos);
    CHECK(run_cli("map --lumi builtin:lhc-toy --beta-max 0.999").exit_code == 2);
  }

  TEST_CASE("exit codes")
  {
    CHECK(run_cli("classify --state werner:2").exit_code == 3);
    CHECK(run_cli("classify --state nonsense").exit_code == 2);
    CHECK(run_cli("classify --bogus 1").exit_code == 2);
    CHECK(run_cli("nosuchcommand").exit_code == 2);
    CHECK(run_cli("discord-direct --state singlet --n 500").exit_code == 4);
    CHECK(run_cli("tomo --events /nonexistent/file.csv").exit_code == 3);
    CHECK(run_cli("map --channel gg --beta-points 0").exit_code == 2);
  }

  TEST_CASE("config files and rerun")
  {
    const auto cfg = temp_path("map.cfg");
    topcorr::write_text_file(cfg, "channel = qqbar\nbeta-points = 3\ntheta-points = 4\n");
    const auto a = run_cli("map --config " + cfg);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out.find("#! channel = qqbar") != std::string::npos);
    // flags win over the file
    const auto b = run_cli("map --config " + cfg + " --beta-points 2");
    CHECK(b.out.find("#! beta-points = 2") != std::string::npos);

    const auto out = temp_path("map.csv");
    REQUIRE(run_cli("map --config " + cfg + " --out " + out).exit_code == 0);
    CHECK(topcorr::read_text_file(out) == a.out);
    CHECK(run_cli("rerun " + out).out == a.out);

    topcorr::write_text_file(cfg, "channel = qqbar\nunknown-key = 1\n");
    CHECK(run_cli("map --config " + cfg).exit_code == 2);
  }

  TEST_CASE("simulate and reconstruct")
  {
    const auto events = temp_path("events.csv.gz");
    REQUIRE(run_cli("simulate --state singlet --n 20000 --seed 7 --out " + events).exit_code == 0);
    const auto tomo = run_cli("tomo --events " + events);
    REQUIRE(tomo.exit_code == 0);
    CHECK(tomo.out.find("n_events,20000") != std::string::npos);
    CHECK(tomo.out.find("c_xx,") != std::string::npos);
    CHECK(run_cli("tomo --events " + events + " --threads 3").out == tomo.out);

    const auto again = temp_path("events2.csv.gz");
    REQUIRE(run_cli("rerun " + events + " --out " + again + " --threads 2").exit_code == 0);
    CHECK(topcorr::read_text_file(again) == topcorr::read_text_file(events));
    std::filesystem::remove_all(std::filesystem::temp_directory_path() / "topcorr_cli_test");
  }

  TEST_CASE("witness")
  {
    const auto r = run_cli("witness --state maxmixed --inject-c 0.01,0,0");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("c_antisymmetry_norm,") != std::string::npos);
    CHECK(r.out.find("zero_capacity,0") != std::string::npos);
    const auto s = run_cli("witness --state singlet --inject-b 0.1,0,0");
    CHECK(s.out.find("zero_capacity,1") != std::string::npos);
  }
}
