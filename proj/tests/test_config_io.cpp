#include <catch_amalgamated.hpp>

#include <sstream>

#include "dpr/config.hpp"
#include "dpr/experiment.hpp"
#include "dpr/io.hpp"

using namespace dpr;

TEST_CASE("config round trip preserves every field") {
  ExperimentConfig cfg;
  cfg.donor.j = 12.5e6;
  cfg.donor.a1 = 118e6;
  cfg.nuclear = NuclearConfig::UpUp;
  cfg.initial_state = "t_x";
  cfg.pulse_rabi = 0.5e6;
  cfg.spectrum_points = 17;
  cfg.tunneling.gamma_out = 1.0 / 40e-6;
  cfg.tunneling.thermal_channels = true;
  cfg.trace.threshold = 0.62;
  cfg.ideal_detection = true;
  cfg.calibrate_target = 0.6;
  cfg.repetitions = 500;
  cfg.subgroup_size = 50;
  cfg.master_seed = 987654321;
  cfg.zeeman_explicit = true;
  cfg.tunneling.zeeman_split = 27e9;
  cfg.finalize();

  std::stringstream buf;
  write_config(cfg, buf);
  const ExperimentConfig back = parse_config(buf);
  CHECK(back.donor.j == cfg.donor.j);
  CHECK(back.donor.a1 == cfg.donor.a1);
  CHECK(back.nuclear == cfg.nuclear);
  CHECK(back.initial_state == cfg.initial_state);
  CHECK(back.pulse_rabi == cfg.pulse_rabi);
  CHECK(back.spectrum_points == cfg.spectrum_points);
  CHECK(back.tunneling.gamma_out == cfg.tunneling.gamma_out);
  CHECK(back.tunneling.thermal_channels == cfg.tunneling.thermal_channels);
  CHECK(back.tunneling.zeeman_split == 27e9);
  CHECK(back.trace.threshold == cfg.trace.threshold);
  CHECK(back.ideal_detection == cfg.ideal_detection);
  CHECK(back.calibrate_target == cfg.calibrate_target);
  CHECK(back.repetitions == cfg.repetitions);
  CHECK(back.subgroup_size == cfg.subgroup_size);
  CHECK(back.master_seed == cfg.master_seed);
}

TEST_CASE("unknown keys and sections are rejected") {
  std::stringstream a("[donor]\nfoo = 1\n");
  CHECK_THROWS_AS(parse_config(a), ConfigError);
  std::stringstream b("[widget]\nx = 1\n");
  CHECK_THROWS_AS(parse_config(b), ConfigError);
  std::stringstream c("[donor]\nb0\n");
  CHECK_THROWS_AS(parse_config(c), ConfigError);
  std::stringstream d("[donor]\nb0 = abc\n");
  CHECK_THROWS_AS(parse_config(d), ConfigError);
  std::stringstream e("[nuclear]\norientation = sideways\n");
  CHECK_THROWS_AS(parse_config(e), ConfigError);
}

TEST_CASE("comments, blanks and defaults") {
  std::stringstream in(
      "# experiment\n"
      "[run]\n"
      "repetitions = 200  # small batch\n"
      "subgroup_size = 20\n"
      "\n"
      "[nuclear]\n"
      "orientation = down_up\n");
  const ExperimentConfig cfg = parse_config(in);
  CHECK(cfg.repetitions == 200);
  CHECK(cfg.subgroup_size == 20);
  CHECK(cfg.nuclear == NuclearConfig::DownUp);
  CHECK(cfg.donor.j == 10e6);
  // The Zeeman splitting defaults to gamma_e * B0.
  CHECK(cfg.tunneling.zeeman_split ==
        Catch::Approx(electron_gyromagnetic(1.9985)).epsilon(1e-12));
}

TEST_CASE("divisibility and range validation") {
  std::stringstream a("[run]\nrepetitions = 1001\nsubgroup_size = 100\n");
  CHECK_THROWS_AS(parse_config(a), ConfigError);
  std::stringstream b("[calibrate]\ntarget = 1.5\n");
  CHECK_THROWS_AS(parse_config(b), ConfigError);
}

TEST_CASE("CSV cells are written with six significant digits") {
  CHECK(detail::csv_num(1234567.0) == "1.23457e+06");
  CHECK(detail::csv_num(0.5) == "0.5");
  CHECK(detail::csv_num(3.14159265358979) == "3.14159");
}

TEST_CASE("initial state recipes resolve") {
  ExperimentConfig cfg;
  cfg.finalize();
  for (const char* name : {"t_minus", "t_plus", "t_x", "s_tilde", "t0_tilde"}) {
    cfg.initial_state = name;
    CHECK_NOTHROW(prepare_initial(cfg).check());
  }
  cfg.nuclear = NuclearConfig::DownUp;
  for (const char* name : {"dd", "du", "ud", "uu"}) {
    cfg.initial_state = name;
    CHECK_NOTHROW(prepare_initial(cfg).check());
  }
  cfg.initial_state = "bogus";
  CHECK_THROWS_AS(prepare_initial(cfg), ConfigError);
}

TEST_CASE("derived random streams are reproducible and distinct") {
  Rng a = derive_stream(5, 0);
  Rng b = derive_stream(5, 0);
  Rng c = derive_stream(5, 1);
  bool all_equal = true;
  bool any_equal_c = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.raw();
    if (va != b.raw()) all_equal = false;
    if (va == c.raw()) any_equal_c = true;
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal_c);
}

TEST_CASE("uniform and exponential samplers are sane") {
  Rng rng(404);
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    mean += u;
  }
  CHECK(mean / 20000 == Catch::Approx(0.5).margin(0.01));
  double emean = 0.0;
  for (int i = 0; i < 20000; ++i) emean += rng.exponential(2.0);
  CHECK(emean / 20000 == Catch::Approx(0.5).epsilon(0.03));
}
