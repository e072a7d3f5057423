#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "isac/allocators.hpp"
#include "isac/channel.hpp"
#include "isac/emit.hpp"
#include "isac/metrics.hpp"
#include "isac/model.hpp"
#include "isac/scenario.hpp"
#include "isac/sweeps.hpp"

using namespace isac;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("isac_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioConfig small_scenario(const std::string& outdir) {
  ScenarioConfig c;
  c.ofdm.k = 32;
  c.ofdm.oversample = 8;
  c.bandwidth_hz = 1e6;
  c.channel.seed = 5;
  c.solver.max_iters = 4000;
  c.sweep.threads = 1;
  c.output.dir = outdir;
  c.finalize();
  return c;
}

}  // namespace

TEST_CASE("flat channel is all ones regardless of seed and snr") {
  OfdmConfig cfg;
  cfg.k = 16;
  ChannelSpec spec;
  spec.model = ChannelModel::Flat;
  spec.seed = 9;
  spec.snr_db = 27.0;
  const ChannelRealization chan = generate_channel(spec, cfg);
  for (Index k = 0; k < 16; ++k) CHECK(chan.h[k] == std::complex<double>(1.0, 0.0));
}

TEST_CASE("seeded generation is reproducible and seed-sensitive") {
  OfdmConfig cfg;
  cfg.k = 64;
  for (ChannelModel m : {ChannelModel::RayleighIid, ChannelModel::RayleighExpPdp}) {
    ChannelSpec spec;
    spec.model = m;
    spec.seed = 7;
    const ChannelRealization a = generate_channel(spec, cfg);
    const ChannelRealization b = generate_channel(spec, cfg);
    CHECK(a.h == b.h);
    spec.seed = 8;
    const ChannelRealization c = generate_channel(spec, cfg);
    CHECK(a.h != c.h);
  }
}

TEST_CASE("iid gains average to the configured snr scale") {
  OfdmConfig cfg;
  cfg.k = 10000;
  cfg.delta_f = 1e6 / cfg.k;
  cfg.n0 = 1e-6;
  cfg.p_total = 1.0;
  cfg.oversample = 1;
  ChannelSpec spec;
  spec.model = ChannelModel::RayleighIid;
  spec.seed = 11;
  spec.snr_db = 0.0;  // scale factor exactly 1 for this config
  const ChannelRealization chan = generate_channel(spec, cfg);
  const double mean_power = chan.h.cwiseAbs2().mean();
  CHECK(std::abs(mean_power - 1.0) <= 0.03);
}

TEST_CASE("unknown channel model is rejected") {
  CHECK_THROWS_AS(channel_model_from_string("awgn"), std::invalid_argument);
  CHECK(channel_model_from_string("rayleigh_iid") == ChannelModel::RayleighIid);
}

TEST_CASE("config file parsing, overrides and validation") {
  TempDir tmp("config");
  const fs::path file = tmp.path / "scenario.cfg";
  {
    std::ofstream out(file);
    out << "# comment line\n"
        << "ofdm.k = 64\n"
        << "ofdm.bandwidth_hz = 2e6\n"
        << "channel.model = rayleigh_exp_pdp   # trailing comment\n"
        << "channel.seed = 77\n"
        << "thresholds.gamma_psl_db = -15\n"
        << "sweep.gamma_psl_list = -5, -10, -20\n"
        << "output.format = json\n";
  }
  ScenarioConfig cfg = load_scenario(file.string());
  cfg.finalize();
  CHECK(cfg.ofdm.k == 64);
  CHECK(cfg.ofdm.delta_f == doctest::Approx(2e6 / 64));
  CHECK(cfg.channel.model == ChannelModel::RayleighExpPdp);
  CHECK(cfg.channel.seed == 77);
  CHECK(cfg.thresholds.gamma_psl_db == -15.0);
  CHECK(cfg.sweep.gamma_psl_list == std::vector<double>{-5, -10, -20});
  CHECK(cfg.output.format == "json");

  CHECK_THROWS_AS(load_scenario((tmp.path / "missing.cfg").string()), ConfigError);
  CHECK_THROWS_AS(apply_config_key(cfg, "ofdm.unknown", "1"), ConfigError);
  CHECK_THROWS_AS(apply_config_key(cfg, "ofdm.k", "abc"), ConfigError);
  CHECK_THROWS_AS(apply_config_key(cfg, "channel.model", "awgn"), ConfigError);
  CHECK_THROWS_AS(apply_config_key(cfg, "output.meters", "maybe"), ConfigError);

  ScenarioConfig bad = cfg;
  bad.output.format = "xml";
  CHECK_THROWS_AS(bad.finalize(), ConfigError);
  bad = cfg;
  bad.sweep.alpha_grid = {0.5, 0.2};
  CHECK_THROWS_AS(bad.finalize(), ConfigError);
  bad = cfg;
  bad.ofdm.k = 1;
  CHECK_THROWS_AS(bad.finalize(), ConfigError);

  {
    std::ofstream out(file, std::ios::app);
    out << "not a key value line\n";
  }
  CHECK_THROWS_AS(load_scenario(file.string()), ConfigError);
}

TEST_CASE("psl sweep rows, ordering guard and infeasible flags") {
  TempDir tmp("pslsweep");
  ScenarioConfig cfg = small_scenario((tmp.path / "out").string());
  cfg.sweep.gamma_psl_list = {-5, -12, -18, -80};

  const auto rows = run_psl_sweep(cfg);
  REQUIRE(rows.size() == 4);

  const ChannelRealization chan = generate_channel(cfg.channel, cfg.ofdm);
  const double c_wf = capacity(water_filling(chan, cfg.ofdm), chan, cfg.ofdm);
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    if (!rows[i].feasible || !rows[i + 1].feasible) continue;
    CHECK(rows[i + 1].capacity_bits <= rows[i].capacity_bits + 1e-6);
  }
  CHECK(rows[0].feasible);
  CHECK(rows[0].capacity_bits == doctest::Approx(c_wf).epsilon(1e-9));
  CHECK_FALSE(rows[3].feasible);  // -80 dB is beyond the achievable frontier

  for (const auto& row : rows) {
    if (!row.feasible) continue;
    row.allocation.validate(cfg.ofdm);
    CHECK(row.psl_db <= row.gamma_psl_db + 0.1);
    CHECK(row.profile_magnitude.size() == cfg.ofdm.n_bins());
  }

  cfg.sweep.gamma_psl_list = {-20, -5};  // tight -> loose: wrong way around
  CHECK_THROWS_AS(run_psl_sweep(cfg), ConfigError);
}

TEST_CASE("alpha sweep pins the alpha-zero row to exact unity") {
  TempDir tmp("alphasweep");
  ScenarioConfig cfg = small_scenario((tmp.path / "out").string());
  for (SweepDirection dir : {SweepDirection::TowardEdges, SweepDirection::TowardPslOpt}) {
    const auto rows = run_alpha_sweep(cfg, dir);
    REQUIRE(rows.size() == cfg.sweep.alpha_grid.size());
    CHECK(rows[0].alpha == 0.0);
    CHECK(rows[0].capacity_ratio == 1.0);
    CHECK(rows[0].mlw_ratio == 1.0);
    for (const auto& r : rows) CHECK(r.direction == dir);
    CHECK(rows.back().alpha == 1.0);
  }
}

TEST_CASE("surface rows carry the decision and full-capacity fallbacks") {
  TempDir tmp("surface");
  ScenarioConfig cfg = small_scenario((tmp.path / "out").string());
  cfg.sweep.surface_gamma_psl = {-45, -25, -6};
  cfg.sweep.surface_mlw_scales = {1.0, 1.8};

  const auto rows = run_capacity_surface(cfg);
  REQUIRE(rows.size() == 6);

  const ChannelRealization chan = generate_channel(cfg.channel, cfg.ofdm);
  const double c_wf = capacity(water_filling(chan, cfg.ofdm), chan, cfg.ofdm);
  int comm_cells = 0;
  for (const auto& r : rows) {
    CHECK(r.capacity_bits <= c_wf + 1e-9);
    if (r.mode == Mode::CommOnly) {
      ++comm_cells;
      CHECK(r.capacity_bits == doctest::Approx(c_wf).epsilon(1e-12));
      CHECK(r.alpha == 0.0);
    }
  }
  CHECK(comm_cells >= 1);  // the -45 dB column is out of reach for this setup
  // loosest corner is the last row by construction (bounds then gammas ascending)
  CHECK(rows.back().gamma_psl_db == -6);
  CHECK(rows.back().capacity_bits >= 0.99 * c_wf);
}

TEST_CASE("sweeps are byte-stable across thread counts") {
  TempDir tmp("threads");
  ScenarioConfig one = small_scenario((tmp.path / "a").string());
  ScenarioConfig many = small_scenario((tmp.path / "b").string());
  many.sweep.threads = 4;

  const auto r1 = run_psl_sweep(one);
  const auto r4 = run_psl_sweep(many);
  REQUIRE(r1.size() == r4.size());
  for (size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].capacity_bits == r4[i].capacity_bits);
    CHECK(r1[i].psl_db == r4[i].psl_db);
    CHECK(r1[i].mlw_bins == r4[i].mlw_bins);
    if (r1[i].feasible) CHECK(r1[i].allocation.p == r4[i].allocation.p);
  }

  const auto s1 = run_alpha_sweep(one, SweepDirection::TowardEdges);
  const auto s4 = run_alpha_sweep(many, SweepDirection::TowardEdges);
  for (size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].capacity_ratio == s4[i].capacity_ratio);
    CHECK(s1[i].suppression_db == s4[i].suppression_db);
    CHECK(s1[i].mlw_ratio == s4[i].mlw_ratio);
  }
}

TEST_CASE("parallel_for_index covers every index exactly once") {
  std::vector<int> hits(257, 0);
  parallel_for_index(257, 8, [&](int i) { hits[i] += i + 1; });
  for (int i = 0; i < 257; ++i) CHECK(hits[i] == i + 1);
}

TEST_CASE("table formatting and exact headers") {
  CHECK(format_double(1.5) == "1.5");
  CHECK(format_double(-10.0) == "-10");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(0.1) == "0.1");

  CHECK(psl_sweep_table({}).header ==
        std::vector<std::string>{"gamma_psl_db", "feasible", "capacity_bits", "capacity_loss",
                                 "psl_db", "mlw_bins", "accuracy_loss_pct"});
  CHECK(alpha_sweep_table({}).header ==
        std::vector<std::string>{"direction", "alpha", "capacity_ratio", "suppression_db",
                                 "mlw_ratio"});
  CHECK(surface_table({}).header ==
        std::vector<std::string>{"gamma_psl_db", "mlw_bound_bins", "mode", "capacity_bits",
                                 "alpha"});
  OfdmConfig cfg;
  cfg.k = 4;
  PowerAllocation p = uniform_allocation(cfg);
  ChannelRealization chan{CVec::Ones(4)};
  CHECK(allocation_table("a", p, chan).header == std::vector<std::string>{"k", "p_k", "h_abs2"});
  CHECK(profile_table("pr", Vec::Ones(3), cfg, false).header ==
        std::vector<std::string>{"n", "magnitude"});
  CHECK(profile_table("pr", Vec::Ones(3), cfg, true).header ==
        std::vector<std::string>{"n", "magnitude", "range_m"});
}

TEST_CASE("emitter writes deterministic files and a manifest") {
  TempDir tmp("emit");
  ScenarioConfig cfg = small_scenario((tmp.path / "out").string());

  auto emit_once = [&]() {
    Emitter emitter(cfg, "sweep-psl");
    Table t = psl_sweep_table({});
    emitter.write_table(t);
    emitter.write_manifest();
  };
  emit_once();
  const std::string csv1 = slurp(fs::path(cfg.output.dir) / "psl_sweep.csv");
  const std::string man1 = slurp(fs::path(cfg.output.dir) / "manifest.json");
  emit_once();
  CHECK(csv1 == slurp(fs::path(cfg.output.dir) / "psl_sweep.csv"));
  CHECK(man1 == slurp(fs::path(cfg.output.dir) / "manifest.json"));

  // empty table: header-only csv
  CHECK(csv1 == "gamma_psl_db,feasible,capacity_bits,capacity_loss,psl_db,mlw_bins,accuracy_loss_pct\n");
  CHECK(man1.find("\"command\": \"sweep-psl\"") != std::string::npos);
  CHECK(man1.find("\"files\"") != std::string::npos);
}

TEST_CASE("emitted allocations re-validate after a csv round trip") {
  TempDir tmp("reparse");
  ScenarioConfig cfg = small_scenario((tmp.path / "out").string());
  const ChannelRealization chan = generate_channel(cfg.channel, cfg.ofdm);
  const PowerAllocation wf = water_filling(chan, cfg.ofdm);

  Emitter emitter(cfg, "allocate");
  const std::string path = emitter.write_table(allocation_table("allocation", wf, chan));

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  Vec parsed(cfg.ofdm.k);
  int count = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    const int k = std::stoi(cell);
    std::getline(ss, cell, ',');
    parsed[k] = std::stod(cell);
    ++count;
  }
  REQUIRE(count == cfg.ofdm.k);
  PowerAllocation round_trip{parsed};
  round_trip.validate(cfg.ofdm);           // budget and nonnegativity survive
  CHECK((round_trip.p - wf.p).cwiseAbs().maxCoeff() == 0.0);  // shortest-roundtrip exact
}

TEST_CASE("json table format") {
  TempDir tmp("json");
  ScenarioConfig cfg = small_scenario((tmp.path / "out").string());
  cfg.output.format = "json";
  Emitter emitter(cfg, "sweep-alpha");
  AlphaSweepRow row;
  row.alpha = 0.5;
  row.capacity_ratio = 0.75;
  const std::string path = emitter.write_table(alpha_sweep_table({row}));
  CHECK(path.ends_with("alpha_sweep.json"));
  const std::string body = slurp(path);
  CHECK(body.find("\"toward_edges\"") != std::string::npos);
  CHECK(body.find("\"0.75\"") != std::string::npos);
}

TEST_CASE("unwritable output directory raises an io error") {
  ScenarioConfig cfg;
  cfg.output.dir = "/proc/isac_no_such_place/out";
  cfg.finalize();
  CHECK_THROWS_AS(Emitter(cfg, "channel"), IoError);
}

TEST_CASE("decision summary json") {
  DecisionOutcome out;
  out.mode = Mode::Isac;
  out.branch = Branch::BlendTowardEdges;
  out.alpha = 0.25;
  out.feasible = true;
  const std::string body = decision_json(out);
  CHECK(body.find("\"ISAC\"") != std::string::npos);
  CHECK(body.find("\"BlendTowardEdges\"") != std::string::npos);
}

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ISAC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cli exit codes") {
  TempDir tmp("cli");
  const std::string out = " --out " + (tmp.path / "out").string();

  CHECK(run_cli("channel --seed 3" + out) == 0);
  CHECK(run_cli("") == 2);                                      // missing subcommand
  CHECK(run_cli("--config /no/such/file.cfg channel" + out) == 2);
  CHECK(run_cli("--format xml channel" + out) == 2);

  const fs::path bad_key = tmp.path / "bad.cfg";
  std::ofstream(bad_key) << "ofdm.kk = 12\n";
  CHECK(run_cli("--config " + bad_key.string() + " channel" + out) == 2);

  // every requested bound beyond the achievable frontier: infeasible scenario
  const fs::path hopeless = tmp.path / "hopeless.cfg";
  std::ofstream(hopeless) << "ofdm.k = 16\nofdm.oversample = 8\n"
                          << "solver.max_iters = 2000\nsweep.gamma_psl_list = -90\n";
  CHECK(run_cli("--config " + hopeless.string() + " sweep-psl" + out) == 3);
  // the flagged table is still written
  CHECK(fs::exists(tmp.path / "out" / "psl_sweep.csv"));

  CHECK(run_cli("channel --out /proc/isac_nowhere/out") == 4);
}
