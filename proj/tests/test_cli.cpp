#include <gtest/gtest.h>

#include <sys/wait.h>

#include "cli_harness.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "sensorsel/evaluate.hpp"
#include "sensorsel/experiments.hpp"
#include "sensorsel/io.hpp"
#include "sensorsel/linalg.hpp"

using sensorsel::Matrix;
using harness::run;
using harness::slurp;
using harness::spit;
namespace io = sensorsel::io;
namespace sel = sensorsel::selection;
namespace ev = sensorsel::evaluate;
namespace pod = sensorsel::pod;

TEST(CliPod, DiagonalSnapshotsGiveSigma) {
  harness::TempDir dir;
  io::write_matrix_csv(dir / "x.csv", Matrix{{3, 0, 0}, {0, 2, 0}, {0, 0, 1}});
  const auto res = run({"--no-center", "pod", "-i", dir / "x.csv", "-r", "3", "--modes",
                        dir / "u.csv", "--sigma", dir / "sigma.csv"});
  ASSERT_EQ(res.code, 0) << res.err;
  EXPECT_EQ(slurp(dir / "sigma.csv"), "3\n2\n1\n");
}

TEST(CliPod, MalformedInputNamesLine) {
  harness::TempDir dir;
  spit(dir / "x.csv", "1,2\n3,4\n5,oops\n");
  const auto res =
      run({"pod", "-i", dir / "x.csv", "-r", "1", "--modes", dir / "u", "--sigma", dir / "s"});
  EXPECT_EQ(res.code, 2);
  EXPECT_NE(res.err.find(":3:"), std::string::npos) << res.err;
}

TEST(CliPod, ModesRoundTripBitExact) {
  harness::TempDir dir;
  const pod::SnapshotMatrix snaps(oracle::gaussian(24, 10, 4), 2);
  io::write_matrix_csv(dir / "x.csv", snaps.data());
  ASSERT_EQ(run({"pod", "-i", dir / "x.csv", "-s", "2", "-r", "4", "--modes", dir / "u.csv",
                 "--sigma", dir / "s.csv", "--mean", dir / "m.csv"})
                .code,
            0);
  const auto basis = pod::compute_pod(snaps, 4);
  EXPECT_EQ(io::read_matrix_csv(dir / "u.csv"), basis.modes);
  EXPECT_EQ(io::read_matrix_csv(dir / "m.csv"), Matrix(24, 1, basis.mean));
}

TEST(CliPod, DimensionError) {
  harness::TempDir dir;
  io::write_matrix_csv(dir / "x.csv", oracle::gaussian(5, 4, 1));
  EXPECT_EQ(run({"pod", "-i", dir / "x.csv", "-s", "2", "-r", "2", "--modes", dir / "u", "--sigma",
                 dir / "s"})
                .code,
            3);
  EXPECT_EQ(run({"pod", "-i", dir / "x.csv", "-r", "9", "--modes", dir / "u", "--sigma", dir / "s"})
                .code,
            3);
}

TEST(CliSelect, IdentityPicksAllInOrder) {
  harness::TempDir dir;
  io::write_matrix_csv(dir / "u.csv", Matrix::identity(5));
  ASSERT_EQ(run({"select", "--modes", dir / "u.csv", "-p", "5", "-m", "vector-greedy", "-o",
                 dir / "sel.csv"})
                .code,
            0);
  EXPECT_EQ(io::read_selection_csv(dir / "sel.csv").locations,
            (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(CliSelect, RandomRequiresSeed) {
  harness::TempDir dir;
  io::write_matrix_csv(dir / "u.csv", oracle::gaussian(10, 4, 1));
  const auto res =
      run({"select", "--modes", dir / "u.csv", "-p", "2", "-m", "random", "-o", dir / "sel.csv"});
  EXPECT_EQ(res.code, 4);
  EXPECT_NE(res.err.find("--seed"), std::string::npos);
}

TEST(CliSelect, SeededRerunIsByteIdentical) {
  harness::TempDir dir;
  io::write_matrix_csv(dir / "u.csv", oracle::gaussian(40, 6, 1));
  for (const char* out : {"a.csv", "b.csv"}) {
    ASSERT_EQ(run({"--seed", "99", "select", "--modes", dir / "u.csv", "-s", "2", "-p", "3", "-m",
                   "random", "-o", dir / out})
                  .code,
              0);
  }
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
}

TEST(CliSelect, BudgetViolation) {
  harness::TempDir dir;
  io::write_matrix_csv(dir / "u.csv", oracle::gaussian(40, 6, 1));
  const auto res = run({"select", "--modes", dir / "u.csv", "-s", "2", "-p", "4", "-m",
                        "vector-greedy", "-o", dir / "sel.csv"});
  EXPECT_EQ(res.code, 3);
  EXPECT_NE(res.err.find("s*p <= r"), std::string::npos) << res.err;
  EXPECT_EQ(run({"select", "--modes", dir / "u.csv", "-p", "1", "-m", "bogus", "-o", dir / "x"}).code,
            3);
}

TEST(CliReconstruct, IdentityModelEchoesObservations) {
  harness::TempDir dir;
  io::write_matrix_csv(dir / "u.csv", Matrix::identity(3));
  io::write_selection_csv(dir / "sel.csv", sel::SensorSelection({0, 1, 2}, 1, 3,
                                                                 sel::Method::VectorGreedy));
  const Matrix y{{1.5, -2}, {0.25, 3}, {7, 0}};
  io::write_matrix_csv(dir / "y.csv", y);
  ASSERT_EQ(run({"reconstruct", "--modes", dir / "u.csv", "--selection", dir / "sel.csv",
                 "--observations", dir / "y.csv", "-o", dir / "a.csv"})
                .code,
            0);
  EXPECT_EQ(io::read_matrix_csv(dir / "a.csv"), y);
}

TEST(CliReconstruct, PrintsErrorForConsistentSystem) {
  harness::TempDir dir;
  const auto basis = pod::PodBasis::from_modes(
      sensorsel::linalg::thin_svd(oracle::gaussian(30, 6, 2), 6).left, 2);
  const auto s = sel::select_vector_greedy(basis, 3);
  const Matrix a = oracle::gaussian(6, 8, 5);
  io::write_matrix_csv(dir / "u.csv", basis.modes);
  io::write_selection_csv(dir / "sel.csv", s);
  io::write_matrix_csv(dir / "y.csv", oracle::matmul(ev::build_model(basis, s).c, a));
  io::write_matrix_csv(dir / "truth.csv", a);
  const auto res = run({"reconstruct", "--modes", dir / "u.csv", "--selection", dir / "sel.csv",
                        "--observations", dir / "y.csv", "-o", dir / "a.csv", "--true-amplitudes",
                        dir / "truth.csv"});
  ASSERT_EQ(res.code, 0) << res.err;
  EXPECT_LE(std::stod(res.out), 1e-8);
}

TEST(CliReconstruct, ShapeMismatchAndSingular) {
  harness::TempDir dir;
  io::write_matrix_csv(dir / "u.csv", Matrix{{1, 2}, {2, 4}, {1, 1}});
  io::write_selection_csv(dir / "sel.csv",
                          sel::SensorSelection({0, 1}, 1, 3, sel::Method::VectorGreedy));
  io::write_matrix_csv(dir / "y3.csv", Matrix(3, 1, 1.0));
  io::write_matrix_csv(dir / "y2.csv", Matrix(2, 1, 1.0));
  EXPECT_EQ(run({"reconstruct", "--modes", dir / "u.csv", "--selection", dir / "sel.csv",
                 "--observations", dir / "y3.csv", "-o", dir / "a.csv"})
                .code,
            3);
  const auto res = run({"reconstruct", "--modes", dir / "u.csv", "--selection", dir / "sel.csv",
                        "--observations", dir / "y2.csv", "-o", dir / "a.csv"});
  EXPECT_EQ(res.code, 5);
  EXPECT_NE(res.err.find("sigma_min/sigma_max"), std::string::npos) << res.err;
}

TEST(CliBenchmark, TinyConfigAndRerun) {
  harness::TempDir dir;
  const std::string config =
      "n_per_component = 20\ns = 2\nr_values = 4, 6\ntrials = 1\nbase_seed = 3\n"
      "methods = vector-greedy, scalar-greedy-component-1, random\n";
  spit(dir / "cfg.txt", config);
  for (const char* out : {"a.json", "b.json"}) {
    ASSERT_EQ(run({"benchmark", "-c", dir / "cfg.txt", "-o", dir / out}).code, 0);
  }
  auto strip = [](const std::string& path) {
    auto doc = nlohmann::json::parse(slurp(path));
    doc.erase("wall_time_seconds");
    return doc;
  };
  const auto a = strip(dir / "a.json");
  EXPECT_EQ(a, strip(dir / "b.json"));
  EXPECT_EQ(a["cells"].size(), 6u);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(slurp(dir / "cfg.txt"), config);
}

TEST(CliBenchmark, UnknownKeyExitsTwo) {
  harness::TempDir dir;
  spit(dir / "cfg.txt", "trials = 1\nbananas = 4\n");
  const auto res = run({"benchmark", "-c", dir / "cfg.txt", "-o", dir / "r.json"});
  EXPECT_EQ(res.code, 2);
  EXPECT_NE(res.err.find("bananas"), std::string::npos);
}

TEST(CliBenchmark, ReconstructionStudy) {
  harness::TempDir dir;
  spit(dir / "cfg.txt",
       "study = reconstruction\nn_per_component = 30\ns = 2\nr_values = 4\ntrials = 2\n"
       "snapshots = 40\nmethods = vector-greedy, random\n");
  ASSERT_EQ(run({"benchmark", "-c", dir / "cfg.txt", "-o", dir / "r.json", "--csv", dir / "t.csv"})
                .code,
            0);
  const auto doc = nlohmann::json::parse(slurp(dir / "r.json"));
  bool full = false;
  for (const auto& cell : doc["cells"]) full |= cell["method"] == "full-observation";
  EXPECT_TRUE(full);
}

TEST(CliBinary, ExitCodes) {
  harness::TempDir dir;
  EXPECT_EQ(harness::run_binary("--help", dir / "o"), 0);
  EXPECT_EQ(harness::run_binary("select --modes x.csv", dir / "o"), 4);
  EXPECT_EQ(harness::run_binary("frobnicate", dir / "o"), 2);
  EXPECT_EQ(harness::run_binary("select --modes x.csv -p one -m random -o y", dir / "o"), 2);
  spit(dir / "x.csv", "1,2\n3\n");
  EXPECT_EQ(harness::run_binary("pod -i " + (dir / "x.csv") + " -r 1 --modes " + (dir / "u") +
                                    " --sigma " + (dir / "s"),
                                dir / "o"),
            2);
}
