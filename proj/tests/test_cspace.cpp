#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "jumpplan/cspace.hpp"
#include "jumpplan/error.hpp"
#include "jumpplan/kinematics.hpp"
#include "test_support.hpp"

using namespace jumpplan;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("jumpplan_test_" + name);
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("cspace build") {
  const RobotParams p;
  SUBCASE("fifty divisions") {
    FeasibilityStats stats;
    const CSpaceGrid g = cspace::build(p, JumpTask::front,
                                       cspace::default_ranges(default_initial_state(JumpTask::front)),
                                       50, &stats);
    CHECK(stats.evaluated == 125000);
    CHECK(g.occupancy.size() == 125000);
    CHECK(g.feasible_count() == stats.feasible);
    CHECK(stats.feasible > 0);
    CHECK(stats.feasible < 125000);
  }
  SUBCASE("below ground") {
    CSpaceRanges r = cspace::default_ranges(default_initial_state(JumpTask::front));
    r[1] = {-0.3, -0.05};
    try {
      cspace::build(p, JumpTask::front, r, 10);
      FAIL("expected EmptyCSpaceError");
    } catch (const EmptyCSpaceError& e) {
      CHECK(std::string(e.what()).find("clearance") != std::string::npos);
    }
  }
  SUBCASE("bad arguments") {
    const CSpaceRanges r = cspace::default_ranges(default_initial_state(JumpTask::front));
    CHECK_THROWS_AS(cspace::build(p, JumpTask::front, r, 1), ContractError);
    CSpaceRanges empty = r;
    empty[0] = {0.2, 0.2};
    CHECK_THROWS_AS(cspace::build(p, JumpTask::front, empty, 10), ContractError);
  }
  SUBCASE("brute force oracle") {
    for (JumpTask task : kAllTasks) {
      CAPTURE(to_string(task));
      const CSpaceGrid g = cspace::build(p, task, 10);
      const auto pairs = cspace::grid_pairs(task);
      std::size_t mismatches = 0, feasible = 0;
      for (std::size_t ix = 0; ix < 10; ++ix) {
        for (std::size_t iz = 0; iz < 10; ++iz) {
          for (std::size_t it = 0; it < 10; ++it) {
            const bool want = testing::oracle(p, g.stance, pairs, g.center(ix, iz, it));
            feasible += want ? 1 : 0;
            mismatches += want != g.occupancy[g.index(ix, iz, it)] ? 1 : 0;
          }
        }
      }
      CHECK(mismatches == 0);
      CHECK(feasible == g.feasible_count());
    }
  }
  SUBCASE("feasible cells pass ik") {
    const CSpaceGrid g = cspace::build(p, JumpTask::two_contact, 12);
    const auto pairs = cspace::grid_pairs(JumpTask::two_contact);
    for (std::size_t ix = 0; ix < 12; ++ix) {
      for (std::size_t iz = 0; iz < 12; ++iz) {
        for (std::size_t it = 0; it < 12; ++it) {
          if (!g.occupancy[g.index(ix, iz, it)]) continue;
          const Vec3 cfg = g.center(ix, iz, it);
          CHECK(cspace::feasible(p, g.stance, pairs, cfg));
          CHECK(cspace::contains(g, cfg));
        }
      }
    }
  }
  SUBCASE("shrinking joint limits never adds cells") {
    RobotParams tight = p;
    tight.hip_range = {-1.5, 1.0};
    tight.knee_range = {0.5, 2.0};
    for (JumpTask task : {JumpTask::front, JumpTask::side_left, JumpTask::flip_back}) {
      const CSpaceGrid wide = cspace::build(p, task, 10);
      const CSpaceGrid narrow = cspace::build(tight, task, 10);
      std::size_t added = 0;
      for (std::size_t i = 0; i < wide.occupancy.size(); ++i) {
        added += narrow.occupancy[i] && !wide.occupancy[i] ? 1 : 0;
      }
      CHECK(added == 0);
      CHECK(narrow.feasible_count() <= wide.feasible_count());
    }
  }
}

TEST_CASE("cspace contains") {
  const RobotParams p;
  const CSpaceGrid g = cspace::build(p, JumpTask::front, 50);
  SUBCASE("cell centers") {
    for (std::size_t i : {0ul, 17ul, 49ul}) {
      for (std::size_t j : {0ul, 25ul, 49ul}) {
        for (std::size_t k : {0ul, 24ul, 49ul}) {
          CHECK(cspace::contains(g, g.center(i, j, k)) == g.occupancy[g.index(i, j, k)]);
        }
      }
    }
  }
  SUBCASE("outside the box") {
    CHECK_FALSE(cspace::contains(g, Vec3(g.ranges[0].max + 0.01, 0.25, 0.0)));
    CHECK_FALSE(cspace::contains(g, Vec3(0.0, g.ranges[1].min - 0.01, 0.0)));
    CHECK_FALSE(cspace::contains(g, Vec3(0.0, 0.25, 2.0)));
    CHECK_FALSE(cspace::contains(g, Vec3(0.0, std::nan(""), 0.0)));
  }
  SUBCASE("agreement with direct evaluation") {
    std::mt19937_64 gen(11);
    const auto pairs = cspace::grid_pairs(JumpTask::front);
    std::size_t agree = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      Vec3 cfg;
      for (int a = 0; a < 3; ++a) {
        cfg[a] = std::uniform_real_distribution<double>(g.ranges[a].min, g.ranges[a].max)(gen);
      }
      agree += cspace::contains(g, cfg) == cspace::feasible(p, g.stance, pairs, cfg) ? 1 : 0;
    }
    CHECK(static_cast<double>(agree) / n >= 0.98);
  }
  SUBCASE("flip attitude beyond the theta range") {
    const CSpaceGrid flip = cspace::build(p, JumpTask::flip_back, 20);
    bool found = false;
    for (std::size_t ix = 0; ix < 20 && !found; ++ix) {
      for (std::size_t iz = 0; iz < 20 && !found; ++iz) {
        if (!flip.marginal[ix * 20 + iz]) continue;
        const Vec3 c = flip.center(ix, iz, 0);
        CHECK(cspace::contains(flip, Vec3(c.x(), c.y(), -3.0)));
        CHECK(cspace::contains(flip, Vec3(c.x(), c.y(), -6.0)));
        found = true;
      }
    }
    CHECK(found);
    const Vec3 c = g.center(25, 25, 0);
    CHECK_FALSE(cspace::contains(g, Vec3(c.x(), c.y(), -3.0)));
  }
}

TEST_CASE("cspace files") {
  const RobotParams p;
  const CSpaceGrid g = cspace::build(p, JumpTask::side_right, 50);
  const auto a = temp_file("a.grid"), b = temp_file("b.grid");
  cspace::save(g, a);
  SUBCASE("byte identical round trip") {
    const CSpaceGrid back = cspace::load(a);
    cspace::save(back, b);
    CHECK(read_bytes(a) == read_bytes(b));
    CHECK(back.occupancy == g.occupancy);
    CHECK(back.marginal == g.marginal);
    CHECK(back.task == g.task);
    CHECK(back.params_hash == p.hash());
    CHECK(back.stance.lead_foot == g.stance.lead_foot);
    CHECK(back.stance.plane == g.stance.plane);
  }
  SUBCASE("size") {
    CHECK(std::filesystem::file_size(a) == cspace::kHeaderBytes + (125000 + 7) / 8);
  }
  SUBCASE("wrong version") {
    auto bytes = read_bytes(a);
    bytes[4] = 9;
    CHECK_THROWS_AS(cspace::deserialize(bytes), VersionError);
  }
  SUBCASE("bad magic") {
    auto bytes = read_bytes(a);
    bytes[0] = 'X';
    CHECK_THROWS_AS(cspace::deserialize(bytes), FormatError);
  }
  SUBCASE("truncated") {
    auto bytes = read_bytes(a);
    bytes.resize(bytes.size() - 1);
    CHECK_THROWS_AS(cspace::deserialize(bytes), FormatError);
    bytes.resize(50);
    CHECK_THROWS_AS(cspace::deserialize(bytes), FormatError);
  }
  SUBCASE("trailing bytes") {
    auto bytes = read_bytes(a);
    bytes.push_back(0);
    CHECK_THROWS_AS(cspace::deserialize(bytes), FormatError);
  }
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}
