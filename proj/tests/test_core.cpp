#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "marksman/action_grid.hpp"
#include "marksman/geometry.hpp"
#include "marksman/rng.hpp"
#include "marksman/state_codec.hpp"

using namespace marksman;

// ---------------------------------------------------------------------------
// geometry

TEST_CASE("normalize_angle_deg maps into (-180, 180]") {
  CHECK(normalize_angle_deg(0.0) == 0.0);
  CHECK(normalize_angle_deg(180.0) == 180.0);
  CHECK(normalize_angle_deg(-180.0) == 180.0);
  CHECK(normalize_angle_deg(190.0) == doctest::Approx(-170.0));
  CHECK(normalize_angle_deg(-190.0) == doctest::Approx(170.0));
  CHECK(normalize_angle_deg(540.0) == doctest::Approx(180.0));
  CHECK(normalize_angle_deg(360.0) == 0.0);
  CHECK(normalize_angle_deg(-720.0) == 0.0);

  for (double a = -1000.0; a <= 1000.0; a += 0.37) {
    const double n = normalize_angle_deg(a);
    CHECK(n > -180.0);
    CHECK(n <= 180.0);
    // Same direction modulo 360.
    const double diff = std::fmod(std::fabs(a - n), 360.0);
    CHECK((diff < 1e-9 || std::fabs(diff - 360.0) < 1e-9));
  }
}

TEST_CASE("Vec3 cross product is right-handed and anti-commutative") {
  const Vec3 x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1};
  auto eq = [](const Vec3& a, const Vec3& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  };
  CHECK(eq(x.cross(y), z));
  CHECK(eq(y.cross(z), x));
  CHECK(eq(z.cross(x), y));
  CHECK(eq(y.cross(x), z * -1.0));

  const Vec3 a{1.5, -2.0, 0.25}, b{-0.5, 3.0, 4.0};
  const Vec3 c = a.cross(b);
  CHECK(c.dot(a) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c.dot(b) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("deg/rad conversions invert each other") {
  for (double d = -360.0; d <= 360.0; d += 11.25) {
    CHECK(rad_to_deg(deg_to_rad(d)) == doctest::Approx(d).epsilon(1e-12));
  }
  CHECK(deg_to_rad(180.0) == doctest::Approx(kPi));
}

// ---------------------------------------------------------------------------
// rng

TEST_CASE("rng streams are reproducible from the seed alone") {
  Rng a(12345), b(12345), c(54321);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u64();
    all_equal = all_equal && (va == b.next_u64());
    any_diff = any_diff || (va != c.next_u64());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform stays in [0,1) with a sane mean") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform_int respects bounds and is roughly uniform") {
  Rng rng(99);
  const std::uint64_t n = 7;
  std::vector<int> counts(n, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    const auto v = rng.uniform_int(n);
    REQUIRE(v < n);
    counts[v]++;
  }
  const double expect = static_cast<double>(draws) / n;
  const double sigma = std::sqrt(expect * (1.0 - 1.0 / n));
  for (auto c : counts) CHECK(std::fabs(c - expect) < 4.0 * sigma);
}

TEST_CASE("gaussian has standard-normal moments") {
  Rng rng(2024);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::fabs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("chance handles the degenerate probabilities") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) CHECK_FALSE(rng.chance(0.0));
  for (int i = 0; i < 1000; ++i) CHECK(rng.chance(1.0));
}

TEST_CASE("derived streams are distinct from the parent and each other") {
  const Rng parent(42);
  Rng c0 = parent.derive(0);
  Rng c1 = parent.derive(1);
  Rng p(42);
  int diff01 = 0, diff0p = 0;
  for (int i = 0; i < 16; ++i) {
    const auto v0 = c0.next_u64();
    if (v0 != c1.next_u64()) ++diff01;
    if (v0 != p.next_u64()) ++diff0p;
  }
  CHECK(diff01 == 16);
  CHECK(diff0p == 16);
}

// ---------------------------------------------------------------------------
// state codec: velocity

namespace {

// Independent axis classifier used as the oracle: direction by sign
// (non-negative = forward/right), level by the 150/300 edges.
struct AxisClass {
  int negative;  // 0 = F/R, 1 = B/L
  int level;     // 1..3
  auto operator<=>(const AxisClass&) const = default;
};

AxisClass classify_axis(double v) {
  const double m = std::fabs(v);
  return {v < 0.0 ? 1 : 0, m < 150.0 ? 1 : (m < 300.0 ? 2 : 3)};
}

bool oracle_stationary(double f, double l) {
  return std::fmax(std::fabs(f), std::fabs(l)) < 10.0;
}

}  // namespace

TEST_CASE("velocity bucket 0 is exactly the sub-threshold square") {
  CHECK(encode_velocity(0, 0) == 0);
  CHECK(encode_velocity(9.999, 9.999) == 0);
  CHECK(encode_velocity(-9.999, 9.0) == 0);
  CHECK(encode_velocity(10.0, 0.0) != 0);
  CHECK(encode_velocity(0.0, -10.0) != 0);
  CHECK(encode_velocity(0.0, 10.0) != 0);
}

TEST_CASE("velocity buckets depend only on per-axis direction and level") {
  // (200, 100): forward level 2, right level 1. Any pair with the same
  // classification must land in the same bucket.
  const int f2r1 = encode_velocity(200, 100);
  CHECK(f2r1 == encode_velocity(151, 149));
  CHECK(f2r1 == encode_velocity(299.9, 0.0));
  CHECK(f2r1 == encode_velocity(150.0, 10.0));

  // (-50, -400): backward level 1, left level 3.
  const int b1l3 = encode_velocity(-50, -400);
  CHECK(b1l3 == encode_velocity(-149, -301));
  CHECK(b1l3 == encode_velocity(-10, -300));
  CHECK(f2r1 != b1l3);

  // A near-zero single axis still classifies as level 1 on that axis.
  CHECK(encode_velocity(3, 50) == encode_velocity(120, 50));
  CHECK(encode_velocity(200, 3) == encode_velocity(200, 100));

  // Level edges flip the bucket.
  CHECK(encode_velocity(149, 0) != encode_velocity(150, 0));
  CHECK(encode_velocity(299, 0) != encode_velocity(300, 0));
  CHECK(encode_velocity(0, 149) != encode_velocity(0, 150));
  // Sign flips the bucket.
  CHECK(encode_velocity(50, 50) != encode_velocity(-50, 50));
  CHECK(encode_velocity(50, 50) != encode_velocity(50, -50));
}

TEST_CASE("the 36 moving combinations map bijectively onto buckets 1..36") {
  Rng rng(31337);
  std::map<std::pair<AxisClass, AxisClass>, int> seen;
  auto sample_level = [&](int level, int negative) {
    double lo = 0.0, hi = 149.0;
    if (level == 2) { lo = 150.0; hi = 299.0; }
    if (level == 3) { lo = 300.0; hi = 600.0; }
    double m = lo + rng.uniform() * (hi - lo);
    return negative ? -m : m;
  };
  for (int fneg = 0; fneg < 2; ++fneg)
    for (int flev = 1; flev <= 3; ++flev)
      for (int lneg = 0; lneg < 2; ++lneg)
        for (int llev = 1; llev <= 3; ++llev) {
          int bucket = -1;
          for (int trial = 0; trial < 64; ++trial) {
            double f = sample_level(flev, fneg);
            double l = sample_level(llev, lneg);
            if (oracle_stationary(f, l)) {
              // Force the pair out of the stationary square while keeping
              // both classifications (only possible for level-1 axes).
              f = fneg ? -20.0 : 20.0;
            }
            REQUIRE(classify_axis(f) == (AxisClass{fneg, flev}));
            REQUIRE(classify_axis(l) == (AxisClass{lneg, llev}));
            const int b = encode_velocity(f, l);
            REQUIRE(b >= 1);
            REQUIRE(b < kVelocityBuckets);
            if (bucket == -1) bucket = b;
            REQUIRE(b == bucket);  // stable across representatives
          }
          const auto key = std::make_pair(AxisClass{fneg, flev},
                                          AxisClass{lneg, llev});
          REQUIRE(seen.emplace(key, bucket).second);
        }
  // 36 combinations, 36 distinct buckets.
  std::set<int> buckets;
  for (const auto& [k, b] : seen) buckets.insert(b);
  CHECK(buckets.size() == 36);
  CHECK(*buckets.begin() == 1);
  CHECK(*buckets.rbegin() == 36);
}

TEST_CASE("a dense velocity sweep yields exactly 37 distinct buckets") {
  std::set<int> out;
  for (double f = -600.0; f <= 600.0; f += 7.5)
    for (double l = -600.0; l <= 600.0; l += 7.5) {
      const int b = encode_velocity(f, l);
      CHECK(b >= 0);
      CHECK(b < kVelocityBuckets);
      out.insert(b);
    }
  CHECK(out.size() == 37);
}

// ---------------------------------------------------------------------------
// state codec: rotation

namespace {

// The sector table re-stated independently: [lo, hi) except the last,
// which closes at 180.
int oracle_sector(double a) {
  static const double edges[] = {-180, -90, -60, -30, 0, 30, 60, 90, 180};
  for (int s = 0; s < 8; ++s) {
    const bool last = s == 7;
    if (a >= edges[s] && (last ? a <= edges[s + 1] : a < edges[s + 1]))
      return s;
  }
  return -1;
}

}  // namespace

TEST_CASE("rotation sector examples") {
  CHECK(encode_rotation(15.0) == 4);    // first right sector
  CHECK(encode_rotation(0.0) == 4);     // boundary belongs to the right
  CHECK(encode_rotation(-135.0) == 0);  // back-left
  CHECK(encode_rotation(180.0) == 7);   // back-right includes 180
  CHECK(encode_rotation(90.0) == 7);
  CHECK(encode_rotation(89.999) == 6);
  CHECK(encode_rotation(-90.0) == 1);
  CHECK(encode_rotation(-60.0) == 2);
  CHECK(encode_rotation(-30.0) == 3);
  CHECK(encode_rotation(30.0) == 5);
  CHECK(encode_rotation(60.0) == 6);
}

TEST_CASE("rotation sectors partition (-180, 180] with no gaps or overlaps") {
  for (double a = -179.9921875; a <= 180.0; a += 0.0625) {
    const int expect = oracle_sector(a);
    REQUIRE(expect >= 0);
    REQUIRE(encode_rotation(a) == expect);
  }
  // Exact boundaries.
  for (double a : {-90.0, -60.0, -30.0, 0.0, 30.0, 60.0, 90.0, 180.0})
    CHECK(encode_rotation(a) == oracle_sector(a));
}

TEST_CASE("rotation input outside the principal range is rejected") {
  CHECK_THROWS_AS(encode_rotation(-180.0), std::invalid_argument);
  CHECK_THROWS_AS(encode_rotation(180.0001), std::invalid_argument);
  CHECK_THROWS_AS(encode_rotation(-200.0), std::invalid_argument);
  CHECK_THROWS_AS(encode_rotation(360.0), std::invalid_argument);
  CHECK_THROWS_AS(encode_rotation(std::nan("")), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// state codec: distance

TEST_CASE("distance band edges are half-open at the top") {
  CHECK(encode_distance(0.0) == 0);
  CHECK(encode_distance(499.5) == 0);
  CHECK(encode_distance(500.0) == 1);
  CHECK(encode_distance(750.0) == 1);
  CHECK(encode_distance(999.9) == 1);
  CHECK(encode_distance(1000.0) == 2);
  CHECK(encode_distance(1499.9) == 2);
  CHECK(encode_distance(1500.0) == 3);
  CHECK(encode_distance(1e9) == 3);
}

TEST_CASE("distance encoding is monotone and rejects negatives") {
  int prev = 0;
  for (double d = 0.0; d <= 4000.0; d += 2.5) {
    const int band = encode_distance(d);
    CHECK(band >= prev);
    prev = band;
  }
  CHECK_THROWS_AS(encode_distance(-0.001), std::invalid_argument);
  CHECK_THROWS_AS(encode_distance(-5.0), std::invalid_argument);
  CHECK_THROWS_AS(encode_distance(std::nan("")), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// state codec: composition

TEST_CASE("compose_state index formula and examples") {
  CHECK(compose_state(0, 0, 0).index == 0);
  CHECK(compose_state(1, 4, 2).index == 50);
  CHECK(compose_state(36, 7, 3).index == kStateCount - 1);
}

TEST_CASE("compose/decompose is a bijection over all 1184 states") {
  std::set<int> indices;
  for (int v = 0; v < kVelocityBuckets; ++v)
    for (int r = 0; r < kRotationSectors; ++r)
      for (int d = 0; d < kDistanceBands; ++d) {
        const StateKey key = compose_state(v, r, d);
        REQUIRE(key.index >= 0);
        REQUIRE(key.index < kStateCount);
        REQUIRE(indices.insert(key.index).second);
        const StateKey back = decompose_state(key.index);
        REQUIRE(back.velocity_bucket == v);
        REQUIRE(back.rotation_sector == r);
        REQUIRE(back.distance_band == d);
        REQUIRE(back == key);
      }
  CHECK(indices.size() == static_cast<std::size_t>(kStateCount));
}

TEST_CASE("composition rejects out-of-range components") {
  CHECK_THROWS_AS(compose_state(-1, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(compose_state(37, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(compose_state(0, -1, 0), std::out_of_range);
  CHECK_THROWS_AS(compose_state(0, 8, 0), std::out_of_range);
  CHECK_THROWS_AS(compose_state(0, 0, -1), std::out_of_range);
  CHECK_THROWS_AS(compose_state(0, 0, 4), std::out_of_range);
  CHECK_THROWS_AS(decompose_state(-1), std::out_of_range);
  CHECK_THROWS_AS(decompose_state(kStateCount), std::out_of_range);
}

TEST_CASE("encode_observation composes the three component encoders") {
  RelativeObservation obs{200.0, 100.0, 15.0, 750.0};
  const StateKey key = encode_observation(obs);
  CHECK(key.velocity_bucket == encode_velocity(200, 100));
  CHECK(key.rotation_sector == 4);
  CHECK(key.distance_band == 1);
  CHECK(key.index ==
        (key.velocity_bucket * 8 + key.rotation_sector) * 4 + key.distance_band);
}

// ---------------------------------------------------------------------------
// action grid

TEST_CASE("action ids are bijective with grid coordinates") {
  std::set<int> ids;
  for (int z = 0; z < kActionGridHeight; ++z)
    for (int x = 0; x < kActionGridWidth; ++x) {
      const AimAction a{x, z};
      CHECK(a.id() == z * 11 + x);
      CHECK(AimAction::from_id(a.id()) == a);
      ids.insert(a.id());
    }
  CHECK(ids.size() == 44);
  CHECK(*ids.begin() == 0);
  CHECK(*ids.rbegin() == 43);
  CHECK_THROWS_AS(AimAction::from_id(-1), std::out_of_range);
  CHECK_THROWS_AS(AimAction::from_id(44), std::out_of_range);
}

TEST_CASE("action offsets hit the documented grid") {
  const AimOffset corner = action_offset(AimAction{0, 0});
  CHECK(corner.dx == -200.0);
  CHECK(corner.dz == 0.0);

  const AimOffset center = action_offset(AimAction{5, 0});
  CHECK(center.dx == 0.0);
  CHECK(center.dz == 0.0);

  const AimOffset top = action_offset(AimAction{10, 3});
  CHECK(top.dx == 200.0);
  CHECK(top.dz == 55.0);

  CHECK_THROWS_AS(action_offset(AimAction{11, 0}), std::out_of_range);
  CHECK_THROWS_AS(action_offset(AimAction{0, 4}), std::out_of_range);
  CHECK_THROWS_AS(action_offset(AimAction{-1, 0}), std::out_of_range);
}

TEST_CASE("the 44 offsets are pairwise distinct and symmetric in dx") {
  std::set<std::pair<double, double>> offsets;
  for (int id = 0; id < kActionCount; ++id) {
    const AimOffset off = action_offset(AimAction::from_id(id));
    CHECK(offsets.emplace(off.dx, off.dz).second);
  }
  for (const auto& [dx, dz] : offsets) {
    CHECK(offsets.count({-dx, dz}) == 1);
  }
}

TEST_CASE("aim_point examples: lateral skew is lateral in the bot's view") {
  // Dead-center action aims exactly at the opponent's center.
  const Vec3 center{500, 700, 50};
  const Vec3 bot{10, 20, 50};
  const Vec3 dead = aim_point(center, bot, AimAction{5, 0});
  CHECK(dead.x == center.x);
  CHECK(dead.y == center.y);
  CHECK(dead.z == center.z);

  // Opponent due north, dx +40 (x_index 6): point 40 UU due east.
  const Vec3 north = aim_point({0, 500, 50}, {0, 0, 50}, AimAction{6, 0});
  CHECK(north.x == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(north.y == doctest::Approx(500.0).epsilon(1e-12));
  CHECK(north.z == 50.0);

  // Same action, opponent due east: point 40 UU due south.
  const Vec3 east = aim_point({500, 0, 50}, {0, 0, 50}, AimAction{6, 0});
  CHECK(east.x == doctest::Approx(500.0).epsilon(1e-12));
  CHECK(east.y == doctest::Approx(-40.0).epsilon(1e-12));
  CHECK(east.z == 50.0);

  // Vertical skew displaces straight up.
  const Vec3 up = aim_point({0, 500, 50}, {0, 0, 50}, AimAction{5, 3});
  CHECK(up.x == doctest::Approx(0.0));
  CHECK(up.y == doctest::Approx(500.0));
  CHECK(up.z == doctest::Approx(105.0));
}

TEST_CASE("aim displacement magnitude equals the offset magnitude") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 bot{rng.uniform() * 2000, rng.uniform() * 2000, 50};
    Vec3 center{rng.uniform() * 2000, rng.uniform() * 2000, 50};
    if ((center - bot).horizontal().norm() < 1.0) center.x += 100.0;
    for (int id = 0; id < kActionCount; ++id) {
      const AimAction a = AimAction::from_id(id);
      const AimOffset off = action_offset(a);
      const double want = std::sqrt(off.dx * off.dx + off.dz * off.dz);
      const double got = (aim_point(center, bot, a) - center).norm();
      REQUIRE(got == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("aim_point rejects a horizontally coincident pose") {
  CHECK_THROWS_AS(aim_point({100, 100, 50}, {100, 100, 50}, AimAction{5, 0}),
                  std::invalid_argument);
  // Same ground position at a different height is still degenerate.
  CHECK_THROWS_AS(aim_point({100, 100, 80}, {100, 100, 10}, AimAction{5, 0}),
                  std::invalid_argument);
}
