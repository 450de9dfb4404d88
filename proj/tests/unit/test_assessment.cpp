#include <doctest.h>

#include <algorithm>
#include <random>

#include "cinnamon/assessment/assessment.hpp"
#include "cinnamon/errors.hpp"

using namespace cinnamon;
using namespace cinnamon::assessment;
using nlohmann::json;

namespace {

GfiResponse gfi(std::vector<int> items) { return {std::move(items), "r", 0.0}; }

PssuqResponse pssuq(std::vector<std::optional<int>> items) { return {std::move(items), "r", 0.0}; }

std::vector<std::optional<int>> filled(int value) { return std::vector<std::optional<int>>(kPssuqItems, value); }

}  // namespace

TEST_CASE("GFI examples") {
  auto r = score_gfi(gfi(std::vector<int>(15, 0)));
  CHECK(r.total == 0);
  CHECK_FALSE(r.frail);
  r = score_gfi(gfi(std::vector<int>(15, 1)));
  CHECK(r.total == 15);
  CHECK(r.frail);
  r = score_gfi(gfi({1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
  CHECK(r.total == 4);
  CHECK(r.frail);
  r = score_gfi(gfi({0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1}));
  CHECK(r.total == 3);
  CHECK_FALSE(r.frail);
}

TEST_CASE("GFI agrees with the threshold on every answer vector") {
  int mismatches = 0;
  for (unsigned mask = 0; mask < (1u << 15); ++mask) {
    std::vector<int> items(15);
    int sum = 0;
    for (int i = 0; i < 15; ++i) {
      items[i] = (mask >> i) & 1u;
      sum += items[i];
    }
    const auto r = score_gfi(gfi(items));
    if (r.total != sum || r.frail != (sum >= 4)) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("GFI rejects malformed responses") {
  CHECK_THROWS_AS(score_gfi(gfi(std::vector<int>(14, 0))), ValidationError);
  CHECK_THROWS_AS(score_gfi(gfi(std::vector<int>(16, 0))), ValidationError);
  auto items = std::vector<int>(15, 0);
  items[3] = 2;
  CHECK_THROWS_AS(score_gfi(gfi(items)), ValidationError);
  items[3] = -1;
  CHECK_THROWS_AS(score_gfi(gfi(items)), ValidationError);
}

TEST_CASE("PSSUQ examples") {
  auto r = score_pssuq(pssuq(filled(1)));
  CHECK(*r.overall.mean == 1.0);
  CHECK(*r.sysuse.mean == 1.0);
  CHECK(*r.infoqual.mean == 1.0);
  CHECK(*r.interqual.mean == 1.0);

  auto mixed = filled(7);
  for (int i = 0; i < 6; ++i) mixed[i] = 2;
  r = score_pssuq(pssuq(mixed));
  CHECK(*r.sysuse.mean == 2.0);
  CHECK(*r.infoqual.mean == 7.0);
  CHECK(*r.interqual.mean == 7.0);
  CHECK(*r.overall.mean == 5.125);
  CHECK(r.overall.answered == 16);

  auto skipped = filled(4);
  for (int i = 6; i < 12; ++i) skipped[i].reset();
  r = score_pssuq(pssuq(skipped));
  CHECK_FALSE(r.infoqual.mean.has_value());
  CHECK(r.infoqual.answered == 0);
  CHECK(*r.overall.mean == 4.0);
  CHECK(r.overall.answered == 10);
}

TEST_CASE("PSSUQ rejects malformed responses") {
  CHECK_THROWS_AS(score_pssuq(pssuq(std::vector<std::optional<int>>(15, 3))), ValidationError);
  CHECK_THROWS_AS(score_pssuq(pssuq(std::vector<std::optional<int>>(16))), ValidationError);
  auto items = filled(3);
  items[0] = 8;
  CHECK_THROWS_AS(score_pssuq(pssuq(items)), ValidationError);
  items[0] = 0;
  CHECK_THROWS_AS(score_pssuq(pssuq(items)), ValidationError);
}

TEST_CASE("PSSUQ scores stay in range, rise monotonically and ignore order within a subscale") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> value(1, 7), slot(0, 15);
  std::bernoulli_distribution skip(0.2);
  const std::array<std::pair<int, int>, 3> subscales = {std::pair{0, 6}, std::pair{6, 12}, std::pair{12, 15}};
  auto means = [](const PssuqResult& r) {
    return std::array<std::optional<double>, 4>{r.overall.mean, r.sysuse.mean, r.infoqual.mean, r.interqual.mean};
  };
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::optional<int>> items(kPssuqItems);
    for (auto& item : items) {
      if (!skip(rng)) item = value(rng);
    }
    if (std::none_of(items.begin(), items.end(), [](const auto& i) { return i.has_value(); })) items[0] = 4;
    const auto base = score_pssuq(pssuq(items));
    for (const auto& m : means(base)) {
      if (m) {
        CHECK(*m >= 1.0);
        CHECK(*m <= 7.0);
      }
    }

    const int k = slot(rng);
    if (items[k] && *items[k] < 7) {
      auto raised = items;
      *raised[k] += 1;
      const auto up = means(score_pssuq(pssuq(raised)));
      const auto before = means(base);
      for (std::size_t s = 0; s < 4; ++s) {
        if (before[s]) CHECK(*up[s] >= *before[s]);
      }
    }

    const auto [lo, hi] = subscales[trial % 3];
    auto shuffled = items;
    std::shuffle(shuffled.begin() + lo, shuffled.begin() + hi, rng);
    const auto permuted = means(score_pssuq(pssuq(shuffled)));
    const auto original = means(base);
    CHECK(permuted[1 + trial % 3] == original[1 + trial % 3]);
  }
}

TEST_CASE("answer documents") {
  const auto bare = gfi_from_json(json::parse("[1,1,1,1,0,0,0,0,0,0,0,0,0,0,0]"));
  CHECK(score_gfi(bare).total == 4);
  const auto wrapped = gfi_from_json(
      json{{"items", std::vector<int>(15, 1)}, {"respondent_id", "p-7"}, {"t", 1700000000.5}});
  CHECK(wrapped.respondent_id == "p-7");
  CHECK(wrapped.t == 1700000000.5);
  CHECK_THROWS_AS(gfi_from_json(json::parse(R"([1, "yes"])")), ParseError);
  CHECK_THROWS_AS(gfi_from_json(json::parse("[1.5]")), ParseError);
  CHECK_THROWS_AS(gfi_from_json(json::parse(R"({"answers": []})")), ParseError);

  const auto p = pssuq_from_json(json::parse("[1,2,3,4,5,6,7,null,null,1,1,1,1,1,1,1]"));
  REQUIRE(p.items.size() == 16);
  CHECK_FALSE(p.items[7].has_value());
  CHECK(p.items[6] == 7);

  const auto g = to_json(score_gfi(bare));
  CHECK(g == json{{"total", 4}, {"frail", true}});
  const auto r = to_json(score_pssuq(p));
  CHECK(r.at("infoqual").at("answered") == 4);
  CHECK(r.at("overall").at("mean").is_number());
  auto none = filled(2);
  for (int i = 12; i < 15; ++i) none[i].reset();
  CHECK(to_json(score_pssuq(pssuq(none))).at("interqual").at("mean").is_null());
}
