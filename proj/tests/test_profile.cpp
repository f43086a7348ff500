#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "sherd/errors.hpp"
#include "sherd/fixtures.hpp"
#include "sherd/json_format.hpp"
#include "sherd/profile.hpp"
#include "support.hpp"

using namespace sherd;
using sherd::test::TempDir;

namespace {

const ThicknessProfile& fixture(const std::string& id) {
  for (const auto& p : reference_profiles())
    if (p.sherd_id == id) return p;
  throw std::runtime_error("no fixture " + id);
}

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

} // namespace

TEST(Fixtures, CountsAndOrder) {
  const auto& fx = reference_profiles();
  ASSERT_EQ(fx.size(), 5u);
  const std::vector<std::pair<std::string, std::size_t>> want{
      {"A4", 61}, {"A5", 57}, {"B10", 36}, {"C2", 17}, {"C15", 15}};
  for (std::size_t i = 0; i < fx.size(); ++i) {
    EXPECT_EQ(fx[i].sherd_id, want[i].first);
    EXPECT_EQ(fx[i].size(), want[i].second);
    EXPECT_EQ(fx[i].step, 1.0);
    EXPECT_NO_THROW(validate(fx[i]));
  }
}

TEST(Fixtures, SpotValues) {
  EXPECT_EQ(fixture("A5").samples.front(), 5.94);
  EXPECT_EQ(fixture("A4").samples.at(60), 7.62);
  EXPECT_EQ(fixture("C15").samples.front(), 5.26);
}

TEST(Fixtures, AtMostTwoDecimals) {
  for (const auto& p : reference_profiles())
    for (double v : p.samples) EXPECT_NEAR(v * 100.0, std::round(v * 100.0), 1e-9) << p.sherd_id;
}

TEST(Fixtures, WriteAndReloadIsExact) {
  TempDir dir;
  const auto paths = write_reference_profiles(dir.path() / "fx");
  ASSERT_EQ(paths.size(), 5u);
  const auto loaded = load_profile_dir(dir.path() / "fx");
  ASSERT_EQ(loaded.size(), 5u);
  for (const auto& p : loaded) EXPECT_EQ(p, fixture(p.sherd_id));
}

TEST(ProfileValidation, RejectsBadValues) {
  ThicknessProfile p{{5.0, 5.1}, 1.0, {}, "x"};
  EXPECT_NO_THROW(validate(p));
  for (double bad : {0.0, -1.0, std::nan(""), HUGE_VAL}) {
    auto q = p;
    q.samples[1] = bad;
    EXPECT_THROW(validate(q), ValidationError);
  }
  auto q = p;
  q.step = 0.0;
  EXPECT_THROW(validate(q), ValidationError);
  q = p;
  q.samples.clear();
  EXPECT_THROW(validate(q), ValidationError);
}

TEST(ProfileJson, RoundTripKeepsOriginHeight) {
  ThicknessProfile p{{5.25, 6.5, 7.0}, 0.5, 12.5, "s1"};
  EXPECT_EQ(profile_from_json(to_json(p)), p);
  p.origin_height.reset();
  const auto j = to_json(p);
  EXPECT_FALSE(j.contains("origin_height_mm"));
  EXPECT_EQ(profile_from_json(j), p);
}

TEST(ProfileJson, MalformedDocumentIsValidationError) {
  EXPECT_THROW(profile_from_json(nlohmann::json::object()), ValidationError);
  EXPECT_THROW(profile_from_json({{"sherd_id", "a"}, {"step_mm", 1.0}, {"samples_mm", "x"}}),
               ValidationError);
  EXPECT_THROW(profile_from_json({{"sherd_id", "a"}, {"step_mm", 1.0}, {"samples_mm", {1.0, -2.0}}}),
               ValidationError);
}

TEST(ProfileFiles, JsonIsFixedFormat) {
  TempDir dir;
  save_profile({{5.0, 5.12345}, 1.0, {}, "b"}, dir / "b.tp.json");
  std::ifstream in(dir / "b.tp.json");
  const std::string text{std::istreambuf_iterator<char>(in), {}};
  EXPECT_EQ(text, "{\n  \"samples_mm\": [\n    5.0000,\n    5.1235\n  ],\n  \"sherd_id\": \"b\",\n"
                  "  \"step_mm\": 1.0000\n}\n");
}

TEST(ProfileFiles, CsvRoundTripAndId) {
  TempDir dir;
  const ThicknessProfile p{{5.1, 5.2, 5.35}, 1.0, {}, "C7"};
  save_profile(p, dir / "C7.csv");
  EXPECT_EQ(load_profile(dir / "C7.csv"), p);
  const auto half = load_profile(dir / "C7.csv", 0.5);
  EXPECT_EQ(half.step, 0.5);
}

TEST(ProfileFiles, CsvCommentsAndErrors) {
  TempDir dir;
  write(dir / "k.csv", "# thickness\n5.0\r\n\n  5.5  \n");
  const auto p = load_profile(dir / "k.csv");
  EXPECT_EQ(p.samples, (std::vector<double>{5.0, 5.5}));
  EXPECT_EQ(p.sherd_id, "k");

  write(dir / "bad.csv", "5.0\n5.1\nfive\n");
  try {
    load_profile(dir / "bad.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location(), 3u);
  }
  EXPECT_THROW(load_profile(dir / "missing.csv"), IoError);
  EXPECT_THROW(load_profile(dir / "missing.tp.json"), IoError);
  write(dir / "broken.tp.json", "{\"sherd_id\": ");
  EXPECT_THROW(load_profile(dir / "broken.tp.json"), ParseError);
}

TEST(ProfileFiles, DirectoryFilterAndOrder) {
  TempDir dir;
  save_profile({{5.0, 5.0}, 1.0, {}, "zz"}, dir / "zz.tp.json");
  save_profile({{6.0}, 1.0, {}, "aa"}, dir / "aa.csv");
  write(dir / "notes.json", "{}");
  write(dir / "readme.txt", "x");
  std::filesystem::create_directory(dir / "sub.tp.json");
  const auto all = load_profile_dir(dir.path());
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].sherd_id, "aa");
  EXPECT_EQ(all[1].sherd_id, "zz");
  EXPECT_THROW(load_profile_dir(dir / "nope"), IoError);
}

TEST(Reversed, DropsOriginHeight) {
  const ThicknessProfile p{{1.0, 2.0, 3.0}, 1.0, 4.0, "r"};
  const auto r = reversed(p);
  EXPECT_EQ(r.samples, (std::vector<double>{3.0, 2.0, 1.0}));
  EXPECT_FALSE(r.origin_height);
  EXPECT_EQ(reversed(r).samples, p.samples);
}

TEST(DumpFixed, FormatsNumbersAndSortsKeys) {
  nlohmann::json j = {{"b", 1}, {"a", {0.5, -0.00001, 2.0 / 3.0}}, {"c", nullptr}, {"d", "t"}};
  EXPECT_EQ(dump_fixed(j, -1), "{\"a\":[0.5000,0.0000,0.6667],\"b\":1,\"c\":null,\"d\":\"t\"}\n");
  EXPECT_EQ(dump_fixed(nlohmann::json::array(), 2), "[]\n");
  EXPECT_EQ(dump_fixed(NAN, 2), "null\n");
  EXPECT_EQ(round4(1.23456), 1.2346);
  EXPECT_EQ(round4(-0.00004), 0.0);
  EXPECT_FALSE(std::signbit(round4(-0.00004)));
}

TEST(DumpFixed, ParsesBackToRoundedValues) {
  nlohmann::json j = {{"x", {1.0 / 3.0, 123.45678, -7.0}}};
  const auto back = nlohmann::json::parse(dump_fixed(j));
  EXPECT_EQ(back["x"][0].get<double>(), 0.3333);
  EXPECT_EQ(back["x"][1].get<double>(), 123.4568);
  EXPECT_EQ(back["x"][2].get<double>(), -7.0);
}
