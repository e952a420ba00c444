#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "disperse1d/config.hpp"
#include "disperse1d/errors.hpp"
#include "disperse1d/io.hpp"
#include "shared.hpp"

using namespace d1test;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name) {
  const auto p = fs::temp_directory_path() / ("disperse1d_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind kind_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.kind();
  }
  return ErrorKind::IoFailure;
}

} // namespace

TEST(Config, DefaultsRoundTripByteIdentical) {
  RunConfig c;
  c.potential.family = Family::gaussian_well;
  c.potential.a = 2.0;
  c.potential.b = 1.0;
  c.sigma = 1.0;
  const auto text = to_json(c);
  const auto back = parse_config(text);
  EXPECT_EQ(to_json(back), text);
  EXPECT_EQ(back.potential.family, Family::gaussian_well);
  EXPECT_EQ(back.grid.Nk, 4097u);
  EXPECT_EQ(back.routes.size(), 4u);

  const auto dir = scratch_dir("cfg");
  save_config(back, (dir / "a.json").string());
  save_config(load_config((dir / "a.json").string()), (dir / "b.json").string());
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
}

TEST(Config, MissingRequiredKeyIsNamed) {
  try {
    parse_config(R"({"schema_version": 1, "potential": {"a": 1}})");
    FAIL() << "expected ParseError";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("potential.family"), std::string::npos) << e.what();
  }
}

TEST(Config, MalformedJsonReportsPosition) {
  try {
    parse_config("{\n  \"schema_version\": 1,,\n}");
    FAIL() << "expected ParseError";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Config, ValidationCaps) {
  auto bad = [](auto mutate) {
    RunConfig c;
    mutate(c);
    return kind_of([&] { validate(c); });
  };
  EXPECT_EQ(bad([](RunConfig &c) { c.grid.Nk = 4096; }), ErrorKind::InvalidArgument);
  EXPECT_EQ(bad([](RunConfig &c) { c.grid.Nk = 32769; }), ErrorKind::InvalidArgument);
  EXPECT_EQ(bad([](RunConfig &c) { c.grid.Nx = 200; }), ErrorKind::InvalidArgument);
  EXPECT_EQ(bad([](RunConfig &c) { c.grid.Nx = 803; }), ErrorKind::InvalidArgument);
  EXPECT_EQ(bad([](RunConfig &c) { c.grid.K = 250.0; }), ErrorKind::InvalidArgument);
  EXPECT_EQ(bad([](RunConfig &c) { c.grid.N_o = 4001; }), ErrorKind::InvalidArgument);
  EXPECT_EQ(bad([](RunConfig &c) { c.sigma = 0.5; }), ErrorKind::InvalidArgument);
  EXPECT_EQ(bad([](RunConfig &c) { c.X_ext = 10.0; }), ErrorKind::InvalidArgument);
  EXPECT_NO_THROW(validate(RunConfig{}));
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324}) {
    const auto s = format_double(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
  }
}

TEST(Io, DecayCsvRoundTrip) {
  DecaySeries s;
  s.t = t_ladder(10.0, 1000.0, 8);
  for (double t : s.t)
    s.value.push_back(0.3 * std::pow(t, -0.5));
  s.sigma = 0.0;
  s.descriptor = "sup";
  s.fit = fit_decay(s.t, s.value);
  const auto dir = scratch_dir("decay");
  write_decay_csv(s, (dir / "d.csv").string());
  const auto r = read_decay_csv((dir / "d.csv").string());
  EXPECT_EQ(r.descriptor, "sup");
  EXPECT_EQ(r.sigma, 0.0);
  ASSERT_EQ(r.t.size(), s.t.size());
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    EXPECT_EQ(r.t[i], s.t[i]);
    EXPECT_EQ(r.value[i], s.value[i]);
  }
  EXPECT_NEAR(r.fit.slope, -0.5, 1e-12);
}

TEST(Io, KernelCacheKeyedByHashTimeAndRoute) {
  KernelField K;
  K.t = 5.0;
  K.route = Route::fresnel;
  K.x = K.y = {-1.0, 0.0, 1.0};
  for (int i = 0; i < 9; ++i)
    K.K.push_back(cplx(0.1 * i, -0.2 * i));
  const std::uint64_t h = sech2().hash();
  const auto dir = scratch_dir("cache");
  const auto path = (dir / kernel_cache_name(h, 5.0, Route::fresnel)).string();
  save_kernel_cache(K, h, path);
  const auto back = load_kernel_cache(path, h, 5.0, Route::fresnel);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(back->K, K.K);
  EXPECT_EQ(back->x, K.x);
  EXPECT_FALSE(load_kernel_cache(path, h + 1, 5.0, Route::fresnel).has_value());
  EXPECT_FALSE(load_kernel_cache(path, h, 6.0, Route::fresnel).has_value());
  EXPECT_FALSE(load_kernel_cache(path, h, 5.0, Route::direct).has_value());
  EXPECT_FALSE(load_kernel_cache((dir / "missing.bin").string(), h, 5.0, Route::fresnel).has_value());
}

TEST(Io, ScatteringCsvHeader) {
  const auto dir = scratch_dir("scat");
  write_scattering_csv(cache().get(sech2()).sd, (dir / "s.csv").string());
  const auto text = slurp(dir / "s.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), "k,Re_T,Im_T,Re_Rp,Im_Rp,Re_Rm,Im_Rm");
}
