#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "pw/pw_c.h"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("catalog creation, evaluation, and release") {
  pw_signal* sig = nullptr;
  REQUIRE(pw_signal_catalog(2, 'K', 1, &sig) == PW_OK);
  REQUIRE(sig != nullptr);
  CHECK(pw_signal_dim(sig) == 2);
  CHECK(pw_signal_band_radius(sig) == doctest::Approx(std::sqrt(2.0)));
  double t[2] = {0.0, 0.0};
  double re = 0.0, im = 0.0;
  CHECK(pw_signal_eval(sig, t, &re, &im) == PW_OK);
  CHECK(re == doctest::Approx(4.0));
  CHECK(im == doctest::Approx(0.0));
  pw_signal_free(sig);
}

TEST_CASE("error paths set codes and messages") {
  pw_signal* sig = nullptr;
  CHECK(pw_signal_catalog(1, 'X', 1, &sig) == PW_ERR_INVALID_ARGUMENT);
  CHECK(pw_signal_catalog(1, 'P', 2, &sig) == PW_ERR_INDEX);
  CHECK(std::strlen(pw_last_error()) > 0);
  CHECK(pw_signal_catalog(0, 'K', 1, &sig) != PW_OK);
  CHECK(pw_signal_eval(nullptr, nullptr, nullptr, nullptr) ==
        PW_ERR_INVALID_ARGUMENT);
}

TEST_CASE("identity residuals through the C surface") {
  double t[3] = {0.37, -1.9, 14.2};
  double r = 1.0;
  REQUIRE(pw_identity_residual(t, 3, 2, PW_IDENTITY_MODULATION, &r) == PW_OK);
  CHECK(r < 1e-10);
  REQUIRE(pw_identity_residual(t, 3, 2, PW_IDENTITY_PRODUCT, &r) == PW_OK);
  CHECK(r < 1e-8);
  CHECK(pw_identity_residual(t, 3, 2, (pw_identity)7, &r) ==
        PW_ERR_INVALID_ARGUMENT);
  CHECK(pw_identity_residual(t, 3, 5, PW_IDENTITY_MODULATION, &r) ==
        PW_ERR_INDEX);
}

TEST_CASE("kernel basis through the C surface") {
  double a[2] = {1.0, 1.0};  // 1x2
  double basis[4] = {0, 0, 0, 0};
  int count = -1;
  REQUIRE(pw_kernel_basis(a, 1, 2, basis, &count) == PW_OK);
  REQUIRE(count == 1);
  double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(basis[0]) - s) < 1e-12);
  CHECK(std::abs(basis[0] + basis[1]) < 1e-12);  // opposite signs
}

TEST_CASE("line evaluation reproduces the entire extension") {
  pw_signal* sig = nullptr;
  REQUIRE(pw_signal_catalog(1, 'K', 1, &sig) == PW_OK);
  double a[1] = {0.0};
  double d[1] = {1.0};
  double re = 0, im = 0;
  // Real z = 1.3 agrees with the closed form 2 sin x / x.
  REQUIRE(pw_signal_eval_line(sig, a, d, 1.3, 0.0, &re, &im) == PW_OK);
  CHECK(re == doctest::Approx(2.0 * std::sin(1.3) / 1.3).epsilon(1e-4));
  pw_signal_free(sig);
}

TEST_CASE("affine composition and the injectivity error") {
  pw_signal* k1 = nullptr;
  REQUIRE(pw_signal_catalog(1, 'K', 1, &k1) == PW_OK);
  double scale[1] = {2.0};
  double offset[1] = {1.0};
  pw_signal* out = nullptr;
  REQUIRE(pw_signal_compose_affine(k1, scale, 1, 1, offset, &out) == PW_OK);
  CHECK(pw_signal_band_radius(out) == doctest::Approx(2.0));
  double t[1] = {0.5};
  double re = 0, im = 0;
  REQUIRE(pw_signal_eval(out, t, &re, &im) == PW_OK);
  CHECK(re == doctest::Approx(2.0 * std::sin(2.0) / 2.0).epsilon(1e-3));
  pw_signal_free(out);

  double wide[2] = {1.0, 1.0};  // 1x2, kernel (1,-1)
  pw_signal* bad = nullptr;
  CHECK(pw_signal_compose_affine(k1, wide, 1, 2, nullptr, &bad) ==
        PW_ERR_NOT_INJECTIVE);
  CHECK(std::strlen(pw_last_error()) > 0);
  pw_signal_free(k1);
}

TEST_CASE("describe and version strings") {
  char buf[512];
  REQUIRE(pw_describe_catalog(1, 'K', 1, buf, sizeof(buf)) == PW_OK);
  CHECK(std::string(buf).find("2 sin t / t") != std::string::npos);
  CHECK(pw_describe_catalog(1, 'P', 2, buf, sizeof(buf)) == PW_ERR_INDEX);
  CHECK(std::string(pw_version()).find("pwtk") != std::string::npos);
}

TEST_CASE("signal save/load through the C surface") {
  fs::path dir = fresh_dir("pwtk_capi_io");
  pw_signal* sig = nullptr;
  REQUIRE(pw_signal_catalog(1, 'Q', 1, &sig) == PW_OK);
  std::string path = (dir / "q.json").string();
  REQUIRE(pw_signal_save(sig, path.c_str()) == PW_OK);
  pw_signal* back = nullptr;
  REQUIRE(pw_signal_load(path.c_str(), &back) == PW_OK);
  CHECK(pw_signal_dim(back) == 1);
  CHECK(pw_signal_band_radius(back) == doctest::Approx(2.0));
  pw_signal_free(sig);
  pw_signal_free(back);
  pw_signal* nope = nullptr;
  CHECK(pw_signal_load((dir / "no.json").string().c_str(), &nope) ==
        PW_ERR_IO);
}

TEST_CASE("experiments run end to end through the C surface") {
  fs::path dir = fresh_dir("pwtk_capi_run");
  std::string config = R"({
    "kind": "verify-affine",
    "seed": 21,
    "dims": {"in": 1, "out": 1},
    "warp": [{"type": "coordinate-power", "axis": 1, "power": 3}],
    "probes": {"count": 4, "points": 401}
  })";
  std::string cpath = (dir / "config.json").string();
  std::ofstream(cpath) << config;
  int status = pw_run_experiment(cpath.c_str(), (dir / "out").string().c_str(),
                                 0, 0, 0, 0.0, 0);
  CHECK(status == 0);
  CHECK(fs::exists(dir / "out" / "result.json"));
  // Usage errors map to 1.
  CHECK(pw_run_experiment("/definitely/not/here.json", nullptr, 0, 0, 0, 0.0,
                          0) == 1);
}
