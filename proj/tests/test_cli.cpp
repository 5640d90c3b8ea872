#include <cmath>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <sstream>
#include <limits>
#include <random>
#include <string>

#include "doctest.h"
#include "shockzoom/commands.hpp"
#include "shockzoom/config.hpp"
#include "shockzoom/error.hpp"

using namespace shockzoom;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("config text with sections and comments") {
  Config c = Config::defaults();
  c.merge_text("# header\nseed = 7   # trailing\n[audit.zbo]\nn = 8\ntimes = -3, -2\n\n[ztable]\nx = -1 1\n",
               "inline");
  CHECK(c.integer("seed") == 7);
  CHECK(c.integer("audit.zbo.n") == 8);
  CHECK(c.numbers("audit.zbo.times") == std::vector<double>{-3.0, -2.0});
  CHECK(c.range("ztable.x") == std::pair{-1.0, 1.0});
  CHECK(c.text("flux.name") == "burgers");
}

TEST_CASE("config rejects bad input with Config errors") {
  Config c = Config::defaults();
  CHECK(kind_of([&] { c.merge_text("nope = 1\n", "x"); }) == ErrorKind::Config);
  CHECK(kind_of([&] { c.merge_text("[grid\n", "x"); }) == ErrorKind::Config);
  CHECK(kind_of([&] { c.merge_text("seed\n", "x"); }) == ErrorKind::Config);
  CHECK(kind_of([&] { c.set("eps"); }) == ErrorKind::Config);
  c.set("ztable.n=12x");
  CHECK(kind_of([&] { c.integer("ztable.n"); }) == ErrorKind::Config);
  c.set("ztable.x", "1,-1");
  CHECK(kind_of([&] { c.range("ztable.x"); }) == ErrorKind::Config);
  c.set("run.write_fields", "maybe");
  CHECK(kind_of([&] { c.flag("run.write_fields"); }) == ErrorKind::Config);
  c.set("ztable.t", "1,inf");
  CHECK(kind_of([&] { c.numbers("ztable.t"); }) == ErrorKind::Config);
  try {
    c.set("eps", "0.01,0.02");
    c.merge_text("eps = 0.01,0.02\n", "x");
  } catch (...) {
    FAIL("eps ordering is validated by the commands, not the parser");
  }
}

TEST_CASE("dump lists every key once") {
  const Config c = Config::defaults();
  const std::string text = c.dump(false);
  Config round = Config::defaults();
  round.merge_text(text, "dump");
  CHECK(round.entries() == c.entries());
  CHECK(c.dump(true).find("# ") != std::string::npos);
}

TEST_CASE("numbers round-trip at 17 significant digits") {
  std::mt19937_64 gen(42);
  const double special[] = {0.0, -0.0, 1.0 / 3.0, 1e-300, 5e-324, 1.7976931348623157e308, -2.5};
  for (double v : special) {
    CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
  }
  for (int k = 0; k < 1000; ++k) {
    double v;
    const auto bits = gen();
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("exit status mapping") {
  CHECK(exit_status(ErrorKind::Config) == 2);
  CHECK(exit_status(ErrorKind::InvalidArgument) == 2);
  CHECK(exit_status(ErrorKind::NotLax) == 2);
  CHECK(exit_status(ErrorKind::Instability) == 3);
  CHECK(exit_status(ErrorKind::NotConverged) == 1);
  CHECK(exit_status(ErrorKind::NoCrossing) == 1);
}

TEST_CASE("execute validates before writing") {
  Config c = Config::defaults();
  c.set("output.dir", "unused-out");
  c.set("audit.suite", "nope");
  std::ostringstream log;
  CHECK(kind_of([&] { execute("audit", c, log); }) == ErrorKind::Config);
  CHECK(kind_of([&] { execute("fly", c, log); }) == ErrorKind::Config);
}
