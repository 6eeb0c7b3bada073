#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mwfpi/parallel.hpp"

using namespace mwfpi;

TEST_CASE("parallel and serial maps agree element by element") {
  std::vector<int> pts(257);
  std::iota(pts.begin(), pts.end(), 0);
  auto f = [](const int& i) {
    double s = 0;
    for (int k = 1; k <= 2000; ++k) s += std::sin(i * 0.001 * k) / k;
    return s;
  };
  const auto ser = parallel_map(pts, f, 1, Execution::Serial);
  for (int w : {1, 2, 4}) {
    const auto par = parallel_map(pts, f, w, Execution::Parallel);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(*par[i].value == *ser[i].value);
  }
}

TEST_CASE("exceptions stay with their point") {
  std::vector<int> pts{0, 1, 2, 3, 4, 5};
  const auto res = parallel_map(pts, [](const int& i) {
    if (i % 3 == 1) throw std::runtime_error("bad " + std::to_string(i));
    return i * 2;
  }, 3);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i % 3 == 1) {
      CHECK_FALSE(res[i].ok());
      CHECK(res[i].error == "bad " + std::to_string(i));
    } else {
      CHECK(res[i].ok());
      CHECK(*res[i].value == static_cast<int>(2 * i));
    }
  }
}

TEST_CASE("empty input") {
  const std::vector<double> none;
  CHECK(parallel_map(none, [](const double& x) { return x; }).empty());
  CHECK(default_workers() >= 1);
}
