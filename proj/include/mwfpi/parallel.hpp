#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

namespace mwfpi {

enum class Execution { Serial, Parallel };

/// Worker count from MWFPI_WORKERS, else the OpenMP default.
int default_workers();

/// Outcome of one point: either a value or the captured error message.
template <class R>
struct PointResult {
  std::optional<R> value;
  std::string error;
  double wall_seconds = 0;
  bool ok() const { return value.has_value(); }
};

namespace detail {
void run_indexed(std::size_t n, int workers, Execution exec, const std::function<void(std::size_t)>& body);
double wall_clock();
}  // namespace detail

/// Evaluates f on every point. Results keep input order and do not depend on
/// the worker count; exceptions are captured per point.
template <class P, class F>
auto parallel_map(const std::vector<P>& points, F f, int workers = 0, Execution exec = Execution::Parallel) {
  using R = std::invoke_result_t<F, const P&>;
  std::vector<PointResult<R>> out(points.size());
  detail::run_indexed(points.size(), workers, exec, [&](std::size_t i) {
    const double t0 = detail::wall_clock();
    try {
      out[i].value = f(points[i]);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    } catch (...) {
      out[i].error = "unknown error";
    }
    out[i].wall_seconds = detail::wall_clock() - t0;
  });
  return out;
}

}  // namespace mwfpi
