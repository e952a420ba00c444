#include "disperse1d/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "disperse1d/errors.hpp"

namespace disperse1d {

std::vector<double> KGrid::nodes() const {
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j)
    out[j] = k(j);
  out[zero()] = 0.0;
  return out;
}

KGrid make_kgrid(double K, std::size_t n) {
  if (!(K > 0.0) || !std::isfinite(K))
    throw Error(ErrorKind::InvalidArgument, "K must be positive and finite");
  const std::size_t m = n - 1;
  if (n < 5 || (m & (m - 1)) != 0)
    throw Error(ErrorKind::InvalidArgument,
                "N_k must be a power of two plus one, got " + std::to_string(n));
  return KGrid{K, n};
}

std::vector<double> uniform_nodes(double a, double b, std::size_t n) {
  if (n < 2 || !(b > a))
    throw Error(ErrorKind::InvalidArgument, "uniform_nodes needs n>=2, b>a");
  std::vector<double> out(n);
  const double h = (b - a) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a + double(i) * h;
  out.back() = b;
  // snap tiny values so that the symmetric grids contain an exact 0
  for (auto &v : out)
    if (std::abs(v) < 1e-12 * h)
      v = 0.0;
  return out;
}

std::size_t nearest_node(const std::vector<double> &nodes, double x) {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
  if (it == nodes.begin())
    return 0;
  if (it == nodes.end())
    return nodes.size() - 1;
  const std::size_t i = std::size_t(it - nodes.begin());
  return (x - nodes[i - 1] <= nodes[i] - x) ? i - 1 : i;
}

} // namespace disperse1d
