#include "cfmimo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cfmimo {

bool AssociationMap::serves(int ap, int user) const {
  const auto& users = served_users[ap];
  return std::find(users.begin(), users.end(), user) != users.end();
}

std::vector<Point2> place_uniform(int count, double side_length, Rng& rng) {
  if (count < 1) throw std::invalid_argument("place_uniform: empty layout (count < 1)");
  if (side_length <= 0.0) throw std::invalid_argument("place_uniform: side_length must be > 0");
  std::vector<Point2> points(count);
  for (auto& p : points) {
    p.x = rng.uniform(0.0, side_length);
    p.y = rng.uniform(0.0, side_length);
  }
  return points;
}

double wrap_distance(const Point2& p, const Point2& q, double side_length,
                     double delta_h) {
  auto axis = [side_length](double a, double b) {
    const double d = std::abs(a - b);
    return std::min(d, side_length - d);
  };
  const double dx = axis(p.x, q.x);
  const double dy = axis(p.y, q.y);
  return std::sqrt(dx * dx + dy * dy + delta_h * delta_h);
}

AssociationMap associate_users(const std::vector<double>& beta, int n_users,
                               int n_aps, int cluster_size) {
  if (cluster_size < 1 || cluster_size > n_aps) {
    throw std::invalid_argument("associate_users: cluster_size must be in [1, n_aps]");
  }
  if (static_cast<int>(beta.size()) != n_users * n_aps) {
    throw std::invalid_argument("associate_users: beta size mismatch");
  }
  for (double v : beta) {
    if (!std::isfinite(v)) throw std::invalid_argument("associate_users: beta must be finite");
  }

  AssociationMap assoc;
  assoc.cluster_size = cluster_size;
  assoc.serving_aps.resize(n_users);
  assoc.served_users.resize(n_aps);

  std::vector<int> order(n_aps);
  for (int u = 0; u < n_users; ++u) {
    std::iota(order.begin(), order.end(), 0);
    const double* row = beta.data() + static_cast<std::size_t>(u) * n_aps;
    std::stable_sort(order.begin(), order.end(),
                     [row](int a, int b) { return row[a] > row[b]; });
    assoc.serving_aps[u].assign(order.begin(), order.begin() + cluster_size);
    for (int a : assoc.serving_aps[u]) assoc.served_users[a].push_back(u);
  }
  return assoc;
}

}  // namespace cfmimo
