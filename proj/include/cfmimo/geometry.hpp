#pragma once

#include <cstdint>
#include <vector>

#include "cfmimo/rng.hpp"

namespace cfmimo {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Wrap-around service-area geometry: AP and user positions on a square
/// torus, with fixed antenna heights.
struct NetworkLayout {
  double side_length = 0.0;  // m
  double ap_height = 0.0;    // m
  double user_height = 0.0;  // m
  std::vector<Point2> ap_positions;
  std::vector<Point2> user_positions;

  int n_aps() const { return static_cast<int>(ap_positions.size()); }
  int n_users() const { return static_cast<int>(user_positions.size()); }
  double height_gap() const { return ap_height - user_height; }
};

/// User-centric association: serving_aps[u] lists the cluster_size APs with
/// the largest large-scale coefficients toward user u (descending order);
/// served_users is the transpose map.
struct AssociationMap {
  int cluster_size = 0;
  std::vector<std::vector<int>> serving_aps;   // per user
  std::vector<std::vector<int>> served_users;  // per AP

  int n_users() const { return static_cast<int>(serving_aps.size()); }
  int n_aps() const { return static_cast<int>(served_users.size()); }

  bool serves(int ap, int user) const;
};

/// I.i.d. uniform placement on [0, side_length)^2. Throws on count == 0.
std::vector<Point2> place_uniform(int count, double side_length, Rng& rng);

/// 3-D distance on the wrapped square: per-axis torus-minimal horizontal
/// displacement combined with the vertical gap delta_h.
double wrap_distance(const Point2& p, const Point2& q, double side_length,
                     double delta_h);

/// Picks the cluster_size largest entries of each beta row; ties broken by
/// lower AP index. beta is row-major n_users x n_aps.
AssociationMap associate_users(const std::vector<double>& beta, int n_users,
                               int n_aps, int cluster_size);

}  // namespace cfmimo
