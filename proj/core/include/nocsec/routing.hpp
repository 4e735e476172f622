#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nocsec {

/// Router position; x grows rightward, y grows downward, both 0-based.
struct Coord {
  int x = 0;
  int y = 0;

  auto operator<=>(const Coord&) const = default;
};

std::string to_string(Coord c);

struct MeshDims {
  int width = 0;
  int height = 0;

  /// Throws ParameterError unless width >= 2 and height >= 2.
  static MeshDims make(int width, int height);
  /// Parses "WxH".
  static MeshDims parse(const std::string& text);

  bool contains(Coord c) const noexcept { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  int size() const noexcept { return width * height; }
  int node_id(Coord c) const noexcept { return c.y * width + c.x; }
  Coord coord(int id) const noexcept { return {id % width, id / width}; }

  bool operator==(const MeshDims&) const = default;
};

enum class CaseKind { QuadrantTR, QuadrantBR, QuadrantTL, QuadrantBL, SameRow, SameCol };
enum class RoutingPolicy { XY, YX };

const char* to_string(CaseKind kind) noexcept;
const char* to_string(RoutingPolicy policy) noexcept;

constexpr RoutingPolicy flipped(RoutingPolicy p) noexcept {
  return p == RoutingPolicy::XY ? RoutingPolicy::YX : RoutingPolicy::XY;
}

/// Throws RoutingError when src == dst.
CaseKind classify(Coord src, Coord dst);

struct RegionAssignment {
  CaseKind kind = CaseKind::QuadrantBR;
  std::vector<Coord> blue;
  std::vector<Coord> red;
  /// Same-row/col pair on a border line: red is the rest of the shared line.
  bool red_on_shared_line = false;
};

/// Blue/red pivot regions for a source/destination pair.
///
/// Quadrant cases follow the blue-region table with strict inequalities
/// (e.g. destination below-right: y > src.y and x < dst.x); red is every
/// other router except src and dst. Same-row pairs split the mesh into the
/// rows above and below (blue above when non-empty); same-col pairs split
/// into columns left and right (blue left when non-empty). When the shared
/// line is a border, red becomes the rest of that line. Either region may
/// be empty only on width-2 or height-2 meshes.
RegionAssignment regions(Coord src, Coord dst, MeshDims dims);

/// Uniform independent pivot picks from each region. Throws RoutingError
/// when a region is empty.
std::pair<Coord, Coord> select_pivots(const RegionAssignment& regions, std::uint64_t rng_seed);

/// Dimension-ordered hop lists, inclusive of both endpoints.
std::vector<Coord> route_xy(Coord a, Coord b);
std::vector<Coord> route_yx(Coord a, Coord b);
std::vector<Coord> route(Coord a, Coord b, RoutingPolicy policy);

struct RoutePlan {
  Coord src;
  Coord dst;
  CaseKind kind = CaseKind::QuadrantBR;
  std::optional<Coord> pivot_blue;
  std::optional<Coord> pivot_red;
  /// Blue switches policy at its pivot (same-row / same-col cases).
  bool flip_route = false;
  RoutingPolicy blue_policy = RoutingPolicy::YX;  // policy for the first blue segment
  RoutingPolicy red_policy = RoutingPolicy::XY;
  std::vector<Coord> path_blue;
  std::vector<Coord> path_red;
  /// False for the single-path fallback taken when a pivot region is empty.
  bool protected_paths = true;
  std::string warning;
};

/// Policy the blue packet uses after the pivot swap.
inline RoutingPolicy blue_final_policy(const RoutePlan& plan) noexcept {
  return plan.flip_route ? flipped(plan.blue_policy) : plan.blue_policy;
}

/// Full plan with random pivots drawn from `rng_seed`.
RoutePlan plan_routes(Coord src, Coord dst, MeshDims dims, std::uint64_t rng_seed);

/// Plan for a given pivot pair; the pivots must belong to their regions.
RoutePlan plan_routes_with_pivots(Coord src, Coord dst, MeshDims dims, Coord pivot_blue, Coord pivot_red);

/// Routers on a path other than src and dst (a path may pass through dst
/// before reaching its pivot; endpoints are trusted either way).
std::vector<Coord> intermediates(const std::vector<Coord>& path, Coord src, Coord dst);

/// True when the two paths share no intermediate router.
bool intermediates_disjoint(const RoutePlan& plan);

/// Routing metadata carried in a head flit.
struct PacketHeader {
  std::uint64_t pkt_id = 0;
  int part = 0;  // 0 for single-packet modes, 1/2 for the two halves of a transform
  Coord src;
  Coord current_dst;  // pivot or final destination
  Coord fin_id;
  bool flip_route = false;
  RoutingPolicy policy = RoutingPolicy::XY;
  int length_flits = 1;

  bool at_final_segment() const noexcept { return current_dst == fin_id; }
};

/// Retargets a header reaching its pivot at `router` to the final destination
/// and flips the routing policy when flip_route is set. Throws RoutingError
/// if `router` is not the header's pivot.
PacketHeader pivot_swap(const PacketHeader& header, Coord router);

}  // namespace nocsec
