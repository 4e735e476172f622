#include "nocsec/routing.hpp"

#include <algorithm>
#include <charconv>

#include "nocsec/error.hpp"
#include "nocsec/rng.hpp"

namespace nocsec {

std::string to_string(Coord c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

MeshDims MeshDims::make(int width, int height) {
  if (width < 2 || height < 2) {
    throw ParameterError("mesh must be at least 2x2, got " + std::to_string(width) + "x" +
                         std::to_string(height));
  }
  return {width, height};
}

MeshDims MeshDims::parse(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw ParameterError("mesh must look like WxH: '" + text + "'");
  int w = 0, h = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto r1 = std::from_chars(b, b + x, w);
  auto r2 = std::from_chars(b + x + 1, e, h);
  if (r1.ec != std::errc{} || r1.ptr != b + x || r2.ec != std::errc{} || r2.ptr != e) {
    throw ParameterError("mesh must look like WxH: '" + text + "'");
  }
  return make(w, h);
}

const char* to_string(CaseKind kind) noexcept {
  switch (kind) {
    case CaseKind::QuadrantTR: return "quadrant-TR";
    case CaseKind::QuadrantBR: return "quadrant-BR";
    case CaseKind::QuadrantTL: return "quadrant-TL";
    case CaseKind::QuadrantBL: return "quadrant-BL";
    case CaseKind::SameRow: return "same-row";
    case CaseKind::SameCol: return "same-col";
  }
  return "?";
}

const char* to_string(RoutingPolicy policy) noexcept { return policy == RoutingPolicy::XY ? "XY" : "YX"; }

CaseKind classify(Coord src, Coord dst) {
  if (src == dst) throw RoutingError("source and destination coincide at " + to_string(src));
  if (src.y == dst.y) return CaseKind::SameRow;
  if (src.x == dst.x) return CaseKind::SameCol;
  const bool right = dst.x > src.x;
  const bool below = dst.y > src.y;
  if (right) return below ? CaseKind::QuadrantBR : CaseKind::QuadrantTR;
  return below ? CaseKind::QuadrantBL : CaseKind::QuadrantTL;
}

RegionAssignment regions(Coord src, Coord dst, MeshDims dims) {
  if (!dims.contains(src) || !dims.contains(dst)) throw RoutingError("endpoint outside mesh");
  RegionAssignment out;
  out.kind = classify(src, dst);

  auto collect = [&](auto&& pred) {
    std::vector<Coord> cells;
    for (int y = 0; y < dims.height; ++y) {
      for (int x = 0; x < dims.width; ++x) {
        const Coord c{x, y};
        if (c != src && c != dst && pred(c)) cells.push_back(c);
      }
    }
    return cells;
  };

  if (out.kind == CaseKind::SameRow || out.kind == CaseKind::SameCol) {
    const bool row = out.kind == CaseKind::SameRow;
    // "before" is above for rows, left for columns.
    auto before = collect([&](Coord c) { return row ? c.y < src.y : c.x < src.x; });
    auto after = collect([&](Coord c) { return row ? c.y > src.y : c.x > src.x; });
    if (!before.empty() && !after.empty()) {
      out.blue = std::move(before);
      out.red = std::move(after);
    } else {
      out.blue = before.empty() ? std::move(after) : std::move(before);
      out.red = collect([&](Coord c) { return row ? c.y == src.y : c.x == src.x; });
      out.red_on_shared_line = true;
    }
    return out;
  }

  const bool below = dst.y > src.y;
  const bool right = dst.x > src.x;
  auto in_blue = [&](Coord c) {
    const bool vertical = below ? c.y > src.y : c.y < src.y;
    const bool horizontal = right ? c.x < dst.x : c.x > dst.x;
    return vertical && horizontal;
  };
  out.blue = collect(in_blue);
  out.red = collect([&](Coord c) { return !in_blue(c); });
  return out;
}

std::pair<Coord, Coord> select_pivots(const RegionAssignment& regions, std::uint64_t rng_seed) {
  if (regions.blue.empty() || regions.red.empty()) throw RoutingError("empty pivot region");
  Rng rng(rng_seed);
  const Coord blue = regions.blue[rng.below(regions.blue.size())];
  const Coord red = regions.red[rng.below(regions.red.size())];
  return {blue, red};
}

namespace {

void walk_x(std::vector<Coord>& path, Coord& cur, int target) {
  while (cur.x != target) {
    cur.x += target > cur.x ? 1 : -1;
    path.push_back(cur);
  }
}

void walk_y(std::vector<Coord>& path, Coord& cur, int target) {
  while (cur.y != target) {
    cur.y += target > cur.y ? 1 : -1;
    path.push_back(cur);
  }
}

std::vector<Coord> concat(std::vector<Coord> first, const std::vector<Coord>& second) {
  first.insert(first.end(), second.begin() + 1, second.end());
  return first;
}

}  // namespace

std::vector<Coord> route_xy(Coord a, Coord b) {
  std::vector<Coord> path{a};
  walk_x(path, a, b.x);
  walk_y(path, a, b.y);
  return path;
}

std::vector<Coord> route_yx(Coord a, Coord b) {
  std::vector<Coord> path{a};
  walk_y(path, a, b.y);
  walk_x(path, a, b.x);
  return path;
}

std::vector<Coord> route(Coord a, Coord b, RoutingPolicy policy) {
  return policy == RoutingPolicy::XY ? route_xy(a, b) : route_yx(a, b);
}

RoutePlan plan_routes_with_pivots(Coord src, Coord dst, MeshDims dims, Coord pivot_blue, Coord pivot_red) {
  const RegionAssignment reg = regions(src, dst, dims);
  if (std::find(reg.blue.begin(), reg.blue.end(), pivot_blue) == reg.blue.end()) {
    throw RoutingError("blue pivot " + to_string(pivot_blue) + " is outside the blue region");
  }
  if (std::find(reg.red.begin(), reg.red.end(), pivot_red) == reg.red.end()) {
    throw RoutingError("red pivot " + to_string(pivot_red) + " is outside the red region");
  }

  RoutePlan plan;
  plan.src = src;
  plan.dst = dst;
  plan.kind = reg.kind;
  plan.pivot_blue = pivot_blue;
  plan.pivot_red = pivot_red;
  plan.red_policy = RoutingPolicy::XY;
  switch (reg.kind) {
    case CaseKind::SameRow:
      plan.blue_policy = RoutingPolicy::YX;
      plan.flip_route = true;
      break;
    case CaseKind::SameCol:
      // Leaving the shared column first keeps blue off red's final approach.
      plan.blue_policy = RoutingPolicy::XY;
      plan.flip_route = true;
      break;
    default:
      plan.blue_policy = RoutingPolicy::YX;
      plan.flip_route = false;
      break;
  }
  plan.path_blue = concat(route(src, pivot_blue, plan.blue_policy),
                          route(pivot_blue, dst, blue_final_policy(plan)));
  plan.path_red = concat(route_xy(src, pivot_red), route_xy(pivot_red, dst));
  return plan;
}

RoutePlan plan_routes(Coord src, Coord dst, MeshDims dims, std::uint64_t rng_seed) {
  const RegionAssignment reg = regions(src, dst, dims);
  if (reg.blue.empty() || reg.red.empty()) {
    RoutePlan plan;
    plan.src = src;
    plan.dst = dst;
    plan.kind = reg.kind;
    plan.blue_policy = RoutingPolicy::XY;
    plan.path_blue = route_xy(src, dst);
    plan.path_red = plan.path_blue;
    plan.protected_paths = false;
    plan.warning = "no disjoint pivot region on this mesh; both parts share the XY path";
    return plan;
  }
  const auto [blue, red] = select_pivots(reg, rng_seed);
  return plan_routes_with_pivots(src, dst, dims, blue, red);
}

std::vector<Coord> intermediates(const std::vector<Coord>& path, Coord src, Coord dst) {
  std::vector<Coord> out;
  for (const Coord& c : path) {
    if (c != src && c != dst && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

bool intermediates_disjoint(const RoutePlan& plan) {
  const auto blue = intermediates(plan.path_blue, plan.src, plan.dst);
  const auto red = intermediates(plan.path_red, plan.src, plan.dst);
  return std::none_of(blue.begin(), blue.end(),
                      [&](Coord c) { return std::find(red.begin(), red.end(), c) != red.end(); });
}

PacketHeader pivot_swap(const PacketHeader& header, Coord router) {
  if (header.at_final_segment()) throw RoutingError("packet has no pending pivot");
  if (router != header.current_dst) {
    throw RoutingError("pivot swap at " + to_string(router) + " but pivot is " + to_string(header.current_dst));
  }
  PacketHeader out = header;
  out.current_dst = header.fin_id;
  if (header.flip_route) out.policy = flipped(header.policy);
  return out;
}

}  // namespace nocsec
