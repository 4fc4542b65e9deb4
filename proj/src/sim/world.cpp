#include "relio/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "relio/core/rng.hpp"

namespace relio {

WorldPreset parsePreset(const std::string& name) {
  if (name == "straight_tunnel") return WorldPreset::StraightTunnel;
  if (name == "junction") return WorldPreset::Junction;
  if (name == "cave") return WorldPreset::Cave;
  if (name == "loop") return WorldPreset::Loop;
  if (name == "narrow_passage") return WorldPreset::NarrowPassage;
  if (name == "box_room") return WorldPreset::BoxRoom;
  throw ConfigError("unknown world preset: " + name);
}

std::string presetName(WorldPreset preset) {
  switch (preset) {
    case WorldPreset::StraightTunnel: return "straight_tunnel";
    case WorldPreset::Junction: return "junction";
    case WorldPreset::Cave: return "cave";
    case WorldPreset::Loop: return "loop";
    case WorldPreset::NarrowPassage: return "narrow_passage";
    case WorldPreset::BoxRoom: return "box_room";
  }
  return "?";
}

namespace {

constexpr std::uint32_t kDynamicSurface = 0xffffffffu;

/// Smoothed lattice value noise, pure in (seed, cell).
double latticeValue(std::uint64_t seed, std::int64_t i, std::int64_t j, std::int64_t k) {
  const std::uint64_t key = static_cast<std::uint64_t>(i) * 73856093ull ^
                            static_cast<std::uint64_t>(j) * 19349663ull ^
                            static_cast<std::uint64_t>(k) * 83492791ull;
  return static_cast<double>(CounterRng::mix(seed, key) >> 11) * 0x1.0p-53;
}

double valueNoise(std::uint64_t seed, const Eigen::Vector3d& p) {
  const Eigen::Vector3d f(std::floor(p.x()), std::floor(p.y()), std::floor(p.z()));
  const std::int64_t i = static_cast<std::int64_t>(f.x());
  const std::int64_t j = static_cast<std::int64_t>(f.y());
  const std::int64_t k = static_cast<std::int64_t>(f.z());
  const Eigen::Vector3d w = p - f;
  auto smooth = [](double x) { return x * x * (3.0 - 2.0 * x); };
  const double sx = smooth(w.x()), sy = smooth(w.y()), sz = smooth(w.z());
  double v = 0.0;
  for (int di = 0; di <= 1; ++di) {
    for (int dj = 0; dj <= 1; ++dj) {
      for (int dk = 0; dk <= 1; ++dk) {
        const double corner = latticeValue(seed, i + di, j + dj, k + dk);
        v += corner * (di ? sx : 1 - sx) * (dj ? sy : 1 - sy) * (dk ? sz : 1 - sz);
      }
    }
  }
  return v;
}

bool rayAabb(const Eigen::Vector3d& o, const Eigen::Vector3d& inv_d, const Eigen::Vector3d& lo,
             const Eigen::Vector3d& hi, double t_max, double& t_entry) {
  double t0 = 0.0, t1 = t_max;
  for (int axis = 0; axis < 3; ++axis) {
    double ta = (lo[axis] - o[axis]) * inv_d[axis];
    double tb = (hi[axis] - o[axis]) * inv_d[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  t_entry = t0;
  return true;
}

/// Moller-Trumbore; returns the ray parameter or a negative value on miss.
double rayTriangle(const Eigen::Vector3d& o, const Eigen::Vector3d& d, const Triangle& tri) {
  const Eigen::Vector3d e1 = tri.b - tri.a;
  const Eigen::Vector3d e2 = tri.c - tri.a;
  const Eigen::Vector3d pvec = d.cross(e2);
  const double det = e1.dot(pvec);
  if (std::abs(det) < 1e-12) return -1.0;
  const double inv_det = 1.0 / det;
  const Eigen::Vector3d tvec = o - tri.a;
  const double u = tvec.dot(pvec) * inv_det;
  if (u < -1e-9 || u > 1.0 + 1e-9) return -1.0;
  const Eigen::Vector3d qvec = tvec.cross(e1);
  const double v = d.dot(qvec) * inv_det;
  if (v < -1e-9 || u + v > 1.0 + 1e-9) return -1.0;
  return e2.dot(qvec) * inv_det;
}

}  // namespace

class WorldBuilder {
 public:
  explicit WorldBuilder(WorldPreset preset, std::uint64_t seed) {
    world_.preset_ = preset;
    world_.seed_ = seed;
  }

  std::uint32_t newSurface() { return next_surface_++; }

  void addTriangle(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                   std::uint32_t surface) {
    world_.triangles_.push_back(Triangle{a, b, c, surface});
  }

  void addQuad(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1, const Eigen::Vector3d& p2,
               const Eigen::Vector3d& p3, std::uint32_t surface) {
    addTriangle(p0, p1, p2, surface);
    addTriangle(p0, p2, p3, surface);
  }

  /// Axis-aligned rectangle with the given fixed axis/value spanning [lo, hi]
  /// in the two remaining axes.
  void addWall(int fixed_axis, double value, const Eigen::Vector2d& lo, const Eigen::Vector2d& hi,
               std::uint32_t surface) {
    const int a = (fixed_axis + 1) % 3;
    const int b = (fixed_axis + 2) % 3;
    Eigen::Vector3d p0, p1, p2, p3;
    p0[fixed_axis] = p1[fixed_axis] = p2[fixed_axis] = p3[fixed_axis] = value;
    p0[a] = lo.x(); p0[b] = lo.y();
    p1[a] = hi.x(); p1[b] = lo.y();
    p2[a] = hi.x(); p2[b] = hi.y();
    p3[a] = lo.x(); p3[b] = hi.y();
    addQuad(p0, p1, p2, p3, surface);
  }

  void addBox(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, std::uint32_t surface) {
    addWall(0, lo.x(), {lo.y(), lo.z()}, {hi.y(), hi.z()}, surface);
    addWall(0, hi.x(), {lo.y(), lo.z()}, {hi.y(), hi.z()}, surface);
    addWall(1, lo.y(), {lo.z(), lo.x()}, {hi.z(), hi.x()}, surface);
    addWall(1, hi.y(), {lo.z(), lo.x()}, {hi.z(), hi.x()}, surface);
    addWall(2, lo.z(), {lo.x(), lo.y()}, {hi.x(), hi.y()}, surface);
    addWall(2, hi.z(), {lo.x(), lo.y()}, {hi.x(), hi.y()}, surface);
  }

  WorldModel finish() {
    world_.buildBvh();
    return std::move(world_);
  }

 private:
  WorldModel world_;
  std::uint32_t next_surface_{0};
};

namespace {

/// Rectangular corridor along x: floor z=0, ceiling z=height, walls y=+-w/2.
void addCorridorX(WorldBuilder& b, double x0, double x1, double y_center, double width,
                  double height) {
  const double yl = y_center - width / 2, yr = y_center + width / 2;
  b.addWall(2, 0.0, {x0, yl}, {x1, yr}, b.newSurface());
  b.addWall(2, height, {x0, yl}, {x1, yr}, b.newSurface());
  b.addWall(1, yl, {0.0, x0}, {height, x1}, b.newSurface());
  b.addWall(1, yr, {0.0, x0}, {height, x1}, b.newSurface());
}

void addEndCapX(WorldBuilder& b, double x, double y_center, double width, double height) {
  b.addWall(0, x, {y_center - width / 2, 0.0}, {y_center + width / 2, height}, b.newSurface());
}

WorldModel makeStraightTunnel(std::uint64_t seed) {
  WorldBuilder b(WorldPreset::StraightTunnel, seed);
  // Constant cross-section: degenerate along the axis by construction.
  addCorridorX(b, -5.0, 105.0, 0.0, 4.0, 3.0);
  addEndCapX(b, -5.0, 0.0, 4.0, 3.0);
  addEndCapX(b, 105.0, 0.0, 4.0, 3.0);
  return b.finish();
}

WorldModel makeJunction(std::uint64_t seed) {
  WorldBuilder b(WorldPreset::Junction, seed);
  const double h = 3.0;
  // Main corridor along x with an opening into a branch along +y.
  b.addWall(2, 0.0, {-5.0, -2.0}, {45.0, 2.0}, b.newSurface());
  b.addWall(2, h, {-5.0, -2.0}, {45.0, 2.0}, b.newSurface());
  b.addWall(1, -2.0, {0.0, -5.0}, {h, 45.0}, b.newSurface());
  // Branch corridor walls.
  b.addWall(1, 2.0, {0.0, -5.0}, {h, 18.0}, b.newSurface());
  b.addWall(1, 2.0, {0.0, 22.0}, {h, 45.0}, b.newSurface());
  b.addWall(0, 18.0, {2.0, 0.0}, {40.0, h}, b.newSurface());
  b.addWall(0, 22.0, {2.0, 0.0}, {40.0, h}, b.newSurface());
  b.addWall(2, 0.0, {18.0, 2.0}, {22.0, 40.0}, b.newSurface());
  b.addWall(2, h, {18.0, 2.0}, {22.0, 40.0}, b.newSurface());
  b.addWall(1, 40.0, {0.0, 18.0}, {h, 22.0}, b.newSurface());
  addEndCapX(b, -5.0, 0.0, 4.0, h);
  addEndCapX(b, 45.0, 0.0, 4.0, h);
  return b.finish();
}

WorldModel makeCave(std::uint64_t seed) {
  WorldBuilder b(WorldPreset::Cave, seed);
  // Faceted chamber, 44 x 32 x 9 analog of a large natural cave: panelled
  // walls displaced by seeded noise, flat traversable floor.
  const double L = 44.0, W = 32.0, H = 9.0;
  const double panel = 4.0;
  CounterRng rng(seed, 1);
  b.addWall(2, 0.0, {0.0, 0.0}, {L, W}, b.newSurface());

  auto displacedWall = [&](int fixed_axis, double value, double inward_sign, double ext_a,
                           double ext_b) {
    const std::uint32_t surf = b.newSurface();
    for (double u = 0.0; u < ext_a - 1e-9; u += panel) {
      for (double v = 0.0; v < ext_b - 1e-9; v += panel) {
        const double d = inward_sign * rng.nextUniform(0.0, 1.8);
        Eigen::Vector3d p0, p1, p2, p3;
        auto set = [&](Eigen::Vector3d& p, double uu, double vv) {
          p[fixed_axis] = value + d;
          p[(fixed_axis + 1) % 3] = uu;
          p[(fixed_axis + 2) % 3] = vv;
        };
        const double u1 = std::min(u + panel, ext_a);
        const double v1 = std::min(v + panel, ext_b);
        set(p0, u, v); set(p1, u1, v); set(p2, u1, v1); set(p3, u, v1);
        b.addQuad(p0, p1, p2, p3, surf);
        // Side skirts so displaced panels stay watertight against neighbors.
        Eigen::Vector3d q0 = p0, q1 = p1, q2 = p2, q3 = p3;
        q0[fixed_axis] = q1[fixed_axis] = q2[fixed_axis] = q3[fixed_axis] = value - inward_sign * 2.0;
        b.addQuad(p0, p1, q1, q0, surf);
        b.addQuad(p1, p2, q2, q1, surf);
        b.addQuad(p2, p3, q3, q2, surf);
        b.addQuad(p3, p0, q0, q3, surf);
      }
    }
  };
  displacedWall(1, 0.0, 1.0, H, L);    // y=0 wall
  displacedWall(1, W, -1.0, H, L);     // y=W wall
  displacedWall(0, 0.0, 1.0, W, H);    // x=0 wall
  displacedWall(0, L, -1.0, W, H);     // x=L wall
  displacedWall(2, H, -1.0, L, W);     // ceiling
  // A few boulders on the floor.
  for (int i = 0; i < 6; ++i) {
    const Eigen::Vector3d c(rng.nextUniform(8, L - 8), rng.nextUniform(8, W - 8), 0.0);
    const Eigen::Vector3d s(rng.nextUniform(0.8, 2.0), rng.nextUniform(0.8, 2.0),
                            rng.nextUniform(0.6, 1.6));
    b.addBox(c - Eigen::Vector3d(s.x() / 2, s.y() / 2, 0.0),
             c + Eigen::Vector3d(s.x() / 2, s.y() / 2, s.z()), b.newSurface());
  }
  return b.finish();
}

WorldModel makeLoop(std::uint64_t seed) {
  WorldBuilder b(WorldPreset::Loop, seed);
  const double h = 3.0;
  const double lo = -2.0, hi = 52.0;      // outer shell
  const double ilo = 2.0, ihi = 48.0;     // inner block
  // Outer walls facing inward.
  b.addWall(1, lo, {0.0, lo}, {h, hi}, b.newSurface());
  b.addWall(1, hi, {0.0, lo}, {h, hi}, b.newSurface());
  b.addWall(0, lo, {lo, 0.0}, {hi, h}, b.newSurface());
  b.addWall(0, hi, {lo, 0.0}, {hi, h}, b.newSurface());
  // Inner block walls facing outward.
  b.addWall(1, ilo, {0.0, ilo}, {h, ihi}, b.newSurface());
  b.addWall(1, ihi, {0.0, ilo}, {h, ihi}, b.newSurface());
  b.addWall(0, ilo, {ilo, 0.0}, {ihi, h}, b.newSurface());
  b.addWall(0, ihi, {ilo, 0.0}, {ihi, h}, b.newSurface());
  // Floor and ceiling over the full ring footprint.
  b.addWall(2, 0.0, {lo, lo}, {hi, hi}, b.newSurface());
  b.addWall(2, h, {lo, lo}, {hi, hi}, b.newSurface());
  // Jittered crates along the corridors break the straight-segment symmetry.
  CounterRng rng(seed, 2);
  auto crate = [&](const Eigen::Vector3d& at) {
    const Eigen::Vector3d s(rng.nextUniform(0.4, 0.9), rng.nextUniform(0.4, 0.9),
                            rng.nextUniform(0.5, 1.4));
    b.addBox(at - Eigen::Vector3d(s.x() / 2, s.y() / 2, 0.0),
             at + Eigen::Vector3d(s.x() / 2, s.y() / 2, s.z()), b.newSurface());
  };
  for (double s = 3.0; s < 200.0; s += rng.nextUniform(5.0, 8.0)) {
    // Walk the square centerline (0,0)->(50,0)->(50,50)->(0,50)->(0,0).
    double along = s;
    Eigen::Vector3d pos, dir_out;
    if (along < 50) { pos = {along, 0, 0}; dir_out = {0, -1, 0}; }
    else if (along < 100) { pos = {50, along - 50, 0}; dir_out = {1, 0, 0}; }
    else if (along < 150) { pos = {150 - along, 50, 0}; dir_out = {0, 1, 0}; }
    else { pos = {0, 200 - along, 0}; dir_out = {-1, 0, 0}; }
    const double side = rng.nextDouble() < 0.5 ? 1.35 : -1.35;
    crate(pos + dir_out * side);
  }
  return b.finish();
}

WorldModel makeNarrowPassage(std::uint64_t seed) {
  WorldBuilder b(WorldPreset::NarrowPassage, seed);
  const double h = 3.0;
  // Full corridor split by a constriction with a 1.2 m ceiling.
  const double x0 = -5.0, xa = 8.0, xb = 14.0, x1 = 25.0;
  const double w = 4.0, nw = 1.6, nh = 1.2;
  addCorridorX(b, x0, xa, 0.0, w, h);
  addCorridorX(b, xb, x1, 0.0, w, h);
  // Narrow throat.
  addCorridorX(b, xa, xb, 0.0, nw, nh);
  // Faces of the constriction (full section minus the throat opening).
  for (double x : {xa, xb}) {
    const std::uint32_t surf = b.newSurface();
    b.addWall(0, x, {-w / 2, 0.0}, {-nw / 2, h}, surf);
    b.addWall(0, x, {nw / 2, 0.0}, {w / 2, h}, surf);
    b.addWall(0, x, {-nw / 2, nh}, {nw / 2, h}, surf);
  }
  addEndCapX(b, x0, 0.0, w, h);
  addEndCapX(b, x1, 0.0, w, h);
  CounterRng rng(seed, 3);
  for (int i = 0; i < 4; ++i) {
    const double x = rng.nextUniform(x0 + 2, xa - 2);
    b.addBox({x, 1.2, 0.0}, {x + 0.6, 1.8, rng.nextUniform(0.5, 1.2)}, b.newSurface());
  }
  for (int i = 0; i < 4; ++i) {
    const double x = rng.nextUniform(xb + 2, x1 - 2);
    b.addBox({x, -1.8, 0.0}, {x + 0.6, -1.2, rng.nextUniform(0.5, 1.2)}, b.newSurface());
  }
  return b.finish();
}

WorldModel makeBoxRoom(std::uint64_t seed) {
  WorldBuilder b(WorldPreset::BoxRoom, seed);
  const Eigen::Vector3d lo(-5.0, -4.0, 0.0), hi(5.0, 4.0, 4.0);
  b.addBox(lo, hi, b.newSurface());
  CounterRng rng(seed, 4);
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d c(rng.nextUniform(-3.0, 3.0), rng.nextUniform(-2.5, 2.5), 0.0);
    const Eigen::Vector3d s(rng.nextUniform(0.5, 1.2), rng.nextUniform(0.5, 1.2),
                            rng.nextUniform(0.8, 2.0));
    if (c.head<2>().norm() < 1.5) continue;  // keep the sensor path clear
    b.addBox(c - Eigen::Vector3d(s.x() / 2, s.y() / 2, 0.0),
             c + Eigen::Vector3d(s.x() / 2, s.y() / 2, s.z()), b.newSurface());
  }
  return b.finish();
}

}  // namespace

WorldModel WorldModel::generate(WorldPreset preset, std::uint64_t seed) {
  switch (preset) {
    case WorldPreset::StraightTunnel: return makeStraightTunnel(seed);
    case WorldPreset::Junction: return makeJunction(seed);
    case WorldPreset::Cave: return makeCave(seed);
    case WorldPreset::Loop: return makeLoop(seed);
    case WorldPreset::NarrowPassage: return makeNarrowPassage(seed);
    case WorldPreset::BoxRoom: return makeBoxRoom(seed);
  }
  throw ConfigError("unknown world preset enum value");
}

WorldModel WorldModel::fromTriangles(std::vector<Triangle> triangles, std::uint64_t seed) {
  WorldModel world;
  world.seed_ = seed;
  world.triangles_ = std::move(triangles);
  world.buildBvh();
  return world;
}

WorldModel WorldModel::axisAlignedBox(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi,
                                      std::uint64_t seed) {
  WorldBuilder b(WorldPreset::BoxRoom, seed);
  b.addBox(lo, hi, b.newSurface());
  return b.finish();
}

void WorldModel::buildBvh() {
  tri_order_.resize(triangles_.size());
  std::iota(tri_order_.begin(), tri_order_.end(), 0u);
  nodes_.clear();
  if (triangles_.empty()) return;
  nodes_.reserve(triangles_.size() * 2);

  struct Range { std::uint32_t begin, end; std::int32_t node; };
  auto centroid = [&](std::uint32_t t) {
    return ((triangles_[t].a + triangles_[t].b + triangles_[t].c) / 3.0).eval();
  };

  std::vector<Range> stack;
  nodes_.push_back({});
  stack.push_back({0, static_cast<std::uint32_t>(triangles_.size()), 0});
  while (!stack.empty()) {
    const Range r = stack.back();
    stack.pop_back();
    BvhNode& node = nodes_[r.node];
    node.lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
    node.hi = -node.lo;
    for (std::uint32_t i = r.begin; i < r.end; ++i) {
      const Triangle& t = triangles_[tri_order_[i]];
      node.lo = node.lo.cwiseMin(t.a).cwiseMin(t.b).cwiseMin(t.c);
      node.hi = node.hi.cwiseMax(t.a).cwiseMax(t.b).cwiseMax(t.c);
    }
    if (r.end - r.begin <= 4) {
      node.first = r.begin;
      node.count = r.end - r.begin;
      continue;
    }
    const Eigen::Vector3d ext = node.hi - node.lo;
    int axis = 0;
    if (ext.y() > ext.x()) axis = 1;
    if (ext.z() > ext[axis]) axis = 2;
    const std::uint32_t mid = r.begin + (r.end - r.begin) / 2;
    std::nth_element(tri_order_.begin() + r.begin, tri_order_.begin() + mid,
                     tri_order_.begin() + r.end, [&](std::uint32_t a, std::uint32_t b) {
                       const double ca = centroid(a)[axis];
                       const double cb = centroid(b)[axis];
                       if (ca != cb) return ca < cb;
                       return a < b;
                     });
    const std::int32_t left = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({});
    const std::int32_t right = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({});
    nodes_[r.node].left = left;
    nodes_[r.node].right = right;
    stack.push_back({r.begin, mid, left});
    stack.push_back({mid, r.end, right});
  }
}

std::optional<RayHit> WorldModel::raycastStatic(const Eigen::Vector3d& origin,
                                                const Eigen::Vector3d& dir,
                                                double max_range) const {
  if (nodes_.empty()) return std::nullopt;
  const Eigen::Vector3d inv_d(1.0 / dir.x(), 1.0 / dir.y(), 1.0 / dir.z());
  double best_t = max_range;
  std::int64_t best_tri = -1;

  std::int32_t stack[64];
  int sp = 0;
  stack[sp++] = 0;
  while (sp > 0) {
    const BvhNode& node = nodes_[stack[--sp]];
    double t_entry;
    if (!rayAabb(origin, inv_d, node.lo, node.hi, best_t, t_entry)) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const std::uint32_t ti = tri_order_[i];
        const double t = rayTriangle(origin, dir, triangles_[ti]);
        if (t > 1e-9 && t < best_t) {
          best_t = t;
          best_tri = ti;
        }
      }
    } else {
      if (node.left >= 0) stack[sp++] = node.left;
      if (node.right >= 0) stack[sp++] = node.right;
    }
  }
  if (best_tri < 0) return std::nullopt;
  RayHit hit;
  hit.range = best_t;
  hit.point = origin + dir * best_t;
  hit.triangle = static_cast<std::uint32_t>(best_tri);
  hit.surface = triangles_[best_tri].surface;
  return hit;
}

std::optional<RayHit> WorldModel::raycast(const Eigen::Vector3d& origin,
                                          const Eigen::Vector3d& dir, double max_range,
                                          double t) const {
  std::optional<RayHit> hit = raycastStatic(origin, dir, max_range);
  if (dynamic_box_) {
    const DynamicBox& box = *dynamic_box_;
    if (t >= box.t_start && t <= box.t_end) {
      const double alpha = (t - box.t_start) / (box.t_end - box.t_start);
      const Eigen::Vector3d center = (1 - alpha) * box.from + alpha * box.to;
      const Eigen::Vector3d lo = center - box.size / 2;
      const Eigen::Vector3d hi = center + box.size / 2;
      const Eigen::Vector3d inv_d(1.0 / dir.x(), 1.0 / dir.y(), 1.0 / dir.z());
      double t_entry;
      const double limit = hit ? hit->range : max_range;
      if (rayAabb(origin, inv_d, lo, hi, limit, t_entry) && t_entry > 1e-9) {
        RayHit dyn;
        dyn.range = t_entry;
        dyn.point = origin + dir * t_entry;
        dyn.triangle = kDynamicSurface;
        dyn.surface = kDynamicSurface;
        hit = dyn;
      }
    }
  }
  return hit;
}

double WorldModel::intensityAt(const Eigen::Vector3d& point, std::uint32_t surface) const {
  if (surface == kDynamicSurface) return 0.55;
  const std::uint64_t s = seed_ ^ (0x51ed270b9ull * (surface + 1));
  const double n1 = valueNoise(s, point / 0.8);
  const double n2 = valueNoise(s ^ 0xabcdef12345ull, point / 0.22);
  double v = 0.18 + 0.55 * n1 + 0.27 * n2;
  if (inDarkRegion(point)) v *= 0.03;
  return std::clamp(v, 0.0, 1.0);
}

bool WorldModel::inDarkRegion(const Eigen::Vector3d& p) const {
  for (const auto& [lo, hi] : dark_regions_) {
    if ((p.array() >= lo.array()).all() && (p.array() <= hi.array()).all()) return true;
  }
  return false;
}

void WorldModel::boundingBox(Eigen::Vector3d& lo, Eigen::Vector3d& hi) const {
  lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  hi = -lo;
  for (const Triangle& t : triangles_) {
    lo = lo.cwiseMin(t.a).cwiseMin(t.b).cwiseMin(t.c);
    hi = hi.cwiseMax(t.a).cwiseMax(t.b).cwiseMax(t.c);
  }
}

PointCloud WorldModel::sampleSurfacePoints(double spacing) const {
  PointCloud cloud;
  cloud.frame = "map";
  for (const Triangle& tri : triangles_) {
    const Eigen::Vector3d e1 = tri.b - tri.a;
    const Eigen::Vector3d e2 = tri.c - tri.a;
    const int nu = std::max(1, static_cast<int>(e1.norm() / spacing));
    const int nv = std::max(1, static_cast<int>(e2.norm() / spacing));
    for (int i = 0; i <= nu; ++i) {
      for (int j = 0; j <= nv; ++j) {
        const double u = static_cast<double>(i) / nu;
        const double v = static_cast<double>(j) / nv;
        if (u + v > 1.0 + 1e-12) continue;
        Point p;
        p.position = tri.a + u * e1 + v * e2;
        p.intensity = static_cast<float>(intensityAt(p.position, tri.surface));
        cloud.points.push_back(p);
      }
    }
  }
  return cloud;
}

}  // namespace relio
