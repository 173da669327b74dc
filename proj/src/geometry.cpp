#include "pdd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdd {

double Domain::diameter() const { return std::hypot(width(), height()); }

bool Domain::contains(const Vec2& x) const {
  return x[0] >= xmin && x[0] <= xmax && x[1] >= ymin && x[1] <= ymax;
}

Domain make_domain(double xmin, double xmax, double ymin, double ymax) {
  if (!(xmin < xmax) || !(ymin < ymax)) {
    throw std::invalid_argument("make_domain: degenerate bounds");
  }
  return Domain{xmin, xmax, ymin, ymax};
}

namespace {

// Outward normal of the edge nearest to the corner, ties broken toward the
// nearer edge midpoint, then by fixed edge order (left, right, bottom, top).
Vec2 corner_normal(const Domain& d, const Vec2& corner) {
  const Vec2 mid_vert{corner[0], 0.5 * (d.ymin + d.ymax)};   // on left/right edge
  const Vec2 mid_horz{0.5 * (d.xmin + d.xmax), corner[1]};   // on bottom/top edge
  const double dv = (corner - mid_vert).norm();
  const double dh = (corner - mid_horz).norm();
  if (dv <= dh) {
    return Vec2{corner[0] == d.xmin ? -1.0 : 1.0, 0.0};
  }
  return Vec2{0.0, corner[1] == d.ymin ? -1.0 : 1.0};
}

}  // namespace

BoundaryQuery boundary_query(const Domain& d, const Vec2& x) {
  BoundaryQuery q;
  const double dl = x[0] - d.xmin;
  const double dr = d.xmax - x[0];
  const double db = x[1] - d.ymin;
  const double dt = d.ymax - x[1];

  if (dl >= 0 && dr >= 0 && db >= 0 && dt >= 0) {
    // Inside or on the boundary: nearest of the four edges, fixed priority
    // (left, right, bottom, top) on ties.
    const double m = std::min(std::min(dl, dr), std::min(db, dt));
    q.distance = -m;
    if (dl == m) {
      q.projection = Vec2{d.xmin, x[1]};
      q.normal = Vec2{-1.0, 0.0};
    } else if (dr == m) {
      q.projection = Vec2{d.xmax, x[1]};
      q.normal = Vec2{1.0, 0.0};
    } else if (db == m) {
      q.projection = Vec2{x[0], d.ymin};
      q.normal = Vec2{0.0, -1.0};
    } else {
      q.projection = Vec2{x[0], d.ymax};
      q.normal = Vec2{0.0, 1.0};
    }
    return q;
  }

  // Outside: clamp onto the rectangle.
  const double px = std::clamp(x[0], d.xmin, d.xmax);
  const double py = std::clamp(x[1], d.ymin, d.ymax);
  q.projection = Vec2{px, py};
  q.distance = (x - q.projection).norm();
  const bool on_vert = (px == d.xmin || px == d.xmax);
  const bool on_horz = (py == d.ymin || py == d.ymax);
  if (on_vert && on_horz) {
    q.normal = corner_normal(d, q.projection);
  } else if (on_vert) {
    q.normal = Vec2{px == d.xmin ? -1.0 : 1.0, 0.0};
  } else {
    q.normal = Vec2{0.0, py == d.ymin ? -1.0 : 1.0};
  }
  return q;
}

DiskBoundary::DiskBoundary(const Vec2& center, double radius) : center_(center), radius_(radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("DiskBoundary: radius must be positive");
}

BoundaryQuery DiskBoundary::query(const Vec2& x) const {
  BoundaryQuery q;
  const Vec2 r = x - center_;
  const double rn = r.norm();
  q.distance = rn - radius_;
  if (rn > 0.0) {
    q.normal = r / rn;
  } else {
    q.normal = Vec2{1.0, 0.0};
  }
  q.projection = center_ + radius_ * q.normal;
  return q;
}

std::vector<int> Partition::nodes_on_subdomain(int k) const {
  std::vector<int> out;
  for (const auto& itf : interfaces) {
    if (itf.left_subdomain == k || itf.right_subdomain == k) {
      out.insert(out.end(), itf.node_ids.begin(), itf.node_ids.end());
    }
  }
  return out;
}

Partition build_partition(const Domain& domain, int subdomain_count, int nodes_per_interface) {
  if (subdomain_count < 2) {
    throw std::invalid_argument("build_partition: need at least 2 subdomains");
  }
  if (nodes_per_interface < 2) {
    throw std::invalid_argument("build_partition: need at least 2 nodes per interface");
  }
  Partition p;
  p.domain = domain;
  const int m = subdomain_count;
  const double w = domain.width() / m;
  for (int k = 0; k < m; ++k) {
    // Exact-width telescoping so strip widths sum to the domain width exactly.
    const double x0 = (k == 0) ? domain.xmin : domain.xmin + k * w;
    const double x1 = (k == m - 1) ? domain.xmax : domain.xmin + (k + 1) * w;
    p.subdomains.push_back(Domain{x0, x1, domain.ymin, domain.ymax});
  }
  int node_id = 0;
  for (int j = 0; j + 1 < m; ++j) {
    Interface itf;
    itf.id = j;
    itf.x = p.subdomains[j].xmax;
    itf.ymin = domain.ymin;
    itf.ymax = domain.ymax;
    itf.left_subdomain = j;
    itf.right_subdomain = j + 1;
    for (int i = 1; i <= nodes_per_interface; ++i) {
      const double y = domain.ymin + domain.height() * i / (nodes_per_interface + 1);
      p.nodes.push_back(InterfaceNode{node_id, Vec2{itf.x, y}, itf.id});
      itf.node_ids.push_back(node_id);
      ++node_id;
    }
    p.interfaces.push_back(std::move(itf));
  }
  return p;
}

int locate_subdomain(const Partition& partition, const Vec2& x) {
  if (!partition.domain.contains(x)) {
    throw std::invalid_argument("locate_subdomain: point outside domain");
  }
  // Count interfaces strictly left of x; an exact tie on an interface then
  // falls to the lower-index subdomain.
  int k = 0;
  for (const auto& itf : partition.interfaces) {
    if (itf.x < x[0]) ++k;
  }
  return k;
}

}  // namespace pdd
