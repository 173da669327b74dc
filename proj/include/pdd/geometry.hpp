#pragma once

#include <string>
#include <vector>

#include "pdd/types.hpp"

namespace pdd {

/// Axis-aligned rectangular domain. Signed distance is negative inside,
/// zero on the boundary, positive outside.
struct Domain {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diameter() const;
  bool contains(const Vec2& x) const;
};

Domain make_domain(double xmin, double xmax, double ymin, double ymax);

struct BoundaryQuery {
  double distance = 0.0;  // signed; < 0 inside
  Vec2 projection = Vec2::Zero();
  Vec2 normal = Vec2::Zero();  // outward unit normal at projection
};

BoundaryQuery boundary_query(const Domain& domain, const Vec2& x);

/// Distance map abstraction used by the stochastic integrator. Rectangles
/// back the solver pipeline; other shapes back benchmark problems.
class BoundaryMap {
 public:
  virtual ~BoundaryMap() = default;
  virtual BoundaryQuery query(const Vec2& x) const = 0;
  virtual bool inside(const Vec2& x) const { return query(x).distance < 0.0; }
};

class RectBoundary final : public BoundaryMap {
 public:
  explicit RectBoundary(const Domain& domain) : domain_(domain) {}
  BoundaryQuery query(const Vec2& x) const override { return boundary_query(domain_, x); }
  const Domain& domain() const { return domain_; }

 private:
  Domain domain_;
};

class DiskBoundary final : public BoundaryMap {
 public:
  DiskBoundary(const Vec2& center, double radius);
  BoundaryQuery query(const Vec2& x) const override;

 private:
  Vec2 center_;
  double radius_;
};

struct Interface {
  int id = 0;
  double x = 0.0;       // vertical segment at this abscissa
  double ymin = 0.0;
  double ymax = 0.0;
  int left_subdomain = 0;
  int right_subdomain = 0;
  std::vector<int> node_ids;

  double length() const { return ymax - ymin; }
};

struct InterfaceNode {
  int id = 0;
  Vec2 position = Vec2::Zero();
  int interface_id = 0;
};

/// Nonoverlapping partition of a rectangle into equal-width vertical strips.
/// Interfacial nodes are equispaced and strictly interior to each interface.
struct Partition {
  Domain domain;
  std::vector<Domain> subdomains;
  std::vector<Interface> interfaces;
  std::vector<InterfaceNode> nodes;

  int subdomain_count() const { return static_cast<int>(subdomains.size()); }
  int node_count() const { return static_cast<int>(nodes.size()); }
  /// Ids of nodes sitting on the boundary of subdomain k.
  std::vector<int> nodes_on_subdomain(int k) const;
};

Partition build_partition(const Domain& domain, int subdomain_count, int nodes_per_interface);

/// Index k with x in subdomain k. Points exactly on an interface resolve to
/// the lower index. Throws if x lies outside the domain.
int locate_subdomain(const Partition& partition, const Vec2& x);

}  // namespace pdd
