#include <doctest.h>

#include <cmath>
#include <random>

#include "pdd/geometry.hpp"

using namespace pdd;

TEST_CASE("boundary query inside the unit square") {
  const Domain d = make_domain(0, 1, 0, 1);
  const auto q = boundary_query(d, Vec2{0.5, 0.5});
  CHECK(q.distance == doctest::Approx(-0.5));
  CHECK(q.normal.norm() == doctest::Approx(1.0));
  CHECK(boundary_query(d, q.projection).distance == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("boundary query on and outside the boundary") {
  const Domain d = make_domain(0, 1, 0, 1);
  const auto on = boundary_query(d, Vec2{0.5, 0.0});
  CHECK(on.distance == 0.0);
  CHECK(on.projection == Vec2{0.5, 0.0});
  CHECK(on.normal == Vec2{0.0, -1.0});

  const auto out = boundary_query(d, Vec2{0.5, -0.2});
  CHECK(out.distance == doctest::Approx(0.2));
  CHECK(out.projection == Vec2{0.5, 0.0});
}

TEST_CASE("signed distance matches the four-edge oracle on random points") {
  const Domain d = make_domain(-1.0, 3.0, 0.5, 2.0);
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> ux(-0.5, 2.5), uy(0.6, 1.9);
  for (int i = 0; i < 10'000; ++i) {
    const Vec2 x{ux(gen), uy(gen)};
    const auto q = boundary_query(d, x);
    const double oracle = std::min(std::min(x[0] - d.xmin, d.xmax - x[0]),
                                   std::min(x[1] - d.ymin, d.ymax - x[1]));
    CHECK(std::abs(q.distance) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(std::abs(boundary_query(d, q.projection).distance) <= 1e-12);
    CHECK(q.normal.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("disk boundary map") {
  const DiskBoundary disk(Vec2{0, 0}, 1.0);
  CHECK(disk.query(Vec2{0, 0}).distance == doctest::Approx(-1.0));
  CHECK(disk.query(Vec2{2, 0}).distance == doctest::Approx(1.0));
  const auto q = disk.query(Vec2{0.5, 0});
  CHECK(q.projection == Vec2{1.0, 0.0});
  CHECK(q.normal == Vec2{1.0, 0.0});
}

TEST_CASE("partition of the unit square into two strips") {
  const Domain d = make_domain(0, 1, 0, 1);
  const Partition p = build_partition(d, 2, 3);
  REQUIRE(p.interfaces.size() == 1);
  CHECK(p.interfaces[0].x == doctest::Approx(0.5));
  REQUIRE(p.nodes.size() == 3);
  CHECK(p.nodes[0].position == Vec2{0.5, 0.25});
  CHECK(p.nodes[1].position == Vec2{0.5, 0.5});
  CHECK(p.nodes[2].position == Vec2{0.5, 0.75});
}

TEST_CASE("partition node counts match the four-strip layout") {
  const Domain d = make_domain(0, 4, 0, 1);
  const Partition p = build_partition(d, 4, 6);
  CHECK(p.interfaces.size() == 3);
  CHECK(p.node_count() == 18);
  for (const auto& itf : p.interfaces) CHECK(itf.node_ids.size() == 6);
  // Every node sits on exactly one interface, strictly interior.
  for (const auto& node : p.nodes) {
    const auto& itf = p.interfaces[node.interface_id];
    CHECK(node.position[0] == itf.x);
    CHECK(node.position[1] > d.ymin);
    CHECK(node.position[1] < d.ymax);
  }
  // Interior strips see two interfaces (12 nodes), edge strips one.
  CHECK(p.nodes_on_subdomain(0).size() == 6);
  CHECK(p.nodes_on_subdomain(1).size() == 12);
}

TEST_CASE("partition widths sum exactly") {
  const Domain d = make_domain(0.1, 3.7, 0, 1);
  for (int m : {2, 3, 4, 5, 7}) {
    const Partition p = build_partition(d, m, 2);
    double total = 0.0;
    for (const auto& s : p.subdomains) total += s.width();
    CHECK(total == doctest::Approx(d.width()).epsilon(1e-15));
    CHECK(p.subdomains.front().xmin == d.xmin);
    CHECK(p.subdomains.back().xmax == d.xmax);
    for (int k = 0; k + 1 < m; ++k) {
      CHECK(p.subdomains[k].xmax == p.subdomains[k + 1].xmin);
    }
  }
}

TEST_CASE("partition rejects degenerate inputs") {
  const Domain d = make_domain(0, 1, 0, 1);
  CHECK_THROWS_AS(build_partition(d, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_partition(d, 2, 1), std::invalid_argument);
}

TEST_CASE("locate_subdomain with interface tie rule") {
  const Domain d = make_domain(0, 1, 0, 1);
  const Partition p = build_partition(d, 2, 3);
  CHECK(locate_subdomain(p, Vec2{0.25, 0.5}) == 0);
  CHECK(locate_subdomain(p, Vec2{0.5, 0.5}) == 0);  // tie -> lower index
  CHECK(locate_subdomain(p, Vec2{0.75, 0.5}) == 1);
  CHECK_THROWS_AS(locate_subdomain(p, Vec2{1.5, 0.5}), std::invalid_argument);
}
