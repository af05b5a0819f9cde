#include <doctest.h>

#include <set>

#include "hdelm/errors.hpp"
#include "hdelm/geometry.hpp"
#include "support.hpp"

using namespace hdelm;

TEST_CASE("sample_interior") {
  const BoxDomain box = BoxDomain::cube(5, -1, 1);
  CHECK(sample_interior(box, 0, 1).rows() == 0);
  const PointBlock p = sample_interior(box, 1000, 3);
  CHECK(p.rows() == 1000);
  CHECK(p.cols() == 5);
  CHECK(p.maxCoeff() < 1.0);
  CHECK(p.minCoeff() > -1.0);
  CHECK(sample_interior(box, 1000, 3) == p);

  const BoxDomain dyn = BoxDomain::cube(2, 0, 2, 0.5);
  const PointBlock q = sample_interior(dyn, 500, 4);
  CHECK(q.col(2).maxCoeff() < 0.5);
  CHECK(q.col(2).minCoeff() > 0.0);
}

TEST_CASE("sample_faces counts and pinned coordinates") {
  const BoxDomain box = BoxDomain::cube(5, -1, 1);
  const FaceSamples f = sample_faces(box, 100, 0, 9);
  REQUIRE(f.faces.size() == 10);
  Index total = 0;
  for (int dir = 0; dir < 5; ++dir) {
    for (Side side : {Side::low, Side::high}) {
      const PointBlock& b = f.faces[face_index(dir, side)];
      total += b.rows();
      const double pinned = side == Side::low ? -1.0 : 1.0;
      CHECK((b.col(dir).array() == pinned).all());
      for (int k = 0; k < 5; ++k)
        if (k != dir) CHECK(b.col(k).cwiseAbs().maxCoeff() < 1.0);
    }
  }
  CHECK(total == 1000);
  CHECK(f.initial.rows() == 0);

  const BoxDomain dyn = BoxDomain::cube(3, -1, 1, 1.0);
  const CollocationSet c = sample_collocation(dyn, 10, 100, 1000, 2);
  CHECK(c.n_bc() * 6 == 600);
  CHECK(c.n_t0() == 1000);
  CHECK(c.n_bc_total() == 1600);
  CHECK((c.initial.col(3).array() == 0.0).all());
  for (const auto& face : c.faces) {
    CHECK(face.col(3).minCoeff() > 0.0);
    CHECK(face.col(3).maxCoeff() < 1.0);
  }

  const FaceSamples one = sample_faces(BoxDomain::cube(1, 2, 5), 1, 0, 1);
  CHECK(one.faces[0](0, 0) == 2.0);
  CHECK(one.faces[1](0, 0) == 5.0);

  CHECK_THROWS_AS(sample_faces(box, 10, 5, 1), InvalidArgument);
}

TEST_CASE("collocation sets collect points in a fixed order") {
  const BoxDomain dyn = BoxDomain::cube(2, -1, 1, 1.0);
  const CollocationSet c = sample_collocation(dyn, 7, 3, 4, 5);
  const PointBlock cond = c.condition_points();
  CHECK(cond.rows() == 4 * 3 + 4);
  CHECK(cond.row(0) == c.faces[0].row(0));
  CHECK(cond.row(12) == c.initial.row(0));
  const PointBlock all = c.all_points();
  CHECK(all.rows() == 7 + 16);
  CHECK(all.row(0) == c.interior.row(0));
  CHECK(all.row(7) == cond.row(0));
}

TEST_CASE("sample_test_set") {
  const PointBlock t = sample_test_set(BoxDomain::cube(5, -1, 1), 100, 7000, 1);
  CHECK(t.rows() == 8000);
  const PointBlock single = sample_test_set(BoxDomain::cube(3, -1, 1), 0, 1, 1);
  CHECK(single.rows() == 1);
  CHECK(single.cwiseAbs().maxCoeff() < 1.0);
  const PointBlock dyn = sample_test_set(BoxDomain::cube(3, -1, 1, 1.0), 20, 100, 2);
  CHECK(dyn.rows() == 100 + 6 * 20);
  CHECK((dyn.col(3).array() == 1.0).all());
}

namespace {

// Brute-force adjacency: two boxes share a face when they touch along exactly
// one coordinate and overlap with positive length along all others.
int count_adjacent(const Decomposition& dec) {
  int n = 0;
  for (int a = 0; a < dec.size(); ++a)
    for (int b = a + 1; b < dec.size(); ++b) {
      int touching = 0, overlapping = 0;
      for (int k = 0; k < dec.parent.d(); ++k) {
        const auto &x = dec.boxes[a], &y = dec.boxes[b];
        if (x.hi(k) == y.lo(k) || y.hi(k) == x.lo(k)) ++touching;
        else if (std::min(x.hi(k), y.hi(k)) > std::max(x.lo(k), y.lo(k))) ++overlapping;
      }
      if (touching == 1 && overlapping == dec.parent.d() - 1) ++n;
    }
  return n;
}

}  // namespace

TEST_CASE("decompose") {
  const BoxDomain sq = BoxDomain::cube(2, -1, 1);
  const Decomposition none = decompose(sq, {}, {});
  CHECK(none.size() == 1);
  CHECK(none.boxes[0].lo() == sq.lo());
  CHECK(none.boxes[0].hi() == sq.hi());
  CHECK(none.interfaces.empty());

  const Decomposition two = decompose(sq, {0}, {2});
  REQUIRE(two.size() == 2);
  CHECK(two.boxes[0].hi(0) == 0.0);
  CHECK(two.boxes[1].lo(0) == 0.0);
  REQUIRE(two.interfaces.size() == 1);
  CHECK(two.interfaces[0] == Interface{0, 1, 0});

  const BoxDomain b7 = BoxDomain::cube(7, -1, 1);
  const Decomposition six = decompose(b7, {0, 3}, {2, 3});
  CHECK(six.size() == 6);
  CHECK(static_cast<int>(six.interfaces.size()) == 7);
  CHECK(count_adjacent(six) == 7);
  double vol = 0;
  for (const auto& b : six.boxes) vol += b.volume();
  CHECK(vol == doctest::Approx(b7.volume()).epsilon(1e-12));
  for (const auto& in : six.interfaces) {
    CHECK(in.lower < in.higher);
    CHECK(six.boxes[in.lower].hi(in.direction) == six.boxes[in.higher].lo(in.direction));
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& in : six.interfaces) CHECK(seen.insert({in.lower, in.higher}).second);

  CHECK_THROWS_AS(decompose(b7, {0, 1, 2}, {2, 2, 2}), UnsupportedConfiguration);
  CHECK_THROWS_AS(decompose(b7, {0}, {0}), InvalidArgument);
}

TEST_CASE("locate returns the lowest owning id") {
  const Decomposition two = decompose(BoxDomain::cube(2, -1, 1), {0}, {2});
  const std::vector<double> mid{0.0, 0.3}, right{0.5, 0.0};
  CHECK(two.locate(mid) == 0);
  CHECK(two.locate(right) == 1);
  const std::vector<double> outside{2.0, 0.0};
  CHECK_THROWS_AS(two.locate(outside), InvalidArgument);
}

TEST_CASE("align_shared_faces") {
  const BoxDomain sq = BoxDomain::cube(2, -1, 1);
  SUBCASE("single sub-domain is unchanged") {
    const Decomposition one = decompose(sq, {}, {});
    const CollocationSet c = sample_collocation(sq, 5, 4, 0, 1);
    const auto out = align_shared_faces(one, {c});
    CHECK(out[0].all_points() == c.all_points());
    CHECK(sample_decomposed(one, 5, 4, 0, 1)[0].all_points() == c.all_points());
  }
  SUBCASE("two sub-domains share their interface points") {
    const Decomposition two = decompose(sq, {0}, {2});
    const auto sets = sample_decomposed(two, 3, 2, 0, 8);
    CHECK(sets[0].faces[face_index(0, Side::high)] == sets[1].faces[face_index(0, Side::low)]);
    CHECK((sets[1].faces[face_index(0, Side::low)].col(0).array() == 0.0).all());
  }
  SUBCASE("2x3 grid: every interface pair equal, idempotent") {
    const BoxDomain cube = BoxDomain::cube(3, -1, 1);
    const Decomposition dec = decompose(cube, {0, 2}, {2, 3});
    const auto sets = sample_decomposed(dec, 3, 5, 0, 12);
    for (const auto& in : dec.interfaces) {
      const auto& a = sets[in.lower].faces[face_index(in.direction, Side::high)];
      const auto& b = sets[in.higher].faces[face_index(in.direction, Side::low)];
      CHECK(a == b);
    }
    const auto twice = align_shared_faces(dec, sets);
    for (int i = 0; i < dec.size(); ++i) CHECK(twice[i].all_points() == sets[i].all_points());
  }
  SUBCASE("mismatched n_bc is rejected") {
    const Decomposition two = decompose(sq, {0}, {2});
    std::vector<CollocationSet> sets{sample_collocation(two.boxes[0], 2, 3, 0, 1),
                                     sample_collocation(two.boxes[1], 2, 4, 0, 2)};
    CHECK_THROWS_AS(align_shared_faces(two, sets), InvalidArgument);
  }
}

TEST_CASE("sub-domain seeds") {
  CHECK(subdomain_seed(77, 0, 1) == 77);
  CHECK(subdomain_seed(77, 0, 2) != subdomain_seed(77, 1, 2));
}
