#include <gtest/gtest.h>

#include "mcc/surgery.hpp"

using namespace mcc;

namespace {

const Check* find_check(const Report& r, const std::string& prefix) {
  for (auto& c : r)
    if (c.name.rfind(prefix, 0) == 0) return &c;
  return nullptr;
}

}  // namespace

TEST(Merge, RejectsMismatchedDistance) {
  EXPECT_THROW(build_merge(build_code(5), build_code(9), MergeType::type_one), std::invalid_argument);
}

TEST(Merge, TypeOneLayoutValid) {
  for (int d : {5, 9}) {
    CodeLayout L = build_code(d);
    MergedLayout m = build_merge(L, L, MergeType::type_one);
    Report r = validate_merge(m);
    EXPECT_TRUE(all_ok(r)) << format_report(r);
    EXPECT_EQ(m.measured, Color::red);
    EXPECT_EQ(m.patches.size(), 2u);
    EXPECT_EQ(m.ancilla.size() % 2, 0u);
    EXPECT_EQ(m.merged.num_vertices(), 2 * L.num_vertices() + int(m.ancilla.size()));
  }
}

TEST(Merge, TypeTwoLayoutValid) {
  CodeLayout L = build_code(5);
  MergedLayout m = build_merge(L, L, MergeType::type_two);
  Report r = validate_merge(m);
  EXPECT_TRUE(all_ok(r)) << format_report(r);
  EXPECT_EQ(m.measured, Color::green);
}

TEST(Merge, RestrictionGivesPatchStabilisers) {
  CodeLayout L = build_code(5);
  MergedLayout m = build_merge(L, L, MergeType::type_one);
  for (int k = 0; k < 2; ++k) {
    // Every patch stabiliser is a merged plaquette supported inside the patch, or not present at all.
    int inside = 0;
    std::vector<char> in_patch(m.merged.num_vertices(), 0);
    for (int v : m.patch_modes[k]) in_patch[v] = 1;
    for (auto& p : m.merged.plaquettes)
      if (std::all_of(p.vertices.begin(), p.vertices.end(), [&](int v) { return in_patch[v]; })) ++inside;
    EXPECT_LE(inside, int(L.plaquettes.size()));
    for (size_t p = 0; p < L.plaquettes.size(); ++p) {
      Monomial pre = m.pre_stabilizer(k, int(p));
      EXPECT_EQ(pre.weight(), L.plaquettes[p].vertices.size());
    }
    EXPECT_EQ(m.logical(k).weight(), size_t(L.num_vertices()));
  }
}

TEST(Pattern, TypeOneAtFiveSatisfiesAllIdentities) {
  CodeLayout L = build_code(5);
  MergedLayout m = build_merge(L, L, MergeType::type_one);
  BarPattern p = construct_pattern(m);
  EXPECT_EQ(p.size() * 2, m.ancilla.size());
  Report r = verify_pattern(m, p);
  EXPECT_TRUE(all_ok(r)) << format_report(r);
  const Check* q = find_check(r, "Q_R = i a b Q_A");
  ASSERT_NE(q, nullptr);
  EXPECT_TRUE(q->ok);
  const Check* sup = find_check(r, "Q_R support");
  ASSERT_NE(sup, nullptr);
  EXPECT_TRUE(sup->ok);
}

TEST(Pattern, TypeOneIdentityByHand) {
  // Rebuild Q_R and i a b Q_A directly from the merged layout.
  CodeLayout L = build_code(5);
  MergedLayout m = build_merge(L, L, MergeType::type_one);
  BarPattern p = construct_pattern(m);
  Monomial qr = Monomial::scalar(0);
  for (auto& pl : m.merged.plaquettes)
    if (pl.color == Color::red) qr = qr * m.merged.stabilizer(pl.id);
  Monomial qa = Monomial::scalar(0);
  for (auto& b : p) qa = qa * bar_operator(b);
  Monomial rhs = Monomial::scalar(1) * m.logical(0) * m.logical(1) * qa;
  EXPECT_EQ(qr, rhs) << qr.str() << " vs " << rhs.str();
  EXPECT_EQ(int(qr.weight()), m.merged.num_vertices());
}

TEST(Pattern, TypeTwoAtFive) {
  CodeLayout L = build_code(5);
  MergedLayout m = build_merge(L, L, MergeType::type_two);
  Report r = verify_pattern(m, construct_pattern(m));
  EXPECT_TRUE(all_ok(r)) << format_report(r);
}

TEST(Pattern, LargerDistance) {
  CodeLayout L = build_code(9);
  for (MergeType t : {MergeType::type_one, MergeType::type_two}) {
    MergedLayout m = build_merge(L, L, t);
    Report r = verify_pattern(m, construct_pattern(m));
    EXPECT_TRUE(all_ok(r)) << merge_type_name(t) << "\n" << format_report(r);
  }
}

TEST(Pattern, Deterministic) {
  CodeLayout L = build_code(5);
  MergedLayout m = build_merge(L, L, MergeType::type_one);
  EXPECT_EQ(construct_pattern(m), construct_pattern(m));
}

TEST(Pattern, RemovingABarFails) {
  CodeLayout L = build_code(5);
  MergedLayout m = build_merge(L, L, MergeType::type_one);
  BarPattern p = construct_pattern(m);
  for (size_t k : {size_t(0), p.size() / 2, p.size() - 1}) {
    BarPattern q = p;
    q.erase(q.begin() + long(k));
    EXPECT_FALSE(all_ok(verify_pattern(m, q))) << "bar " << k;
  }
}

TEST(Pattern, FlippedBarOrientationBreaksPhase) {
  CodeLayout L = build_code(5);
  MergedLayout m = build_merge(L, L, MergeType::type_one);
  BarPattern p = construct_pattern(m);
  std::swap(p[0].i, p[0].j);
  Report r = verify_pattern(m, p);
  const Check* q = find_check(r, "Q_R = i a b Q_A");
  ASSERT_NE(q, nullptr);
  EXPECT_FALSE(q->ok);
}

TEST(Pattern, OverlappingBarsFail) {
  CodeLayout L = build_code(5);
  MergedLayout m = build_merge(L, L, MergeType::type_one);
  BarPattern p = construct_pattern(m);
  p[1].i = p[0].i;
  EXPECT_FALSE(all_ok(verify_pattern(m, p)));
}

TEST(LogicalPhase, SingleModeFlipsMatchLogicalFlip) {
  for (int d : {5, 9}) {
    Report r = verify_logical_phase(build_code(d));
    EXPECT_TRUE(all_ok(r)) << format_report(r);
  }
}
