#include <gtest/gtest.h>

#include "cadedit/error.hpp"
#include "cadedit/geometry.hpp"
#include "cadedit/variation.hpp"
#include "support/test_support.hpp"

namespace cadedit {
namespace {

using namespace variation;

seq::CadModel two_se_model() {
  seq::CadModel m = testing::square_model();
  m.ses.push_back(testing::se(circle_loop(128, 128, 20), seq::BoolOp::Cut, 200, seq::Extent::Two));
  return m;
}

Errc error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::IoError;
}

TEST(PrimitiveClass, Names) {
  EXPECT_EQ(primitive_class(testing::square_model().ses[0]), "block");
  EXPECT_EQ(primitive_class(testing::se(circle_loop(128, 128, 30))), "cylinder");
  seq::SePair plate = testing::square_model().ses[0];
  plate.sketch.faces[0].loops.push_back(circle_loop(128, 128, 10));
  EXPECT_EQ(primitive_class(plate), "plate");
  EXPECT_EQ(primitive_class(testing::se({{seq::Line{200, 60}, seq::Line{60, 200}, seq::Line{60, 60}}})), "wedge");
}

TEST(Perturb, DeleteSe) {
  const auto m = two_se_model();
  const auto [edited, record] = perturb(m, 1, EditKind::DeleteSe);
  EXPECT_EQ(edited.ses.size(), 1u);
  ASSERT_EQ(record.ops.size(), 1u);
  EXPECT_EQ(record.ops[0].kind, EditKind::DeleteSe);
  EXPECT_EQ(record.ops[0].target, "se[1]");
  EXPECT_EQ(apply_edit(m, record), edited);
}

TEST(Perturb, DeleteOnSingleSeIsNotApplicable) {
  EXPECT_EQ(error_of([] { perturb(testing::square_model(), 1, EditKind::DeleteSe); }), Errc::NoApplicableEdit);
}

TEST(Builders, ChangeExtrudeDist) {
  const auto m = testing::square_model(160);
  const auto rec = change_extrude_dist(m, 0, 208);
  EXPECT_EQ(rec.ops[0].params["old"], 160);
  EXPECT_EQ(rec.ops[0].params["new"], 208);
  EXPECT_EQ(apply_edit(m, rec).ses[0].extrusion.dist_pos, 208);
  EXPECT_EQ(apply_edit(apply_edit(m, rec), invert(rec)), m);
}

TEST(ApplyEdit, MismatchDetected) {
  const auto rec = change_extrude_dist(testing::square_model(160), 0, 208);
  EXPECT_EQ(error_of([&] { apply_edit(testing::square_model(176), rec); }), Errc::EditMismatch);
  EXPECT_EQ(error_of([&] { apply_edit(testing::square_model(), delete_se(two_se_model(), 1)); }), Errc::EditMismatch);
}

TEST(Record, JsonRoundTrip) {
  const auto rec = delete_se(two_se_model(), 1);
  EXPECT_EQ(record_from_json(to_json(rec)), rec);
  EXPECT_EQ(error_of([] { record_from_json({{"ops", {{{"kind", "explode"}}}}}); }), Errc::FormatError);
}

TEST(Compose, MergesSameTargetAndDropsNoOps) {
  const auto m = testing::square_model(160);
  const auto r1 = change_extrude_dist(m, 0, 176);
  const auto r2 = change_extrude_dist(apply_edit(m, r1), 0, 208);
  const auto c = compose(r1, r2);
  ASSERT_EQ(c.ops.size(), 1u);
  EXPECT_EQ(c.ops[0].params["old"], 160);
  EXPECT_EQ(c.ops[0].params["new"], 208);
  EXPECT_TRUE(compose(r1, invert(r1)).ops.empty());
}

TEST(Perturb, EveryKindReappliesAndValidates) {
  Rng rng(8);
  int produced = 0;
  for (int i = 0; i < 40; ++i) {
    const auto base = generate_base_model(rng);
    for (EditKind k : kAllEditKinds) {
      try {
        const auto [edited, rec] = perturb(base, static_cast<std::uint64_t>(i), k);
        ASSERT_NE(edited, base);
        ASSERT_EQ(seq::serialize(apply_edit(base, rec)), seq::serialize(edited));
        ASSERT_EQ(apply_edit(edited, invert(rec)), base);
        ASSERT_TRUE(seq::validate(edited, seq::ValidationConfig::dataset()).is_valid);
        geometry::assemble(edited);
        ++produced;
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), Errc::NoApplicableEdit);
      }
    }
  }
  EXPECT_GT(produced, 150);
}

TEST(Perturb, SeedDeterminism) {
  Rng rng(3);
  const auto base = generate_base_model(rng);
  const auto a = perturb(base, 17), b = perturb(base, 17);
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
}

TEST(Perturb, JittersComeFromTheFixedSet) {
  const auto m = testing::square_model(160);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto [edited, rec] = perturb(m, s, EditKind::ChangeExtrudeDist);
    const int delta = rec.ops[0].params["new"].get<int>() - rec.ops[0].params["old"].get<int>();
    EXPECT_NE(std::find(std::begin(kJitters), std::end(kJitters), delta), std::end(kJitters));
  }
}

TEST(Pairs, Strategies) {
  Rng rng(11);
  const auto base = generate_base_model(rng);
  const VariantSet vs = make_variant_set(base, 3, 5);
  ASSERT_EQ(vs.variants.size(), 3u);
  for (const auto& v : vs.variants) EXPECT_TRUE(seq::validate(v, seq::ValidationConfig::dataset()).is_valid);

  const auto b2v = make_pairs(vs, PairStrategy::BaseToVariant);
  ASSERT_EQ(b2v.size(), 3u);
  const auto v2b = make_pairs(vs, PairStrategy::VariantToBase);
  ASSERT_EQ(v2b.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(v2b[i].record, invert(b2v[i].record));
    EXPECT_EQ(v2b[i].edit, base);
  }
  const auto v2v = make_pairs(vs, PairStrategy::VariantToVariant);
  EXPECT_EQ(v2v.size(), 6u);
  for (const auto& group : {b2v, v2b, v2v}) {
    for (const auto& p : group) {
      ASSERT_EQ(seq::serialize(apply_edit(p.orig, p.record)), seq::serialize(p.edit));
    }
  }
}

TEST(Pairs, AddDeleteInvert) {
  const auto m = two_se_model();
  const auto rec = delete_se(m, 1);
  const auto inv = invert(rec);
  EXPECT_EQ(inv.ops[0].kind, EditKind::AddSe);
  EXPECT_EQ(apply_edit(apply_edit(m, rec), inv), m);
}

TEST(Pairs, NotEnoughVariants) {
  VariantSet one;
  one.base = testing::square_model();
  one.variants.push_back(testing::square_model(176));
  one.records.push_back(change_extrude_dist(one.base, 0, 176));
  EXPECT_EQ(error_of([&] { make_pairs(one, PairStrategy::VariantToVariant); }), Errc::NotEnoughVariants);
  EXPECT_EQ(make_pairs(one, PairStrategy::BaseToVariant).size(), 1u);
  VariantSet none;
  EXPECT_EQ(error_of([&] { make_pairs(none, PairStrategy::BaseToVariant); }), Errc::NotEnoughVariants);
}

TEST(Shapes, GeneratedModelsAreValid) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto m = generate_base_model(rng);
    ASSERT_TRUE(seq::validate(m, seq::ValidationConfig::dataset()).is_valid);
    ASSERT_GE(m.ses.size(), 1u);
    ASSERT_LE(m.ses.size(), 3u);
  }
}

}  // namespace
}  // namespace cadedit
