#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "pmwu/instance.hpp"

using namespace pmwu;

namespace {
OperatorPtr csb(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
  CooMatrix a(rows, cols);
  for (const auto& t : entries) a.add(t.row, t.col, t.value);
  return std::make_shared<CsbOperator>(a);
}
}  // namespace

TEST(Instance, PurePackingEmbedsObjectiveRow) {
  auto p = csb(2, 3, {{0, 0, 1.0}, {1, 1, 1.0}, {1, 2, 2.0}});
  const auto inst = make_pure_packing(p, ObjBound(4.0));
  EXPECT_EQ(inst.mode, Mode::PurePacking);
  EXPECT_EQ(inst.covering_rows(), 1u);
  EXPECT_EQ(inst.covering->apply(std::vector<double>{1, 1, 2}), std::vector<double>{1.0});
}

TEST(Instance, PureCoveringEmbedsObjectiveRow) {
  auto c = csb(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}});
  const auto inst = make_pure_covering(c, ObjBound(2.0));
  EXPECT_EQ(inst.mode, Mode::PureCovering);
  EXPECT_EQ(inst.packing_rows(), 1u);
  EXPECT_EQ(inst.packing->apply(std::vector<double>{1, 3}), std::vector<double>{2.0});
}

TEST(Instance, ObjectiveBoundMustBePositive) {
  EXPECT_THROW(ObjBound{0.0}, std::invalid_argument);
  EXPECT_THROW(ObjBound{-1.0}, std::invalid_argument);
  EXPECT_THROW(ObjBound{INFINITY}, std::invalid_argument);
}

TEST(Instance, ValidateFindsProblems) {
  EXPECT_TRUE(validate(make_mixed(csb(1, 1, {{0, 0, 2.0}}), csb(1, 1, {{0, 0, 1.0}}))).ok());

  const auto mismatch = validate(make_mixed(csb(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}}), csb(1, 1, {{0, 0, 1.0}})));
  EXPECT_TRUE(mismatch.has(Violation::Kind::DimensionMismatch));

  const auto zero_col = validate(make_mixed(csb(1, 2, {{0, 0, 1.0}}), csb(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}})));
  EXPECT_TRUE(zero_col.has(Violation::Kind::ZeroPackingColumn));
  EXPECT_NE(zero_col.summary().find("unbounded variable at init"), std::string::npos);

  const auto empty_row = validate(make_mixed(csb(1, 1, {{0, 0, 1.0}}), csb(2, 1, {{0, 0, 1.0}})));
  EXPECT_TRUE(empty_row.has(Violation::Kind::EmptyCoveringRow));

  EXPECT_TRUE(validate(MixedInstance{}).has(Violation::Kind::MissingOperator));
}

namespace {
/// An operator that reports one negative entry, which CooMatrix refuses to hold.
class NegativeOp final : public LinearOperator {
 public:
  std::size_t rows() const override { return 1; }
  std::size_t cols() const override { return 1; }
  std::string name() const override { return "negative"; }

 protected:
  void do_apply(std::span<const double> x, std::span<double> y) const override { y[0] = -x[0]; }
  void do_apply_t(std::span<const double> x, std::span<double> y) const override { y[0] = -x[0]; }
};
}  // namespace

TEST(Instance, ValidateFindsNegativeEntries) {
  const auto r = validate(make_mixed(std::make_shared<NegativeOp>(), csb(1, 1, {{0, 0, 1.0}})));
  EXPECT_TRUE(r.has(Violation::Kind::NegativeEntry));
}

TEST(Instance, ObjectiveUpperBound) {
  // Column 0 allows x0 <= 1/2, column 1 allows x1 <= 1/0.25 = 4.
  auto p = csb(2, 2, {{0, 0, 2.0}, {1, 0, 1.0}, {1, 1, 0.25}});
  EXPECT_DOUBLE_EQ(objective_upper_bound(*p), 1.0 + 4.0);
  EXPECT_THROW(objective_upper_bound(*csb(1, 2, {{0, 0, 1.0}})), std::invalid_argument);
}

TEST(Instance, JsonRoundTrip) {
  const auto inst = make_mixed(csb(2, 3, {{0, 0, 1.5}, {1, 2, 0.5}}), csb(1, 3, {{0, 1, 2.0}}));
  const auto j = instance_to_json(inst);
  EXPECT_EQ(j.at("n"), 3);
  const auto back = instance_from_json(j);
  EXPECT_EQ(back.n(), 3u);
  const std::vector<double> x{1, 2, 3};
  EXPECT_EQ(back.packing->apply(x), inst.packing->apply(x));
  EXPECT_EQ(back.covering->apply(x), inst.covering->apply(x));
}

TEST(Instance, JsonErrors) {
  EXPECT_THROW(instance_from_json(nlohmann::json::parse(R"({"n": 1})")), FormatError);
  EXPECT_THROW(instance_from_json(nlohmann::json::parse(
                   R"({"n": 1, "packing": {"rows": 1, "entries": [[0, 0, -1]]}, "covering": {"rows": 1, "entries": []}})")),
               FormatError);
  EXPECT_THROW(instance_from_json(nlohmann::json::parse(
                   R"({"n": 1, "packing": {"rows": 1, "entries": [[0, 0]]}, "covering": {"rows": 1, "entries": []}})")),
               FormatError);
  EXPECT_THROW(instance_from_json(nlohmann::json::parse(
                   R"({"n": 1, "packing": {"rows": 1, "entries": [[0, 5, 1]]}, "covering": {"rows": 1, "entries": []}})")),
               FormatError);
  const auto path = std::filesystem::temp_directory_path() / "pmwu_bad_instance.json";
  std::ofstream(path) << "{not json";
  EXPECT_THROW(read_instance(path.string()), FormatError);
  std::filesystem::remove(path);
  EXPECT_THROW(read_instance("/nonexistent/instance.json"), std::ios_base::failure);
}
