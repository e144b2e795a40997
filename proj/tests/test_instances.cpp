#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "disclab/instances.hpp"
#include "disclab/io.hpp"

#include <cmath>
#include <filesystem>

using namespace disclab;

TEST_CASE("zero rows and small Hadamard") {
  const Instance z = generate_instance({Family::ZeroRows, 4, 3, 0});
  CHECK(z.rows() == Eigen::MatrixXd::Zero(3, 4));
  CHECK(z.model() == NormModel::BoxInf);

  const Instance h = generate_instance({Family::Hadamard, 2, 2, 0});
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(h.rows()(0, 0) == r);
  CHECK(h.rows()(0, 1) == r);
  CHECK(h.rows()(1, 0) == r);
  CHECK(h.rows()(1, 1) == -r);
  CHECK(h.model() == NormModel::KashinSumSq);

  const Eigen::MatrixXd s8 = sylvester_hadamard(8);
  CHECK((s8 * s8.transpose()).isApprox(8.0 * Eigen::MatrixXd::Identity(8, 8)));
}

TEST_CASE("generator errors") {
  CHECK_THROWS_AS(generate({Family::Hadamard, 6, 2, 0}), Error);
  CHECK_THROWS_AS(generate({Family::Hadamard, 4, 5, 0}), Error);
  CHECK_THROWS_AS(generate({Family::RandomSigns, 0, 2, 0}), Error);
  CHECK_THROWS_AS(generate_komlos({Family::RandomSigns, 3, 3, 0}), Error);
  CHECK_THROWS_AS(generate_instance({Family::RandomUnitColumns, 3, 3, 0}), Error);
  CHECK_THROWS_AS(family_from_string("nope"), Error);
  for (Family f : {Family::SetSystem01, Family::RandomSigns, Family::RandomUnitColumns,
                   Family::Hadamard, Family::ZeroRows})
    CHECK(family_from_string(to_string(f)) == f);
}

TEST_CASE("random families have the advertised entries") {
  const Instance s = generate_instance({Family::RandomSigns, 30, 20, 3});
  CHECK((s.rows().array().abs() == 1.0).all());
  const Instance b = generate_instance({Family::SetSystem01, 30, 20, 3});
  CHECK((b.rows().array() == 0.0 || b.rows().array() == 1.0).all());
  const KomlosInstance u = generate_komlos({Family::RandomUnitColumns, 50, 7, 3});
  for (Index i = 0; i < u.n(); ++i) CHECK(std::abs(u.columns().col(i).norm() - 1.0) <= 1e-12);
}

TEST_CASE("generation is deterministic down to the bytes") {
  for (Family f : {Family::SetSystem01, Family::RandomSigns, Family::RandomUnitColumns}) {
    const GeneratorSpec spec{f, 17, 9, 12345};
    const Generated a = generate(spec), b = generate(spec);
    const auto text = [](const Generated& g) {
      return std::holds_alternative<Instance>(g) ? instance_to_json(std::get<Instance>(g))
                                                 : komlos_to_json(std::get<KomlosInstance>(g));
    };
    CHECK(text(a) == text(b));
    CHECK(text(a) != text(generate({f, 17, 9, 12346})));
  }
}

TEST_CASE("Hadamard sections have unit rows for any n") {
  for (Index n = 1; n <= 20; ++n) {
    const Instance h = hadamard_section(n, 2 * n, static_cast<std::uint64_t>(n));
    CHECK(h.model() == NormModel::KashinSumSq);
    CHECK(h.m() == 2 * n);
    for (Index i = 0; i < h.m(); ++i) CHECK(std::abs(h.rows().row(i).norm() - 1.0) <= 1e-12);
    CHECK((h.rows().array().abs() * std::sqrt(static_cast<double>(n)) - 1.0).abs().maxCoeff() <=
          1e-12);
  }
  const Instance b = generate_instance({Family::RandomSigns, 8, 5, 1});
  CHECK(box_to_kashin(b).rows().isApprox(b.rows() / std::sqrt(8.0)));
}

TEST_CASE("JSON round trip is bit exact") {
  Eigen::MatrixXd rows(2, 3);
  rows << -0.0, 1e-300, 0.1, 1.0 / 3.0, -1.0, 5e-324;
  const Instance inst(rows, NormModel::BoxInf);
  const std::string text = instance_to_json(inst);
  CHECK(text.find("-0.0") != std::string::npos);
  const Instance back = instance_from_json(text);
  CHECK(back.model() == NormModel::BoxInf);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 3; ++j) {
      CHECK(std::signbit(back.rows()(i, j)) == std::signbit(rows(i, j)));
      CHECK(back.rows()(i, j) == rows(i, j));
    }
  CHECK(instance_to_json(back) == text);
  CHECK(instance_hash(back) == instance_hash(inst));

  const KomlosInstance kom = generate_komlos({Family::RandomUnitColumns, 4, 3, 8});
  CHECK(komlos_from_json(komlos_to_json(kom)) == kom);
  CHECK(std::holds_alternative<KomlosInstance>(any_instance_from_json(komlos_to_json(kom))));

  SignVector v(4);
  v << 1, 0, -1, 1;
  CHECK(coloring_from_json(coloring_to_json(Coloring(v))) == Coloring(v));

  const auto dir = std::filesystem::temp_directory_path() / "disclab_test_instances";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "inst.json").string();
  write_instance(path, inst);
  CHECK(instance_to_json(read_instance(path)) == text);
  std::filesystem::remove_all(dir);
}

TEST_CASE("schema and model errors name the offending field") {
  try {
    instance_from_json(R"({"schema":"disclab-instance-v1","model":"BoxInf","n":2,"m":1,"rows":[[0,2]]})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("rows[0][1]") != std::string::npos);
  }
  try {
    instance_from_json(R"({"schema":"disclab-instance-v1","rows":[[0,1]]})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Schema);
    CHECK(std::string(e.what()).find("model") != std::string::npos);
  }
  try {
    instance_from_json(R"({"schema":"disclab-instance-v1","model":"BoxInf","n":2,"m":1,"rows":[[0,"x"]]})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Schema);
    CHECK(std::string(e.what()).find("rows[0][1]") != std::string::npos);
  }
  CHECK_THROWS_AS(instance_from_json("not json"), Error);
  CHECK_THROWS_AS(coloring_from_json(R"({"schema":"disclab-coloring-v1","values":[2]})"), Error);
}
