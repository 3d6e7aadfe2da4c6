#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lathom/io.hpp"
#include "lathom/rng.hpp"

using namespace lathom;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("lathom_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("environment round-trips bit-exactly") {
  TempDir tmp;
  Environment env = sample_iid(LawSpec::parse("lognormal:0,1"), 2, 12, 321);
  write_environment(tmp.file("env.lhe"), env);
  Environment back = read_environment(tmp.file("env.lhe"));
  CHECK(back.dim() == env.dim());
  CHECK(back.size() == env.size());
  CHECK(back.seed() == env.seed());
  CHECK(back.law().str() == env.law().str());
  REQUIRE(back.num_slots() == env.num_slots());
  // bit-exact: compare raw representations
  CHECK(std::memcmp(back.values().data(), env.values().data(),
                    env.num_slots() * sizeof(double)) == 0);
}

TEST_CASE("box environments round-trip including the unused slots") {
  TempDir tmp;
  Environment torus = sample_iid(LawSpec::parse("uniform:1,2"), 2, 12, 11);
  Environment box = restrict_to_box(torus, 4);
  write_environment(tmp.file("box.lhe"), box);
  Environment back = read_environment(tmp.file("box.lhe"));
  CHECK(back.topology() == Topology::BoxT);
  for (long k = 0; k < box.num_slots(); ++k) {
    double a = box.values()[k], b = back.values()[k];
    if (std::isnan(a))
      CHECK(std::isnan(b));
    else
      CHECK(a == b);
  }
}

TEST_CASE("field binary round-trip preserves tag and values") {
  TempDir tmp;
  VertexField u(torus_tag(2, 6), 36);
  RngStream rs(5, "f", 0);
  for (long k = 0; k < 36; ++k) u[k] = rs.normal();
  write_field_binary(tmp.file("f.lhf"), u);
  VertexField back = read_field_binary(tmp.file("f.lhf"));
  CHECK(back.tag() == u.tag());
  CHECK(back.data() == u.data());
}

TEST_CASE("field csv carries index, coordinates and value") {
  TempDir tmp;
  BoxGeometry g(2, 1);
  VertexField u(box_inner_boundary_tag(2, 1), 4);
  for (long k = 0; k < 4; ++k) u[k] = k + 0.5;
  write_field_csv(tmp.file("f.csv"), u);
  std::ifstream is(tmp.file("f.csv"));
  std::string header;
  std::getline(is, header);
  CHECK(header == "index,x0,x1,value");
  int rows = 0;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("config hash is stable and sensitive") {
  uint64_t a = config_hash("d=2,L=8,seed=1");
  uint64_t b = config_hash("d=2,L=8,seed=1");
  uint64_t c = config_hash("d=2,L=8,seed=2");
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("corrupted files are rejected") {
  TempDir tmp;
  {
    std::ofstream os(tmp.file("bad.lhf"), std::ios::binary);
    os << "NOPE";
  }
  CHECK_THROWS(read_field_binary(tmp.file("bad.lhf")));
  CHECK_THROWS(read_environment(tmp.file("missing.lhe")));
}
