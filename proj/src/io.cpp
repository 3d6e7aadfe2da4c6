#include "lathom/io.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "lathom/rng.hpp"

namespace lathom {

namespace {

constexpr char kMagic[4] = {'L', 'H', 'F', '1'};

void write_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void write_u64(std::ostream& os, uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }
uint32_t read_u32(std::istream& is) {
  uint32_t v;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
uint64_t read_u64(std::istream& is) {
  uint64_t v;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

}  // namespace

void write_field_binary(const std::string& path, const VertexField& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field_binary: cannot open " + path);
  os.write(kMagic, 4);
  write_u32(os, static_cast<uint32_t>(u.tag().kind));
  write_u32(os, static_cast<uint32_t>(u.tag().d));
  write_u32(os, static_cast<uint32_t>(u.tag().size));
  write_u64(os, static_cast<uint64_t>(u.size()));
  os.write(reinterpret_cast<const char*>(u.data().data()), u.size() * sizeof(double));
  if (!os) throw std::runtime_error("write_field_binary: write failed for " + path);
}

VertexField read_field_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field_binary: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("read_field_binary: bad magic");
  DomainTag tag;
  tag.kind = static_cast<DomainTag::Kind>(read_u32(is));
  tag.d = static_cast<int>(read_u32(is));
  tag.size = static_cast<int>(read_u32(is));
  uint64_t n = read_u64(is);
  VertexField u(tag, static_cast<long>(n));
  is.read(reinterpret_cast<char*>(u.data().data()), n * sizeof(double));
  if (!is) throw std::runtime_error("read_field_binary: truncated file " + path);
  return u;
}

void write_field_csv(const std::string& path, const VertexField& u) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_field_csv: cannot open " + path);
  os << "index";
  for (int i = 0; i < u.tag().d; ++i) os << ",x" << i;
  os << ",value\n";
  os.precision(17);
  const int d = u.tag().d;
  auto emit = [&](long idx, const Coord& c) {
    os << idx;
    for (int i = 0; i < d; ++i) os << "," << c[i];
    os << "," << u[idx] << "\n";
  };
  switch (u.tag().kind) {
    case DomainTag::TorusVerts: {
      Torus t(d, u.tag().size);
      for (long v = 0; v < u.size(); ++v) emit(v, t.coord(v));
      break;
    }
    case DomainTag::BoxClosed: {
      BoxGeometry g(d, u.tag().size);
      for (long v = 0; v < u.size(); ++v) emit(v, g.coord(v));
      break;
    }
    case DomainTag::BoxInterior: {
      BoxGeometry g(d, u.tag().size);
      for (long k = 0; k < u.size(); ++k) emit(k, g.coord(g.interior()[k]));
      break;
    }
    case DomainTag::BoxBoundary: {
      BoxGeometry g(d, u.tag().size);
      for (long k = 0; k < u.size(); ++k) emit(k, g.coord(g.boundary()[k]));
      break;
    }
    case DomainTag::BoxInnerBoundary: {
      BoxGeometry g(d, u.tag().size);
      for (long k = 0; k < u.size(); ++k) emit(k, g.coord(g.inner_boundary()[k]));
      break;
    }
  }
}

void write_environment(const std::string& path, const Environment& env) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_environment: cannot open " + path);
  nlohmann::json hdr;
  hdr["d"] = env.dim();
  hdr["topology"] = env.topology() == Topology::TorusT ? "torus" : "box";
  hdr["size"] = env.size();
  hdr["law"] = env.law().str();
  hdr["seed"] = env.seed();
  hdr["slots"] = env.num_slots();
  os << hdr.dump() << "\n";
  os.write(reinterpret_cast<const char*>(env.values().data()), env.num_slots() * sizeof(double));
  if (!os) throw std::runtime_error("write_environment: write failed for " + path);
}

Environment read_environment(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_environment: cannot open " + path);
  std::string line;
  std::getline(is, line);
  nlohmann::json hdr = nlohmann::json::parse(line);
  int d = hdr.at("d").get<int>();
  Topology topo = hdr.at("topology").get<std::string>() == "torus" ? Topology::TorusT : Topology::BoxT;
  int size = hdr.at("size").get<int>();
  LawSpec law = LawSpec::parse(hdr.at("law").get<std::string>());
  uint64_t seed = hdr.at("seed").get<uint64_t>();
  long slots = hdr.at("slots").get<long>();
  Environment env(d, topo, size, law, seed);
  if (env.num_slots() != slots) throw std::runtime_error("read_environment: slot count mismatch");
  is.read(reinterpret_cast<char*>(env.values().data()), slots * sizeof(double));
  if (!is) throw std::runtime_error("read_environment: truncated file " + path);
  return env;
}

uint64_t config_hash(const std::string& serialized) { return fnv1a(serialized); }

}  // namespace lathom
