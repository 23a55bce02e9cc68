#include "kgfield/state_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kgfield/inner_products.hpp"

namespace kgfield {
namespace {

constexpr const char* kStateMagic = "kgfield-state-v1";
constexpr const char* kPlaneMagic = "kgfield-planewaves-v1";

void put_double(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

double get_double(std::istream& in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw PreconditionError("state file: truncated data block");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t(buf[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::string expect_line(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) throw PreconditionError("state file: missing '" + key + "' line");
  if (line.rfind(key, 0) != 0) throw PreconditionError("state file: expected '" + key + "', got '" + line + "'");
  return line.substr(key.size());
}

} // namespace

void write_state(std::ostream& out, const LatticeField& field) {
  const Lattice& L = field.lattice();
  const ModelParams& P = field.params();
  out << kStateMagic << '\n' << std::setprecision(17);
  out << "dim " << L.dim() << '\n';
  out << "length " << L.length(0) << ' ' << L.length(1) << ' ' << L.length(2) << '\n';
  out << "points " << L.points(0) << ' ' << L.points(1) << ' ' << L.points(2) << '\n';
  out << "params " << P.mass() << ' ' << P.kappa() << ' ' << P.a() << '\n';
  out << "t0 " << field.t0() << '\n';
  out << "data\n";
  for (const CGrid* g : {&field.phi_plus(), &field.phi_minus()})
    for (const cplx& c : *g) {
      put_double(out, c.real());
      put_double(out, c.imag());
    }
}

LatticeField read_state(std::istream& in) {
  std::string magic;
  std::getline(in, magic);
  if (magic != kStateMagic) throw PreconditionError("state file: bad magic '" + magic + "'");
  int dim = 0;
  std::array<double, 3> len{};
  std::array<int, 3> pts{};
  double M = 0, kappa = 0, a = 0, t0 = 0;
  std::istringstream(expect_line(in, "dim ")) >> dim;
  std::istringstream(expect_line(in, "length ")) >> len[0] >> len[1] >> len[2];
  std::istringstream(expect_line(in, "points ")) >> pts[0] >> pts[1] >> pts[2];
  std::istringstream(expect_line(in, "params ")) >> M >> kappa >> a;
  std::istringstream(expect_line(in, "t0 ")) >> t0;
  expect_line(in, "data");
  const Lattice L(dim, len, pts);
  CGrid plus(L.size()), minus(L.size());
  for (CGrid* g : {&plus, &minus})
    for (auto& c : *g) {
      const double re = get_double(in);
      c = {re, get_double(in)};
    }
  return LatticeField(L, ModelParams(M, kappa, a), std::move(plus), std::move(minus), t0);
}

void save_state(const std::string& path, const LatticeField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot open '" + path + "' for writing");
  write_state(out, field);
}

LatticeField load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  return read_state(in);
}

void write_planewaves(std::ostream& out, const PlaneWaveField& field) {
  const ModelParams& P = field.params();
  out << kPlaneMagic << '\n' << std::setprecision(17);
  out << "params " << P.mass() << ' ' << P.kappa() << ' ' << P.a() << ' ' << field.dim() << '\n';
  for (const auto& m : field.modes())
    out << "mode " << m.epsilon << ' ' << m.k[0] << ' ' << m.k[1] << ' ' << m.k[2] << ' '
        << m.coeff.real() << ' ' << m.coeff.imag() << '\n';
}

PlaneWaveField read_planewaves(std::istream& in) {
  std::string magic;
  std::getline(in, magic);
  if (magic != kPlaneMagic) throw PreconditionError("plane-wave file: bad magic '" + magic + "'");
  double M = 0, kappa = 0, a = 0;
  int dim = 0;
  std::istringstream(expect_line(in, "params ")) >> M >> kappa >> a >> dim;
  std::vector<PlaneWaveMode> modes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    PlaneWaveMode m;
    double re = 0, im = 0;
    if (!(ss >> tag >> m.epsilon >> m.k[0] >> m.k[1] >> m.k[2] >> re >> im) || tag != "mode")
      throw PreconditionError("plane-wave file: malformed line '" + line + "'");
    m.coeff = {re, im};
    modes.push_back(m);
  }
  return PlaneWaveField(ModelParams(M, kappa, a), dim, std::move(modes));
}

std::string inspect_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  std::string magic;
  std::getline(in, magic);
  in.seekg(0);
  nlohmann::ordered_json j;
  if (magic == kStateMagic) {
    const LatticeField f = read_state(in);
    const Lattice& L = f.lattice();
    j["format"] = kStateMagic;
    j["dim"] = L.dim();
    j["length"] = std::vector<double>{L.length(0), L.length(1), L.length(2)};
    j["points"] = std::vector<int>{L.points(0), L.points(1), L.points(2)};
    j["mass"] = f.params().mass();
    j["kappa"] = f.params().kappa();
    j["a"] = f.params().a();
    j["t0"] = f.t0();
    const cplx n = inner_a(f, f, f.t0());
    j["inner_a"] = {n.real(), n.imag()};
    j["real_field"] = is_real_field(f);
  } else if (magic == kPlaneMagic) {
    const PlaneWaveField f = read_planewaves(in);
    j["format"] = kPlaneMagic;
    j["dim"] = f.dim();
    j["mass"] = f.params().mass();
    j["kappa"] = f.params().kappa();
    j["a"] = f.params().a();
    j["modes"] = f.modes().size();
  } else {
    throw PreconditionError("unrecognized state file '" + path + "'");
  }
  return j.dump(2);
}

} // namespace kgfield
