#include "qhd/harness/io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qhd/nls.hpp"

namespace qhd::harness {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'Q', 'H', 'D', 'F', 'I', 'E', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;

template <class U>
void put_le(std::string& buf, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& buf, double v) { put_le(buf, std::bit_cast<std::uint64_t>(v)); }

template <class U>
U get_le(const unsigned char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_le<std::uint64_t>(p)); }

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void prepare_output_dir(const fs::path& dir, bool overwrite) {
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!fs::is_directory(dir)) throw OutputError(dir.string() + " exists and is not a directory");
    if (!fs::is_empty(dir) && !overwrite) {
      throw OutputError(dir.string() + " is not empty; pass --output.overwrite=true to replace its contents");
    }
    return;
  }
  fs::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create " + dir.string() + ": " + ec.message());
}

void write_text_file(const fs::path& path, const std::string& content, bool overwrite) {
  if (!overwrite && fs::exists(path)) throw OutputError("refusing to overwrite " + path.string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw OutputError("write to " + path.string() + " failed");
}

void write_json_file(const fs::path& path, const nlohmann::json& value, bool overwrite) {
  write_text_file(path, value.dump(2) + "\n", overwrite);
}

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw OutputError("cannot open " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw OutputError(path.string() + " is not valid JSON");
  return j;
}

void write_field_dump(const fs::path& path, const WaveState& state, bool overwrite) {
  const Grid& g = state.grid();
  std::string buf(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(buf, kVersion);
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(g.dim()));
  put_le<std::uint64_t>(buf, g.points_per_axis());
  for (int a = 0; a < 3; ++a) put_f64(buf, a < g.dim() ? g.box_length(a) : 0.0);
  put_f64(buf, state.t);
  put_f64(buf, state.hbar);
  put_le<std::uint64_t>(buf, g.size());
  buf.reserve(buf.size() + 16 * g.size());
  for (const Complex& z : state.psi) {
    put_f64(buf, z.real());
    put_f64(buf, z.imag());
  }
  write_text_file(path, buf, overwrite);
}

WaveState read_field_dump(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OutputError("cannot open " + path.string());
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  constexpr std::size_t header = 8 + 4 + 4 + 8 + 24 + 8 + 8 + 8;
  if (buf.size() < header || std::memcmp(buf.data(), kMagic, sizeof kMagic) != 0) {
    throw OutputError(path.string() + " is not a field dump");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  if (get_le<std::uint32_t>(p + 8) != kVersion) throw OutputError(path.string() + ": unsupported dump version");
  const int dim = static_cast<int>(get_le<std::uint32_t>(p + 12));
  const auto n = get_le<std::uint64_t>(p + 16);
  std::array<double, 3> lengths{};
  for (std::size_t a = 0; a < 3; ++a) lengths[a] = get_f64(p + 24 + 8 * a);
  const double t = get_f64(p + 48);
  const double hbar = get_f64(p + 56);
  const auto count = get_le<std::uint64_t>(p + 64);
  Grid g;
  try {
    for (int a = dim; a < 3; ++a) lengths[static_cast<std::size_t>(a)] = lengths[0];
    g = make_grid(dim, n, lengths);
  } catch (const std::exception& e) {
    throw OutputError(path.string() + ": bad grid header (" + e.what() + ")");
  }
  if (count != g.size() || buf.size() != header + 16 * count) {
    throw OutputError(path.string() + ": payload size does not match the header");
  }
  WaveState s{ComplexField(g), t, hbar};
  for (std::size_t i = 0; i < count; ++i) {
    s.psi[i] = Complex(get_f64(p + header + 16 * i), get_f64(p + header + 16 * i + 8));
  }
  return s;
}

std::string timeseries_table(const Trajectory& traj) {
  std::ostringstream os;
  os << "# t strip mass energy\n";
  for (std::size_t k = 0; k < traj.strips.size(); ++k) {
    const StripDiagnostics& d = traj.strips[k];
    for (std::size_t i = 0; i < d.times.size(); ++i) {
      os << number(d.times[i]) << ' ' << k << ' ' << number(d.masses[i]) << ' '
         << (i < d.energies.size() ? number(d.energies[i]) : "nan") << '\n';
    }
  }
  return os.str();
}

std::string boundary_table(const Trajectory& traj) {
  std::ostringstream os;
  os << "# k t energy_minus energy_plus lambda_l2_minus lambda_l2_plus mass_minus branch_cut cut_proximity\n";
  for (const StripRecord& r : traj.records) {
    os << r.index << ' ' << number(r.psi_minus.t) << ' ' << number(r.energy_minus) << ' ' << number(r.energy_plus) << ' '
       << number(r.lambda_l2_minus) << ' ' << number(r.lambda_l2_plus) << ' ' << number(mass(r.psi_minus)) << ' '
       << number(r.branch_cut) << ' ' << number(r.cut_proximity) << '\n';
  }
  return os.str();
}

std::string ledger_table(const LedgerReport& ledger) {
  std::ostringstream os;
  os << "# k jump jump_bound lambda_l2_minus jump_ok energy_plus energy_next_minus cumulative_bound cumulative_ok\n";
  for (const LedgerRow& r : ledger.rows) {
    os << r.k << ' ' << number(r.jump) << ' ' << number(r.jump_bound) << ' ' << number(r.lambda_l2_minus) << ' '
       << (r.jump_ok ? 1 : 0) << ' ' << number(r.energy_plus) << ' ' << number(r.energy_next_minus) << ' '
       << number(r.cumulative_bound) << ' ' << (r.cumulative_ok ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace qhd::harness
