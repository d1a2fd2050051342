#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "qhd/harness/io.hpp"

using namespace qhd;
using namespace qhd::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "qhd_io_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

WaveState random_state(int dim, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const Grid g = make_grid(dim, n, {1.5, 2.5, 3.5});
  WaveState s{ComplexField(g), 0.37, 0.8};
  for (auto& z : s.psi) z = Complex(nd(rng), nd(rng)) * 1e3;
  s.psi[0] = Complex(-0.0, 5e-324);
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(FieldDump, RoundTripIsBitExact) {
  const fs::path dir = scratch("roundtrip");
  for (int dim : {1, 2, 3}) {
    const WaveState s = random_state(dim, dim == 3 ? 8 : 32, static_cast<std::uint64_t>(dim));
    const fs::path file = dir / ("psi" + std::to_string(dim) + ".bin");
    write_field_dump(file, s, false);
    const WaveState r = read_field_dump(file);
    EXPECT_TRUE(r.grid() == s.grid());
    EXPECT_EQ(std::memcmp(&r.t, &s.t, sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(&r.hbar, &s.hbar, sizeof(double)), 0);
    ASSERT_EQ(r.psi.size(), s.psi.size());
    EXPECT_EQ(std::memcmp(r.psi.data(), s.psi.data(), s.psi.size() * sizeof(Complex)), 0);
    EXPECT_EQ(fs::file_size(file), 72 + 16 * s.psi.size());
  }
}

TEST(FieldDump, HeaderLayoutIsLittleEndian) {
  const fs::path dir = scratch("layout");
  const WaveState s = random_state(2, 16, 4);
  write_field_dump(dir / "f.bin", s, false);
  const std::string b = slurp(dir / "f.bin");
  EXPECT_EQ(b.substr(0, 8), "QHDFIELD");
  EXPECT_EQ(static_cast<unsigned char>(b[8]), 1);   // version
  EXPECT_EQ(static_cast<unsigned char>(b[12]), 2);  // dim
  EXPECT_EQ(static_cast<unsigned char>(b[16]), 16); // points per axis
  EXPECT_EQ(static_cast<unsigned char>(b[64]), 0);  // count = 256 = 0x100
  EXPECT_EQ(static_cast<unsigned char>(b[65]), 1);
  double re = 0.0;
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | static_cast<unsigned char>(b[72 + 16 + i]);
  std::memcpy(&re, &bits, sizeof re);
  EXPECT_EQ(re, s.psi[1].real());
}

TEST(FieldDump, RejectsCorruptFiles) {
  const fs::path dir = scratch("corrupt");
  const WaveState s = random_state(1, 16, 5);
  write_field_dump(dir / "ok.bin", s, false);
  std::string b = slurp(dir / "ok.bin");
  {
    std::ofstream(dir / "short.bin", std::ios::binary) << b.substr(0, b.size() - 8);
    std::string bad = b;
    bad[0] = 'X';
    std::ofstream(dir / "magic.bin", std::ios::binary) << bad;
  }
  EXPECT_THROW(read_field_dump(dir / "short.bin"), OutputError);
  EXPECT_THROW(read_field_dump(dir / "magic.bin"), OutputError);
  EXPECT_THROW(read_field_dump(dir / "missing.bin"), OutputError);
}

TEST(Output, RefusesToOverwrite) {
  const fs::path dir = scratch("overwrite");
  write_text_file(dir / "a.txt", "one", false);
  EXPECT_THROW(write_text_file(dir / "a.txt", "two", false), OutputError);
  EXPECT_EQ(slurp(dir / "a.txt"), "one");
  write_text_file(dir / "a.txt", "two", true);
  EXPECT_EQ(slurp(dir / "a.txt"), "two");
  EXPECT_THROW(prepare_output_dir(dir, false), OutputError);
  EXPECT_NO_THROW(prepare_output_dir(dir, true));
  EXPECT_NO_THROW(prepare_output_dir(dir / "fresh" / "nested", false));
  EXPECT_TRUE(fs::is_directory(dir / "fresh" / "nested"));
  EXPECT_THROW(prepare_output_dir(dir / "a.txt", true), OutputError);
}

TEST(Output, JsonRoundTrip) {
  const fs::path dir = scratch("json");
  const nlohmann::json j = {{"a", 1.0 / 3.0}, {"b", {1, 2, 3}}};
  write_json_file(dir / "m.json", j, false);
  EXPECT_EQ(read_json_file(dir / "m.json"), j);
}

TEST(Output, EmptyTrajectoryGivesHeaderOnlyTables) {
  const Trajectory empty;
  for (const std::string& t : {timeseries_table(empty), boundary_table(empty), ledger_table(LedgerReport{})}) {
    EXPECT_EQ(t.front(), '#');
    EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 1);
  }
}
