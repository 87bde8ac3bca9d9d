#include "test_util.hpp"

namespace scd {
namespace {

TEST(IqFile, RoundTripIsExactForFloat) {
  const auto dir = test::scratch_dir();
  const auto x = test::random_series<float>(1000, 1);
  write_iq<float>(dir / "x.iq", x);
  EXPECT_EQ(std::filesystem::file_size(dir / "x.iq"), 8000u);
  const auto y = read_iq(dir / "x.iq");
  ASSERT_EQ(y.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(std::complex<float>(y[i]), x[i]);
}

TEST(IqFile, LittleEndianInterleaved) {
  const auto dir = test::scratch_dir();
  const ComplexSeries<float> x = {{1.0f, -2.0f}};
  write_iq<float>(dir / "one.iq", x);
  const auto bytes = read_file_bytes(dir / "one.iq");
  ASSERT_EQ(bytes.size(), 8u);
  // 1.0f = 0x3f800000, -2.0f = 0xc0000000, least significant byte first.
  const unsigned char want[8] = {0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x00, 0xc0};
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(static_cast<unsigned char>(bytes[i]), want[i]) << i;
}

TEST(IqFile, Errors) {
  const auto dir = test::scratch_dir();
  EXPECT_THROW(read_iq(dir / "missing.iq"), IoError);
  write_file_bytes(dir / "odd.iq", std::string(12, '\0'));
  EXPECT_THROW(read_iq(dir / "odd.iq"), IoError);
  const ComplexSeries<float> bad = {{std::numeric_limits<float>::quiet_NaN(), 0.0f}};
  write_iq<float>(dir / "nan.iq", bad);
  EXPECT_THROW(read_iq(dir / "nan.iq"), IoError);
}

TEST(IqCsv, SeparatorsAndHeader) {
  const auto dir = test::scratch_dir();
  write_file_bytes(dir / "a.csv", "i,q\n1,2\n-0.5;3e-1\n4\t5\n\n");
  const auto x = read_iq_csv(dir / "a.csv");
  EXPECT_EQ(x, (ComplexSeries<double>{{1, 2}, {-0.5, 0.3}, {4, 5}}));
  write_file_bytes(dir / "b.csv", "1,2\nfoo,3\n");
  EXPECT_THROW(read_iq_csv(dir / "b.csv"), IoError);
  write_file_bytes(dir / "c.csv", "1,2\n3\n");
  EXPECT_THROW(read_iq_csv(dir / "c.csv"), IoError);
}

Grid<float> sample_grid() {
  Grid<float> g;
  g.rows = 5;
  g.cols = 3;
  g.values.resize(15);
  for (std::size_t i = 0; i < 15; ++i) g.values[i] = static_cast<float>(i) * 0.25f;
  return g;
}

TEST(Scd1, HeaderLayout) {
  const auto bytes = encode_scd1(sample_grid());
  ASSERT_EQ(bytes.size(), 52u + 15u * 4u);
  EXPECT_EQ(bytes.substr(0, 4), "SCD1");
  const auto grid = decode_scd1(bytes);
  const auto h = header_of(grid);
  EXPECT_EQ(h.version, 1u);
  EXPECT_EQ(h.rows, 5u);
  EXPECT_EQ(h.cols, 3u);
  EXPECT_EQ(h.alpha_min, -1.0);
  EXPECT_EQ(h.f_max, 0.5);
  EXPECT_EQ(h.precision, 0u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 5u);  // rows, little-endian
}

TEST(Scd1, RoundTripBytes) {
  const auto dir = test::scratch_dir();
  write_scd1(dir / "a.scd1", sample_grid());
  const auto read = read_scd1(dir / "a.scd1");
  write_scd1(dir / "b.scd1", read);
  EXPECT_EQ(read_file_bytes(dir / "a.scd1"), read_file_bytes(dir / "b.scd1"));
  EXPECT_EQ(std::get<Grid<float>>(read), sample_grid());

  Grid<double> d;
  d.rows = 2;
  d.cols = 2;
  d.values = {1e-300, 2.0, 3.5, 1e300};
  write_scd1(dir / "d.scd1", d);
  const auto rd = read_scd1(dir / "d.scd1");
  EXPECT_EQ(header_of(rd).precision, 1u);
  EXPECT_EQ(std::get<Grid<double>>(rd), d);
}

TEST(Scd1, EstimateRoundTrip) {
  const auto dir = test::scratch_dir();
  const auto cfg = FamConfig::make(256, 32);
  const auto est = fam_full<float>(test::random_series<float>(256, 3), cfg);
  write_scd1(dir / "e.scd1", fam_to_grid(est, 65, 129));
  const auto first = read_file_bytes(dir / "e.scd1");
  write_scd1(dir / "f.scd1", read_scd1(dir / "e.scd1"));
  EXPECT_EQ(first, read_file_bytes(dir / "f.scd1"));
}

TEST(Scd1, CorruptFilesRejected) {
  auto bytes = encode_scd1(sample_grid());
  EXPECT_THROW(decode_scd1(bytes.substr(0, 40)), IoError);
  EXPECT_THROW(decode_scd1(bytes.substr(0, bytes.size() - 1)), IoError);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_scd1(bad_magic), IoError);
  auto bad_version = bytes;
  bad_version[4] = 2;
  EXPECT_THROW(decode_scd1(bad_version), IoError);
  auto bad_precision = bytes;
  bad_precision[48] = 7;
  EXPECT_THROW(decode_scd1(bad_precision), IoError);
  Grid<float> short_grid = sample_grid();
  short_grid.values.pop_back();
  EXPECT_THROW(encode_scd1(short_grid), DimensionError);
}

TEST(Pgm, HeaderAndOrientation) {
  const auto dir = test::scratch_dir();
  Grid<float> g;
  g.rows = 2;
  g.cols = 3;
  g.values = {0, 0, 0, 0, 4, 0};  // peak at the larger alpha row
  write_pgm(dir / "a.pgm", g, false);
  const auto bytes = read_file_bytes(dir / "a.pgm");
  const std::string header = "P5\n3 2\n255\n";
  ASSERT_EQ(bytes.substr(0, header.size()), header);
  ASSERT_EQ(bytes.size(), header.size() + 6);
  EXPECT_EQ(static_cast<unsigned char>(bytes[header.size() + 1]), 255u);  // top row = max alpha
  EXPECT_EQ(static_cast<unsigned char>(bytes[header.size() + 4]), 0u);

  g.values = {4e-3f, 0, 0, 0, 4, 0};
  write_pgm(dir / "b.pgm", g, true);
  const auto logb = read_file_bytes(dir / "b.pgm");
  // 30 dB below peak lands halfway up the 60 dB range.
  EXPECT_EQ(static_cast<unsigned char>(logb[header.size() + 3]), 128u);
  EXPECT_EQ(static_cast<unsigned char>(logb[header.size() + 5]), 0u);
}

TEST(ProfileCsv, Format) {
  const auto dir = test::scratch_dir();
  oracle::AlphaProfile p{{-1.0, 0.0, 1.0}, {0.5, 2.0, 0.25}};
  write_profile_csv(dir / "p.csv", p);
  EXPECT_EQ(read_file_bytes(dir / "p.csv"), "alpha,value\n-1,0.5\n0,2\n1,0.25\n");
}

TEST(ContentHash, Fnv1a) {
  EXPECT_EQ(content_hash(std::span<const float>()), 1469598103934665603ULL);
  const std::vector<float> a = {1.0f, 2.0f};
  auto b = a;
  EXPECT_EQ(content_hash(std::span<const float>(a)), content_hash(std::span<const float>(b)));
  b[1] = std::nextafter(2.0f, 3.0f);
  EXPECT_NE(content_hash(std::span<const float>(a)), content_hash(std::span<const float>(b)));
}

TEST(Parallel, CoversRangeOnceAndRethrows) {
  for (unsigned threads : {1u, 3u, 8u, 64u}) {
    std::vector<int> hits(37, 0);
    parallel_for(hits.size(), threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) ++hits[i];
    });
    EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; })) << threads;
  }
  EXPECT_THROW(parallel_for(10, 4, [](std::size_t b, std::size_t) {
                 if (b > 0) throw DimensionError("boom");
               }),
               DimensionError);
  parallel_for(0, 4, [](std::size_t, std::size_t) { FAIL() << "called on an empty range"; });
}

}  // namespace
}  // namespace scd
