#include <gtest/gtest.h>

#include <fstream>

#include "phantom.hpp"
#include "vesselseg/config.hpp"

using namespace vesselseg;

TEST(Config, DefaultValues) {
  const PipelineConfig cfg;
  const std::vector<ScaleSpec> want{{9, 1.0}, {13, 1.5}, {17, 2.0}};
  EXPECT_EQ(cfg.scales, want);
  EXPECT_EQ(cfg.t, 3.0);
  EXPECT_EQ(cfg.n_orientations, 12);
  EXPECT_EQ(cfg.se_diameter, 11);
  EXPECT_EQ(cfg.observer, Observer::First);
  EXPECT_NO_THROW(cfg.validate());
  const auto params = cfg.scale_params();
  EXPECT_EQ(params, default_scales());
}

TEST(Config, SerializeRoundTrip) {
  PipelineConfig cfg;
  cfg.scales = {{7, 0.8}, {21, 2.7}};
  cfg.c = 1.9000000000000001;
  cfg.w = 25;
  cfg.clahe = {4, 6, 0.02, 128};
  cfg.pad_width = 11;
  cfg.orientation_pairing = OrientationPairing::MaxAbsD;
  cfg.normalization = EdgeNormalization::Signed;
  cfg.observer = Observer::Second;
  cfg.convolution = ConvolutionStrategy::Fft;
  EXPECT_EQ(parse_config(serialize_config(cfg)), cfg);
  EXPECT_EQ(parse_config(serialize_config(PipelineConfig{})), PipelineConfig{});
}

TEST(Config, FileRoundTrip) {
  const auto dir = vesselseg::testing::make_temp_dir("vesselseg-config");
  PipelineConfig cfg;
  cfg.c = 2.65;
  save_config(dir / "a.cfg", cfg);
  EXPECT_EQ(load_config(dir / "a.cfg"), cfg);
  std::filesystem::remove_all(dir);
}

TEST(Config, MissingKeysKeepDefaults) {
  const auto cfg = parse_config("# only c\nc = 3.1\n\n");
  PipelineConfig want;
  want.c = 3.1;
  EXPECT_EQ(cfg, want);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config("colour = red"), InvalidArgument);
  EXPECT_THROW(parse_config("c = 2\nc = 3"), InvalidArgument);
  EXPECT_THROW(parse_config("c 2.3"), InvalidArgument);
  EXPECT_THROW(parse_config("c = abc"), InvalidArgument);
  EXPECT_THROW(parse_config("schema_version = 2"), InvalidArgument);
  EXPECT_THROW(parse_config("scales = 9-1"), InvalidArgument);
  EXPECT_THROW(parse_config("w = 30"), InvalidArgument);
  EXPECT_THROW(parse_config("se_diameter = 4"), InvalidArgument);
  EXPECT_THROW(parse_config("scales = 8:1"), InvalidArgument);
  EXPECT_THROW(parse_config("observer = third"), InvalidArgument);
  EXPECT_THROW(parse_config("clahe_tiles = 8"), InvalidArgument);
}

TEST(Config, ObserverAliases) {
  EXPECT_EQ(parse_observer("1"), Observer::First);
  EXPECT_EQ(parse_observer("2"), Observer::Second);
  EXPECT_EQ(parse_observer("second"), Observer::Second);
}

TEST(Config, FormatDoubleIsShortestRoundTrip) {
  EXPECT_EQ(format_double(2.3), "2.3");
  EXPECT_EQ(format_double(1.0), "1");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Config, LoadMissingFileThrowsIoError) {
  EXPECT_THROW(load_config("/nonexistent/vesselseg.cfg"), IoError);
}
