#pragma once

// DRIVE directory layout:
//
//   <root>/<split>/images/NN_<split>.tif
//   <root>/<split>/mask/NN_<split>_mask.gif
//   <root>/<split>/1st_manual/NN_manual1.gif
//   <root>/<split>/2nd_manual/NN_manual2.gif   (test split only, optional)
//
// with NN = 01..20 for "test" and 21..40 for "training". `root` may also point
// directly at a split directory. Files are matched by stem, so any readable
// raster extension is accepted.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vesselseg/config.hpp"

namespace vesselseg {

enum class Split { Training, Test };

std::string_view to_string(Split s);
Split parse_split(std::string_view s);

inline constexpr int kDriveImagesPerSplit = 20;

struct DriveRecord {
  std::string id;  ///< file stem of the image, e.g. "01_test"
  std::filesystem::path image;
  std::filesystem::path mask;
  std::filesystem::path first_manual;
  std::optional<std::filesystem::path> second_manual;

  /// Ground-truth path for the requested observer; throws DatasetError if absent.
  [[nodiscard]] const std::filesystem::path& truth(Observer observer) const;
};

struct DriveDataset {
  std::filesystem::path root;
  Split split = Split::Test;
  std::vector<DriveRecord> records;  ///< sorted by id
};

/// Resolves and checks every record. With `verify_decode`, each raster is
/// decoded once and its dimensions checked against the image. Throws
/// DatasetError naming the offending path or id.
DriveDataset load_drive_dataset(const std::filesystem::path& root, Split split, bool verify_decode = true);

}  // namespace vesselseg
