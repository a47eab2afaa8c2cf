#include "vesselseg/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "vesselseg/io.hpp"

namespace vesselseg {

namespace fs = std::filesystem;

std::string_view to_string(Split s) { return s == Split::Test ? "test" : "training"; }

Split parse_split(std::string_view s) {
  if (s == "test") return Split::Test;
  if (s == "training") return Split::Training;
  throw InvalidArgument("unknown split '" + std::string(s) + "'");
}

const fs::path& DriveRecord::truth(Observer observer) const {
  if (observer == Observer::First) return first_manual;
  if (!second_manual) throw DatasetError(id + ": no second-observer segmentation");
  return *second_manual;
}

namespace {

std::string two_digits(int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", n);
  return buf;
}

// stem -> path for every regular file in `dir`; empty if `dir` is absent.
std::map<std::string, fs::path> index_by_stem(const fs::path& dir) {
  std::map<std::string, fs::path> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) out.emplace(entry.path().stem().string(), entry.path());
  }
  return out;
}

fs::path split_dir(const fs::path& root, Split split) {
  const fs::path nested = root / std::string(to_string(split));
  std::error_code ec;
  if (fs::is_directory(nested / "images", ec)) return nested;
  return root;
}

template <typename R>
void check_decodes(const fs::path& path, int width, int height, R (*reader)(const fs::path&)) {
  R raster;
  try {
    raster = reader(path);
  } catch (const Error& e) {
    throw DatasetError(std::string("undecodable raster ") + e.what());
  }
  if (raster.width() != width || raster.height() != height) {
    throw DatasetError(path.string() + ": size " + std::to_string(raster.width()) + "x" +
                       std::to_string(raster.height()) + " does not match image " + std::to_string(width) +
                       "x" + std::to_string(height));
  }
}

}  // namespace

DriveDataset load_drive_dataset(const fs::path& root, Split split, bool verify_decode) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw DatasetError("dataset root not found: " + root.string());
  const fs::path dir = split_dir(root, split);
  const auto images = index_by_stem(dir / "images");
  if (images.empty()) throw DatasetError("no images found under " + (dir / "images").string());
  const auto masks = index_by_stem(dir / "mask");
  const auto first = index_by_stem(dir / "1st_manual");
  const auto second = index_by_stem(dir / "2nd_manual");

  const int first_number = split == Split::Test ? 1 : 21;
  const std::string suffix = "_" + std::string(to_string(split));

  std::vector<std::string> missing;
  for (int n = first_number; n < first_number + kDriveImagesPerSplit; ++n) {
    if (!images.contains(two_digits(n) + suffix)) missing.push_back(two_digits(n) + suffix);
  }
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    throw DatasetError("expected " + std::to_string(kDriveImagesPerSplit) + " images in " +
                       (dir / "images").string() + ", found " +
                       std::to_string(kDriveImagesPerSplit - static_cast<int>(missing.size())) +
                       "; missing " + names);
  }

  DriveDataset ds{root, split, {}};
  for (int n = first_number; n < first_number + kDriveImagesPerSplit; ++n) {
    const std::string nn = two_digits(n);
    DriveRecord rec;
    rec.id = nn + suffix;
    rec.image = images.at(rec.id);

    auto require = [&](const std::map<std::string, fs::path>& files, const std::string& stem,
                       const fs::path& sub) {
      const auto it = files.find(stem);
      if (it == files.end()) throw DatasetError(rec.id + ": missing " + (dir / sub / stem).string() + ".*");
      return it->second;
    };
    rec.mask = require(masks, rec.id + "_mask", "mask");
    rec.first_manual = require(first, nn + "_manual1", "1st_manual");
    if (const auto it = second.find(nn + "_manual2"); it != second.end()) rec.second_manual = it->second;

    if (verify_decode) {
      io::Rgb8 img;
      try {
        img = io::read_raster(rec.image);
      } catch (const Error& e) {
        throw DatasetError(std::string("undecodable raster ") + e.what());
      }
      check_decodes<FovMask>(rec.mask, img.width, img.height, &io::read_mask);
      check_decodes<BinaryMap>(rec.first_manual, img.width, img.height, &io::read_binary);
      if (rec.second_manual) check_decodes<BinaryMap>(*rec.second_manual, img.width, img.height, &io::read_binary);
    }
    ds.records.push_back(std::move(rec));
  }
  std::sort(ds.records.begin(), ds.records.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return ds;
}

}  // namespace vesselseg
