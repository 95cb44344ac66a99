#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "slris/signal.hpp"

namespace slris {

/// How a dataset was generated; carried in memory for reporting. Not part
/// of the .risl file, which stores only windows and labels.
struct GenMeta {
    std::uint64_t seed = 0;
    double snr_lo_db = 0.0;
    double snr_hi_db = 20.0;
    UserSignature desired = desired_signature();
    UserSignature interferer = interferer_signature();
};

struct LabeledDataset {
    std::size_t window_len = 0;
    std::vector<IqWindow> windows;
    GenMeta meta{};

    std::size_t size() const { return windows.size(); }
    std::array<std::size_t, 4> class_counts() const;

    /// Content equality: window length, samples and labels.
    bool same_content(const LabeledDataset& other) const;
};

struct DatasetSplit {
    LabeledDataset train;
    LabeledDataset test;
    double ratio = 0.8;
};

/// Build a balanced dataset: exactly `n_per_class` windows per occupancy
/// class, each at an SNR drawn uniformly from `snr_range_db`. Every window
/// uses a child stream derived from (seed, class, index), so the result is a
/// pure function of the arguments. Throws on invalid window length or
/// n_per_class == 0.
LabeledDataset build_dataset(std::size_t n_per_class, std::size_t window_len,
                             std::pair<double, double> snr_range_db,
                             const UserSignature& sig_d, const UserSignature& sig_i,
                             std::uint64_t seed);

/// Stratified split: per class, round(ratio * count) windows go to train,
/// with largest-remainder rounding so |train| == round(ratio * total).
/// Membership is a deterministic function of `seed`. Throws if the dataset
/// has fewer than 4 windows or ratio is outside (0, 1).
DatasetSplit split_dataset(const LabeledDataset& dataset, double ratio, std::uint64_t seed);

/// .risl: "RISL" magic, u16 version, u32 window length, u32 window count,
/// then per window a label byte and 2*L little-endian f32 (I/Q interleaved).
/// Samples are quantized to f32 on save; loading yields exactly the stored
/// values, so save -> load -> save is byte-stable.
void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& path);
LabeledDataset load_dataset(const std::filesystem::path& path);

inline constexpr std::uint16_t kDatasetFormatVersion = 1;

}  // namespace slris
