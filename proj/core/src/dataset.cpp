#include "slris/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "slris/io.hpp"

namespace slris {

std::array<std::size_t, 4> LabeledDataset::class_counts() const {
    std::array<std::size_t, 4> counts{};
    for (const IqWindow& w : windows) {
        if (!w.label) throw std::logic_error("dataset window without label");
        counts[static_cast<std::size_t>(*w.label)]++;
    }
    return counts;
}

bool LabeledDataset::same_content(const LabeledDataset& other) const {
    return window_len == other.window_len && windows == other.windows;
}

LabeledDataset build_dataset(std::size_t n_per_class, std::size_t window_len,
                             std::pair<double, double> snr_range_db,
                             const UserSignature& sig_d, const UserSignature& sig_i,
                             std::uint64_t seed) {
    if (n_per_class == 0)
        throw std::invalid_argument("build_dataset: n_per_class must be >= 1");
    if (!valid_window_length(window_len))
        throw std::invalid_argument("build_dataset: unsupported window length");
    if (!(snr_range_db.first <= snr_range_db.second))
        throw std::invalid_argument("build_dataset: invalid SNR range");

    LabeledDataset ds;
    ds.window_len = window_len;
    ds.meta = GenMeta{seed, snr_range_db.first, snr_range_db.second, sig_d, sig_i};
    ds.windows.reserve(4 * n_per_class);

    const Rng root(seed);
    for (std::size_t c = 0; c < kAllSignalClasses.size(); ++c) {
        for (std::size_t i = 0; i < n_per_class; ++i) {
            Rng wrng = root.split(c * n_per_class + i);
            const double snr_db = wrng.uniform(snr_range_db.first, snr_range_db.second);
            ds.windows.push_back(
                make_window(kAllSignalClasses[c], window_len, snr_db, sig_d, sig_i, wrng));
        }
    }
    return ds;
}

DatasetSplit split_dataset(const LabeledDataset& dataset, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("split_dataset: ratio must be in (0, 1)");
    if (dataset.size() < 4)
        throw std::invalid_argument("split_dataset: dataset smaller than 4 windows");

    // Per-class index pools, shuffled deterministically.
    std::array<std::vector<std::size_t>, 4> pools;
    for (std::size_t i = 0; i < dataset.windows.size(); ++i)
        pools[static_cast<std::size_t>(*dataset.windows[i].label)].push_back(i);

    Rng rng(seed);
    for (auto& pool : pools) rng.shuffle(pool);

    // Largest-remainder allocation: per-class floor(ratio * n), then hand the
    // remaining train slots to the classes with the largest fractional parts
    // until |train| == round(ratio * total).
    const std::size_t total = dataset.size();
    const auto target =
        static_cast<std::size_t>(std::llround(ratio * static_cast<double>(total)));
    std::array<std::size_t, 4> take{};
    std::array<double, 4> remainder{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < 4; ++c) {
        const double quota = ratio * static_cast<double>(pools[c].size());
        take[c] = static_cast<std::size_t>(quota);
        remainder[c] = quota - static_cast<double>(take[c]);
        assigned += take[c];
    }
    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t c : order) {
        if (assigned >= target) break;
        if (take[c] < pools[c].size()) {
            ++take[c];
            ++assigned;
        }
    }

    DatasetSplit split;
    split.ratio = ratio;
    split.train.window_len = split.test.window_len = dataset.window_len;
    split.train.meta = split.test.meta = dataset.meta;
    for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t i = 0; i < pools[c].size(); ++i) {
            auto& dst = (i < take[c]) ? split.train : split.test;
            dst.windows.push_back(dataset.windows[pools[c][i]]);
        }
    }
    return split;
}

void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& path) {
    std::ofstream os = io::open_output(path);
    os.write("RISL", 4);
    io::write_u16(os, kDatasetFormatVersion);
    io::write_u32(os, static_cast<std::uint32_t>(dataset.window_len));
    io::write_u32(os, static_cast<std::uint32_t>(dataset.windows.size()));
    for (const IqWindow& w : dataset.windows) {
        if (!w.label) throw std::invalid_argument("save_dataset: unlabeled window");
        if (w.samples.size() != dataset.window_len)
            throw std::invalid_argument("save_dataset: window length mismatch");
        io::write_u8(os, static_cast<std::uint8_t>(*w.label));
        for (const Sample& s : w.samples) {
            io::write_f32(os, static_cast<float>(s.real()));
            io::write_f32(os, static_cast<float>(s.imag()));
        }
    }
    if (!os) throw std::runtime_error("save_dataset: write failed: " + path.string());
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream is = io::open_input(path);
    io::expect_magic(is, "RISL", "dataset");
    const std::uint16_t version = io::read_u16(is);
    if (version != kDatasetFormatVersion)
        throw FormatError(FormatError::Kind::BadVersion,
                          "dataset: unsupported format version " + std::to_string(version));
    const std::uint32_t window_len = io::read_u32(is);
    const std::uint32_t count = io::read_u32(is);
    if (!valid_window_length(window_len))
        throw FormatError(FormatError::Kind::Corrupt,
                          "dataset: invalid window length " + std::to_string(window_len));

    LabeledDataset ds;
    ds.window_len = window_len;
    ds.windows.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint8_t label = io::read_u8(is);
        if (label > 3)
            throw FormatError(FormatError::Kind::Corrupt,
                              "dataset: invalid label byte " + std::to_string(label));
        IqWindow w;
        w.label = static_cast<SignalClass>(label);
        w.samples.reserve(window_len);
        for (std::uint32_t t = 0; t < window_len; ++t) {
            const double re = io::read_f32(is);
            const double im = io::read_f32(is);
            w.samples.emplace_back(re, im);
        }
        ds.windows.push_back(std::move(w));
    }
    // Trailing garbage means the header lied about the count.
    if (is.peek() != std::ifstream::traits_type::eof())
        throw FormatError(FormatError::Kind::Corrupt, "dataset: trailing bytes after payload");
    return ds;
}

}  // namespace slris
