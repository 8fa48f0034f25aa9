#include "lgelu/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "lgelu/errors.hpp"

namespace lgelu {

const char* to_string(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::SyntheticMoons:
            return "moons";
        case DatasetKind::SyntheticBlobs:
            return "blobs";
        case DatasetKind::IdxImages:
            return "idx";
    }
    return "unknown";
}

namespace {

constexpr double kPi = 3.14159265358979323846;

void standardize(Dataset& data) {
    const int d = data.feature_dim;
    const int n = data.size();
    for (int j = 0; j < d; ++j) {
        double mean = 0.0;
        for (int i = 0; i < n; ++i) {
            mean += data.features[static_cast<std::size_t>(i) * d + j];
        }
        mean /= n;
        double var = 0.0;
        for (int i = 0; i < n; ++i) {
            const double centered = data.features[static_cast<std::size_t>(i) * d + j] - mean;
            var += centered * centered;
        }
        var /= n;
        const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
        for (int i = 0; i < n; ++i) {
            double& x = data.features[static_cast<std::size_t>(i) * d + j];
            x = (x - mean) * scale;
        }
    }
}

std::uint32_t read_be_u32(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
        throw IoError("IDX header truncated: " + path);
    }
    return (static_cast<std::uint32_t>(b[0]) << 24) | (static_cast<std::uint32_t>(b[1]) << 16) |
           (static_cast<std::uint32_t>(b[2]) << 8) | static_cast<std::uint32_t>(b[3]);
}

std::vector<unsigned char> read_payload(std::istream& in, std::size_t expected, const std::string& path) {
    std::vector<unsigned char> bytes(expected);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(expected));
    const std::size_t got = static_cast<std::size_t>(in.gcount());
    if (got != expected) {
        throw IoError("IDX payload truncated: " + path + " (expected " + std::to_string(expected) +
                      " bytes, got " + std::to_string(got) + ")");
    }
    return bytes;
}

}  // namespace

Dataset make_moons(int n, double noise, SplitMix64& rng) {
    if (n < 2) {
        throw std::invalid_argument("make_moons: need at least 2 points");
    }
    Dataset data;
    data.feature_dim = 2;
    data.num_classes = 2;
    data.features.reserve(static_cast<std::size_t>(n) * 2);
    data.labels.reserve(static_cast<std::size_t>(n));
    const int n0 = n / 2;
    for (int i = 0; i < n; ++i) {
        const int label = i < n0 ? 0 : 1;
        const double theta = rng.uniform(0.0, kPi);
        double x, y;
        if (label == 0) {
            x = std::cos(theta);
            y = std::sin(theta);
        } else {
            x = 1.0 - std::cos(theta);
            y = 0.5 - std::sin(theta);
        }
        data.features.push_back(x + noise * rng.normal());
        data.features.push_back(y + noise * rng.normal());
        data.labels.push_back(label);
    }
    return data;
}

Dataset make_blobs(int n, int classes, double spread, SplitMix64& rng) {
    if (n < classes || classes < 2) {
        throw std::invalid_argument("make_blobs: need >= 2 classes and n >= classes");
    }
    Dataset data;
    data.feature_dim = 2;
    data.num_classes = classes;
    data.features.reserve(static_cast<std::size_t>(n) * 2);
    data.labels.reserve(static_cast<std::size_t>(n));
    constexpr double kRadius = 3.0;
    for (int i = 0; i < n; ++i) {
        const int label = i % classes;
        const double angle = 2.0 * kPi * label / classes;
        data.features.push_back(kRadius * std::cos(angle) + spread * rng.normal());
        data.features.push_back(kRadius * std::sin(angle) + spread * rng.normal());
        data.labels.push_back(label);
    }
    return data;
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream images(images_path, std::ios::binary);
    if (!images) {
        throw IoError("cannot open IDX image file: " + images_path);
    }
    const std::uint32_t image_magic = read_be_u32(images, images_path);
    if (image_magic != 0x00000803u) {
        throw IoError("bad IDX image magic in " + images_path + " (expected 0x00000803)");
    }
    const std::uint32_t count = read_be_u32(images, images_path);
    const std::uint32_t rows = read_be_u32(images, images_path);
    const std::uint32_t cols = read_be_u32(images, images_path);
    if (count == 0) {
        throw IoError("empty IDX image file: " + images_path);
    }
    const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
    const auto image_bytes = read_payload(images, static_cast<std::size_t>(count) * pixels, images_path);

    std::ifstream labels(labels_path, std::ios::binary);
    if (!labels) {
        throw IoError("cannot open IDX label file: " + labels_path);
    }
    const std::uint32_t label_magic = read_be_u32(labels, labels_path);
    if (label_magic != 0x00000801u) {
        throw IoError("bad IDX label magic in " + labels_path + " (expected 0x00000801)");
    }
    const std::uint32_t label_count = read_be_u32(labels, labels_path);
    if (label_count != count) {
        throw IoError("IDX image/label count mismatch: " + std::to_string(count) + " images vs " +
                      std::to_string(label_count) + " labels");
    }
    const auto label_bytes = read_payload(labels, label_count, labels_path);

    Dataset data;
    data.feature_dim = static_cast<int>(pixels);
    data.features.resize(image_bytes.size());
    for (std::size_t i = 0; i < image_bytes.size(); ++i) {
        data.features[i] = static_cast<double>(image_bytes[i]) / 255.0;
    }
    data.labels.resize(label_count);
    int max_label = 0;
    for (std::size_t i = 0; i < label_bytes.size(); ++i) {
        data.labels[i] = static_cast<int>(label_bytes[i]);
        max_label = std::max(max_label, data.labels[i]);
    }
    data.num_classes = max_label + 1;
    return data;
}

SplitDataset load_dataset(const DatasetSpec& spec, std::uint64_t seed) {
    if (!(spec.val_fraction > 0.0 && spec.val_fraction < 1.0)) {
        throw ConfigError("dataset.val_fraction must lie in (0, 1)");
    }
    SplitMix64 rng = stream_rng(seed, Stream::Data);
    Dataset full;
    switch (spec.kind) {
        case DatasetKind::SyntheticMoons:
            full = make_moons(spec.size, spec.noise, rng);
            standardize(full);
            break;
        case DatasetKind::SyntheticBlobs:
            full = make_blobs(spec.size, spec.classes, spec.noise, rng);
            standardize(full);
            break;
        case DatasetKind::IdxImages:
            full = load_idx(spec.images_path, spec.labels_path);
            break;
    }
    if (full.size() < 2) {
        throw ConfigError("dataset too small to split");
    }

    std::vector<int> order(static_cast<std::size_t>(full.size()));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    const int val_count = std::clamp(static_cast<int>(std::lround(spec.val_fraction * full.size())), 1,
                                     full.size() - 1);
    const int train_count = full.size() - val_count;

    auto take = [&](int begin, int count) {
        Dataset part;
        part.feature_dim = full.feature_dim;
        part.num_classes = full.num_classes;
        part.features.reserve(static_cast<std::size_t>(count) * full.feature_dim);
        part.labels.reserve(static_cast<std::size_t>(count));
        for (int i = begin; i < begin + count; ++i) {
            const int src = order[static_cast<std::size_t>(i)];
            const double* row = full.sample(src);
            part.features.insert(part.features.end(), row, row + full.feature_dim);
            part.labels.push_back(full.labels[static_cast<std::size_t>(src)]);
        }
        return part;
    };

    SplitDataset split;
    split.train = take(0, train_count);
    split.val = take(train_count, val_count);
    return split;
}

}  // namespace lgelu
