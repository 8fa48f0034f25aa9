#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lgelu/rng.hpp"

namespace lgelu {

struct Dataset {
    int feature_dim = 0;
    int num_classes = 0;
    std::vector<double> features;  // row-major [size x feature_dim]
    std::vector<int> labels;

    int size() const { return static_cast<int>(labels.size()); }
    const double* sample(int i) const { return &features[static_cast<std::size_t>(i) * feature_dim]; }
};

enum class DatasetKind { SyntheticMoons, SyntheticBlobs, IdxImages };

const char* to_string(DatasetKind kind);

struct DatasetSpec {
    DatasetKind kind = DatasetKind::SyntheticMoons;
    int size = 600;                  // synthetic generators
    int classes = 2;                 // blobs
    double noise = 0.15;             // moons noise / blob spread (std dev)
    std::string images_path;         // idx
    std::string labels_path;         // idx
    double val_fraction = 1.0 / 3.0; // in (0, 1)
};

struct SplitDataset {
    Dataset train;
    Dataset val;
};

// Two interleaved half-circles with Gaussian noise; labels 0/1.
Dataset make_moons(int n, double noise, SplitMix64& rng);

// Gaussian clusters around centers evenly placed on a circle of radius 3.
Dataset make_blobs(int n, int classes, double spread, SplitMix64& rng);

// IDX image/label file pair (big-endian magic 0x00000803 / 0x00000801).
// Malformed headers and truncated payloads raise IoError naming the expected
// and actual byte counts.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// Materialize a dataset and split it deterministically: generation, the
// permutation, and the split depend only on (spec, seed). Synthetic features
// are standardized to zero mean / unit variance; images are scaled to [0, 1].
SplitDataset load_dataset(const DatasetSpec& spec, std::uint64_t seed);

}  // namespace lgelu
