#include "lgelu/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "lgelu/errors.hpp"

namespace lgelu {

namespace {

constexpr char kMagic[4] = {'L', 'G', 'C', 'K'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) {
        b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double v) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) {
        b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
        throw IoError("checkpoint truncated: " + path);
    }
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    }
    return v;
}

double get_f64(std::istream& in, const std::string& path) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) {
        throw IoError("checkpoint truncated: " + path);
    }
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

}  // namespace

void save_checkpoint(const NetworkState& net, const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open checkpoint for writing: " + path);
    }
    out.write(kMagic, 4);
    put_u32(out, kFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(net.activation()));
    put_u32(out, static_cast<std::uint32_t>(net.num_layers()));
    for (int l = 0; l < net.num_layers(); ++l) {
        const LayerState& layer = net.layer(l);
        put_u32(out, static_cast<std::uint32_t>(layer.weights.rows));
        put_u32(out, static_cast<std::uint32_t>(layer.weights.cols));
        for (double w : layer.weights.data) {
            put_f64(out, w);
        }
        for (double b : layer.bias) {
            put_f64(out, b);
        }
        const HardnessParam& h = layer.hardness;
        put_f64(out, h.s());
        put_f64(out, h.t());
        put_u32(out, (h.frozen() ? 1u : 0u) | (h.pinned() ? 2u : 0u));
        put_f64(out, h.pinned() ? h.lambda() : 0.0);
    }
    if (!out) {
        throw IoError("failed writing checkpoint: " + path);
    }
}

NetworkState load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open checkpoint: " + path);
    }
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw IoError("bad checkpoint magic: " + path);
    }
    const std::uint32_t version = get_u32(in, path);
    if (version != kFormatVersion) {
        throw IoError("unsupported checkpoint version " + std::to_string(version) + ": " + path);
    }
    const std::uint32_t kind_raw = get_u32(in, path);
    if (kind_raw > 2) {
        throw IoError("bad activation kind in checkpoint: " + path);
    }
    const auto kind = static_cast<ActivationKind>(kind_raw);
    const std::uint32_t num_layers = get_u32(in, path);
    if (num_layers == 0 || num_layers > 10000) {
        throw IoError("implausible layer count in checkpoint: " + path);
    }
    std::vector<LayerState> layers;
    layers.reserve(num_layers);
    for (std::uint32_t l = 0; l < num_layers; ++l) {
        const std::uint32_t rows = get_u32(in, path);
        const std::uint32_t cols = get_u32(in, path);
        if (rows == 0 || cols == 0 || rows > 1u << 20 || cols > 1u << 20) {
            throw IoError("implausible layer shape in checkpoint: " + path);
        }
        LayerState layer;
        layer.weights = Matrix(static_cast<int>(rows), static_cast<int>(cols));
        for (double& w : layer.weights.data) {
            w = get_f64(in, path);
        }
        layer.bias.resize(rows);
        for (double& b : layer.bias) {
            b = get_f64(in, path);
        }
        const double s = get_f64(in, path);
        const double t = get_f64(in, path);
        const std::uint32_t flags = get_u32(in, path);
        const double pin = get_f64(in, path);
        layer.hardness = HardnessParam(s, t);
        if ((flags & 1u) != 0) {
            layer.hardness.freeze();
        }
        if ((flags & 2u) != 0) {
            layer.hardness.pin_lambda(pin);
        }
        layers.push_back(std::move(layer));
    }
    return NetworkState::from_layers(std::move(layers), kind);
}

}  // namespace lgelu
