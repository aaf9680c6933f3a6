#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "zd/core.hpp"
#include "zd/rng.hpp"

namespace zd {

class ShapeError : public Error {
public:
    using Error::Error;
};

inline constexpr int kLatentDim = 10;
inline constexpr int kGanChannels = 6;
inline constexpr int kGanSize = 32;
inline constexpr int kLogitCount = kGanChannels * kGanSize * kGanSize;  // 6144

class LatentVector {
public:
    /// Throws Error unless there are exactly 10 components, each in [-1, 1].
    explicit LatentVector(std::span<const float> values);
    static LatentVector sample(Rng& rng);

    const std::array<float, kLatentDim>& values() const { return v_; }

private:
    LatentVector() = default;
    std::array<float, kLatentDim> v_{};
};

enum class LayerKind : std::uint32_t { TransposedConv = 1, BatchNorm = 2 };
enum class Activation : std::uint32_t { None = 0, Relu = 1, Tanh = 2 };

// Layer parameters, in file order:
//   TransposedConv  dims [in, out, kH, kW, stride, padding]
//                   weight[in][out][kH][kW], bias[out]
//   BatchNorm       dims [channels]
//                   scale, shift, running mean, running variance (eps 1e-5)
struct Layer {
    std::string name;
    LayerKind kind = LayerKind::TransposedConv;
    Activation activation = Activation::None;
    std::vector<std::uint32_t> dims;
    std::vector<std::vector<float>> params;

    bool operator==(const Layer&) const = default;
};

struct WeightBundle {
    std::vector<Layer> layers;
    bool operator==(const WeightBundle&) const = default;
};

inline constexpr float kBatchNormEps = 1e-5f;

/// Parameter array sizes a layer must carry given its kind and dims.
std::vector<std::size_t> expected_param_sizes(const Layer& layer);
/// Checks that the layers compose from 10x1x1 to 6x32x32. Throws ShapeError
/// naming the offending layer.
void validate_shapes(const WeightBundle& w);

// "ZGANWT01", u32 layer count, then per layer: u32-length-prefixed UTF-8
// name, u32 kind, u32 activation, u32 dim count, u32 dims, then each
// parameter array as little-endian f32.
std::vector<std::uint8_t> serialize_weights(const WeightBundle& w);
WeightBundle parse_weights(std::span<const std::uint8_t> bytes);
WeightBundle load_weights(const std::filesystem::path& path);
void save_weights(const std::filesystem::path& path, const WeightBundle& w);

/// 32x32 grid of 6-channel scores, stored channel-major [c][y][x].
struct LogitVolume {
    std::vector<float> data = std::vector<float>(kLogitCount, 0.0f);

    float at(int ch, int y, int x) const { return data[(ch * kGanSize + y) * kGanSize + x]; }
    float& at(int ch, int y, int x) { return data[(ch * kGanSize + y) * kGanSize + x]; }
};

using TileGrid32 = std::array<Tile, kGanSize * kGanSize>;

LogitVolume generate_logits(const LatentVector& z, const WeightBundle& w);
/// Per-cell argmax, ties to the lowest channel. Channels 0/1/2 are
/// Floor/Wall/Water; the unused channels 3-5 read as Floor.
TileGrid32 collapse(const LogitVolume& v);
/// Upper-left 16x11 block of a collapsed grid, verbatim.
Room crop_room(const TileGrid32& grid);
/// Border ring cells that came out as Floor become Wall.
Room normalize_border(Room room);
Room sample_room(Rng& rng, const WeightBundle& w);

/// Default generator schedule with random DCGAN-style initialisation. The
/// result is untrained: it exercises the inference path, nothing more.
WeightBundle random_bundle(std::uint64_t seed);

struct FixtureRecord {
    std::array<float, kLatentDim> z{};
    LogitVolume logits;
};

/// Concatenated records of 10 + 6144 little-endian f32 values.
std::vector<FixtureRecord> load_fixtures(const std::filesystem::path& path);
void save_fixtures(const std::filesystem::path& path, const std::vector<FixtureRecord>& records);

}  // namespace zd
