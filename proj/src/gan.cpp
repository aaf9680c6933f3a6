#include "zd/gan.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace zd {

namespace {

constexpr char kMagic[] = "ZGANWT01";
constexpr std::size_t kMagicLen = 8;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::span<const std::uint8_t> take(std::size_t n, const char* what) {
        if (n > bytes_.size() - pos_) throw FormatError(std::string("weights file truncated reading ") + what);
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint32_t u32(const char* what) {
        auto s = take(4, what);
        return std::uint32_t(s[0]) | std::uint32_t(s[1]) << 8 | std::uint32_t(s[2]) << 16 |
               std::uint32_t(s[3]) << 24;
    }
    float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
    bool done() const { return pos_ == bytes_.size(); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

// Tensor in [c][h][w] order.
struct Tensor {
    int c = 0, h = 0, w = 0;
    std::vector<float> v;
};

Tensor transposed_conv(const Tensor& in, const Layer& l) {
    const int inC = static_cast<int>(l.dims[0]), outC = static_cast<int>(l.dims[1]);
    const int kh = static_cast<int>(l.dims[2]), kw = static_cast<int>(l.dims[3]);
    const int stride = static_cast<int>(l.dims[4]), pad = static_cast<int>(l.dims[5]);
    Tensor out;
    out.c = outC;
    out.h = (in.h - 1) * stride - 2 * pad + kh;
    out.w = (in.w - 1) * stride - 2 * pad + kw;
    out.v.assign(static_cast<std::size_t>(out.c) * out.h * out.w, 0.0f);
    const auto& weight = l.params[0];
    const auto& bias = l.params[1];
    for (int ic = 0; ic < inC; ++ic) {
        for (int iy = 0; iy < in.h; ++iy) {
            for (int ix = 0; ix < in.w; ++ix) {
                const float x = in.v[(ic * in.h + iy) * in.w + ix];
                if (x == 0.0f) continue;
                for (int oc = 0; oc < outC; ++oc) {
                    const float* wk = &weight[((static_cast<std::size_t>(ic) * outC + oc) * kh) * kw];
                    float* o = &out.v[static_cast<std::size_t>(oc) * out.h * out.w];
                    for (int ky = 0; ky < kh; ++ky) {
                        const int oy = iy * stride - pad + ky;
                        if (oy < 0 || oy >= out.h) continue;
                        for (int kx = 0; kx < kw; ++kx) {
                            const int ox = ix * stride - pad + kx;
                            if (ox < 0 || ox >= out.w) continue;
                            o[oy * out.w + ox] += x * wk[ky * kw + kx];
                        }
                    }
                }
            }
        }
    }
    for (int oc = 0; oc < outC; ++oc)
        for (int i = 0; i < out.h * out.w; ++i) out.v[static_cast<std::size_t>(oc) * out.h * out.w + i] += bias[oc];
    return out;
}

void batch_norm(Tensor& t, const Layer& l) {
    const auto& scale = l.params[0];
    const auto& shift = l.params[1];
    const auto& mean = l.params[2];
    const auto& var = l.params[3];
    for (int c = 0; c < t.c; ++c) {
        const float inv = 1.0f / std::sqrt(var[c] + kBatchNormEps);
        for (int i = 0; i < t.h * t.w; ++i) {
            float& x = t.v[static_cast<std::size_t>(c) * t.h * t.w + i];
            x = (x - mean[c]) * inv * scale[c] + shift[c];
        }
    }
}

void activate(Tensor& t, Activation a) {
    if (a == Activation::Relu)
        for (float& x : t.v) x = x > 0.0f ? x : 0.0f;
    else if (a == Activation::Tanh)
        for (float& x : t.v) x = std::tanh(x);
}

}  // namespace

LatentVector::LatentVector(std::span<const float> values) {
    if (values.size() != kLatentDim)
        throw Error("latent vector must have " + std::to_string(kLatentDim) + " components, got " +
                    std::to_string(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= -1.0f && values[i] <= 1.0f))
            throw Error("latent component " + std::to_string(i) + " outside [-1, 1]");
        v_[i] = values[i];
    }
}

LatentVector LatentVector::sample(Rng& rng) {
    LatentVector z;
    for (float& x : z.v_) x = static_cast<float>(uniform01(rng) * 2.0 - 1.0);
    return z;
}

std::vector<std::size_t> expected_param_sizes(const Layer& l) {
    if (l.kind == LayerKind::TransposedConv) {
        if (l.dims.size() != 6) throw ShapeError("layer '" + l.name + "': transposed conv needs 6 dims");
        return {static_cast<std::size_t>(l.dims[0]) * l.dims[1] * l.dims[2] * l.dims[3], l.dims[1]};
    }
    if (l.kind == LayerKind::BatchNorm) {
        if (l.dims.size() != 1) throw ShapeError("layer '" + l.name + "': batch norm needs 1 dim");
        return {l.dims[0], l.dims[0], l.dims[0], l.dims[0]};
    }
    throw FormatError("layer '" + l.name + "': unknown kind code " + std::to_string(static_cast<int>(l.kind)));
}

void validate_shapes(const WeightBundle& w) {
    int c = kLatentDim, h = 1, wd = 1;
    if (w.layers.empty()) throw ShapeError("weight bundle has no layers");
    for (const Layer& l : w.layers) {
        auto sizes = expected_param_sizes(l);
        if (l.params.size() != sizes.size())
            throw ShapeError("layer '" + l.name + "': wrong number of parameter arrays");
        for (std::size_t i = 0; i < sizes.size(); ++i)
            if (l.params[i].size() != sizes[i])
                throw ShapeError("layer '" + l.name + "': parameter array " + std::to_string(i) + " has " +
                                 std::to_string(l.params[i].size()) + " values, expected " +
                                 std::to_string(sizes[i]));
        if (static_cast<int>(l.dims[0]) != c)
            throw ShapeError("layer '" + l.name + "': expects " + std::to_string(l.dims[0]) +
                             " input channels, previous layer gives " + std::to_string(c));
        if (l.kind == LayerKind::TransposedConv) {
            const int stride = static_cast<int>(l.dims[4]), pad = static_cast<int>(l.dims[5]);
            if (stride < 1 || l.dims[2] == 0 || l.dims[3] == 0)
                throw ShapeError("layer '" + l.name + "': bad kernel or stride");
            c = static_cast<int>(l.dims[1]);
            h = (h - 1) * stride - 2 * pad + static_cast<int>(l.dims[2]);
            wd = (wd - 1) * stride - 2 * pad + static_cast<int>(l.dims[3]);
            if (h <= 0 || wd <= 0) throw ShapeError("layer '" + l.name + "': output collapses to nothing");
        }
        if (l.activation != Activation::None && l.activation != Activation::Relu &&
            l.activation != Activation::Tanh)
            throw FormatError("layer '" + l.name + "': unknown activation code");
    }
    if (c != kGanChannels || h != kGanSize || wd != kGanSize)
        throw ShapeError("layer '" + w.layers.back().name + "': final output is " + std::to_string(c) + "x" +
                         std::to_string(h) + "x" + std::to_string(wd) + ", expected 6x32x32");
}

std::vector<std::uint8_t> serialize_weights(const WeightBundle& w) {
    std::vector<std::uint8_t> out(kMagic, kMagic + kMagicLen);
    put_u32(out, static_cast<std::uint32_t>(w.layers.size()));
    for (const Layer& l : w.layers) {
        put_u32(out, static_cast<std::uint32_t>(l.name.size()));
        out.insert(out.end(), l.name.begin(), l.name.end());
        put_u32(out, static_cast<std::uint32_t>(l.kind));
        put_u32(out, static_cast<std::uint32_t>(l.activation));
        put_u32(out, static_cast<std::uint32_t>(l.dims.size()));
        for (auto d : l.dims) put_u32(out, d);
        for (const auto& p : l.params)
            for (float f : p) put_f32(out, f);
    }
    return out;
}

WeightBundle parse_weights(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kMagicLen || std::memcmp(bytes.data(), kMagic, 6) != 0)
        throw FormatError("not a ZGANWT weights file (bad magic)");
    if (std::memcmp(bytes.data() + 6, kMagic + 6, 2) != 0)
        throw FormatError("unsupported weights version '" +
                          std::string(reinterpret_cast<const char*>(bytes.data()) + 6, 2) + "'");
    Reader r(bytes.subspan(kMagicLen));
    WeightBundle w;
    const std::uint32_t count = r.u32("layer count");
    for (std::uint32_t i = 0; i < count; ++i) {
        Layer l;
        auto nameBytes = r.take(r.u32("name length"), "layer name");
        l.name.assign(nameBytes.begin(), nameBytes.end());
        l.kind = static_cast<LayerKind>(r.u32("kind"));
        l.activation = static_cast<Activation>(r.u32("activation"));
        const std::uint32_t ndims = r.u32("dim count");
        if (ndims > 16) throw FormatError("layer '" + l.name + "': implausible dim count");
        for (std::uint32_t k = 0; k < ndims; ++k) l.dims.push_back(r.u32("dims"));
        for (std::size_t n : expected_param_sizes(l)) {
            std::vector<float> p(n);
            for (float& f : p) f = r.f32("parameters");
            l.params.push_back(std::move(p));
        }
        w.layers.push_back(std::move(l));
    }
    if (!r.done()) throw FormatError("trailing bytes after last layer");
    validate_shapes(w);
    return w;
}

WeightBundle load_weights(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open weights file " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_weights(bytes);
}

void save_weights(const std::filesystem::path& path, const WeightBundle& w) {
    auto bytes = serialize_weights(w);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

LogitVolume generate_logits(const LatentVector& z, const WeightBundle& w) {
    Tensor t{kLatentDim, 1, 1, std::vector<float>(z.values().begin(), z.values().end())};
    for (const Layer& l : w.layers) {
        if (l.kind == LayerKind::TransposedConv)
            t = transposed_conv(t, l);
        else
            batch_norm(t, l);
        activate(t, l.activation);
    }
    LogitVolume v;
    v.data = std::move(t.v);
    return v;
}

TileGrid32 collapse(const LogitVolume& v) {
    TileGrid32 grid{};
    for (int y = 0; y < kGanSize; ++y) {
        for (int x = 0; x < kGanSize; ++x) {
            int best = 0;
            for (int ch = 1; ch < kGanChannels; ++ch)
                if (v.at(ch, y, x) > v.at(best, y, x)) best = ch;
            grid[y * kGanSize + x] = best == 1 ? Tile::Wall : best == 2 ? Tile::Water : Tile::Floor;
        }
    }
    return grid;
}

Room crop_room(const TileGrid32& grid) {
    Room r;
    for (int y = 0; y < kRoomHeight; ++y)
        for (int x = 0; x < kRoomWidth; ++x) r.set({x, y}, grid[y * kGanSize + x]);
    return r;
}

Room normalize_border(Room room) {
    for (int y = 0; y < kRoomHeight; ++y)
        for (int x = 0; x < kRoomWidth; ++x)
            if (!in_interior({x, y}) && room.at(x, y) == Tile::Floor) room.set({x, y}, Tile::Wall);
    return room;
}

Room sample_room(Rng& rng, const WeightBundle& w) {
    LatentVector z = LatentVector::sample(rng);
    return normalize_border(crop_room(collapse(generate_logits(z, w))));
}

WeightBundle random_bundle(std::uint64_t seed) {
    Rng rng = derive_rng(seed, "random-bundle");
    auto normal = [&](float mean, float sd) {
        // Box-Muller on the portable uniform source.
        double u1 = uniform01(rng), u2 = uniform01(rng);
        if (u1 < 1e-300) u1 = 1e-300;
        return static_cast<float>(mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2));
    };
    struct Step {
        std::uint32_t in, out, stride, pad;
        bool last;
    };
    const Step steps[] = {{10, 256, 1, 0, false}, {256, 128, 2, 1, false}, {128, 64, 2, 1, false}, {64, 6, 2, 1, true}};
    WeightBundle w;
    int idx = 0;
    for (const Step& s : steps) {
        Layer conv;
        conv.name = "deconv" + std::to_string(idx);
        conv.kind = LayerKind::TransposedConv;
        conv.activation = s.last ? Activation::Tanh : Activation::None;
        conv.dims = {s.in, s.out, 4, 4, s.stride, s.pad};
        std::vector<float> weight(static_cast<std::size_t>(s.in) * s.out * 16);
        for (float& f : weight) f = normal(0.0f, 0.02f);
        std::vector<float> bias(s.out);
        for (float& f : bias) f = normal(0.0f, 0.02f);
        conv.params = {std::move(weight), std::move(bias)};
        w.layers.push_back(std::move(conv));
        if (!s.last) {
            Layer bn;
            bn.name = "bn" + std::to_string(idx);
            bn.kind = LayerKind::BatchNorm;
            bn.activation = Activation::Relu;
            bn.dims = {s.out};
            std::vector<float> scale(s.out), shift(s.out), mean(s.out), var(s.out);
            for (std::uint32_t c = 0; c < s.out; ++c) {
                scale[c] = normal(1.0f, 0.02f);
                shift[c] = 0.0f;
                mean[c] = normal(0.0f, 0.01f);
                var[c] = 0.0004f * (1.0f + static_cast<float>(uniform01(rng)));
            }
            bn.params = {std::move(scale), std::move(shift), std::move(mean), std::move(var)};
            w.layers.push_back(std::move(bn));
        }
        ++idx;
    }
    return w;
}

std::vector<FixtureRecord> load_fixtures(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open fixture file " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    constexpr std::size_t recordBytes = (kLatentDim + kLogitCount) * 4;
    if (bytes.empty() || bytes.size() % recordBytes != 0)
        throw FormatError("fixture file size is not a whole number of records");
    Reader r(bytes);
    std::vector<FixtureRecord> out(bytes.size() / recordBytes);
    for (auto& rec : out) {
        for (float& f : rec.z) f = r.f32("z");
        for (float& f : rec.logits.data) f = r.f32("logits");
    }
    return out;
}

void save_fixtures(const std::filesystem::path& path, const std::vector<FixtureRecord>& records) {
    std::vector<std::uint8_t> out;
    for (const auto& rec : records) {
        for (float f : rec.z) put_f32(out, f);
        for (float f : rec.logits.data) put_f32(out, f);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

}  // namespace zd
