// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#include "beamsema/nn/checkpoint.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace beamsema::nn {

namespace {

constexpr char kMagic[8] = {'B', 'S', 'E', 'M', 'A', 'N', 'N', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_i64(std::ostream& out, std::int64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_u64(std::ostream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_str(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
void put_tensor(std::ostream& out, const Tensor& t) {
    put_u32(out, static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t d : t.shape) put_u64(out, d);
    out.write(reinterpret_cast<const char*>(t.data.data()),
              static_cast<std::streamsize>(t.data.size() * sizeof(double)));
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
std::int64_t get_i64(std::istream& in) {
    std::int64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
std::uint64_t get_u64(std::istream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
std::string get_str(std::istream& in) {
    const std::uint32_t len = get_u32(in);
    if (len > (1u << 20)) throw std::runtime_error("checkpoint: implausible string length");
    std::string s(len, '\0');
    in.read(s.data(), len);
    return s;
}
Tensor get_tensor(std::istream& in) {
    const std::uint32_t ndim = get_u32(in);
    if (ndim > 8) throw std::runtime_error("checkpoint: implausible tensor rank");
    std::vector<std::size_t> shape(ndim);
    for (auto& d : shape) d = static_cast<std::size_t>(get_u64(in));
    Tensor t(shape);
    in.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(t.data.size() * sizeof(double)));
    return t;
}

}  // namespace

void save_checkpoint(const std::string& path, const Model& model,
                     const std::map<std::string, std::string>& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot open for writing: " + path);
    out.write(kMagic, sizeof kMagic);

    put_u32(out, static_cast<std::uint32_t>(meta.size()));
    for (const auto& [k, v] : meta) {
        put_str(out, k);
        put_str(out, v);
    }

    put_u32(out, static_cast<std::uint32_t>(model.input_shape().size()));
    for (std::size_t d : model.input_shape()) put_u64(out, d);

    put_u32(out, static_cast<std::uint32_t>(model.layers().size()));
    for (const LayerSpec& l : model.layers()) {
        put_u32(out, static_cast<std::uint32_t>(l.kind));
        put_u32(out, static_cast<std::uint32_t>(l.units));
        put_u32(out, static_cast<std::uint32_t>(l.filters));
        put_u32(out, static_cast<std::uint32_t>(l.kernel));
        put_u32(out, static_cast<std::uint32_t>(l.stride));
    }

    const ParamStore& params = model.params();
    put_i64(out, params.step);
    put_u32(out, static_cast<std::uint32_t>(params.entries.size()));
    for (const ParamEntry& e : params.entries) {
        put_str(out, e.name);
        put_tensor(out, e.value);
        put_tensor(out, e.m);
        put_tensor(out, e.v);
    }
    if (!out) throw std::runtime_error("checkpoint: write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open for reading: " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || !std::equal(magic, magic + 8, kMagic))
        throw std::runtime_error("checkpoint: bad magic in " + path);

    Checkpoint ckpt;
    const std::uint32_t n_meta = get_u32(in);
    for (std::uint32_t i = 0; i < n_meta; ++i) {
        std::string k = get_str(in);
        ckpt.meta[k] = get_str(in);
    }

    const std::uint32_t ndim = get_u32(in);
    std::vector<std::size_t> input_shape(ndim);
    for (auto& d : input_shape) d = static_cast<std::size_t>(get_u64(in));

    const std::uint32_t n_layers = get_u32(in);
    if (n_layers > 1024) throw std::runtime_error("checkpoint: implausible layer count");
    std::vector<LayerSpec> layers(n_layers);
    for (auto& l : layers) {
        l.kind = static_cast<LayerKind>(get_u32(in));
        l.units = static_cast<int>(get_u32(in));
        l.filters = static_cast<int>(get_u32(in));
        l.kernel = static_cast<int>(get_u32(in));
        l.stride = static_cast<int>(get_u32(in));
    }
    ckpt.model = Model(input_shape, layers);

    ParamStore& params = ckpt.model.params();
    params.step = get_i64(in);
    const std::uint32_t n_entries = get_u32(in);
    if (n_entries != params.entries.size())
        throw std::runtime_error("checkpoint: parameter count does not match the layer stack");
    for (auto& e : params.entries) {
        const std::string name = get_str(in);
        if (name != e.name)
            throw std::runtime_error("checkpoint: unexpected parameter " + name + " (want " +
                                     e.name + ")");
        Tensor value = get_tensor(in);
        Tensor m = get_tensor(in);
        Tensor v = get_tensor(in);
        if (!value.same_shape(e.value) || !m.same_shape(e.value) || !v.same_shape(e.value))
            throw std::runtime_error("checkpoint: shape mismatch for " + name);
        e.value = std::move(value);
        e.m = std::move(m);
        e.v = std::move(v);
    }
    if (!in) throw std::runtime_error("checkpoint: truncated file: " + path);
    return ckpt;
}

}  // namespace beamsema::nn
