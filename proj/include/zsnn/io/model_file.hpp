#pragma once

#include <zlib.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "zsnn/ama/aae.hpp"
#include "zsnn/ama/ad.hpp"
#include "zsnn/errors.hpp"
#include "zsnn/sae/model.hpp"

// Binary model container. Layout, all integers and floats little-endian:
//
//   "ZSNN"                       magic
//   u32  version (currently 1)
//   u8   kind: 0 = state autoencoder, 1 = action autoencoder, 2 = action
//        discriminator
//   ...  kind-specific config block (see writers below)
//   per network: u32 layer count, then per layer u32 in, u32 out, u8 act
//   per network, per layer: W then B as f32 arrays, row-major
//   u32  CRC32 (zlib polynomial) over every preceding byte
//
// save/load round-trips are bit-exact; the CRC turns any storage corruption
// into a load-time IntegrityError instead of a silently wrong model.

namespace zsnn {

enum class ModelKind : std::uint8_t { Sae = 0, Aae = 1, Ad = 2 };

namespace detail {

struct ByteWriter {
  std::vector<std::uint8_t> buf;

  void u8(std::uint8_t v) { buf.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back((v >> (8 * i)) & 0xff);
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) {
    auto b = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) buf.push_back((b >> (8 * i)) & 0xff);
  }
  void f32s(const std::vector<float>& vs) {
    for (float v : vs) f32(v);
  }
};

struct ByteReader {
  const std::vector<std::uint8_t>& buf;
  std::size_t pos = 0;
  std::string section = "header";

  void need(std::size_t n) {
    if (pos + n > buf.size())
      throw IntegrityError("model file truncated in section '" + section +
                           "'");
  }
  std::uint8_t u8() {
    need(1);
    return buf[pos++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(buf[pos++]) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[pos++]) << (8 * i);
    return std::bit_cast<double>(v);
  }
  std::vector<float> f32s(std::size_t n) {
    std::vector<float> out(n);
    for (auto& v : out) v = f32();
    return out;
  }
};

inline std::uint32_t file_crc(const std::uint8_t* data, std::size_t n) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(data),
              static_cast<uInt>(n)));
}

inline void write_layer_shape(ByteWriter& w, const DenseLayer<float>& l) {
  w.u32(static_cast<std::uint32_t>(l.in));
  w.u32(static_cast<std::uint32_t>(l.out));
  w.u8(static_cast<std::uint8_t>(l.act));
}

inline DenseLayer<float> read_layer_shape(ByteReader& r) {
  const int in = static_cast<int>(r.u32());
  const int out = static_cast<int>(r.u32());
  const std::uint8_t act = r.u8();
  if (in < 1 || out < 1 || act > 2)
    throw IntegrityError("model file: bad layer shape in section '" +
                         r.section + "'");
  return DenseLayer<float>(in, out, static_cast<Act>(act));
}

template <typename NetLike>
void write_net(ByteWriter& w, const NetLike& net) {
  w.u32(static_cast<std::uint32_t>(net.layers.size()));
  for (const auto& l : net.layers) write_layer_shape(w, l);
}

template <typename NetLike>
void write_net_params(ByteWriter& w, const NetLike& net) {
  for (const auto& l : net.layers) {
    w.f32s(l.W);
    w.f32s(l.B);
  }
}

template <typename NetLike>
void read_net(ByteReader& r, NetLike& net, const std::string& name) {
  r.section = name + " shape";
  const std::uint32_t count = r.u32();
  if (count == 0 || count > 64)
    throw IntegrityError("model file: bad layer count in section '" +
                         r.section + "'");
  net.layers.clear();
  for (std::uint32_t i = 0; i < count; ++i)
    net.layers.push_back(read_layer_shape(r));
}

template <typename NetLike>
void read_net_params(ByteReader& r, NetLike& net, const std::string& name) {
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    auto& l = net.layers[i];
    r.section = name + " layer " + std::to_string(i) + " weights";
    l.W = r.f32s(static_cast<std::size_t>(l.in) * l.out);
    r.section = name + " layer " + std::to_string(i) + " biases";
    l.B = r.f32s(static_cast<std::size_t>(l.out));
  }
}

inline constexpr std::uint32_t kModelFileVersion = 1;

inline void write_preamble(ByteWriter& w, ModelKind kind) {
  for (char c : {'Z', 'S', 'N', 'N'}) w.u8(static_cast<std::uint8_t>(c));
  w.u32(kModelFileVersion);
  w.u8(static_cast<std::uint8_t>(kind));
}

}  // namespace detail

inline std::vector<std::uint8_t> model_bytes(const SaeModel& m) {
  validate_sae(m);
  detail::ByteWriter w;
  detail::write_preamble(w, ModelKind::Sae);
  w.u32(static_cast<std::uint32_t>(m.img_w));
  w.u32(static_cast<std::uint32_t>(m.img_h));
  w.u32(static_cast<std::uint32_t>(m.latent.N));
  w.u32(static_cast<std::uint32_t>(m.latent.M));
  w.f64(m.latent.tau.tau_max);
  w.f64(m.latent.tau.tau_min);
  w.u8(static_cast<std::uint8_t>(m.variant.kind));
  w.f64(m.variant.alpha);
  w.f64(m.variant.warmup_fraction);
  w.u32(static_cast<std::uint32_t>(m.trained_epochs));
  w.f32(m.encoder.dropout_rate);
  w.f32(m.decoder.dropout_rate);
  detail::write_net(w, m.encoder);
  detail::write_net(w, m.decoder);
  detail::write_net_params(w, m.encoder);
  detail::write_net_params(w, m.decoder);
  w.u32(detail::file_crc(w.buf.data(), w.buf.size()));
  return std::move(w.buf);
}

inline std::vector<std::uint8_t> model_bytes(const AaeModel& m) {
  validate_aae(m);
  detail::ByteWriter w;
  detail::write_preamble(w, ModelKind::Aae);
  w.u32(static_cast<std::uint32_t>(m.A));
  w.u32(static_cast<std::uint32_t>(m.N));
  w.f64(m.tau.tau_max);
  w.f64(m.tau.tau_min);
  w.u32(static_cast<std::uint32_t>(m.trained_epochs));
  detail::write_net(w, m.encoder);
  detail::write_net(w, m.decoder);
  detail::write_net_params(w, m.encoder);
  detail::write_net_params(w, m.decoder);
  w.u32(detail::file_crc(w.buf.data(), w.buf.size()));
  return std::move(w.buf);
}

inline std::vector<std::uint8_t> model_bytes(const AdModel& m) {
  validate_ad(m);
  detail::ByteWriter w;
  detail::write_preamble(w, ModelKind::Ad);
  w.u32(static_cast<std::uint32_t>(m.n_bits));
  w.u32(static_cast<std::uint32_t>(m.trained_epochs));
  w.f32(m.net.dropout_rate);
  detail::write_net(w, m.net);
  detail::write_net_params(w, m.net);
  w.u32(detail::file_crc(w.buf.data(), w.buf.size()));
  return std::move(w.buf);
}

namespace detail {

inline void write_file(const std::string& path,
                       const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("save_model: cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("save_model: short write to " + path);
}

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_model: cannot open " + path);
  std::vector<std::uint8_t> bytes(
      (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

// Verifies trailer CRC and the fixed preamble; returns a reader positioned
// after the kind byte along with the declared kind.
inline std::pair<ByteReader, ModelKind> open_model(
    const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 13)
    throw IntegrityError("model file truncated in section 'header'");
  const std::uint32_t stored =
      std::uint32_t(bytes[bytes.size() - 4]) |
      std::uint32_t(bytes[bytes.size() - 3]) << 8 |
      std::uint32_t(bytes[bytes.size() - 2]) << 16 |
      std::uint32_t(bytes[bytes.size() - 1]) << 24;
  if (file_crc(bytes.data(), bytes.size() - 4) != stored)
    throw IntegrityError("model file CRC mismatch in section 'trailer'");
  ByteReader r{bytes};
  if (r.u8() != 'Z' || r.u8() != 'S' || r.u8() != 'N' || r.u8() != 'N')
    throw IntegrityError("model file: bad magic in section 'header'");
  if (r.u32() != kModelFileVersion)
    throw IntegrityError("model file: unsupported version in section 'header'");
  const std::uint8_t kind = r.u8();
  if (kind > 2)
    throw IntegrityError("model file: unknown kind in section 'header'");
  return {std::move(r), static_cast<ModelKind>(kind)};
}

inline SaeModel read_sae(ByteReader& r) {
  SaeModel m;
  r.section = "sae config";
  m.img_w = static_cast<int>(r.u32());
  m.img_h = static_cast<int>(r.u32());
  m.latent.N = static_cast<int>(r.u32());
  m.latent.M = static_cast<int>(r.u32());
  m.latent.tau.tau_max = r.f64();
  m.latent.tau.tau_min = r.f64();
  const std::uint8_t lk = r.u8();
  if (lk > 2)
    throw IntegrityError("model file: bad loss kind in section 'sae config'");
  m.variant.kind = static_cast<LossKind>(lk);
  m.variant.alpha = r.f64();
  m.variant.warmup_fraction = r.f64();
  m.trained_epochs = static_cast<int>(r.u32());
  m.encoder.dropout_rate = r.f32();
  m.decoder.dropout_rate = r.f32();
  read_net(r, m.encoder, "encoder");
  read_net(r, m.decoder, "decoder");
  read_net_params(r, m.encoder, "encoder");
  read_net_params(r, m.decoder, "decoder");
  try {
    validate_sae(m);
  } catch (const Error& e) {
    throw IntegrityError(std::string("model file: inconsistent sae: ") +
                         e.what());
  }
  return m;
}

inline AaeModel read_aae(ByteReader& r) {
  AaeModel m;
  r.section = "aae config";
  m.A = static_cast<int>(r.u32());
  m.N = static_cast<int>(r.u32());
  m.tau.tau_max = r.f64();
  m.tau.tau_min = r.f64();
  m.trained_epochs = static_cast<int>(r.u32());
  m.encoder.cond_dim = m.decoder.cond_dim = m.N;
  read_net(r, m.encoder, "encoder");
  read_net(r, m.decoder, "decoder");
  read_net_params(r, m.encoder, "encoder");
  read_net_params(r, m.decoder, "decoder");
  try {
    validate_aae(m);
  } catch (const Error& e) {
    throw IntegrityError(std::string("model file: inconsistent aae: ") +
                         e.what());
  }
  return m;
}

inline AdModel read_ad(ByteReader& r) {
  AdModel m;
  r.section = "ad config";
  m.n_bits = static_cast<int>(r.u32());
  m.trained_epochs = static_cast<int>(r.u32());
  m.net.dropout_rate = r.f32();
  read_net(r, m.net, "classifier");
  read_net_params(r, m.net, "classifier");
  try {
    validate_ad(m);
  } catch (const Error& e) {
    throw IntegrityError(std::string("model file: inconsistent ad: ") +
                         e.what());
  }
  return m;
}

inline void require_consumed(const ByteReader& r) {
  if (r.pos != r.buf.size() - 4)
    throw IntegrityError("model file: trailing bytes in section 'body'");
}

}  // namespace detail

inline void save_model(const SaeModel& m, const std::string& path) {
  detail::write_file(path, model_bytes(m));
}
inline void save_model(const AaeModel& m, const std::string& path) {
  detail::write_file(path, model_bytes(m));
}
inline void save_model(const AdModel& m, const std::string& path) {
  detail::write_file(path, model_bytes(m));
}

struct LoadedModel {
  ModelKind kind = ModelKind::Sae;
  std::optional<SaeModel> sae;
  std::optional<AaeModel> aae;
  std::optional<AdModel> ad;
};

inline LoadedModel load_model_bytes(const std::vector<std::uint8_t>& bytes) {
  auto [r, kind] = detail::open_model(bytes);
  LoadedModel out;
  out.kind = kind;
  switch (kind) {
    case ModelKind::Sae: out.sae = detail::read_sae(r); break;
    case ModelKind::Aae: out.aae = detail::read_aae(r); break;
    case ModelKind::Ad: out.ad = detail::read_ad(r); break;
  }
  detail::require_consumed(r);
  return out;
}

inline LoadedModel load_model(const std::string& path) {
  return load_model_bytes(detail::read_file(path));
}

inline SaeModel load_sae(const std::string& path) {
  auto m = load_model(path);
  if (m.kind != ModelKind::Sae)
    throw IoError("load_sae: " + path + " does not hold a state autoencoder");
  return std::move(*m.sae);
}

inline AaeModel load_aae(const std::string& path) {
  auto m = load_model(path);
  if (m.kind != ModelKind::Aae)
    throw IoError("load_aae: " + path + " does not hold an action autoencoder");
  return std::move(*m.aae);
}

inline AdModel load_ad(const std::string& path) {
  auto m = load_model(path);
  if (m.kind != ModelKind::Ad)
    throw IoError("load_ad: " + path + " does not hold a discriminator");
  return std::move(*m.ad);
}

}  // namespace zsnn
