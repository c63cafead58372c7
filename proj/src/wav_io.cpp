#include "phonoscope/wav_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "phonoscope/error.hpp"

namespace phonoscope {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatIeeeFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct Reader {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos = 0;

  bool has(std::size_t n) const { return pos + n <= size; }
  std::uint32_t u32() {
    std::uint32_t v = std::uint32_t(data[pos]) | std::uint32_t(data[pos + 1]) << 8 |
                      std::uint32_t(data[pos + 2]) << 16 | std::uint32_t(data[pos + 3]) << 24;
    pos += 4;
    return v;
  }
  std::uint16_t u16() {
    std::uint16_t v = std::uint16_t(data[pos] | data[pos + 1] << 8);
    pos += 2;
    return v;
  }
};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 24));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(std::uint8_t(v));
  out.push_back(std::uint8_t(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

[[noreturn]] void malformed(const std::filesystem::path& path, const std::string& what) {
  fail(ErrorKind::MalformedFile, path.string() + ": " + what);
}

}  // namespace

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::MissingFile, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  in.close();

  Reader r{bytes.data(), bytes.size()};
  if (!r.has(12)) malformed(path, "file shorter than a RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0) malformed(path, "missing RIFF tag");
  r.pos = 4;
  r.u32();  // declared riff size; data beyond it is tolerated
  if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) malformed(path, "missing WAVE tag");
  r.pos = 12;

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  const std::uint8_t* data_ptr = nullptr;
  std::size_t data_size = 0;

  while (r.has(8)) {
    char tag[5] = {};
    std::memcpy(tag, bytes.data() + r.pos, 4);
    r.pos += 4;
    std::uint32_t chunk_size = r.u32();
    if (!r.has(chunk_size)) malformed(path, std::string("truncated chunk '") + tag + "'");
    const std::size_t chunk_start = r.pos;
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_size < 16) malformed(path, "fmt chunk shorter than 16 bytes");
      format = r.u16();
      channels = r.u16();
      rate = r.u32();
      r.u32();  // byte rate
      block_align = r.u16();
      bits = r.u16();
      if (format == kFormatExtensible) {
        if (chunk_size < 40) malformed(path, "extensible fmt chunk shorter than 40 bytes");
        r.u16();  // cbSize
        r.u16();  // valid bits
        r.u32();  // channel mask
        format = r.u16();  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data_ptr = bytes.data() + chunk_start;
      data_size = chunk_size;
    }
    r.pos = chunk_start + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt) malformed(path, "no fmt chunk");
  if (data_ptr == nullptr) malformed(path, "no data chunk");
  if (channels == 0) malformed(path, "fmt declares zero channels");
  if (rate == 0) malformed(path, "fmt declares zero sample rate");

  const bool pcm_ok = format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32);
  const bool float_ok = format == kFormatIeeeFloat && bits == 32;
  if (!pcm_ok && !float_ok)
    fail(ErrorKind::UnsupportedFormat,
         path.string() + ": unsupported codec (format tag " + std::to_string(format) + ", " +
             std::to_string(bits) + "-bit); expected PCM 16/24/32-bit or IEEE float32");

  const std::size_t bytes_per_sample = bits / 8;
  if (block_align != channels * bytes_per_sample)
    malformed(path, "block alignment does not match channels and bit depth");
  if (data_size % block_align != 0) malformed(path, "data chunk is not a whole number of frames");

  const std::size_t frames = data_size / block_align;
  Waveform w;
  w.sample_rate = int(rate);
  w.channels.assign(channels, std::vector<double>(frames));

  const std::uint8_t* p = data_ptr;
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t c = 0; c < channels; ++c) {
      double v = 0.0;
      if (format == kFormatIeeeFloat) {
        std::uint32_t u = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
                          std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
        float fv = std::bit_cast<float>(u);
        v = double(fv);
      } else if (bits == 16) {
        std::int16_t s = std::int16_t(p[0] | p[1] << 8);
        v = double(s) / 32768.0;
      } else if (bits == 24) {
        std::int32_t s = std::int32_t(p[0]) | std::int32_t(p[1]) << 8 | std::int32_t(p[2]) << 16;
        if (s & 0x800000) s |= ~0xFFFFFF;  // sign extend
        v = double(s) / 8388608.0;
      } else {
        std::int32_t s = std::int32_t(std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
                                      std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24);
        v = double(s) / 2147483648.0;
      }
      w.channels[c][f] = v;
      p += bytes_per_sample;
    }
  }
  w.validate();
  return w;
}

WavWriteResult write_wav(const std::filesystem::path& path, const Waveform& w,
                         SampleFormat format) {
  w.validate();
  const std::size_t channels = w.num_channels();
  const std::size_t frames = w.num_frames();
  const std::uint16_t bits = format == SampleFormat::Int16 ? 16 : 32;
  const std::uint16_t block_align = std::uint16_t(channels * bits / 8);
  const std::uint32_t data_size = std::uint32_t(frames * block_align);

  WavWriteResult result;
  std::vector<std::uint8_t> out;
  out.reserve(64 + data_size);
  put_tag(out, "RIFF");
  const bool is_float = format == SampleFormat::Float32;
  const std::uint32_t fmt_size = 16;
  const std::uint32_t fact_size = is_float ? 12 : 0;  // float files carry a fact chunk
  put_u32(out, 4 + (8 + fmt_size) + fact_size + (8 + data_size));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, fmt_size);
  put_u16(out, is_float ? kFormatIeeeFloat : kFormatPcm);
  put_u16(out, std::uint16_t(channels));
  put_u32(out, std::uint32_t(w.sample_rate));
  put_u32(out, std::uint32_t(w.sample_rate) * block_align);
  put_u16(out, block_align);
  put_u16(out, bits);
  if (is_float) {
    put_tag(out, "fact");
    put_u32(out, 4);
    put_u32(out, std::uint32_t(frames));
  }
  put_tag(out, "data");
  put_u32(out, data_size);

  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double v = w.channels[c][f];
      if (is_float) {
        const std::uint32_t u = std::bit_cast<std::uint32_t>(float(v));
        put_u32(out, u);
      } else {
        long long s = std::llround(v * 32768.0);
        if (s > 32767) {
          s = 32767;
          ++result.clipped_samples;
        } else if (s < -32768) {
          s = -32768;
          ++result.clipped_samples;
        }
        put_u16(out, std::uint16_t(std::int16_t(s)));
      }
    }
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(out.data()), std::streamsize(out.size()));
  if (!os) fail(ErrorKind::Io, "write failed for " + path.string());
  return result;
}

}  // namespace phonoscope
