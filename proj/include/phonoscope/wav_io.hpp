#pragma once

#include <cstddef>
#include <filesystem>

#include "phonoscope/waveform.hpp"

namespace phonoscope {

enum class SampleFormat { Int16, Float32 };

struct WavWriteResult {
  std::size_t clipped_samples = 0;  // int16 only; samples clamped to full scale
};

/// Reads a RIFF/WAVE file. PCM 16/24/32-bit integer and IEEE float32 are
/// accepted (plain fmt and WAVE_FORMAT_EXTENSIBLE); integer samples are
/// scaled to [-1, 1]. Errors distinguish a missing file, a malformed
/// header, and an unsupported codec.
Waveform read_wav(const std::filesystem::path& path);

/// Writes little-endian WAV. Float32 is lossless for float-valued data;
/// int16 rounds to nearest and reports clipped samples in the result.
WavWriteResult write_wav(const std::filesystem::path& path, const Waveform& w,
                         SampleFormat format);

}  // namespace phonoscope
