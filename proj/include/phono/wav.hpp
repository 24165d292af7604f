#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "phono/errors.hpp"
#include "phono/recording.hpp"

namespace phono {

namespace detail {

inline std::uint32_t read_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t read_u16le(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

} // namespace detail

// Reads a PCM or IEEE-float WAV file. Multi-channel content is averaged to
// mono; integer samples are scaled to [-1, 1] by the type's full-scale value.
inline Recording load_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedWav("cannot open " + path.string());
    std::vector<unsigned char> raw((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (raw.size() < 44) throw MalformedWav("file too small: " + path.string());
    if (std::memcmp(raw.data(), "RIFF", 4) != 0 || std::memcmp(raw.data() + 8, "WAVE", 4) != 0)
        throw MalformedWav("missing RIFF/WAVE header: " + path.string());

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const unsigned char* data = nullptr;
    std::size_t data_len = 0;
    bool have_fmt = false;

    std::size_t pos = 12;
    while (pos + 8 <= raw.size()) {
        const char* tag = reinterpret_cast<const char*>(raw.data() + pos);
        const std::uint32_t chunk_len = detail::read_u32le(raw.data() + pos + 4);
        const std::size_t body = pos + 8;
        if (body + chunk_len > raw.size())
            throw MalformedWav("truncated chunk '" + std::string(tag, 4) + "' in " + path.string());
        if (std::memcmp(tag, "fmt ", 4) == 0) {
            if (chunk_len < 16) throw MalformedWav("fmt chunk too small in " + path.string());
            format = detail::read_u16le(raw.data() + body);
            channels = detail::read_u16le(raw.data() + body + 2);
            rate = detail::read_u32le(raw.data() + body + 4);
            bits = detail::read_u16le(raw.data() + body + 14);
            if (format == 0xFFFE) {
                // WAVE_FORMAT_EXTENSIBLE: actual format is the leading word
                // of the SubFormat GUID.
                if (chunk_len < 40) throw MalformedWav("bad extensible fmt in " + path.string());
                format = detail::read_u16le(raw.data() + body + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(tag, "data", 4) == 0) {
            data = raw.data() + body;
            data_len = chunk_len;
        }
        pos = body + chunk_len + (chunk_len & 1); // chunks are word-aligned
    }

    if (!have_fmt) throw MalformedWav("no fmt chunk in " + path.string());
    if (data == nullptr) throw MalformedWav("no data chunk in " + path.string());
    if (format != 1 && format != 3)
        throw UnsupportedEncoding("compressed WAV (format tag " + std::to_string(format) + ") in " +
                                  path.string());
    if (channels == 0) throw MalformedWav("zero channels in " + path.string());
    if (rate == 0) throw MalformedWav("zero sample rate in " + path.string());
    if (format == 1 && bits != 8 && bits != 16 && bits != 24 && bits != 32)
        throw UnsupportedEncoding(std::to_string(bits) + "-bit PCM in " + path.string());
    if (format == 3 && bits != 32)
        throw UnsupportedEncoding(std::to_string(bits) + "-bit float in " + path.string());

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t stride = bytes_per_sample * channels;
    const std::size_t n_frames = stride == 0 ? 0 : data_len / stride;
    if (n_frames == 0) throw MalformedWav("empty data chunk in " + path.string());

    Recording rec;
    rec.sample_rate = static_cast<int>(rate);
    rec.id = path.stem().string();
    rec.samples.resize(n_frames);

    for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (std::uint16_t c = 0; c < channels; ++c) {
            const unsigned char* p = data + i * stride + c * bytes_per_sample;
            double v = 0.0;
            if (format == 3) {
                float f;
                std::memcpy(&f, p, 4);
                v = static_cast<double>(f);
            } else if (bits == 8) {
                v = (static_cast<int>(p[0]) - 128) / 128.0;
            } else if (bits == 16) {
                const auto s = static_cast<std::int16_t>(p[0] | (p[1] << 8));
                v = s / 32768.0;
            } else if (bits == 24) {
                std::int32_t s = p[0] | (p[1] << 8) | (p[2] << 16);
                if (s & 0x800000) s |= ~0xFFFFFF; // sign extend
                v = s / 8388608.0;
            } else {
                const auto s = static_cast<std::int32_t>(detail::read_u32le(p));
                v = s / 2147483648.0;
            }
            acc += v;
        }
        rec.samples[i] = acc / channels;
    }
    return rec;
}

// Writes a mono 16-bit PCM WAV. Samples are clipped to [-1, 1].
inline void save_wav(const std::filesystem::path& path, const std::vector<double>& samples,
                     int sample_rate) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());

    const std::uint32_t data_len = static_cast<std::uint32_t>(samples.size() * 2);
    auto u32 = [&](std::uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
        out.write(reinterpret_cast<const char*>(b), 4);
    };
    auto u16 = [&](std::uint16_t v) {
        unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
        out.write(reinterpret_cast<const char*>(b), 2);
    };

    out.write("RIFF", 4);
    u32(36 + data_len);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    u32(16);
    u16(1); // PCM
    u16(1); // mono
    u32(static_cast<std::uint32_t>(sample_rate));
    u32(static_cast<std::uint32_t>(sample_rate) * 2);
    u16(2);
    u16(16);
    out.write("data", 4);
    u32(data_len);
    for (double s : samples) {
        double c = s < -1.0 ? -1.0 : (s > 1.0 ? 1.0 : s);
        auto q = static_cast<std::int16_t>(std::lround(c * 32767.0));
        u16(static_cast<std::uint16_t>(q));
    }
    if (!out) throw Error("short write to " + path.string());
}

} // namespace phono
