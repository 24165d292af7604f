#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "phono/fft.hpp"
#include "phono/preprocess.hpp"
#include "phono/recording.hpp"
#include "phono/rng.hpp"
#include "phono/wav.hpp"

using namespace phono;

namespace {

// Independent oracle: frequency of the largest spectral line via direct DFT
// over a dense frequency sweep is overkill; a plain radix-agnostic DFT argmax
// on the raw samples is enough and shares no code with the resampler/filter.
double dominant_frequency(const std::vector<double>& x, int fs) {
    const std::size_t n = x.size();
    std::size_t best_k = 0;
    double best_p = -1.0;
    for (std::size_t k = 0; k <= n / 2; ++k) {
        double re = 0.0, im = 0.0;
        const double w = -2.0 * 3.14159265358979323846 * static_cast<double>(k) /
                         static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            re += x[i] * std::cos(w * static_cast<double>(i));
            im += x[i] * std::sin(w * static_cast<double>(i));
        }
        const double p = re * re + im * im;
        if (p > best_p) {
            best_p = p;
            best_k = k;
        }
    }
    return static_cast<double>(best_k) * fs / static_cast<double>(n);
}

Recording make_sine(double freq, double secs, int fs, double amp = 1.0) {
    Recording r;
    r.sample_rate = fs;
    r.id = "sine";
    const auto n = static_cast<std::size_t>(secs * fs);
    r.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        r.samples[i] = amp * std::sin(2.0 * 3.14159265358979323846 * freq *
                                      static_cast<double>(i) / fs);
    return r;
}

double central_rms(const std::vector<double>& x, double fraction = 0.5) {
    const std::size_t n = x.size();
    const auto lo = static_cast<std::size_t>(n * (0.5 - fraction / 2));
    const auto hi = static_cast<std::size_t>(n * (0.5 + fraction / 2));
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += x[i] * x[i];
    return std::sqrt(acc / static_cast<double>(hi - lo));
}

std::filesystem::path temp_file(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "phono_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_bytes(const std::filesystem::path& p, const std::vector<unsigned char>& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

// Minimal WAV builder for parser tests.
std::vector<unsigned char> build_wav(std::uint16_t format, std::uint16_t channels,
                                     std::uint32_t rate, std::uint16_t bits,
                                     const std::vector<unsigned char>& payload) {
    std::vector<unsigned char> b;
    auto push_u32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
    };
    auto push_u16 = [&](std::uint16_t v) {
        b.push_back(static_cast<unsigned char>(v));
        b.push_back(static_cast<unsigned char>(v >> 8));
    };
    auto push_tag = [&](const char* t) { b.insert(b.end(), t, t + 4); };
    push_tag("RIFF");
    push_u32(36 + static_cast<std::uint32_t>(payload.size()));
    push_tag("WAVE");
    push_tag("fmt ");
    push_u32(16);
    push_u16(format);
    push_u16(channels);
    push_u32(rate);
    push_u32(rate * channels * bits / 8);
    push_u16(static_cast<std::uint16_t>(channels * bits / 8));
    push_u16(bits);
    push_tag("data");
    push_u32(static_cast<std::uint32_t>(payload.size()));
    b.insert(b.end(), payload.begin(), payload.end());
    return b;
}

} // namespace

TEST_CASE("load_wav scales 16-bit samples to [-1,1]") {
    // [16384, -16384] -> [0.5, -0.5]
    std::vector<unsigned char> payload = {0x00, 0x40, 0x00, 0xC0};
    auto p = temp_file("mono16.wav");
    write_bytes(p, build_wav(1, 1, 2000, 16, payload));
    auto rec = load_wav(p);
    REQUIRE(rec.samples.size() == 2);
    CHECK(rec.samples[0] == Catch::Approx(0.5));
    CHECK(rec.samples[1] == Catch::Approx(-0.5));
    CHECK(rec.sample_rate == 2000);
    CHECK(rec.id == "mono16");
}

TEST_CASE("load_wav averages stereo channels") {
    // float32 stereo: channel A = 1.0, channel B = 0.0 -> mono 0.5
    std::vector<unsigned char> payload(8, 0);
    const float one = 1.0f;
    std::memcpy(payload.data(), &one, 4);
    auto p = temp_file("stereo_f32.wav");
    write_bytes(p, build_wav(3, 2, 4000, 32, payload));
    auto rec = load_wav(p);
    REQUIRE(rec.samples.size() == 1);
    CHECK(rec.samples[0] == Catch::Approx(0.5));
}

TEST_CASE("load_wav rejects zero-length data chunk") {
    auto p = temp_file("empty.wav");
    write_bytes(p, build_wav(1, 1, 2000, 16, {}));
    CHECK_THROWS_AS(load_wav(p), MalformedWav);
}

TEST_CASE("load_wav rejects compressed encodings and bad headers") {
    auto p = temp_file("alaw.wav");
    write_bytes(p, build_wav(6 /* a-law */, 1, 2000, 8, {0x00, 0x01}));
    CHECK_THROWS_AS(load_wav(p), UnsupportedEncoding);

    auto q = temp_file("garbage.wav");
    write_bytes(q, std::vector<unsigned char>(64, 0x42));
    CHECK_THROWS_AS(load_wav(q), MalformedWav);
}

TEST_CASE("load_wav 24-bit round trip of known values") {
    // 0x400000 = 4194304 -> 4194304/8388608 = 0.5
    std::vector<unsigned char> payload = {0x00, 0x00, 0x40, 0x00, 0x00, 0xC0};
    auto p = temp_file("mono24.wav");
    write_bytes(p, build_wav(1, 1, 2000, 24, payload));
    auto rec = load_wav(p);
    REQUIRE(rec.samples.size() == 2);
    CHECK(rec.samples[0] == Catch::Approx(0.5));
    CHECK(rec.samples[1] == Catch::Approx(-0.5));
}

TEST_CASE("save_wav/load_wav round trip") {
    Recording r = make_sine(100.0, 0.5, 2000, 0.8);
    auto p = temp_file("roundtrip.wav");
    save_wav(p, r.samples, r.sample_rate);
    auto back = load_wav(p);
    REQUIRE(back.samples.size() == r.samples.size());
    double max_err = 0.0;
    for (std::size_t i = 0; i < r.samples.size(); ++i)
        max_err = std::max(max_err, std::abs(back.samples[i] - r.samples[i]));
    CHECK(max_err < 1.0 / 32000.0); // 16-bit quantization
}

TEST_CASE("resample preserves a pure tone's frequency") {
    auto rec = make_sine(100.0, 1.0, 4000);
    auto out = resample(rec, 2000);
    CHECK(std::abs(static_cast<double>(out.samples.size()) / out.sample_rate -
                   static_cast<double>(rec.samples.size()) / rec.sample_rate) <=
          1.0 / 2000.0 + 1e-12);
    const double f = dominant_frequency(out.samples, out.sample_rate);
    CHECK(std::abs(f - 100.0) < 1.0);
}

TEST_CASE("resample to the same rate is the identity") {
    auto rec = make_sine(100.0, 0.25, 2000);
    auto out = resample(rec, 2000);
    REQUIRE(out.samples.size() == rec.samples.size());
    for (std::size_t i = 0; i < rec.samples.size(); ++i)
        REQUIRE(out.samples[i] == rec.samples[i]);
}

TEST_CASE("resample rejects rates below the passband Nyquist") {
    auto rec = make_sine(100.0, 0.25, 2000);
    CHECK_THROWS_AS(resample(rec, 1000), RateTooLow);
}

TEST_CASE("resample reproduces an in-band tone pointwise") {
    auto rec = make_sine(250.0, 1.0, 2000);
    auto out = resample(rec, 4000);
    const double f = dominant_frequency(out.samples, out.sample_rate);
    CHECK(std::abs(f - 250.0) < 1.0);
    // away from the edges, the upsampled tone must match the ideal one
    const std::size_t n = out.samples.size();
    double worst = 0.0;
    for (std::size_t i = n / 10; i < n - n / 10; ++i) {
        const double want = std::sin(2.0 * 3.14159265358979323846 * 250.0 *
                                     static_cast<double>(i) / 4000.0);
        worst = std::max(worst, std::abs(out.samples[i] - want));
    }
    CHECK(worst < 2e-3);
}

TEST_CASE("bandpass suppresses DC") {
    Recording rec;
    rec.sample_rate = 2000;
    rec.id = "dc";
    rec.samples.assign(4000, 1.0);
    auto out = bandpass(rec);
    REQUIRE(out.samples.size() == rec.samples.size());
    double peak = 0.0;
    for (std::size_t i = 1000; i < 3000; ++i) peak = std::max(peak, std::abs(out.samples[i]));
    CHECK(peak < 0.01);
}

TEST_CASE("bandpass passes 100 Hz with less than 5% RMS change") {
    auto rec = make_sine(100.0, 2.0, 2000);
    auto out = bandpass(rec);
    const double in_rms = central_rms(rec.samples);
    const double out_rms = central_rms(out.samples);
    CHECK(std::abs(out_rms - in_rms) / in_rms < 0.05);
}

TEST_CASE("bandpass attenuates 1500 Hz at 4 kHz by at least 20 dB") {
    auto rec = make_sine(1500.0, 2.0, 4000);
    auto out = bandpass(rec);
    const double gain = central_rms(out.samples) / central_rms(rec.samples);
    CHECK(20.0 * std::log10(1.0 / gain) >= 20.0);
}

TEST_CASE("bandpass is linear") {
    Rng rng(101);
    Recording x = make_sine(80.0, 1.0, 2000);
    Recording y = make_sine(230.0, 1.0, 2000);
    for (auto& v : y.samples) v += 0.1 * rng.normal();
    const double a = 1.7, b = -0.6;
    Recording mix = x;
    for (std::size_t i = 0; i < mix.samples.size(); ++i)
        mix.samples[i] = a * x.samples[i] + b * y.samples[i];

    auto fx = bandpass(x), fy = bandpass(y), fmix = bandpass(mix);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < fmix.samples.size(); ++i) {
        const double want = a * fx.samples[i] + b * fy.samples[i];
        num += (fmix.samples[i] - want) * (fmix.samples[i] - want);
        den += want * want;
    }
    CHECK(std::sqrt(num / den) < 1e-9);
}

TEST_CASE("bandpass is zero-phase for an in-band tone") {
    auto rec = make_sine(100.0, 2.0, 2000);
    auto out = bandpass(rec);
    // cross-correlation peak lag must be 0; search within half a period so
    // the tone's own periodicity cannot tie with the true peak
    int best_lag = -999;
    double best = -1e300;
    for (int lag = -9; lag <= 9; ++lag) {
        double acc = 0.0;
        for (std::size_t i = 100; i + 100 < rec.samples.size(); ++i) {
            const auto j = static_cast<std::ptrdiff_t>(i) + lag;
            acc += rec.samples[i] * out.samples[static_cast<std::size_t>(j)];
        }
        if (acc > best) {
            best = acc;
            best_lag = lag;
        }
    }
    CHECK(best_lag == 0);
}

TEST_CASE("normalize fixes the absolute maximum at 1") {
    Recording rec;
    rec.sample_rate = 2000;
    rec.id = "n";
    rec.samples = {0.5, -0.25};
    auto out = normalize(rec);
    CHECK(out.samples[0] == 1.0);
    CHECK(out.samples[1] == -0.5);

    rec.samples = {-2.0, 1.0};
    out = normalize(rec);
    CHECK(out.samples[0] == -1.0);
    CHECK(out.samples[1] == 0.5);

    rec.samples = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(normalize(rec), DegenerateSignal);
}

TEST_CASE("normalize is idempotent") {
    Rng rng(7);
    Recording rec;
    rec.sample_rate = 2000;
    rec.id = "idem";
    rec.samples.resize(500);
    for (auto& v : rec.samples) v = rng.normal();
    auto once = normalize(rec);
    auto twice = normalize(once);
    for (std::size_t i = 0; i < once.samples.size(); ++i)
        REQUIRE(twice.samples[i] == once.samples[i]);
}
