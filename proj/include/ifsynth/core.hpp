#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifsynth {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// MIDI pitch range of the note corpus and the width of its one-hot encoding.
inline constexpr int kPitchMin = 24;
inline constexpr int kPitchMax = 84;
inline constexpr int kPitchClasses = kPitchMax - kPitchMin + 1;  // 61

inline constexpr int kDefaultSampleRate = 16000;

/// Mono audio buffer. Samples are nominally in [-1, 1].
struct Waveform {
    std::vector<float> samples;
    int sample_rate = kDefaultSampleRate;

    double duration() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

/// Row-major 2-D float array (rows = time frames, cols = frequency bins
/// in the spectral code; generic elsewhere).
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<float> v;

    Mat() = default;
    Mat(int r, int c, float fill = 0.0f) : rows(r), cols(c), v(static_cast<size_t>(r) * c, fill) {}

    float& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
    float at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
    size_t size() const { return v.size(); }
};

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double x) {
    return x - kTwoPi * std::ceil((x - kPi) / kTwoPi);
}

/// Signal-to-noise ratio in dB of `approx` against `ref` over min length.
inline double snr_db(const std::vector<float>& ref, const std::vector<float>& approx) {
    size_t n = std::min(ref.size(), approx.size());
    double sig = 0.0, err = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double r = ref[i];
        double e = r - approx[i];
        sig += r * r;
        err += e * e;
    }
    if (err == 0.0) return 300.0;  // numerically exact
    if (sig == 0.0) return -300.0;
    return 10.0 * std::log10(sig / err);
}

inline int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace ifsynth
