#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ifsynth/core.hpp"

namespace ifsynth::spectral {

enum class Channel1Mode { Phase, IF };
enum class FreqScale { Linear, Mel };

/// Affine maps taking raw log-magnitude / phase-derived values into [-0.8, 0.8].
/// normalized = (raw + shift) * scale.
struct NormalizationStats {
    bool fitted = false;
    float mag_shift = 0.0f;
    float mag_scale = 1.0f;
    float ch1_shift = 0.0f;
    float ch1_scale = 1.0f;

    float norm_mag(float x) const { return (x + mag_shift) * mag_scale; }
    float denorm_mag(float y) const { return y / mag_scale - mag_shift; }
    float norm_ch1(float x) const { return (x + ch1_shift) * ch1_scale; }
    float denorm_ch1(float y) const { return y / ch1_scale - ch1_shift; }
};

struct RepresentationConfig {
    int frame_size = 1024;
    int stride = 256;  // always frame_size / 4
    Channel1Mode channel1_mode = Channel1Mode::IF;
    FreqScale freq_scale = FreqScale::Linear;
    int mel_bins = 512;  // == bins(); no dimensional compression
    float log_mag_floor = 1e-6f;
    int sample_rate = kDefaultSampleRate;
    NormalizationStats norm;

    int bins() const { return frame_size / 2; }  // Nyquist trimmed, DC kept

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

/// Magnitude/phase pair from the analysis transform. Phase is in (-pi, pi];
/// zero-magnitude cells carry phase 0 by convention.
struct ComplexSpectrogram {
    Mat magnitude;
    Mat phase;
};

/// (frames x bins x 2) image; channel 0 = normalized log magnitude,
/// channel 1 = normalized phase or IF. Values in [-1, 1].
struct SpectralImage {
    int frames = 0;
    int bins = 0;
    std::vector<float> data;  // interleaved [frame][bin][channel]
    RepresentationConfig config;

    float& at(int f, int b, int c) { return data[(static_cast<size_t>(f) * bins + b) * 2 + c]; }
    float at(int f, int b, int c) const { return data[(static_cast<size_t>(f) * bins + b) * 2 + c]; }

    /// One channel as a frames x bins matrix.
    Mat channel(int c) const;
};

// ---------------------------------------------------------------------------
// Analysis / synthesis
// ---------------------------------------------------------------------------

/// Number of STFT frames encode will produce for a waveform of `num_samples`:
/// the next power of two >= ceil(num_samples / stride).
int target_frames(int num_samples, int stride);

ComplexSpectrogram stft(const Waveform& w, const RepresentationConfig& cfg);
Waveform istft(const ComplexSpectrogram& s, const RepresentationConfig& cfg);

/// Per-bin phase unwrapping along the time axis; successive output
/// differences lie in (-pi, pi]. Frame 0 is unchanged.
Mat unwrap_phase(const Mat& phase);

/// Instantaneous frequency in [-1, 1]: wrapped per-frame phase difference / pi.
/// Row 0 carries the initial phase / pi so the map is invertible.
Mat phase_to_if(const Mat& phase);

/// Inverse of phase_to_if: cumulative sum of IF * pi, wrapped to (-pi, pi].
Mat if_to_phase(const Mat& ifreq);

// ---------------------------------------------------------------------------
// Mel scaling (square filterbank, no dimensional compression)
// ---------------------------------------------------------------------------

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filterbank with as many mel rows as linear bins. Every row
/// sums to 1 (rows whose triangle covers no bin center fall back to the
/// nearest linear bin). The pseudo-inverse is computed lazily.
class MelFilterbank {
  public:
    MelFilterbank(int bins, int sample_rate);

    int bins() const { return bins_; }

    /// mel = M * linear, applied per frame (rows of the input).
    Mat forward(const Mat& linear_spec) const;

    /// Pseudo-inverse applied per frame. `clamp_nonneg` floors the output
    /// at 0 (used for magnitudes; IF stays signed).
    Mat inverse(const Mat& mel_spec, bool clamp_nonneg) const;

    /// Dense (mel_bins x linear_bins) filterbank matrix.
    const Mat& matrix() const { return dense_; }

    /// Dense (linear_bins x mel_bins) Moore-Penrose pseudo-inverse.
    const Mat& pinv_matrix() const;

    /// Full-precision pseudo-inverse entry (row = linear bin, col = mel bin).
    double pinv_entry(int lin_bin, int mel_bin) const;

  private:
    int bins_;
    int sample_rate_;
    Mat dense_;
    // CSR of dense_ for the forward apply
    std::vector<int> row_ptr_, col_idx_;
    std::vector<float> val_;
    mutable std::once_flag pinv_once_;
    mutable Mat pinv_;
    mutable std::vector<double> pinv_d_;
};

/// Shared filterbank instance per (bins, sample_rate).
const MelFilterbank& mel_filterbank(int bins, int sample_rate);

/// Convenience wrappers used by the codec paths.
Mat mel_forward(const Mat& linear_spec, const RepresentationConfig& cfg);
Mat mel_inverse(const Mat& mel_spec, const RepresentationConfig& cfg);

// ---------------------------------------------------------------------------
// Codec
// ---------------------------------------------------------------------------

SpectralImage encode(const Waveform& w, const RepresentationConfig& cfg);
Waveform decode(const SpectralImage& img);

/// Fit the per-channel affine maps so the observed min/max of the raw
/// channels land exactly on -0.8 / +0.8.
NormalizationStats fit_normalization(const std::vector<Waveform>& sample,
                                     const RepresentationConfig& cfg);

/// Raw (pre-normalization) channels of the encode pipeline; used by
/// fit_normalization and exposed for diagnostics.
void raw_channels(const Waveform& w, const RepresentationConfig& cfg, Mat& ch0, Mat& ch1);

// ---------------------------------------------------------------------------
// Presets and serialization
// ---------------------------------------------------------------------------

/// Named configurations: if_linear_lores, if_linear_hires, if_mel_lores,
/// if_mel_hires, phase_lores, phase_hires, if_linear_desk.
RepresentationConfig preset(const std::string& name);
std::vector<std::string> preset_names();

std::string config_to_json(const RepresentationConfig& cfg);
RepresentationConfig config_from_json(const std::string& text);

/// Raw little-endian float32 at `path`, shape + config sidecar at `path`.json.
void save_image(const SpectralImage& img, const std::string& path);
SpectralImage load_image(const std::string& path);

void save_normalization(const NormalizationStats& stats, const std::string& path);
NormalizationStats load_normalization(const std::string& path);

}  // namespace ifsynth::spectral
