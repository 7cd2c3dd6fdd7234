#include "ifsynth/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

using json = nlohmann::json;

namespace ifsynth::spectral {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Wrap with a hair of slack past +pi so float-rounded pi (which exceeds
// double pi) stays on the +1 side of the boundary instead of flipping sign.
double wrap_angle_tol(double x) {
    const double hi = kPi * (1.0 + 1e-7);
    return x - kTwoPi * std::ceil((x - hi) / kTwoPi);
}

// In-place iterative radix-2 FFT. Frame sizes are powers of two by
// construction, so this covers everything the codec needs.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const int n = static_cast<int>(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        double ang = kTwoPi / len * (inverse ? 1.0 : -1.0);
        std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (int k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= n;
    }
}

std::vector<double> hann_window(int n) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = 0.5 * (1.0 - std::cos(kTwoPi * i / n));
    return w;
}

}  // namespace

void RepresentationConfig::validate() const {
    if (!is_pow2(frame_size) || frame_size < 8)
        throw std::invalid_argument("RepresentationConfig: frame_size must be a power of two >= 8");
    if (stride * 4 != frame_size)
        throw std::invalid_argument("RepresentationConfig: stride must be frame_size/4 (75% overlap)");
    if (freq_scale == FreqScale::Mel && mel_bins != bins())
        throw std::invalid_argument("RepresentationConfig: mel_bins must equal the linear bin count");
    if (!(log_mag_floor > 0.0f))
        throw std::invalid_argument("RepresentationConfig: log_mag_floor must be positive");
    if (sample_rate <= 0)
        throw std::invalid_argument("RepresentationConfig: sample_rate must be positive");
}

Mat SpectralImage::channel(int c) const {
    Mat m(frames, bins);
    for (int f = 0; f < frames; ++f)
        for (int b = 0; b < bins; ++b) m.at(f, b) = at(f, b, c);
    return m;
}

int target_frames(int num_samples, int stride) {
    int needed = (num_samples + stride - 1) / stride;
    return next_pow2(needed);
}

ComplexSpectrogram stft(const Waveform& w, const RepresentationConfig& cfg) {
    cfg.validate();
    const int n = static_cast<int>(w.samples.size());
    if (n == 0) throw std::invalid_argument("stft: empty waveform");
    if (n < cfg.frame_size)
        throw std::invalid_argument("stft: waveform shorter than one frame (" +
                                    std::to_string(n) + " < " + std::to_string(cfg.frame_size) + ")");

    const int frames = target_frames(n, cfg.stride);
    const int bins = cfg.bins();
    const std::vector<double> win = hann_window(cfg.frame_size);

    ComplexSpectrogram out;
    out.magnitude = Mat(frames, bins);
    out.phase = Mat(frames, bins);

    std::vector<std::complex<double>> buf(cfg.frame_size);
    for (int f = 0; f < frames; ++f) {
        const int start = f * cfg.stride;
        for (int i = 0; i < cfg.frame_size; ++i) {
            int idx = start + i;
            double s = idx < n ? w.samples[idx] : 0.0;  // zero-pad the tail
            buf[i] = {s * win[i], 0.0};
        }
        fft_inplace(buf, false);
        for (int b = 0; b < bins; ++b) {
            double mag = std::abs(buf[b]);
            out.magnitude.at(f, b) = static_cast<float>(mag);
            out.phase.at(f, b) = mag == 0.0 ? 0.0f : static_cast<float>(wrap_angle(std::arg(buf[b])));
        }
    }
    return out;
}

Waveform istft(const ComplexSpectrogram& s, const RepresentationConfig& cfg) {
    cfg.validate();
    const int frames = s.magnitude.rows;
    const int bins = s.magnitude.cols;
    if (bins != cfg.bins())
        throw std::invalid_argument("istft: spectrogram has " + std::to_string(bins) +
                                    " bins, config expects " + std::to_string(cfg.bins()));
    if (s.phase.rows != frames || s.phase.cols != bins)
        throw std::invalid_argument("istft: magnitude/phase shape mismatch");
    if (frames == 0) throw std::invalid_argument("istft: empty spectrogram");

    const int len = (frames - 1) * cfg.stride + cfg.frame_size;
    const std::vector<double> win = hann_window(cfg.frame_size);

    std::vector<double> acc(len, 0.0), den(len, 0.0);
    std::vector<std::complex<double>> buf(cfg.frame_size);
    for (int f = 0; f < frames; ++f) {
        for (int b = 0; b < bins; ++b) {
            double mag = s.magnitude.at(f, b);
            double ph = s.phase.at(f, b);
            buf[b] = std::polar(mag, ph);
        }
        // conjugate symmetry; the trimmed Nyquist bin re-enters as zero
        buf[cfg.frame_size / 2] = 0.0;
        for (int b = 1; b < cfg.frame_size / 2; ++b) buf[cfg.frame_size - b] = std::conj(buf[b]);
        fft_inplace(buf, true);
        const int start = f * cfg.stride;
        for (int i = 0; i < cfg.frame_size; ++i) {
            acc[start + i] += win[i] * buf[i].real();
            den[start + i] += win[i] * win[i];
        }
    }

    Waveform out;
    out.sample_rate = cfg.sample_rate;
    out.samples.resize(len);
    // Floor the window-sum so near-zero denominators at the very first and
    // last samples cannot amplify spectrogram modifications into spikes.
    const double den_floor = 1e-4;
    for (int i = 0; i < len; ++i)
        out.samples[i] = static_cast<float>(acc[i] / std::max(den[i], den_floor));
    return out;
}

Mat unwrap_phase(const Mat& phase) {
    Mat out(phase.rows, phase.cols);
    for (int b = 0; b < phase.cols; ++b) {
        double run = phase.at(0, b);
        out.at(0, b) = static_cast<float>(run);
        for (int t = 1; t < phase.rows; ++t) {
            run += wrap_angle_tol(static_cast<double>(phase.at(t, b)) - phase.at(t - 1, b));
            out.at(t, b) = static_cast<float>(run);
        }
    }
    return out;
}

Mat phase_to_if(const Mat& phase) {
    if (phase.rows < 2) throw std::invalid_argument("phase_to_if: need at least 2 frames");
    Mat out(phase.rows, phase.cols);
    for (int b = 0; b < phase.cols; ++b) {
        out.at(0, b) = static_cast<float>(std::clamp(phase.at(0, b) / kPi, -1.0, 1.0));
        for (int t = 1; t < phase.rows; ++t) {
            double d = wrap_angle_tol(static_cast<double>(phase.at(t, b)) - phase.at(t - 1, b));
            out.at(t, b) = static_cast<float>(std::clamp(d / kPi, -1.0, 1.0));
        }
    }
    return out;
}

Mat if_to_phase(const Mat& ifreq) {
    Mat out(ifreq.rows, ifreq.cols);
    for (int b = 0; b < ifreq.cols; ++b) {
        double p = wrap_angle_tol(static_cast<double>(ifreq.at(0, b)) * kPi);
        out.at(0, b) = static_cast<float>(p);
        for (int t = 1; t < ifreq.rows; ++t) {
            p = wrap_angle_tol(p + static_cast<double>(ifreq.at(t, b)) * kPi);
            out.at(t, b) = static_cast<float>(p);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mel
// ---------------------------------------------------------------------------

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank::MelFilterbank(int bins, int sample_rate) : bins_(bins), sample_rate_(sample_rate) {
    const double nyquist = sample_rate / 2.0;
    const double bin_hz = nyquist / bins;  // bin b sits at b * sr / frame_size
    const double mel_hi = hz_to_mel(nyquist);

    std::vector<double> edges(bins + 2);
    for (int k = 0; k < bins + 2; ++k) edges[k] = mel_to_hz(mel_hi * k / (bins + 1));

    dense_ = Mat(bins, bins);
    for (int k = 0; k < bins; ++k) {
        const double fl = edges[k], fc = edges[k + 1], fr = edges[k + 2];
        double sum = 0.0;
        for (int b = 0; b < bins; ++b) {
            double f = b * bin_hz;
            double wt = 0.0;
            if (f >= fl && f <= fc && fc > fl)
                wt = (f - fl) / (fc - fl);
            else if (f > fc && f <= fr && fr > fc)
                wt = (fr - f) / (fr - fc);
            dense_.at(k, b) = static_cast<float>(wt);
            sum += wt;
        }
        if (sum == 0.0) {
            // triangle narrower than the bin spacing: snap to the nearest bin
            int nearest = std::clamp(static_cast<int>(std::lround(fc / bin_hz)), 0, bins - 1);
            dense_.at(k, nearest) = 1.0f;
            sum = 1.0;
        }
        for (int b = 0; b < bins; ++b)
            dense_.at(k, b) = static_cast<float>(dense_.at(k, b) / sum);
    }

    row_ptr_.assign(bins + 1, 0);
    for (int k = 0; k < bins; ++k) {
        for (int b = 0; b < bins; ++b) {
            if (dense_.at(k, b) != 0.0f) {
                col_idx_.push_back(b);
                val_.push_back(dense_.at(k, b));
            }
        }
        row_ptr_[k + 1] = static_cast<int>(col_idx_.size());
    }
}

Mat MelFilterbank::forward(const Mat& linear_spec) const {
    if (linear_spec.cols != bins_)
        throw std::invalid_argument("mel_forward: expected " + std::to_string(bins_) + " bins, got " +
                                    std::to_string(linear_spec.cols));
    Mat out(linear_spec.rows, bins_);
    for (int f = 0; f < linear_spec.rows; ++f) {
        const float* row = &linear_spec.v[static_cast<size_t>(f) * bins_];
        for (int k = 0; k < bins_; ++k) {
            double acc = 0.0;
            for (int i = row_ptr_[k]; i < row_ptr_[k + 1]; ++i) acc += static_cast<double>(val_[i]) * row[col_idx_[i]];
            out.at(f, k) = static_cast<float>(acc);
        }
    }
    return out;
}

const Mat& MelFilterbank::pinv_matrix() const {
    std::call_once(pinv_once_, [this] {
        Eigen::MatrixXd m(bins_, bins_);
        for (int r = 0; r < bins_; ++r)
            for (int c = 0; c < bins_; ++c) m(r, c) = dense_.at(r, c);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
        Eigen::MatrixXd pinv = cod.pseudoInverse();
        pinv_ = Mat(bins_, bins_);
        pinv_d_.resize(static_cast<size_t>(bins_) * bins_);
        for (int r = 0; r < bins_; ++r)
            for (int c = 0; c < bins_; ++c) {
                pinv_.at(r, c) = static_cast<float>(pinv(r, c));
                pinv_d_[static_cast<size_t>(r) * bins_ + c] = pinv(r, c);
            }
    });
    return pinv_;
}

double MelFilterbank::pinv_entry(int lin_bin, int mel_bin) const {
    pinv_matrix();
    return pinv_d_[static_cast<size_t>(lin_bin) * bins_ + mel_bin];
}

Mat MelFilterbank::inverse(const Mat& mel_spec, bool clamp_nonneg) const {
    if (mel_spec.cols != bins_)
        throw std::invalid_argument("mel_inverse: expected " + std::to_string(bins_) + " bins, got " +
                                    std::to_string(mel_spec.cols));
    pinv_matrix();
    Mat out(mel_spec.rows, bins_);
    for (int f = 0; f < mel_spec.rows; ++f) {
        const float* row = &mel_spec.v[static_cast<size_t>(f) * bins_];
        for (int b = 0; b < bins_; ++b) {
            double acc = 0.0;
            const double* prow = &pinv_d_[static_cast<size_t>(b) * bins_];
            for (int k = 0; k < bins_; ++k) acc += prow[k] * row[k];
            float y = static_cast<float>(acc);
            out.at(f, b) = clamp_nonneg ? std::max(0.0f, y) : y;
        }
    }
    return out;
}

const MelFilterbank& mel_filterbank(int bins, int sample_rate) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<MelFilterbank>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(bins, sample_rate);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<MelFilterbank>(bins, sample_rate)).first;
    return *it->second;
}

Mat mel_forward(const Mat& linear_spec, const RepresentationConfig& cfg) {
    return mel_filterbank(cfg.bins(), cfg.sample_rate).forward(linear_spec);
}

Mat mel_inverse(const Mat& mel_spec, const RepresentationConfig& cfg) {
    return mel_filterbank(cfg.bins(), cfg.sample_rate).inverse(mel_spec, /*clamp_nonneg=*/true);
}

// ---------------------------------------------------------------------------
// Codec
// ---------------------------------------------------------------------------

void raw_channels(const Waveform& w, const RepresentationConfig& cfg, Mat& ch0, Mat& ch1) {
    ComplexSpectrogram s = stft(w, cfg);

    ch0 = Mat(s.magnitude.rows, s.magnitude.cols);
    for (size_t i = 0; i < s.magnitude.v.size(); ++i)
        ch0.v[i] = std::log(std::max(s.magnitude.v[i], cfg.log_mag_floor));

    ch1 = cfg.channel1_mode == Channel1Mode::IF ? phase_to_if(s.phase) : s.phase;
    if (cfg.channel1_mode == Channel1Mode::Phase) {
        for (auto& p : ch1.v) p = static_cast<float>(p / kPi);  // scale wrapped phase into [-1, 1]
    }

    // both channels move to the mel scale: log magnitudes and IF alike
    if (cfg.freq_scale == FreqScale::Mel) {
        const MelFilterbank& fb = mel_filterbank(cfg.bins(), cfg.sample_rate);
        ch0 = fb.forward(ch0);
        ch1 = fb.forward(ch1);
    }
}

SpectralImage encode(const Waveform& w, const RepresentationConfig& cfg) {
    cfg.validate();
    if (!cfg.norm.fitted)
        throw std::invalid_argument("encode: normalization stats not fitted for this config");

    Mat ch0, ch1;
    raw_channels(w, cfg, ch0, ch1);

    SpectralImage img;
    img.frames = ch0.rows;
    img.bins = ch0.cols;
    img.config = cfg;
    img.data.resize(static_cast<size_t>(img.frames) * img.bins * 2);
    for (int f = 0; f < img.frames; ++f) {
        for (int b = 0; b < img.bins; ++b) {
            float m = cfg.norm.norm_mag(ch0.at(f, b));
            float p = cfg.norm.norm_ch1(ch1.at(f, b));
            img.at(f, b, 0) = std::clamp(m, -1.0f, 1.0f);
            img.at(f, b, 1) = std::clamp(p, -1.0f, 1.0f);
        }
    }
    return img;
}

Waveform decode(const SpectralImage& img) {
    const RepresentationConfig& cfg = img.config;
    cfg.validate();
    if (!cfg.norm.fitted) throw std::invalid_argument("decode: normalization stats not fitted");
    for (float x : img.data)
        if (!std::isfinite(x)) throw std::invalid_argument("decode: image contains NaN/Inf");

    Mat logmag(img.frames, img.bins), ch1(img.frames, img.bins);
    for (int f = 0; f < img.frames; ++f) {
        for (int b = 0; b < img.bins; ++b) {
            logmag.at(f, b) = cfg.norm.denorm_mag(img.at(f, b, 0));
            ch1.at(f, b) = cfg.norm.denorm_ch1(img.at(f, b, 1));
        }
    }

    if (cfg.freq_scale == FreqScale::Mel) {
        // pull both channels back to the linear frequency axis; log magnitudes
        // and IF are signed, so neither path clamps
        const MelFilterbank& fb = mel_filterbank(cfg.bins(), cfg.sample_rate);
        logmag = fb.inverse(logmag, /*clamp_nonneg=*/false);
        ch1 = fb.inverse(ch1, /*clamp_nonneg=*/false);
    }

    Mat mag(img.frames, img.bins);
    for (size_t i = 0; i < logmag.v.size(); ++i) mag.v[i] = std::exp(logmag.v[i]);

    Mat phase;
    if (cfg.channel1_mode == Channel1Mode::IF) {
        phase = if_to_phase(ch1);
    } else {
        phase = Mat(ch1.rows, ch1.cols);
        for (size_t i = 0; i < ch1.v.size(); ++i)
            phase.v[i] = static_cast<float>(wrap_angle(static_cast<double>(ch1.v[i]) * kPi));
    }

    ComplexSpectrogram s{std::move(mag), std::move(phase)};
    return istft(s, cfg);
}

NormalizationStats fit_normalization(const std::vector<Waveform>& sample,
                                     const RepresentationConfig& cfg) {
    if (sample.empty()) throw std::invalid_argument("fit_normalization: empty sample");
    cfg.validate();

    double mag_min = 1e300, mag_max = -1e300, ch1_min = 1e300, ch1_max = -1e300;
    Mat ch0, ch1;
    for (const Waveform& w : sample) {
        raw_channels(w, cfg, ch0, ch1);
        for (float x : ch0.v) {
            mag_min = std::min(mag_min, static_cast<double>(x));
            mag_max = std::max(mag_max, static_cast<double>(x));
        }
        for (float x : ch1.v) {
            ch1_min = std::min(ch1_min, static_cast<double>(x));
            ch1_max = std::max(ch1_max, static_cast<double>(x));
        }
    }

    auto affine = [](double lo, double hi, float& shift, float& scale) {
        double range = hi - lo;
        if (range < 1e-12) range = 1e-12;
        shift = static_cast<float>(-(lo + hi) / 2.0);
        scale = static_cast<float>(1.6 / range);
    };

    NormalizationStats st;
    affine(mag_min, mag_max, st.mag_shift, st.mag_scale);
    affine(ch1_min, ch1_max, st.ch1_shift, st.ch1_scale);
    st.fitted = true;
    return st;
}

// ---------------------------------------------------------------------------
// Presets and serialization
// ---------------------------------------------------------------------------

RepresentationConfig preset(const std::string& name) {
    RepresentationConfig c;
    auto res = [&c](int frame) {
        c.frame_size = frame;
        c.stride = frame / 4;
        c.mel_bins = frame / 2;
    };
    if (name == "if_linear_lores") {
        res(1024);
    } else if (name == "if_linear_hires") {
        res(2048);
    } else if (name == "if_mel_lores") {
        res(1024);
        c.freq_scale = FreqScale::Mel;
    } else if (name == "if_mel_hires") {
        res(2048);
        c.freq_scale = FreqScale::Mel;
    } else if (name == "phase_lores") {
        res(1024);
        c.channel1_mode = Channel1Mode::Phase;
    } else if (name == "phase_hires") {
        res(2048);
        c.channel1_mode = Channel1Mode::Phase;
    } else if (name == "if_linear_desk") {
        res(256);
    } else {
        throw std::invalid_argument("unknown representation preset: " + name);
    }
    return c;
}

std::vector<std::string> preset_names() {
    return {"if_linear_lores", "if_linear_hires", "if_mel_lores", "if_mel_hires",
            "phase_lores",     "phase_hires",     "if_linear_desk"};
}

namespace {

json norm_to_json_obj(const NormalizationStats& n) {
    return json{{"fitted", n.fitted},
                {"mag_shift", n.mag_shift},
                {"mag_scale", n.mag_scale},
                {"ch1_shift", n.ch1_shift},
                {"ch1_scale", n.ch1_scale}};
}

NormalizationStats norm_from_json_obj(const json& j) {
    NormalizationStats n;
    n.fitted = j.at("fitted").get<bool>();
    n.mag_shift = j.at("mag_shift").get<float>();
    n.mag_scale = j.at("mag_scale").get<float>();
    n.ch1_shift = j.at("ch1_shift").get<float>();
    n.ch1_scale = j.at("ch1_scale").get<float>();
    return n;
}

json config_to_json_obj(const RepresentationConfig& c) {
    return json{{"frame_size", c.frame_size},
                {"stride", c.stride},
                {"channel1_mode", c.channel1_mode == Channel1Mode::IF ? "if" : "phase"},
                {"freq_scale", c.freq_scale == FreqScale::Mel ? "mel" : "linear"},
                {"mel_bins", c.mel_bins},
                {"log_mag_floor", c.log_mag_floor},
                {"sample_rate", c.sample_rate},
                {"norm", norm_to_json_obj(c.norm)}};
}

RepresentationConfig config_from_json_obj(const json& j) {
    RepresentationConfig c;
    c.frame_size = j.at("frame_size").get<int>();
    c.stride = j.at("stride").get<int>();
    std::string mode = j.at("channel1_mode").get<std::string>();
    c.channel1_mode = mode == "if" ? Channel1Mode::IF : Channel1Mode::Phase;
    std::string scale = j.at("freq_scale").get<std::string>();
    c.freq_scale = scale == "mel" ? FreqScale::Mel : FreqScale::Linear;
    c.mel_bins = j.at("mel_bins").get<int>();
    c.log_mag_floor = j.at("log_mag_floor").get<float>();
    c.sample_rate = j.at("sample_rate").get<int>();
    if (j.contains("norm")) c.norm = norm_from_json_obj(j.at("norm"));
    return c;
}

}  // namespace

std::string config_to_json(const RepresentationConfig& cfg) {
    return config_to_json_obj(cfg).dump(2);
}

RepresentationConfig config_from_json(const std::string& text) {
    return config_from_json_obj(json::parse(text));
}

void save_image(const SpectralImage& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_image: cannot open " + path);
    f.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size() * sizeof(float)));
    if (!f) throw std::runtime_error("save_image: write failed for " + path);

    json side{{"shape", {img.frames, img.bins, 2}}, {"config", config_to_json_obj(img.config)}};
    std::ofstream sf(path + ".json");
    if (!sf) throw std::runtime_error("save_image: cannot open " + path + ".json");
    sf << side.dump(2) << "\n";
}

SpectralImage load_image(const std::string& path) {
    std::ifstream sf(path + ".json");
    if (!sf) throw std::runtime_error("load_image: cannot open " + path + ".json");
    json side = json::parse(sf);

    SpectralImage img;
    img.frames = side.at("shape").at(0).get<int>();
    img.bins = side.at("shape").at(1).get<int>();
    img.config = config_from_json_obj(side.at("config"));
    img.data.resize(static_cast<size_t>(img.frames) * img.bins * 2);

    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_image: cannot open " + path);
    f.read(reinterpret_cast<char*>(img.data.data()),
           static_cast<std::streamsize>(img.data.size() * sizeof(float)));
    if (f.gcount() != static_cast<std::streamsize>(img.data.size() * sizeof(float)))
        throw std::runtime_error("load_image: short read from " + path);
    return img;
}

void save_normalization(const NormalizationStats& stats, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_normalization: cannot open " + path);
    f << norm_to_json_obj(stats).dump(2) << "\n";
}

NormalizationStats load_normalization(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_normalization: cannot open " + path);
    return norm_from_json_obj(json::parse(f));
}

}  // namespace ifsynth::spectral
