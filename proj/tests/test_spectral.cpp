#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>

#include "ifsynth/dataio.hpp"
#include "ifsynth/spectral.hpp"

using namespace ifsynth;
using namespace ifsynth::spectral;

namespace {

Waveform make_sine(double freq, int n, int sr = kDefaultSampleRate, double amp = 0.9) {
    Waveform w;
    w.sample_rate = sr;
    w.samples.resize(n);
    for (int i = 0; i < n; ++i)
        w.samples[i] = static_cast<float>(amp * std::sin(kTwoPi * freq * i / sr));
    return w;
}

// Direct O(N^2) DFT of one Hann-windowed frame; the independent oracle for stft.
std::vector<std::complex<double>> dft_frame(const Waveform& w, int start, int frame) {
    std::vector<std::complex<double>> out(frame / 2);
    for (int k = 0; k < frame / 2; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (int i = 0; i < frame; ++i) {
            double win = 0.5 * (1.0 - std::cos(kTwoPi * i / frame));
            double s = (start + i) < static_cast<int>(w.samples.size()) ? w.samples[start + i] : 0.0;
            double ang = -kTwoPi * k * i / frame;
            acc += s * win * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

RepresentationConfig fitted(RepresentationConfig cfg, const std::vector<Waveform>& sample) {
    cfg.norm = fit_normalization(sample, cfg);
    return cfg;
}

Waveform test_note(int pitch, uint64_t seed, double dur = 4.0) {
    dataio::TimbreParams t = dataio::TimbreParams::random(seed);
    return dataio::synth_note(pitch, t, seed, dur);
}

}  // namespace

TEST_SUITE_BEGIN("spectral");

TEST_CASE("stft canonical shapes") {
    Waveform w = make_sine(440.0, 64000);

    RepresentationConfig lo = preset("if_linear_lores");
    ComplexSpectrogram s = stft(w, lo);
    CHECK(s.magnitude.rows == 256);
    CHECK(s.magnitude.cols == 512);

    RepresentationConfig hi = preset("if_linear_hires");
    ComplexSpectrogram s2 = stft(w, hi);
    CHECK(s2.magnitude.rows == 128);
    CHECK(s2.magnitude.cols == 1024);
}

TEST_CASE("stft of silence is zero magnitude and zero phase") {
    Waveform w;
    w.samples.assign(64000, 0.0f);
    ComplexSpectrogram s = stft(w, preset("if_linear_lores"));
    for (float m : s.magnitude.v) CHECK(m == 0.0f);
    for (float p : s.phase.v) CHECK(p == 0.0f);
}

TEST_CASE("stft rejects too-short input") {
    Waveform w = make_sine(440.0, 512);
    CHECK_THROWS_AS(stft(w, preset("if_linear_lores")), std::invalid_argument);
    Waveform empty;
    CHECK_THROWS_AS(stft(empty, preset("if_linear_lores")), std::invalid_argument);
}

TEST_CASE("stft matches the direct DFT oracle and peaks at the tone bin") {
    // 2015.625 Hz = bin 129 center for frame 1024 at 16 kHz
    const double freq = 129.0 * 16000.0 / 1024.0;
    Waveform w = make_sine(freq, 64000);
    RepresentationConfig cfg = preset("if_linear_lores");
    ComplexSpectrogram s = stft(w, cfg);

    for (int f : {3, 100, 200}) {
        auto oracle = dft_frame(w, f * cfg.stride, cfg.frame_size);
        for (int b = 0; b < cfg.bins(); ++b) {
            double om = std::abs(oracle[b]);
            CHECK(s.magnitude.at(f, b) == doctest::Approx(om).epsilon(1e-4).scale(1.0));
            if (om > 1e-3) {
                double op = wrap_angle(std::arg(oracle[b]));
                // circular distance, so +pi and -pi count as equal
                CHECK(std::abs(wrap_angle(op - s.phase.at(f, b))) < 1e-4);
            }
        }
        // peak at bin 129 in every interior frame
        int peak = 0;
        for (int b = 1; b < cfg.bins(); ++b)
            if (s.magnitude.at(f, b) > s.magnitude.at(f, peak)) peak = b;
        CHECK(peak == 129);
    }
}

TEST_CASE("istft round trip reaches 60 dB over the original extent") {
    Waveform w = test_note(60, 7);
    RepresentationConfig cfg = preset("if_linear_lores");
    Waveform back = istft(stft(w, cfg), cfg);
    CHECK(back.samples.size() >= w.samples.size());
    CHECK(snr_db(w.samples, back.samples) >= 60.0);
}

TEST_CASE("istft of a zero spectrogram is silence") {
    RepresentationConfig cfg = preset("if_linear_desk");
    ComplexSpectrogram s;
    s.magnitude = Mat(16, cfg.bins());
    s.phase = Mat(16, cfg.bins());
    Waveform w = istft(s, cfg);
    for (float x : w.samples) CHECK(x == 0.0f);
}

TEST_CASE("istft shape mismatch is rejected") {
    RepresentationConfig cfg = preset("if_linear_lores");
    ComplexSpectrogram s;
    s.magnitude = Mat(16, 100);
    s.phase = Mat(16, 100);
    CHECK_THROWS_AS(istft(s, cfg), std::invalid_argument);
    s.magnitude = Mat(16, cfg.bins());
    s.phase = Mat(15, cfg.bins());
    CHECK_THROWS_AS(istft(s, cfg), std::invalid_argument);
}

TEST_CASE("istft of a single coherent bin synthesizes that sinusoid") {
    RepresentationConfig cfg = preset("if_linear_desk");  // frame 256, stride 64
    const int frames = 64, bin = 20;
    ComplexSpectrogram s;
    s.magnitude = Mat(frames, cfg.bins());
    s.phase = Mat(frames, cfg.bins());
    const double mag = cfg.frame_size / 4.0;  // unit-amplitude cosine under a Hann window
    for (int f = 0; f < frames; ++f) {
        s.magnitude.at(f, bin) = static_cast<float>(mag);
        s.phase.at(f, bin) = static_cast<float>(wrap_angle(kTwoPi * bin * f * cfg.stride / cfg.frame_size));
    }
    Waveform w = istft(s, cfg);

    // overlap-add of unwindowed segments picks up sum(w)/sum(w^2) = 4/3
    const double amp = (2.0 * mag / cfg.frame_size) * (4.0 / 3.0);
    const double freq = static_cast<double>(bin) * cfg.sample_rate / cfg.frame_size;
    int lo = cfg.frame_size, hi = static_cast<int>(w.samples.size()) - cfg.frame_size;
    std::vector<float> expect, got;
    for (int i = lo; i < hi; ++i) {
        expect.push_back(static_cast<float>(amp * std::cos(kTwoPi * freq * i / cfg.sample_rate)));
        got.push_back(w.samples[i]);
    }
    CHECK(snr_db(expect, got) >= 40.0);
}

TEST_CASE("unwrap_phase hand example") {
    Mat p(3, 1);
    p.at(0, 0) = 3.0f;
    p.at(1, 0) = -3.0f;
    p.at(2, 0) = 2.9f;
    Mat u = unwrap_phase(p);
    CHECK(u.at(0, 0) == doctest::Approx(3.0));
    CHECK(u.at(1, 0) == doctest::Approx(3.28319).epsilon(1e-5));
    CHECK(u.at(2, 0) == doctest::Approx(2.9).epsilon(1e-5));
}

TEST_CASE("unwrap_phase is identity when no wrap events occur") {
    Mat p(5, 2);
    float vals[5] = {0.1f, 0.5f, -0.4f, 1.2f, 2.0f};
    for (int t = 0; t < 5; ++t)
        for (int b = 0; b < 2; ++b) p.at(t, b) = vals[t] + 0.05f * b;
    Mat u = unwrap_phase(p);
    for (size_t i = 0; i < p.v.size(); ++i) CHECK(u.v[i] == doctest::Approx(p.v[i]).epsilon(1e-6));

    Mat c(4, 1, 1.3f);
    Mat uc = unwrap_phase(c);
    for (float x : uc.v) CHECK(x == doctest::Approx(1.3f));
}

TEST_CASE("unwrap_phase output diffs always lie in (-pi, pi]") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<float> u(-3.14159f, 3.14159f);
    Mat p(64, 8);
    for (auto& x : p.v) x = u(rng);
    Mat w = unwrap_phase(p);
    for (int b = 0; b < p.cols; ++b)
        for (int t = 1; t < p.rows; ++t) {
            double d = static_cast<double>(w.at(t, b)) - w.at(t - 1, b);
            CHECK(d > -kPi - 1e-6);
            CHECK(d <= kPi + 1e-6);
        }
}

TEST_CASE("phase_to_if on a bin-centered tone is 0.5 at the tone bin") {
    const double freq = 129.0 * 16000.0 / 1024.0;  // delta phase = pi/2 per hop
    Waveform w = make_sine(freq, 64000);
    RepresentationConfig cfg = preset("if_linear_lores");
    ComplexSpectrogram s = stft(w, cfg);
    Mat ifr = phase_to_if(s.phase);
    for (int f = 4; f < 246; ++f) CHECK(ifr.at(f, 129) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("phase_to_if conventions and bounds") {
    Mat p(3, 1, 0.0f);
    Mat z = phase_to_if(p);
    for (float x : z.v) CHECK(x == 0.0f);  // zero phase -> IF 0 everywhere

    // constant nonzero phase: row 0 carries phase/pi, later rows are 0
    Mat c(3, 1, 1.5f);
    Mat ic = phase_to_if(c);
    CHECK(ic.at(0, 0) == doctest::Approx(1.5 / kPi));
    CHECK(ic.at(1, 0) == doctest::Approx(0.0));
    CHECK(ic.at(2, 0) == doctest::Approx(0.0));

    // advancing exactly pi per frame sits on the wrap boundary: IF = 1
    Mat a(4, 1);
    for (int t = 0; t < 4; ++t) a.at(t, 0) = static_cast<float>(wrap_angle(t * kPi));
    Mat ia = phase_to_if(a);
    for (int t = 1; t < 4; ++t) CHECK(ia.at(t, 0) == doctest::Approx(1.0).epsilon(1e-6));

    Mat one(1, 4);
    CHECK_THROWS_AS(phase_to_if(one), std::invalid_argument);
}

TEST_CASE("if_to_phase closed forms") {
    Mat z(5, 3, 0.0f);
    Mat pz = if_to_phase(z);
    for (float x : pz.v) CHECK(x == 0.0f);

    Mat c(8, 1, 0.0f);
    for (int t = 0; t < 8; ++t) c.at(t, 0) = 0.5f;
    Mat pc = if_to_phase(c);
    for (int t = 0; t < 8; ++t)
        CHECK(pc.at(t, 0) == doctest::Approx(wrap_angle((t + 1) * kPi / 2)).epsilon(1e-6));
}

TEST_CASE("if_to_phase inverts phase_to_if on random matrices") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<float> u(-3.14159f, 3.14159f);
    Mat p(32, 16);
    for (auto& x : p.v) x = u(rng);
    Mat back = if_to_phase(phase_to_if(p));
    for (size_t i = 0; i < p.v.size(); ++i)
        CHECK(std::abs(back.v[i] - p.v[i]) < 1e-5);
}

TEST_CASE("mel filterbank rows sum to 1 and preserve a flat spectrum") {
    const MelFilterbank& fb = mel_filterbank(128, 16000);
    for (int k = 0; k < 128; ++k) {
        double sum = 0.0;
        for (int b = 0; b < 128; ++b) sum += fb.matrix().at(k, b);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-5));
    }
    Mat ones(4, 128, 1.0f);
    Mat out = fb.forward(ones);
    for (float x : out.v) CHECK(x == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("mel matrix is 1024x1024 for the high-res config") {
    RepresentationConfig cfg = preset("if_mel_hires");
    const MelFilterbank& fb = mel_filterbank(cfg.bins(), cfg.sample_rate);
    CHECK(fb.matrix().rows == 1024);
    CHECK(fb.matrix().cols == 1024);
}

TEST_CASE("energy in one linear bin lands where the filterbank says") {
    const MelFilterbank& fb = mel_filterbank(128, 16000);
    const int k = 40;
    Mat impulse(1, 128, 0.0f);
    impulse.at(0, k) = 1.0f;
    Mat out = fb.forward(impulse);
    for (int m = 0; m < 128; ++m)
        CHECK(out.at(0, m) == doctest::Approx(fb.matrix().at(m, k)).epsilon(1e-6));
}

TEST_CASE("mel pseudo-inverse is identity on the row space") {
    const MelFilterbank& fb = mel_filterbank(128, 16000);
    const Mat& M = fb.matrix();
    std::mt19937 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);

    // x = M^T y lies in the row space; pinv(M) M x must return x
    std::vector<double> y(128), x(128, 0.0), mx(128, 0.0), px(128, 0.0);
    for (auto& v : y) v = g(rng);
    for (int b = 0; b < 128; ++b)
        for (int k = 0; k < 128; ++k) x[b] += M.at(k, b) * y[k];
    for (int k = 0; k < 128; ++k)
        for (int b = 0; b < 128; ++b) mx[k] += M.at(k, b) * x[b];
    for (int b = 0; b < 128; ++b)
        for (int k = 0; k < 128; ++k) px[b] += fb.pinv_entry(b, k) * mx[k];
    for (int b = 0; b < 128; ++b) CHECK(px[b] == doctest::Approx(x[b]).epsilon(1e-4).scale(1.0));
}

TEST_CASE("mel round trip on a smooth harmonic spectrum") {
    RepresentationConfig cfg = preset("if_linear_desk");
    const MelFilterbank& fb = mel_filterbank(cfg.bins(), cfg.sample_rate);
    Mat spec(1, cfg.bins());
    for (int b = 0; b < cfg.bins(); ++b) {
        double f = static_cast<double>(b) / cfg.bins();
        double v = 0.0;
        for (int h = 1; h <= 6; ++h) v += std::exp(-40.0 * (f - 0.12 * h) * (f - 0.12 * h)) / h;
        spec.at(0, b) = static_cast<float>(v);
    }
    Mat back = fb.inverse(fb.forward(spec), true);
    for (float x : back.v) CHECK(x >= 0.0f);
    double num = 0.0, den = 0.0;
    for (int b = 0; b < cfg.bins(); ++b) {
        double d = back.at(0, b) - spec.at(0, b);
        num += d * d;
        den += static_cast<double>(spec.at(0, b)) * spec.at(0, b);
    }
    CHECK(std::sqrt(num / den) <= 0.1);

    Mat zero(2, cfg.bins(), 0.0f);
    Mat zout = fb.inverse(fb.forward(zero), true);
    for (float x : zout.v) CHECK(x == 0.0f);
}

TEST_CASE("encode shapes and range for the canonical configs") {
    Waveform w = test_note(60, 21);
    for (const char* name : {"if_linear_lores", "if_linear_hires"}) {
        RepresentationConfig cfg = fitted(preset(name), {w});
        SpectralImage img = encode(w, cfg);
        if (cfg.frame_size == 1024) {
            CHECK(img.frames == 256);
            CHECK(img.bins == 512);
        } else {
            CHECK(img.frames == 128);
            CHECK(img.bins == 1024);
        }
        for (float x : img.data) {
            CHECK(x >= -1.0f);
            CHECK(x <= 1.0f);
        }
    }
}

TEST_CASE("normalization maps the fitting set into [-0.8, 0.8]") {
    std::vector<Waveform> sample;
    for (int i = 0; i < 4; ++i) sample.push_back(test_note(48 + 12 * i, 100 + i));
    RepresentationConfig cfg = fitted(preset("if_linear_lores"), sample);

    float max_abs = 0.0f;
    for (const Waveform& w : sample) {
        SpectralImage img = encode(w, cfg);
        for (float x : img.data) max_abs = std::max(max_abs, std::abs(x));
    }
    CHECK(max_abs <= 0.8f + 1e-4f);
    CHECK(max_abs >= 0.8f - 1e-4f);  // the extremes land exactly on the edge
}

TEST_CASE("fit_normalization maps observed extrema exactly to +-0.8") {
    Waveform w = test_note(57, 9);
    RepresentationConfig cfg = preset("if_linear_lores");
    NormalizationStats st = fit_normalization({w}, cfg);

    Mat ch0, ch1;
    raw_channels(w, cfg, ch0, ch1);
    float lo = ch0.v[0], hi = ch0.v[0];
    for (float x : ch0.v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    CHECK(st.norm_mag(lo) == doctest::Approx(-0.8).epsilon(1e-5));
    CHECK(st.norm_mag(hi) == doctest::Approx(0.8).epsilon(1e-5));
    // round trip is identity
    CHECK(st.denorm_mag(st.norm_mag(-3.7f)) == doctest::Approx(-3.7).epsilon(1e-5));

    CHECK_THROWS_AS(fit_normalization({}, cfg), std::invalid_argument);
}

TEST_CASE("decode(encode) round trip reaches 40 dB on IF linear configs") {
    Waveform w = test_note(60, 33);
    for (const char* name : {"if_linear_lores", "if_linear_hires"}) {
        RepresentationConfig cfg = fitted(preset(name), {w});
        Waveform back = decode(encode(w, cfg));
        CHECK(snr_db(w.samples, back.samples) >= 40.0);
    }
}

TEST_CASE("IF-Mel round trip stays within 3x the linear config's log-spectrogram error") {
    Waveform w = test_note(60, 33);

    // The probe floors the log at 1e-3 so the comparison measures energetic
    // content rather than reconstruction noise at the silence floor.
    RepresentationConfig probe = preset("if_linear_lores");
    probe.log_mag_floor = 1e-3f;

    auto logspec_err = [&](const char* name) {
        RepresentationConfig cfg = fitted(preset(name), {w});
        Waveform back = decode(encode(w, cfg));
        back.samples.resize(w.samples.size());
        Mat a0, a1, b0, b1;
        raw_channels(w, probe, a0, a1);
        raw_channels(back, probe, b0, b1);
        double err = 0.0;
        for (size_t i = 0; i < a0.v.size(); ++i) {
            double d = a0.v[i] - b0.v[i];
            err += d * d;
        }
        return std::sqrt(err);
    };

    double lin = logspec_err("if_linear_lores");
    double mel = logspec_err("if_mel_lores");
    CHECK(mel <= 3.0 * lin);
}

TEST_CASE("floor-magnitude image decodes to near silence") {
    Waveform w = test_note(60, 4, 0.064);
    RepresentationConfig cfg = fitted(preset("if_linear_desk"), {w});
    SpectralImage img = encode(w, cfg);
    for (size_t i = 0; i < img.data.size(); ++i) img.data[i] = -1.0f;
    Waveform out = decode(img);
    for (float x : out.samples) CHECK(std::abs(x) < 1e-3f);
}

TEST_CASE("encode requires fitted stats, decode rejects NaN") {
    Waveform w = test_note(60, 5, 0.064);
    RepresentationConfig cfg = preset("if_linear_desk");
    CHECK_THROWS_AS(encode(w, cfg), std::invalid_argument);

    cfg = fitted(cfg, {w});
    SpectralImage img = encode(w, cfg);
    img.data[10] = std::numeric_limits<float>::quiet_NaN();
    CHECK_THROWS_AS(decode(img), std::invalid_argument);
}

TEST_CASE("pure tones give solid IF bands (std < 1e-3 at the tone bin)") {
    RepresentationConfig cfg = preset("if_linear_lores");
    for (int k : {32, 129, 300}) {
        double freq = static_cast<double>(k) * cfg.sample_rate / cfg.frame_size;
        Waveform w = make_sine(freq, 64000);
        ComplexSpectrogram s = stft(w, cfg);
        Mat ifr = phase_to_if(s.phase);
        double mean = 0.0;
        int n = 0;
        for (int f = 4; f < 246; ++f) {
            mean += ifr.at(f, k);
            ++n;
        }
        mean /= n;
        double var = 0.0;
        for (int f = 4; f < 246; ++f) {
            double d = ifr.at(f, k) - mean;
            var += d * d;
        }
        CHECK(std::sqrt(var / n) < 1e-3);
    }
}

TEST_CASE("desk config produces (16, 128, 2) images from 1024-sample notes") {
    Waveform w = test_note(60, 8, 0.064);
    CHECK(w.samples.size() == 1024);
    RepresentationConfig cfg = fitted(preset("if_linear_desk"), {w});
    SpectralImage img = encode(w, cfg);
    CHECK(img.frames == 16);
    CHECK(img.bins == 128);
}

TEST_CASE("image save/load and config json round trip") {
    Waveform w = test_note(67, 2, 0.064);
    RepresentationConfig cfg = fitted(preset("if_linear_desk"), {w});
    SpectralImage img = encode(w, cfg);

    std::string path = "/tmp/ifsynth_test_img.specimg";
    save_image(img, path);
    SpectralImage back = load_image(path);
    CHECK(back.frames == img.frames);
    CHECK(back.bins == img.bins);
    for (size_t i = 0; i < img.data.size(); ++i) CHECK(back.data[i] == img.data[i]);
    CHECK(back.config.frame_size == cfg.frame_size);
    CHECK(back.config.norm.fitted);

    RepresentationConfig cfg2 = config_from_json(config_to_json(cfg));
    CHECK(cfg2.frame_size == cfg.frame_size);
    CHECK(cfg2.stride == cfg.stride);
    CHECK(cfg2.norm.mag_scale == doctest::Approx(cfg.norm.mag_scale));
    std::remove(path.c_str());
    std::remove((path + ".json").c_str());
}

TEST_SUITE_END();
