#include "ifsynth/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace ifsynth::dataio {

double pitch_to_hz(int pitch) { return 440.0 * std::pow(2.0, (pitch - 69) / 12.0); }

std::vector<float> one_hot_pitch(int pitch) {
    if (pitch < kPitchMin || pitch > kPitchMax)
        throw std::invalid_argument("one_hot_pitch: pitch " + std::to_string(pitch) +
                                    " outside [24, 84]");
    std::vector<float> v(kPitchClasses, 0.0f);
    v[pitch - kPitchMin] = 1.0f;
    return v;
}

TimbreParams TimbreParams::random(uint64_t seed, int max_harmonics) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 1);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);

    TimbreParams t;
    float rolloff = 0.55f + 0.4f * u(rng);  // geometric decay per harmonic
    float odd_bias = u(rng) < 0.35f ? 0.25f + 0.5f * u(rng) : 1.0f;
    t.harmonic_amps.resize(max_harmonics);
    float a = 1.0f;
    for (int k = 0; k < max_harmonics; ++k) {
        float amp = a * (0.7f + 0.6f * u(rng));
        if (odd_bias < 1.0f && k % 2 == 1) amp *= odd_bias;  // even harmonics damped
        t.harmonic_amps[k] = amp;
        a *= rolloff;
    }
    t.decay_rate = 0.3f + 1.2f * u(rng);
    t.attack = 0.005f + 0.015f * u(rng);
    t.inharmonicity = 0.0005f * u(rng);
    return t;
}

Waveform synth_note(int pitch, const TimbreParams& timbre, uint64_t seed,
                    double duration, int sample_rate) {
    if (pitch < kPitchMin || pitch > kPitchMax)
        throw std::invalid_argument("synth_note: pitch " + std::to_string(pitch) +
                                    " outside [24, 84]");
    if (duration <= 0.0) throw std::invalid_argument("synth_note: duration must be positive");

    const double f0 = pitch_to_hz(pitch);
    const double nyquist = sample_rate / 2.0;
    const int n = static_cast<int>(std::llround(duration * sample_rate));

    std::mt19937_64 rng(seed ^ (static_cast<uint64_t>(pitch) << 32));
    std::uniform_real_distribution<double> u(0.0, 1.0);

    // Frequencies, phases and amplitudes of the rendered partials.
    std::vector<double> freqs, phases, amps;
    for (size_t k = 0; k < timbre.harmonic_amps.size(); ++k) {
        double jitter = timbre.inharmonicity * (2.0 * u(rng) - 1.0);
        double f = f0 * static_cast<double>(k + 1) * (1.0 + jitter);
        double ph = kTwoPi * u(rng);
        if (f >= timbre.cutoff_frac * nyquist) continue;
        if (timbre.harmonic_amps[k] <= 0.0f) continue;
        freqs.push_back(f);
        phases.push_back(ph);
        amps.push_back(timbre.harmonic_amps[k]);
    }
    if (freqs.empty())
        throw std::invalid_argument("synth_note: no renderable harmonics below Nyquist");

    // Envelope: linear attack, exponential decay through the sustain, then a
    // hard release at 3/4 of the duration (3 s for the canonical 4 s note).
    const double attack = std::min(static_cast<double>(timbre.attack), 0.1 * duration);
    const double release_at = 0.75 * duration;
    const double release_len = std::min(0.010, 0.05 * duration);

    Waveform w;
    w.sample_rate = sample_rate;
    w.samples.resize(n);
    std::vector<double> buf(n, 0.0);
    for (size_t h = 0; h < freqs.size(); ++h) {
        const double step = kTwoPi * freqs[h] / sample_rate;
        double phase = phases[h];
        const double amp = amps[h];
        for (int i = 0; i < n; ++i) {
            buf[i] += amp * std::sin(phase);
            phase += step;
            if (phase > kTwoPi) phase -= kTwoPi;
        }
    }
    double peak = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        double env = std::exp(-timbre.decay_rate * t);
        if (t < attack) env *= t / attack;
        if (t >= release_at) {
            double r = (t - release_at) / release_len;
            env *= r < 1.0 ? 1.0 - r : 0.0;
        }
        buf[i] *= env;
        peak = std::max(peak, std::abs(buf[i]));
    }
    if (peak > 0.0) {
        for (int i = 0; i < n; ++i) w.samples[i] = static_cast<float>(buf[i] / peak);
    }
    return w;
}

// ---------------------------------------------------------------------------
// WAV (PCM16 mono)
// ---------------------------------------------------------------------------

namespace {

void put_u32(std::vector<uint8_t>& b, uint32_t v) {
    b.push_back(v & 0xFF);
    b.push_back((v >> 8) & 0xFF);
    b.push_back((v >> 16) & 0xFF);
    b.push_back((v >> 24) & 0xFF);
}

void put_u16(std::vector<uint8_t>& b, uint16_t v) {
    b.push_back(v & 0xFF);
    b.push_back((v >> 8) & 0xFF);
}

uint32_t get_u32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t get_u16(const uint8_t* p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

void save_wav(const Waveform& w, const std::string& path) {
    const uint32_t n = static_cast<uint32_t>(w.samples.size());
    const uint32_t data_bytes = n * 2;

    std::vector<uint8_t> b;
    b.reserve(44 + data_bytes);
    b.insert(b.end(), {'R', 'I', 'F', 'F'});
    put_u32(b, 36 + data_bytes);
    b.insert(b.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put_u32(b, 16);
    put_u16(b, 1);  // PCM
    put_u16(b, 1);  // mono
    put_u32(b, static_cast<uint32_t>(w.sample_rate));
    put_u32(b, static_cast<uint32_t>(w.sample_rate) * 2);
    put_u16(b, 2);   // block align
    put_u16(b, 16);  // bits per sample
    b.insert(b.end(), {'d', 'a', 't', 'a'});
    put_u32(b, data_bytes);
    for (uint32_t i = 0; i < n; ++i) {
        float x = std::clamp(w.samples[i], -1.0f, 1.0f);
        int q = static_cast<int>(std::lround(x * 32767.0f));
        q = std::clamp(q, -32768, 32767);
        put_u16(b, static_cast<uint16_t>(static_cast<int16_t>(q)));
    }

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_wav: cannot open " + path);
    f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
    if (!f) throw std::runtime_error("save_wav: write failed for " + path);
}

Waveform load_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_wav: cannot open " + path);
    std::vector<uint8_t> b((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (b.size() < 44 || std::memcmp(b.data(), "RIFF", 4) != 0 || std::memcmp(b.data() + 8, "WAVE", 4) != 0)
        throw std::runtime_error("load_wav: not a RIFF/WAVE file: " + path);

    // walk chunks; expect PCM16 mono
    size_t pos = 12;
    int sample_rate = 0;
    int channels = 0, bits = 0;
    const uint8_t* data = nullptr;
    uint32_t data_len = 0;
    while (pos + 8 <= b.size()) {
        const char* id = reinterpret_cast<const char*>(b.data() + pos);
        uint32_t len = get_u32(b.data() + pos + 4);
        const uint8_t* body = b.data() + pos + 8;
        if (pos + 8 + len > b.size()) break;
        if (std::memcmp(id, "fmt ", 4) == 0 && len >= 16) {
            uint16_t fmt = get_u16(body);
            channels = get_u16(body + 2);
            sample_rate = static_cast<int>(get_u32(body + 4));
            bits = get_u16(body + 14);
            if (fmt != 1) throw std::runtime_error("load_wav: only PCM supported: " + path);
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = body;
            data_len = len;
        }
        pos += 8 + len + (len & 1);
    }
    if (!data || channels != 1 || bits != 16)
        throw std::runtime_error("load_wav: expected PCM16 mono with a data chunk: " + path);

    Waveform w;
    w.sample_rate = sample_rate;
    w.samples.resize(data_len / 2);
    for (size_t i = 0; i < w.samples.size(); ++i) {
        int16_t q = static_cast<int16_t>(get_u16(data + 2 * i));
        w.samples[i] = static_cast<float>(q) / 32767.0f;
    }
    return w;
}

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

const NoteRecord& DatasetManifest::find(const std::string& id) const {
    for (const auto& r : records)
        if (r.id == id) return r;
    throw std::invalid_argument("manifest: no record with id " + id);
}

DatasetManifest make_dataset(int n_per_pitch, const std::vector<int>& pitches, int n_timbres,
                             uint64_t seed, const std::string& out_dir,
                             double duration, int sample_rate) {
    if (n_per_pitch < 1) throw std::invalid_argument("make_dataset: n_per_pitch must be >= 1");
    if (n_timbres < 1) throw std::invalid_argument("make_dataset: n_timbres must be >= 1");
    for (int p : pitches)
        if (p < kPitchMin || p > kPitchMax)
            throw std::invalid_argument("make_dataset: pitch " + std::to_string(p) +
                                        " outside [24, 84]");

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("make_dataset: cannot create " + out_dir + ": " + ec.message());

    DatasetManifest m;
    m.split_seed = seed;
    m.sample_rate = sample_rate;
    m.note_duration = duration;
    m.root_dir = out_dir;

    for (int p : pitches) {
        for (int i = 0; i < n_per_pitch; ++i) {
            uint64_t timbre_seed = seed * 1000003ull + static_cast<uint64_t>(i) % n_timbres;
            char name[64];
            std::snprintf(name, sizeof(name), "note_p%03d_i%04d", p, i);
            NoteRecord rec;
            rec.id = name;
            rec.pitch = p;
            rec.timbre_seed = timbre_seed;
            rec.waveform_path = std::string(name) + ".wav";

            TimbreParams timbre = TimbreParams::random(timbre_seed);
            uint64_t note_seed = seed ^ (static_cast<uint64_t>(i) * 0x517CC1B727220A95ull);
            Waveform w = synth_note(p, timbre, note_seed, duration, sample_rate);
            save_wav(w, (fs::path(out_dir) / rec.waveform_path).string());
            m.records.push_back(std::move(rec));
        }
    }

    // shuffled 80/20 split
    std::vector<size_t> order(m.records.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    size_t n_train = static_cast<size_t>(std::llround(0.8 * static_cast<double>(order.size())));
    for (size_t i = 0; i < order.size(); ++i) {
        const std::string& id = m.records[order[i]].id;
        (i < n_train ? m.train_ids : m.test_ids).push_back(id);
    }

    save_manifest(m, (fs::path(out_dir) / "manifest.json").string());
    return m;
}

void save_manifest(const DatasetManifest& m, const std::string& path) {
    json j;
    j["schema_version"] = 1;
    j["sample_rate"] = m.sample_rate;
    j["note_duration"] = m.note_duration;
    j["split_seed"] = m.split_seed;
    j["records"] = json::array();
    for (const auto& r : m.records)
        j["records"].push_back({{"id", r.id},
                                {"pitch", r.pitch},
                                {"waveform_path", r.waveform_path},
                                {"timbre_seed", r.timbre_seed}});
    j["train_ids"] = m.train_ids;
    j["test_ids"] = m.test_ids;

    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_manifest: cannot open " + path);
    f << j.dump(2) << "\n";
    if (!f) throw std::runtime_error("save_manifest: write failed for " + path);
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_manifest: cannot open " + path);
    json j = json::parse(f);

    DatasetManifest m;
    m.sample_rate = j.at("sample_rate").get<int>();
    m.note_duration = j.value("note_duration", 4.0);
    m.split_seed = j.at("split_seed").get<uint64_t>();
    for (const auto& r : j.at("records")) {
        NoteRecord rec;
        rec.id = r.at("id").get<std::string>();
        rec.pitch = r.at("pitch").get<int>();
        rec.waveform_path = r.at("waveform_path").get<std::string>();
        rec.timbre_seed = r.at("timbre_seed").get<uint64_t>();
        m.records.push_back(std::move(rec));
    }
    m.train_ids = j.at("train_ids").get<std::vector<std::string>>();
    m.test_ids = j.at("test_ids").get<std::vector<std::string>>();
    m.root_dir = fs::path(path).parent_path().string();
    if (m.root_dir.empty()) m.root_dir = ".";
    return m;
}

Waveform load_record_waveform(const DatasetManifest& m, const NoteRecord& rec) {
    return load_wav((fs::path(m.root_dir) / rec.waveform_path).string());
}

}  // namespace ifsynth::dataio
