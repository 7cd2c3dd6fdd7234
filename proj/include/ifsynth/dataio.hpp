#pragma once

#include <string>
#include <vector>

#include "ifsynth/core.hpp"

namespace ifsynth::dataio {

/// Additive-synthesis recipe standing in for an acoustic instrument.
struct TimbreParams {
    std::vector<float> harmonic_amps;  // decaying, nonnegative
    float decay_rate = 1.0f;           // 1/s, exponential amplitude decay
    float attack = 0.010f;             // seconds
    float inharmonicity = 0.0f;        // relative frequency jitter per harmonic
    float cutoff_frac = 0.9f;          // render harmonics below cutoff_frac * Nyquist

    /// Deterministic pseudo-random timbre for a given seed.
    static TimbreParams random(uint64_t seed, int max_harmonics = 48);
};

struct NoteRecord {
    std::string id;
    int pitch = 0;  // MIDI, in [24, 84]
    std::string waveform_path;
    uint64_t timbre_seed = 0;
};

struct DatasetManifest {
    std::vector<NoteRecord> records;
    uint64_t split_seed = 0;
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
    int sample_rate = kDefaultSampleRate;
    double note_duration = 4.0;
    std::string root_dir;  // directory of the manifest; paths are relative to it

    const NoteRecord& find(const std::string& id) const;
};

/// MIDI pitch -> fundamental in Hz (A4 = 440 at MIDI 69).
double pitch_to_hz(int pitch);

/// 61-dim one-hot for MIDI pitch in [24, 84].
std::vector<float> one_hot_pitch(int pitch);

/// 4-second (by default) additive note: harmonics of the fundamental under a
/// 10 ms attack, exponential decay, and a hard release at 3/4 of the duration.
/// Peak-normalized; bit-deterministic in (pitch, timbre, seed).
Waveform synth_note(int pitch, const TimbreParams& timbre, uint64_t seed,
                    double duration = 4.0, int sample_rate = kDefaultSampleRate);

/// Write the corpus to out_dir: one WAV per record plus manifest.json with a
/// shuffled 80/20 train/test split.
DatasetManifest make_dataset(int n_per_pitch, const std::vector<int>& pitches, int n_timbres,
                             uint64_t seed, const std::string& out_dir,
                             double duration = 4.0, int sample_rate = kDefaultSampleRate);

void save_manifest(const DatasetManifest& m, const std::string& path);
DatasetManifest load_manifest(const std::string& path);

/// Load a record's waveform, resolving the path against the manifest root.
Waveform load_record_waveform(const DatasetManifest& m, const NoteRecord& rec);

// PCM16 mono WAV.
void save_wav(const Waveform& w, const std::string& path);
Waveform load_wav(const std::string& path);

}  // namespace ifsynth::dataio
