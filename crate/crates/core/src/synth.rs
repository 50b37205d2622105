//! Deterministic synthetic data: test tones, class-dependent "voices",
//! face-like scenes that the bundled bright-top-half cascade can find, and a
//! writer for a complete on-disk fixture set.
//!
//! None of this resembles real speech or faces. It exists so that every
//! stage of the pipeline can be exercised end to end without licensed
//! datasets.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::face::{Cascade, HaarFeature, HaarRect, Stage, Stump, BASE_WINDOW};
use crate::fusion::{cases_to_csv, EmotionCounts, FusionCase};
use crate::signal_io::{write_pgm, write_wav, AudioClip, GrayImage, SAMPLE_RATE};

/// Pure sine starting at phase 0.
pub fn tone(freq: f64, secs: f64, amplitude: f64) -> AudioClip {
    let n = (secs * SAMPLE_RATE as f64).round() as usize;
    let samples = (0..n)
        .map(|i| amplitude * (2.0 * PI * freq * i as f64 / SAMPLE_RATE as f64).sin())
        .collect();
    AudioClip::new(samples, SAMPLE_RATE).expect("valid tone")
}

/// Unit impulses every `period` samples, starting at sample 0.
pub fn impulse_train(period: usize, secs: f64) -> AudioClip {
    let n = (secs * SAMPLE_RATE as f64).round() as usize;
    let samples = (0..n).map(|i| if i % period == 0 { 1.0 } else { 0.0 }).collect();
    AudioClip::new(samples, SAMPLE_RATE).expect("valid impulse train")
}

/// Source parameters of one synthetic speaking style.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoiceProfile {
    pub label: &'static str,
    pub f0: f64,
    pub harmonics: usize,
    /// Harmonic `h` has relative amplitude `h^-tilt`.
    pub tilt: f64,
    pub amplitude: f64,
    pub noise: f64,
}

pub const VOICE_PROFILES: [VoiceProfile; 4] = [
    VoiceProfile { label: "angry", f0: 300.0, harmonics: 12, tilt: 0.6, amplitude: 0.6, noise: 0.04 },
    VoiceProfile { label: "happy", f0: 240.0, harmonics: 8, tilt: 1.0, amplitude: 0.4, noise: 0.02 },
    VoiceProfile { label: "neutral", f0: 160.0, harmonics: 5, tilt: 1.5, amplitude: 0.3, noise: 0.01 },
    VoiceProfile { label: "sad", f0: 110.0, harmonics: 3, tilt: 2.0, amplitude: 0.15, noise: 0.005 },
];

pub fn voice_profile(label: &str) -> Option<&'static VoiceProfile> {
    VOICE_PROFILES.iter().find(|p| p.label == label)
}

/// Harmonic tone with a slow amplitude envelope, ±4% seeded pitch jitter,
/// random harmonic phases and uniform background noise.
pub fn voice_clip(profile: &VoiceProfile, seed: u64, secs: f64) -> AudioClip {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f0 = profile.f0 * rng.gen_range(0.96..1.04);
    let phases: Vec<f64> = (0..profile.harmonics).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    let norm: f64 = (1..=profile.harmonics).map(|h| (h as f64).powf(-profile.tilt)).sum();
    let n = (secs * SAMPLE_RATE as f64).round() as usize;
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / SAMPLE_RATE as f64;
            let envelope = 0.75 + 0.25 * (2.0 * PI * 3.0 * t).sin();
            let voiced: f64 = phases
                .iter()
                .enumerate()
                .map(|(k, ph)| {
                    let h = (k + 1) as f64;
                    h.powf(-profile.tilt) * (2.0 * PI * h * f0 * t + ph).sin()
                })
                .sum();
            let noise = profile.noise * rng.gen_range(-1.0..1.0);
            (profile.amplitude * envelope * voiced / norm + noise).clamp(-1.0, 1.0)
        })
        .collect();
    AudioClip::new(samples, SAMPLE_RATE).expect("valid voice")
}

/// Pattern added on top of a synthetic face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceTexture {
    Flat,
    HorizontalStripes,
    VerticalStripes,
    Checker,
}

impl FaceTexture {
    /// Texture used for each voice label in the fixture set.
    pub fn for_label(label: &str) -> FaceTexture {
        match label {
            "angry" => FaceTexture::Checker,
            "happy" => FaceTexture::HorizontalStripes,
            "sad" => FaceTexture::VerticalStripes,
            _ => FaceTexture::Flat,
        }
    }

    fn offset(self, x: usize, y: usize) -> i32 {
        let on = match self {
            FaceTexture::Flat => return 0,
            FaceTexture::HorizontalStripes => (y / 2).is_multiple_of(2),
            FaceTexture::VerticalStripes => (x / 2).is_multiple_of(2),
            FaceTexture::Checker => (x / 2 + y / 2).is_multiple_of(2),
        };
        if on {
            25
        } else {
            -25
        }
    }
}

pub const SCENE_BACKGROUND: u8 = 100;
pub const FACE_TOP: u8 = 200;
pub const FACE_BOTTOM: u8 = 30;

/// Mid-gray scene with one `size x size` square at `(fx, fy)` whose top half
/// is bright and bottom half dark, overlaid with `texture`.
pub fn face_scene(
    width: usize,
    height: usize,
    fx: usize,
    fy: usize,
    size: usize,
    texture: FaceTexture,
) -> GrayImage {
    assert!(fx + size <= width && fy + size <= height, "face outside scene");
    GrayImage::from_fn(width, height, |x, y| {
        if x < fx || y < fy || x >= fx + size || y >= fy + size {
            return SCENE_BACKGROUND;
        }
        let (lx, ly) = (x - fx, y - fy);
        let base = if ly < size / 2 { FACE_TOP } else { FACE_BOTTOM };
        (i32::from(base) + texture.offset(lx, ly)).clamp(0, 255) as u8
    })
}

/// One stage, one stump: accepts windows whose top half is much brighter
/// than their bottom half. A perfectly aligned two-level window scores 576
/// (twice the half-window area) whatever its contrast; the default
/// threshold of 450 tolerates a pixel or two of misalignment.
pub fn bright_top_half_cascade(threshold: f64) -> Cascade {
    let half = BASE_WINDOW / 2;
    Cascade::new(vec![Stage {
        threshold: 0.5,
        stumps: vec![Stump {
            feature: HaarFeature {
                rects: vec![
                    HaarRect { x: 0, y: 0, w: BASE_WINDOW, h: half, weight: 1.0 },
                    HaarRect { x: 0, y: half, w: BASE_WINDOW, h: half, weight: -1.0 },
                ],
            },
            threshold,
            left: 0.0,
            right: 1.0,
        }],
    }])
    .expect("valid cascade")
}

pub const DEFAULT_CASCADE_THRESHOLD: f64 = 450.0;

/// Paths of a generated fixture set.
#[derive(Debug, Clone)]
pub struct FixtureSet {
    pub root: PathBuf,
    pub cascade: PathBuf,
    pub audio_manifest: PathBuf,
    pub face_manifest: PathBuf,
    /// Frames dir + WAV where the frame vote margin (15) beats threshold 9.
    pub video_wins: (PathBuf, PathBuf),
    /// Frames dir + WAV where the margin (3) does not.
    pub audio_wins: (PathBuf, PathBuf),
    pub cases: PathBuf,
}

const SCENE: usize = 64;

fn write_frames(dir: &Path, frames: &[(&str, usize)], seed: u64) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut index = 0;
    for &(label, n) in frames {
        for _ in 0..n {
            let (fx, fy) = (rng.gen_range(4..36), rng.gen_range(4..36));
            let img = face_scene(SCENE, SCENE, fx, fy, BASE_WINDOW as usize, FaceTexture::for_label(label));
            write_pgm(dir.join(format!("frame_{index:04}.pgm")), &img)?;
            index += 1;
        }
    }
    Ok(())
}

/// Writes audio clips, face images, manifests, the cascade, two fusion
/// clips and a sweep cases file under `root`. Output is a pure function of
/// `seed`.
pub fn write_fixture_set(root: &Path, seed: u64) -> io::Result<FixtureSet> {
    fs::create_dir_all(root.join("audio"))?;
    fs::create_dir_all(root.join("faces"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let cascade = root.join("cascade.json");
    fs::write(&cascade, bright_top_half_cascade(DEFAULT_CASCADE_THRESHOLD).to_json())?;

    let mut audio_manifest = String::from("# synthetic voices\n");
    let mut face_manifest = String::from("# synthetic faces\n");
    for profile in &VOICE_PROFILES {
        for i in 0..8 {
            let name = format!("audio/{}_{i}.wav", profile.label);
            write_wav(root.join(&name), &voice_clip(profile, rng.gen(), 0.5))?;
            let _ = writeln!(audio_manifest, "{name},{}", profile.label);

            let name = format!("faces/{}_{i}.pgm", profile.label);
            let (fx, fy) = (rng.gen_range(4..36), rng.gen_range(4..36));
            let texture = FaceTexture::for_label(profile.label);
            write_pgm(root.join(&name), &face_scene(SCENE, SCENE, fx, fy, BASE_WINDOW as usize, texture))?;
            let _ = writeln!(face_manifest, "{name},{}", profile.label);
        }
    }
    let audio_manifest_path = root.join("audio_manifest.csv");
    fs::write(&audio_manifest_path, audio_manifest)?;
    let face_manifest_path = root.join("face_manifest.csv");
    fs::write(&face_manifest_path, face_manifest)?;

    let sad = voice_profile("sad").expect("profile");
    let video_dir = root.join("clips/video_wins");
    write_frames(&video_dir.join("frames"), &[("happy", 18), ("sad", 3)], rng.gen())?;
    write_wav(video_dir.join("audio.wav"), &voice_clip(sad, rng.gen(), 0.5))?;

    let audio_dir = root.join("clips/audio_wins");
    write_frames(&audio_dir.join("frames"), &[("happy", 6), ("sad", 3)], rng.gen())?;
    write_wav(audio_dir.join("audio.wav"), &voice_clip(sad, rng.gen(), 0.5))?;

    let labels = ["angry", "happy", "neutral", "sad"];
    let cases: Vec<FusionCase> = (0..20)
        .map(|_| {
            let truth = labels[rng.gen_range(0..4)];
            let other = labels[rng.gen_range(0..4)];
            let mut counts = EmotionCounts::new();
            counts.add(truth, rng.gen_range(0..15));
            counts.add(other, rng.gen_range(1..15));
            let audio = if rng.gen_bool(0.6) { truth } else { labels[rng.gen_range(0..4)] };
            FusionCase {
                counts,
                audio_label: audio.to_string(),
                true_label: truth.to_string(),
            }
        })
        .collect();
    let cases_path = root.join("cases.csv");
    fs::write(&cases_path, cases_to_csv(&cases))?;

    Ok(FixtureSet {
        root: root.to_path_buf(),
        cascade,
        audio_manifest: audio_manifest_path,
        face_manifest: face_manifest_path,
        video_wins: (video_dir.join("frames"), video_dir.join("audio.wav")),
        audio_wins: (audio_dir.join("frames"), audio_dir.join("audio.wav")),
        cases: cases_path,
    })
}
