//! Property tests for the invariants each module promises.

mod common;

use std::collections::BTreeMap;

use emofuse::audio::{
    energy, energy_entropy, frame_signal, magnitude_spectrum, spectral_centroid_spread, spectral_entropy,
    spectral_flux, spectral_rolloff, yin_difference, yin_normalize, zcr, Spectrum,
};
use emofuse::classify::{
    evaluate, knn_train, svm_train, ClassifyError, Classifier, LabelSet, SvmParams,
};
use emofuse::face::{detect_faces, eval_window, IntegralImage};
use emofuse::fusion::{
    count_frame_emotions, fuse, threshold_sweep, video_emotion, EmotionCounts, FusionCase, Source,
};
use emofuse::lbp::{build_uniform_map, facial_feature_vector, grid_span, lbp_image, GRID_COLS, GRID_ROWS};
use emofuse::signal_io::{encode_pgm_p2, encode_pgm_p5, encode_wav, parse_pgm, parse_wav, AudioClip, GrayImage};
use emofuse::synth::{bright_top_half_cascade, face_scene, FaceTexture, DEFAULT_CASCADE_THRESHOLD};
use proptest::prelude::*;

fn clip_strategy(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..=1.0, min..max)
}

fn image_strategy(w: usize, h: usize, max: u8) -> impl Strategy<Value = GrayImage> {
    prop::collection::vec(0..=max, w * h).prop_map(move |p| GrayImage::new(w, h, p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wav_round_trip_within_one_step(samples in clip_strategy(1, 2000)) {
        let clip = AudioClip::new(samples.clone(), 16_000).unwrap();
        let bytes = encode_wav(&clip);
        let back = parse_wav(&bytes).unwrap();
        prop_assert_eq!(back.len(), samples.len());
        for (a, b) in samples.iter().zip(back.samples()) {
            prop_assert!((a - b).abs() <= 1.0 / 32768.0);
        }
        prop_assert_eq!(parse_wav(&bytes).unwrap(), back);
    }

    #[test]
    fn pgm_ascii_equals_binary(img in (3usize..20, 3usize..20).prop_flat_map(|(w, h)| image_strategy(w, h, 255))) {
        let p5 = parse_pgm(&encode_pgm_p5(&img)).unwrap();
        let p2 = parse_pgm(&encode_pgm_p2(&img)).unwrap();
        prop_assert_eq!(&p5, &img);
        prop_assert_eq!(p2, p5);
    }

    #[test]
    fn frame_feature_ranges(samples in clip_strategy(480, 2400)) {
        let clip = AudioClip::new(samples, 16_000).unwrap();
        let max = 10f64.log2();
        let mut prev: Option<Spectrum> = None;
        for f in frame_signal(&clip).unwrap() {
            let spec = magnitude_spectrum(&f);
            let (c, s) = spectral_centroid_spread(&spec);
            prop_assert!(energy(&f) >= 0.0);
            prop_assert!((0.0..=1.0).contains(&zcr(&f)));
            prop_assert!((0.0..=max).contains(&energy_entropy(&f)));
            prop_assert!((0.0..=max).contains(&spectral_entropy(&spec)));
            prop_assert!((0.0..=1.0).contains(&c));
            prop_assert!((0.0..=0.25).contains(&s));
            prop_assert!((0.0..=1.0).contains(&spectral_rolloff(&spec)));
            if let Some(p) = &prev {
                prop_assert!((0.0..=2.0).contains(&spectral_flux(&spec, p)));
            }
            prop_assert_eq!(spec.magnitudes().len(), 257);
            prop_assert!(spec.magnitudes().iter().all(|&m| m >= 0.0));
            prev = Some(spec);
        }
    }

    #[test]
    fn periodic_signal_has_zero_difference_at_multiples(
        cycle in prop::collection::vec(-1.0f64..1.0, 26..80),
        reps in 12usize..20,
    ) {
        let period = cycle.len();
        let signal: Vec<f64> = cycle.iter().copied().cycle().take(period * reps).collect();
        let t_max = (signal.len() / 2).min(320);
        let d = yin_difference(&signal, 1, t_max).unwrap();
        for (t, v) in d.lags() {
            prop_assert!(v >= 0.0);
            if t % period == 0 {
                prop_assert_eq!(v, 0.0);
            }
        }
        let norm = yin_normalize(&d);
        prop_assert!(norm.values().iter().all(|v| v.is_finite() && *v >= 0.0));
    }

    #[test]
    fn lbp_ignores_brightness_offset(img in image_strategy(9, 7, 200), offset in 0u8..=55) {
        let shifted = GrayImage::from_fn(9, 7, |x, y| img.get(x, y) + offset);
        prop_assert_eq!(lbp_image(&img).unwrap(), lbp_image(&shifted).unwrap());
    }

    #[test]
    fn lbp_ignores_positive_scaling(img in image_strategy(9, 7, 63), c in 1u8..=4) {
        let scaled = GrayImage::from_fn(9, 7, |x, y| img.get(x, y) * c);
        prop_assert_eq!(lbp_image(&img).unwrap(), lbp_image(&scaled).unwrap());
    }

    #[test]
    fn region_histograms_partition_the_face(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let face = common::random_image(&mut r, 112, 128);
        let v = facial_feature_vector(&face).unwrap();
        prop_assert_eq!(v.values().len(), 3304);
        prop_assert!(v.values().iter().all(|&x| x >= 0.0));
        for row in 0..GRID_ROWS {
            for col in 0..GRID_COLS {
                let area = grid_span(col, GRID_COLS, 110).len() * grid_span(row, GRID_ROWS, 126).len();
                prop_assert_eq!(v.region(col, row).iter().sum::<f64>(), area as f64);
            }
        }
        prop_assert_eq!(v.values().iter().sum::<f64>(), 13_860.0);
    }

    #[test]
    fn window_decisions_ignore_contrast_scaling(img in image_strategy(40, 40, 63), c in 2u8..=4) {
        // Pixel std well above the floor of 1 keeps the normalization exact.
        let img = GrayImage::from_fn(40, 40, |x, y| img.get(x, y) / 2 + if y % 24 < 12 { 30 } else { 0 });
        let scaled = GrayImage::from_fn(40, 40, |x, y| img.get(x, y) * c);
        let cascade = bright_top_half_cascade(40.0);
        let (a, b) = (IntegralImage::new(&img), IntegralImage::new(&scaled));
        for y in 0..=16 {
            for x in 0..=16 {
                prop_assert_eq!(eval_window(&a, &cascade, x, y, 1.0), eval_window(&b, &cascade, x, y, 1.0));
            }
        }
    }

    #[test]
    fn detections_are_square_and_inside(
        (w, h, fx, fy, size) in (30usize..90, 30usize..90).prop_flat_map(|(w, h)| {
            let max = w.min(h);
            (Just(w), Just(h), 0..=w - 24, 0..=h - 24, 24..=max)
        })
    ) {
        let size = size.min(w - fx).min(h - fy).max(1);
        let img = face_scene(w, h, fx, fy, size, FaceTexture::Flat);
        for b in detect_faces(&img, &bright_top_half_cascade(DEFAULT_CASCADE_THRESHOLD)).unwrap() {
            prop_assert_eq!(b.w, b.h);
            prop_assert!(b.x + b.w <= w && b.y + b.h <= h);
        }
    }
}

#[test]
fn uniform_map_is_total_and_reproducible() {
    let map = build_uniform_map();
    let mut seen = BTreeMap::new();
    for code in 0..=255u8 {
        let bin = map.bin(code);
        assert!(bin <= 58);
        if bin < 58 {
            assert!(seen.insert(bin, code).is_none(), "bin {bin} reused");
        }
    }
    assert_eq!(seen.len(), 58);
    assert_eq!(build_uniform_map(), map);
}

fn squared_distances(train: &[Vec<f64>], q: &[f64]) -> Vec<f64> {
    train.iter().map(|v| v.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()).collect()
}

fn labels(n: usize, classes: usize) -> Vec<String> {
    (0..n).map(|i| format!("c{}", i % classes)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn knn_absorbs_affine_rescaling(
        data in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 8..20),
        query in prop::collection::vec(-5.0f64..5.0, 3),
        scale in prop::collection::vec(0.1f64..10.0, 3),
        shift in prop::collection::vec(-100.0f64..100.0, 3),
        k in 1usize..4,
    ) {
        let y = labels(data.len(), 3);
        let affine = |v: &Vec<f64>| -> Vec<f64> { v.iter().zip(&scale).zip(&shift).map(|((x, a), b)| a * x + b).collect() };
        let m1 = knn_train(&data, &y, k).unwrap();
        // Skip near-ties, which rounding could legitimately reorder.
        let std_train: Vec<Vec<f64>> = data.iter().map(|v| m1.standardizer().apply(v).unwrap()).collect();
        let mut d = squared_distances(&std_train, &m1.standardizer().apply(&query).unwrap());
        d.sort_by(f64::total_cmp);
        prop_assume!(d.windows(2).take(k + 1).all(|w| w[1] - w[0] > 1e-9 * (1.0 + w[1])));

        let moved: Vec<Vec<f64>> = data.iter().map(affine).collect();
        let m2 = knn_train(&moved, &y, k).unwrap();
        prop_assert_eq!(m1.predict(&query).unwrap(), m2.predict(&affine(&query)).unwrap());
    }

    #[test]
    fn svm_argmax_survives_common_bias_shift(
        data in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 9..24),
        query in prop::collection::vec(-5.0f64..5.0, 2),
        delta in -50.0f64..50.0,
    ) {
        let y = labels(data.len(), 3);
        let params = SvmParams { epochs: 20, ..SvmParams::default() };
        let mut m = svm_train(&data, &y, params).unwrap();
        let mut scores = m.scores(&query).unwrap();
        scores.sort_by(|a, b| b.total_cmp(a));
        prop_assume!(scores[0] - scores[1] > 1e-9 * (1.0 + delta.abs()));
        let before = m.predict(&query).unwrap().to_string();
        m.shift_biases(delta);
        prop_assert_eq!(m.predict(&query).unwrap(), before.as_str());
    }

    #[test]
    fn confusion_rows_sum_to_class_counts(
        truth in prop::collection::vec(0usize..4, 1..60),
        salt in any::<u64>(),
    ) {
        struct Arbitrary(LabelSet, u64);
        impl Classifier for Arbitrary {
            fn label_set(&self) -> &LabelSet {
                &self.0
            }
            fn predict_index(&self, x: &[f64]) -> Result<usize, ClassifyError> {
                Ok(((x[0] as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ self.1) as usize % 4)
            }
        }
        let names = ["a", "b", "c", "d"];
        let model = Arbitrary(LabelSet::new(names.iter().map(|s| s.to_string())).unwrap(), salt);
        let x: Vec<Vec<f64>> = (0..truth.len()).map(|i| vec![i as f64]).collect();
        let y: Vec<String> = truth.iter().map(|&t| names[t].to_string()).collect();
        let (acc, cm) = evaluate(&model, &x, &y).unwrap();
        for (c, sum) in cm.row_sums().into_iter().enumerate() {
            prop_assert_eq!(sum, truth.iter().filter(|&&t| t == c).count());
        }
        prop_assert_eq!(cm.total(), truth.len());
        prop_assert!((acc - cm.correct() as f64 / truth.len() as f64).abs() < 1e-15);
    }
}

const EMOTIONS: [&str; 4] = ["angry", "happy", "neutral", "sad"];

fn case_strategy() -> impl Strategy<Value = FusionCase> {
    (
        prop::collection::vec(0usize..25, 4),
        0usize..4,
        0usize..4,
    )
        .prop_filter("needs frames", |(c, _, _)| c.iter().sum::<usize>() > 0)
        .prop_map(|(counts, audio, truth)| FusionCase {
            counts: EMOTIONS.iter().copied().zip(counts).filter(|(_, n)| *n > 0).collect(),
            audio_label: EMOTIONS[audio].into(),
            true_label: EMOTIONS[truth].into(),
        })
}

proptest! {
    #[test]
    fn fused_label_is_one_of_the_inputs(case in case_strategy(), threshold in 0usize..30) {
        let v = video_emotion(&case.counts).unwrap();
        let d = fuse(&v, &case.audio_label, threshold);
        match d.source {
            Source::Video => prop_assert_eq!(&d.label, &v.label),
            Source::Audio => prop_assert_eq!(&d.label, &case.audio_label),
        }
    }

    #[test]
    fn sweep_extremes_match_single_modalities(cases in prop::collection::vec(case_strategy(), 1..30)) {
        let n = cases.len() as f64;
        let max_margin = cases.iter().map(|c| video_emotion(&c.counts).unwrap().margin).max().unwrap();
        let audio_only = cases.iter().filter(|c| c.audio_label == c.true_label).count() as f64 / n;
        let sweep = threshold_sweep(&cases, [max_margin, max_margin + 7]).unwrap();
        prop_assert_eq!(sweep[0].1, audio_only);
        prop_assert_eq!(sweep[1].1, audio_only);

        let unique: Vec<FusionCase> = cases.iter().filter(|c| video_emotion(&c.counts).unwrap().margin > 0).cloned().collect();
        prop_assume!(!unique.is_empty());
        let video_only = unique
            .iter()
            .filter(|c| video_emotion(&c.counts).unwrap().label == c.true_label)
            .count() as f64
            / unique.len() as f64;
        prop_assert_eq!(threshold_sweep(&unique, [0]).unwrap()[0].1, video_only);
    }

    #[test]
    fn margin_ignores_frame_order(frames in prop::collection::vec(0usize..4, 1..60), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        struct ByValue(LabelSet);
        impl Classifier for ByValue {
            fn label_set(&self) -> &LabelSet {
                &self.0
            }
            fn predict_index(&self, x: &[f64]) -> Result<usize, ClassifyError> {
                Ok(x[0] as usize)
            }
        }
        let model = ByValue(LabelSet::new(EMOTIONS.iter().map(|s| s.to_string())).unwrap());
        let vectors: Vec<Vec<f64>> = frames.iter().map(|&f| vec![f as f64]).collect();
        let mut shuffled = vectors.clone();
        shuffled.shuffle(&mut common::rng(seed));
        let a = count_frame_emotions(&vectors, &model).unwrap();
        let b = count_frame_emotions(&shuffled, &model).unwrap();
        prop_assert_eq!(a.total(), frames.len());
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(video_emotion(&a).unwrap(), video_emotion(&b).unwrap());
    }
}

#[test]
fn counts_round_trip_through_field_syntax() {
    let counts: EmotionCounts = [("sad", 3), ("happy", 20)].into_iter().collect();
    assert_eq!(counts.to_field(), "happy:20;sad:3");
    assert_eq!(EmotionCounts::parse_field(&counts.to_field()).unwrap(), counts);
}
