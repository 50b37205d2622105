mod common;

use emofuse::face::{crop_face, detect_faces, scan_windows, Cascade, DetectError, FaceBox, IntegralImage};
use emofuse::signal_io::GrayImage;
use emofuse::synth::{bright_top_half_cascade, face_scene, FaceTexture, DEFAULT_CASCADE_THRESHOLD};

use common::*;

#[test]
fn rectangle_sums_of_a_5x5_image() {
    let mut r = rng(21);
    let img = random_image(&mut r, 5, 5);
    let ii = IntegralImage::new(&img);
    for y in 0..5 {
        for x in 0..5 {
            for h in 1..=5 - y {
                for w in 1..=5 - x {
                    assert_eq!(ii.rect_sum(x, y, w, h), rect_sum_oracle(&img, x, y, w, h));
                }
            }
        }
    }
    assert_eq!(ii.at(0, 3), 0);
    assert_eq!(ii.at(3, 0), 0);
}

/// Manual evaluation of the bright-top-half stump on a 24x24 window.
fn hand_accepts(img: &GrayImage, x: usize, y: usize, threshold: f64) -> bool {
    let top = rect_sum_oracle(img, x, y, 24, 12) as f64;
    let bottom = rect_sum_oracle(img, x, y + 12, 24, 12) as f64;
    let mut sum = 0.0;
    let mut sq = 0.0;
    for yy in y..y + 24 {
        for xx in x..x + 24 {
            let p = f64::from(img.get(xx, yy));
            sum += p;
            sq += p * p;
        }
    }
    let mean = sum / 576.0;
    let std = (sq / 576.0 - mean * mean).max(0.0).sqrt().max(1.0);
    (top - bottom) / std >= threshold
}

#[test]
fn base_scale_hits_match_hand_evaluation() {
    let mut r = rng(22);
    for (i, threshold) in [450.0, 300.0, 100.0].into_iter().enumerate() {
        let mut img = face_scene(48, 40, 8 + i * 3, 6 + i, 26, FaceTexture::Flat);
        // Light noise so that windows differ.
        let noise = random_image(&mut r, 48, 40);
        img = GrayImage::from_fn(48, 40, |x, y| img.get(x, y).saturating_add(noise.get(x, y) % 8));
        let cascade = bright_top_half_cascade(threshold);
        let hits: Vec<FaceBox> = scan_windows(&IntegralImage::new(&img), &cascade)
            .into_iter()
            .filter(|b| b.w == 24)
            .collect();
        let mut expected = Vec::new();
        for y in 0..=40 - 24 {
            for x in 0..=48 - 24 {
                if hand_accepts(&img, x, y, threshold) {
                    expected.push(FaceBox::new(x, y, 24, 24));
                }
            }
        }
        assert!(!expected.is_empty());
        assert_eq!(hits, expected, "threshold {threshold}");
    }
}

#[test]
fn finds_the_face_and_crops_it() {
    let cascade = bright_top_half_cascade(DEFAULT_CASCADE_THRESHOLD);
    let img = face_scene(80, 64, 30, 20, 24, FaceTexture::Flat);
    let faces = detect_faces(&img, &cascade).unwrap();
    assert_eq!(faces.len(), 1);
    assert!(faces[0].iou(&FaceBox::new(30, 20, 24, 24)) >= 0.5);
    let crop = crop_face(&img, &faces[0]);
    assert_eq!((crop.width(), crop.height()), (112, 128));
    assert!(detect_faces(&GrayImage::filled(80, 64, 100), &cascade).unwrap().is_empty());
}

#[test]
fn two_faces_two_boxes() {
    let cascade = bright_top_half_cascade(DEFAULT_CASCADE_THRESHOLD);
    let left = face_scene(100, 40, 5, 8, 24, FaceTexture::Flat);
    let img = GrayImage::from_fn(100, 40, |x, y| if x < 50 { left.get(x, y) } else { left.get(x - 45, y) });
    let faces = detect_faces(&img, &cascade).unwrap();
    assert_eq!(faces.len(), 2, "{faces:?}");
}

#[test]
fn cascade_file_round_trip_and_errors() {
    let cascade = bright_top_half_cascade(123.0);
    assert_eq!(Cascade::from_json(&cascade.to_json()).unwrap(), cascade);
    let shipped = include_str!("../fixtures/bright_top_half.json");
    assert_eq!(Cascade::from_json(shipped).unwrap(), bright_top_half_cascade(DEFAULT_CASCADE_THRESHOLD));
    assert!(matches!(
        detect_faces(&GrayImage::filled(20, 30, 0), &cascade),
        Err(DetectError::ImageTooSmall { .. })
    ));
}
