//! Local binary patterns: one 3x3 neighbourhood, the uniform-pattern table
//! and the 7x8 regional histogram vector of a synthetic face crop.

use emofuse::lbp::{build_uniform_map, facial_feature_vector, lbp_code, transitions, FACIAL_FEATURE_LEN, LBP_BINS};
use emofuse::signal_io::GrayImage;
use emofuse::synth::{face_scene, FaceTexture};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Ring clockwise from top-left around a centre of 50.
    let values = [[60, 40, 10], [49, 50, 50], [200, 51, 90]];
    let patch = GrayImage::from_fn(3, 3, |x, y| values[y][x]);
    let code = lbp_code(&patch, 1, 1)?;
    println!("neighbourhood {values:?} -> {code:08b} = {code}, {} transitions", transitions(code));

    let map = build_uniform_map();
    println!("{} of 256 patterns are uniform", map.uniform_count());
    let uniform: Vec<u8> = (0..=255u8).filter(|&c| map.is_uniform(c)).take(10).collect();
    println!("first uniform codes: {uniform:?}");

    for texture in [FaceTexture::Flat, FaceTexture::HorizontalStripes, FaceTexture::Checker] {
        let face = face_scene(112, 128, 0, 0, 112, texture);
        let crop = GrayImage::from_fn(112, 128, |x, y| face.get(x, y.min(111)));
        let v = facial_feature_vector(&crop)?;
        let nonzero = v.values().iter().filter(|&&x| x > 0.0).count();
        let top_left = v.region(0, 0);
        let busiest = (0..LBP_BINS).max_by(|&a, &b| top_left[a].total_cmp(&top_left[b])).expect("bins");
        println!(
            "{texture:?}: {FACIAL_FEATURE_LEN} values, total {}, {nonzero} non-zero, region (0,0) peaks in bin {busiest}",
            v.values().iter().sum::<f64>()
        );
    }
    Ok(())
}
