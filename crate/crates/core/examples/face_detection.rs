//! Cascade scan on a synthetic scene (or a PGM given on the command line):
//! raw window hits, grouped boxes and the normalized 112x128 crop.
//!
//! The bundled one-stump cascade also fires on small windows centred on any
//! bright-over-dark edge, so on faces much larger than 24 pixels the merged
//! box drifts inward.
//!
//! ```text
//! cargo run --example face_detection -- [image.pgm [cascade.json [crop.pgm]]]
//! ```

use emofuse::face::{crop_face, group_detections, load_cascade, scan_windows, IntegralImage};
use emofuse::signal_io::{read_pgm, write_pgm};
use emofuse::synth::{bright_top_half_cascade, face_scene, FaceTexture, DEFAULT_CASCADE_THRESHOLD};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let img = match args.first() {
        Some(path) => read_pgm(path)?,
        None => face_scene(160, 120, 50, 30, 26, FaceTexture::Flat),
    };
    let cascade = match args.get(1) {
        Some(path) => load_cascade(path)?,
        None => bright_top_half_cascade(DEFAULT_CASCADE_THRESHOLD),
    };
    println!("image {}x{}, {} stage(s)", img.width(), img.height(), cascade.stages().len());

    let ii = IntegralImage::new(&img);
    let hits = scan_windows(&ii, &cascade);
    println!("{} window hits", hits.len());
    let groups = group_detections(&hits, img.width(), img.height());
    for (b, n) in &groups {
        println!("  box x={} y={} {}x{} from {n} hits", b.x, b.y, b.w, b.h);
    }

    if let Some((best, _)) = groups.first() {
        let crop = crop_face(&img, best);
        println!("crop {}x{}", crop.width(), crop.height());
        if let Some(out) = args.get(2) {
            write_pgm(out, &crop)?;
            println!("wrote {out}");
        }
    }
    Ok(())
}
