//! Face localization with a supplied Haar cascade: integral images,
//! staged window evaluation over a scale pyramid, grouping of raw hits, and
//! cropping of the winning box to the fixed 112x128 face size.

mod cascade;
mod crop;
mod detect;
mod integral;

use thiserror::Error;

pub use cascade::{load_cascade, Cascade, HaarFeature, HaarRect, Stage, Stump, BASE_WINDOW};
pub use crop::{crop_face, FACE_HEIGHT, FACE_WIDTH};
pub use detect::{detect_faces, eval_window, group_detections, scan_windows, FaceBox, SCALE_STEP};
pub use integral::IntegralImage;

#[derive(Debug, Error)]
pub enum DetectError {
    #[error("cannot read cascade: {0}")]
    Io(#[from] std::io::Error),
    #[error("cascade parse error: {0}")]
    Parse(String),
    #[error("stage {stage} has no stumps")]
    EmptyStage { stage: usize },
    #[error("stage {stage} stump {stump}: rectangle {rect:?} leaves the {window}x{window} window")]
    RectOutOfWindow {
        stage: usize,
        stump: usize,
        rect: (u32, u32, u32, u32),
        window: u32,
    },
    #[error("image {width}x{height} is smaller than the {window}x{window} detection window")]
    ImageTooSmall {
        width: usize,
        height: usize,
        window: usize,
    },
}
