use super::FeatureError;
use crate::signal_io::AudioClip;

/// 30 ms at 16 kHz.
pub const FRAME_LEN: usize = 480;
/// 50% overlap.
pub const FRAME_HOP: usize = 240;

/// One analysis window borrowed from a clip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame<'a> {
    samples: &'a [f64],
    index: usize,
}

impl<'a> Frame<'a> {
    pub fn new(samples: &'a [f64], index: usize) -> Result<Self, FeatureError> {
        if samples.len() != FRAME_LEN {
            return Err(FeatureError::BadFrame(samples.len()));
        }
        Ok(Self { samples, index })
    }

    pub fn samples(&self) -> &'a [f64] {
        self.samples
    }

    /// Ordinal position in the clip.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Offset of the first sample in the clip.
    pub fn offset(&self) -> usize {
        self.index * FRAME_HOP
    }
}

/// Cuts a clip into overlapping frames starting at 0, 240, 480, ...
/// A trailing remainder shorter than one frame is dropped.
pub fn frame_signal(clip: &AudioClip) -> Result<Vec<Frame<'_>>, FeatureError> {
    let samples = clip.samples();
    if samples.len() < FRAME_LEN {
        return Err(FeatureError::TooShort {
            needed: FRAME_LEN,
            got: samples.len(),
        });
    }
    let count = (samples.len() - FRAME_LEN) / FRAME_HOP + 1;
    Ok((0..count)
        .map(|i| Frame {
            samples: &samples[i * FRAME_HOP..i * FRAME_HOP + FRAME_LEN],
            index: i,
        })
        .collect())
}
