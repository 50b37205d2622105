//! Cascade model and its JSON file format:
//!
//! ```json
//! { "window": [24, 24],
//!   "stages": [ { "threshold": 0.5,
//!                 "stumps": [ { "rects": [[0, 0, 24, 12, 1.0], [0, 12, 24, 12, -1.0]],
//!                               "threshold": 1.0, "left": 0.0, "right": 1.0 } ] } ] }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DetectError;

/// Side of the square base detection window.
pub const BASE_WINDOW: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarRect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
    pub weight: f64,
}

/// Weighted sum of 2 to 4 rectangles in base-window coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarFeature {
    pub rects: Vec<HaarRect>,
}

/// Decision stump: `left` when the normalized feature value is below
/// `threshold`, `right` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Stump {
    pub feature: HaarFeature,
    pub threshold: f64,
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub stumps: Vec<Stump>,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cascade {
    stages: Vec<Stage>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CascadeFile {
    window: [u32; 2],
    stages: Vec<StageFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StageFile {
    threshold: f64,
    stumps: Vec<StumpFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StumpFile {
    rects: Vec<(u32, u32, u32, u32, f64)>,
    threshold: f64,
    left: f64,
    right: f64,
}

impl Cascade {
    /// Validates and wraps a list of stages.
    pub fn new(stages: Vec<Stage>) -> Result<Self, DetectError> {
        if stages.is_empty() {
            return Err(DetectError::Parse("cascade has no stages".into()));
        }
        for (si, stage) in stages.iter().enumerate() {
            if stage.stumps.is_empty() {
                return Err(DetectError::EmptyStage { stage: si });
            }
            if !stage.threshold.is_finite() {
                return Err(DetectError::Parse(format!("stage {si}: non-finite threshold")));
            }
            for (ti, stump) in stage.stumps.iter().enumerate() {
                let n = stump.feature.rects.len();
                if !(2..=4).contains(&n) {
                    return Err(DetectError::Parse(format!(
                        "stage {si} stump {ti}: {n} rectangles (expected 2 to 4)"
                    )));
                }
                if ![stump.threshold, stump.left, stump.right]
                    .iter()
                    .all(|v| v.is_finite())
                {
                    return Err(DetectError::Parse(format!(
                        "stage {si} stump {ti}: non-finite value"
                    )));
                }
                for r in &stump.feature.rects {
                    if r.w == 0
                        || r.h == 0
                        || r.x + r.w > BASE_WINDOW
                        || r.y + r.h > BASE_WINDOW
                        || !r.weight.is_finite()
                    {
                        return Err(DetectError::RectOutOfWindow {
                            stage: si,
                            stump: ti,
                            rect: (r.x, r.y, r.w, r.h),
                            window: BASE_WINDOW,
                        });
                    }
                }
            }
        }
        Ok(Self { stages })
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn window(&self) -> u32 {
        BASE_WINDOW
    }

    pub fn from_json(text: &str) -> Result<Self, DetectError> {
        let file: CascadeFile =
            serde_json::from_str(text).map_err(|e| DetectError::Parse(e.to_string()))?;
        if file.window != [BASE_WINDOW, BASE_WINDOW] {
            return Err(DetectError::Parse(format!(
                "window {:?} (only 24x24 is supported)",
                file.window
            )));
        }
        let stages = file
            .stages
            .into_iter()
            .map(|s| Stage {
                threshold: s.threshold,
                stumps: s
                    .stumps
                    .into_iter()
                    .map(|t| Stump {
                        feature: HaarFeature {
                            rects: t
                                .rects
                                .into_iter()
                                .map(|(x, y, w, h, weight)| HaarRect { x, y, w, h, weight })
                                .collect(),
                        },
                        threshold: t.threshold,
                        left: t.left,
                        right: t.right,
                    })
                    .collect(),
            })
            .collect();
        Self::new(stages)
    }

    pub fn to_json(&self) -> String {
        let file = CascadeFile {
            window: [BASE_WINDOW, BASE_WINDOW],
            stages: self
                .stages
                .iter()
                .map(|s| StageFile {
                    threshold: s.threshold,
                    stumps: s
                        .stumps
                        .iter()
                        .map(|t| StumpFile {
                            rects: t
                                .feature
                                .rects
                                .iter()
                                .map(|r| (r.x, r.y, r.w, r.h, r.weight))
                                .collect(),
                            threshold: t.threshold,
                            left: t.left,
                            right: t.right,
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("cascade serializes")
    }
}

pub fn load_cascade(path: impl AsRef<Path>) -> Result<Cascade, DetectError> {
    Cascade::from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"window":[24,24],"stages":[{"threshold":0.5,"stumps":[
        {"rects":[[0,0,24,12,1.0],[0,12,24,12,-1.0]],"threshold":1.0,"left":0.0,"right":1.0}]}]}"#;

    #[test]
    fn minimal_file() {
        let c = Cascade::from_json(MINIMAL).unwrap();
        assert_eq!(c.stages().len(), 1);
        assert_eq!(c.stages()[0].stumps[0].feature.rects[1].weight, -1.0);
        assert_eq!(Cascade::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn empty_stage() {
        let text = r#"{"window":[24,24],"stages":[{"threshold":0.5,"stumps":[]}]}"#;
        assert!(matches!(
            Cascade::from_json(text),
            Err(DetectError::EmptyStage { stage: 0 })
        ));
    }

    #[test]
    fn rect_out_of_window() {
        let text = MINIMAL.replace("[0,0,24,12,1.0]", "[23,0,4,12,1.0]");
        assert!(matches!(
            Cascade::from_json(&text),
            Err(DetectError::RectOutOfWindow { rect: (23, 0, 4, 12), .. })
        ));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Cascade::from_json("{"), Err(DetectError::Parse(_))));
        assert!(matches!(
            Cascade::from_json(r#"{"window":[24,24],"stages":[]}"#),
            Err(DetectError::Parse(_))
        ));
        assert!(matches!(
            Cascade::from_json(&MINIMAL.replace("[24,24]", "[20,20]")),
            Err(DetectError::Parse(_))
        ));
        let one_rect = MINIMAL.replace(",[0,12,24,12,-1.0]", "");
        assert!(matches!(Cascade::from_json(&one_rect), Err(DetectError::Parse(_))));
    }
}
