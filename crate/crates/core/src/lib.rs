//! Emotion recognition from speech and face images, combined by a
//! frame-count fusion rule.
//!
//! The audio path reduces a 16 kHz clip to pitch plus per-frame means of
//! short-time features and MFCCs. The face path finds a face with a Haar
//! cascade, crops it to 112x128 and describes it with regional uniform LBP
//! histograms. Either vector feeds a KNN or linear SVM classifier, and
//! [`fusion`] decides per video whether the face votes are decisive enough
//! to override the speech prediction.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! - `pitch_tracking`: YIN on tones and pulse trains
//! - `audio_features`: the utterance vector of a WAV file
//! - `lbp_histogram`: patterns, uniform bins and the facial vector
//! - `face_detection`: cascade scan, grouping and cropping
//! - `train_classifiers`: KNN vs SVM, confusion matrices, model files
//! - `fusion_sweep`: fusion decisions and the threshold sweep
//! - `end_to_end`: synthetic fixtures through extraction, training and fused prediction

pub mod audio;
pub mod classify;
pub mod cli;
pub mod dataset;
pub mod face;
pub mod fusion;
pub mod lbp;
pub mod signal_io;
pub mod synth;
