//! YIN pitch on pure tones, a pulse train and the synthetic voices, with the
//! normalized difference curve around the chosen lag.

use emofuse::audio::{estimate_pitch, select_lag, yin_difference, yin_normalize, PITCH_LAG_MAX, PITCH_LAG_MIN};
use emofuse::synth::{impulse_train, tone, voice_clip, VOICE_PROFILES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>10} {:>12} {:>8}", "input", "estimate", "error");
    for f in [60.0, 100.0, 200.0, 300.0, 440.0, 600.0] {
        let p = estimate_pitch(&tone(f, 0.25, 0.5));
        println!("{:>7} Hz {:>9.2} Hz {:>7.3}%", f, p, 100.0 * (p - f).abs() / f);
    }
    let pulses = estimate_pitch(&impulse_train(100, 0.25));
    println!("{:>10} {:>9.2} Hz", "pulses/100", pulses);
    println!("{:>10} {:>9.2} Hz", "silence", estimate_pitch(&tone(0.0, 0.25, 0.0)));

    for profile in &VOICE_PROFILES {
        let p = estimate_pitch(&voice_clip(profile, 1, 0.5));
        println!("voice {:<8} nominal {:>5} Hz, estimated {:>7.2} Hz", profile.label, profile.f0, p);
    }

    // The curve that picks the lag for a 200 Hz tone: the first dip under
    // the threshold is at lag 80.
    let clip = tone(200.0, 0.25, 0.5);
    let norm = yin_normalize(&yin_difference(clip.samples(), PITCH_LAG_MIN, PITCH_LAG_MAX)?);
    let lag = select_lag(&norm);
    println!("\n200 Hz tone: selected lag {lag}");
    for (t, v) in norm.lags().filter(|(t, _)| t.abs_diff(lag) <= 3 || t.abs_diff(2 * lag) <= 1) {
        println!("  d'({t:>3}) = {v:.4}");
    }
    Ok(())
}
