use super::frame::{Frame, FRAME_LEN};
use super::{entropy_bits, ENTROPY_BLOCKS};

/// Per-block share of a frame's (or spectrum's) total energy.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyDistribution {
    pub g: Vec<f64>,
}

impl EnergyDistribution {
    /// Normalizes block energies by their sum. All-zero input stays all zero.
    pub fn from_block_energies(blocks: Vec<f64>) -> Self {
        let total: f64 = blocks.iter().sum();
        let g = if total > 0.0 {
            blocks.into_iter().map(|e| e / total).collect()
        } else {
            vec![0.0; blocks.len()]
        };
        Self { g }
    }

    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.g)
    }
}

/// Fraction of adjacent sample pairs whose signs differ; zero counts as
/// non-negative.
pub fn zcr(frame: &Frame<'_>) -> f64 {
    let crossings = frame
        .samples()
        .windows(2)
        .filter(|w| (w[0] >= 0.0) != (w[1] >= 0.0))
        .count();
    crossings as f64 / FRAME_LEN as f64
}

/// Mean squared amplitude.
pub fn energy(frame: &Frame<'_>) -> f64 {
    frame.samples().iter().map(|y| y * y).sum::<f64>() / FRAME_LEN as f64
}

/// Energy share of each of the 10 equal 48-sample sub-blocks.
pub fn energy_distribution(frame: &Frame<'_>) -> EnergyDistribution {
    let block = FRAME_LEN / ENTROPY_BLOCKS;
    EnergyDistribution::from_block_energies(
        frame
            .samples()
            .chunks_exact(block)
            .map(|c| c.iter().map(|y| y * y).sum())
            .collect(),
    )
}

/// Entropy (bits) of the sub-block energy distribution; 0 for silence.
pub fn energy_entropy(frame: &Frame<'_>) -> f64 {
    energy_distribution(frame).entropy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn with_frame<R>(samples: &[f64], f: impl FnOnce(&Frame<'_>) -> R) -> R {
        f(&Frame::new(samples, 0).unwrap())
    }

    #[test]
    fn zcr_cases() {
        assert_eq!(with_frame(&[0.0; 480], zcr), 0.0);
        let alt: Vec<f64> = (0..480).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert_eq!(with_frame(&alt, zcr), 479.0 / 480.0);
        let sine: Vec<f64> = (0..480)
            .map(|i| (2.0 * PI * 400.0 * i as f64 / 16_000.0).sin())
            .collect();
        assert!((with_frame(&sine, zcr) - 0.05).abs() <= 1.0 / 480.0);
    }

    #[test]
    fn energy_cases() {
        assert_eq!(with_frame(&[0.0; 480], energy), 0.0);
        assert_eq!(with_frame(&[2.0; 480], energy), 4.0);
        let mut v = [0.0; 480];
        v[..4].copy_from_slice(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(with_frame(&v, energy), 0.0625);
    }

    #[test]
    fn entropy_extremes() {
        let uniform = [0.5; 480];
        assert!((with_frame(&uniform, energy_entropy) - 10f64.log2()).abs() < 1e-9);
        let mut spike = [0.0; 480];
        spike[100] = 0.8;
        spike[101] = -0.3;
        assert_eq!(with_frame(&spike, energy_entropy), 0.0);
        assert_eq!(with_frame(&[0.0; 480], energy_entropy), 0.0);
    }

    #[test]
    fn distribution_sums_to_one() {
        let v: Vec<f64> = (0..480).map(|i| ((i * 37) % 11) as f64 / 11.0 - 0.5).collect();
        let d = with_frame(&v, energy_distribution);
        assert_eq!(d.g.len(), 10);
        assert!((d.g.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(d.g.iter().all(|&g| g >= 0.0));
    }
}
