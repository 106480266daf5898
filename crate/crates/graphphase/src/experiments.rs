//! Statistics extracted by the synthetic experiments: per-fan amplitude and
//! frequency summaries for the rosace, amplitude range and phase-increment
//! uniformity for the planar wave on the grid.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::graph::{Axis, GridSpec, RosaceSpec};
use crate::hilbert::{instantaneous_frequency, PathKind};

/// Per-fan summary against the synthetic ground truth.
#[derive(Debug, Clone, Serialize)]
pub struct FanStat {
    pub fan: usize,
    /// Mean instantaneous amplitude over the fan, hub excluded.
    pub mean_amplitude: f64,
    pub amplitude_truth: f64,
    pub amplitude_rel_err: f64,
    /// Mean |omega| over fan-cycle increments not touching the hub.
    pub mean_abs_frequency: f64,
    pub frequency_truth: f64,
    pub frequency_rel_err: f64,
}

/// Computes per-fan statistics from the aggregate amplitude and phase of the
/// analyzed rosace signal. The hub node is excluded from the amplitude mean,
/// and the two phase increments touching the hub are excluded from the
/// frequency mean.
pub fn rosace_fan_statistics(
    spec: &RosaceSpec,
    amplitude: &[f64],
    phase: &[f64],
) -> Result<Vec<FanStat>> {
    let mut rows = Vec::with_capacity(spec.n_hubs);
    for m in 1..=spec.n_hubs {
        let nodes = spec.fan_nodes(m);
        let off_hub = &nodes[1..];
        let mean_amplitude =
            off_hub.iter().map(|&v| amplitude[v]).sum::<f64>() / off_hub.len() as f64;
        let omega = instantaneous_frequency(phase, &nodes, PathKind::Closed)?;
        // omega[0] leaves the hub and omega[last] returns to it
        let interior = &omega[1..omega.len() - 1];
        let mean_abs_frequency =
            interior.iter().map(|w| w.abs()).sum::<f64>() / interior.len() as f64;
        let amplitude_truth = (2 * m + 1) as f64;
        let frequency_truth = PI * (m as f64 + 1.0) / spec.n_fan as f64;
        rows.push(FanStat {
            fan: m,
            mean_amplitude,
            amplitude_truth,
            amplitude_rel_err: (mean_amplitude - amplitude_truth).abs() / amplitude_truth,
            mean_abs_frequency,
            frequency_truth,
            frequency_rel_err: (mean_abs_frequency - frequency_truth).abs() / frequency_truth,
        });
    }
    Ok(rows)
}

/// Wave-quality summary for the grid experiment.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WaveStats {
    pub amplitude_min: f64,
    pub amplitude_max: f64,
    /// Max deviation of phase increments from their per-lane mean, over all
    /// open lanes along the propagation direction.
    pub max_phase_increment_deviation: f64,
}

/// Computes the wave statistics along the propagation direction (down the
/// columns for a vertical wave, along the rows for a horizontal one).
pub fn grid_wave_statistics(
    spec: &GridSpec,
    direction: Axis,
    amplitude: &[f64],
    phase: &[f64],
) -> Result<WaveStats> {
    let lanes = match direction {
        Axis::Vertical => spec.cols,
        Axis::Horizontal => spec.rows,
    };
    let mut max_dev = 0.0f64;
    for lane in 0..lanes {
        let path: Vec<usize> = match direction {
            Axis::Vertical => (0..spec.rows).map(|i| spec.node(i, lane)).collect(),
            Axis::Horizontal => (0..spec.cols).map(|j| spec.node(lane, j)).collect(),
        };
        let omega = instantaneous_frequency(phase, &path, PathKind::Open)?;
        let mean = omega.iter().sum::<f64>() / omega.len() as f64;
        for w in &omega {
            max_dev = max_dev.max((w - mean).abs());
        }
    }
    Ok(WaveStats {
        amplitude_min: amplitude.iter().copied().fold(f64::INFINITY, f64::min),
        amplitude_max: amplitude.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        max_phase_increment_deviation: max_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_cycle, GraphSignal};
    use crate::hilbert::{amplitude, analytic, build_ght, phase};
    use crate::spectral::{decompose, ToleranceSet};
    use std::sync::Arc;

    #[test]
    fn wave_stats_on_plain_cycle_are_exact() {
        // a pure cycle is the degenerate 1-lane case of the lane logic:
        // reuse the machinery through a fake 1-column grid is not possible
        // (rows >= 2), so check the statistics pieces directly on a cycle
        let n = 16usize;
        let dec = decompose(&gen_cycle(n).unwrap(), ToleranceSet::default()).unwrap();
        let op = build_ght(Arc::new(dec)).unwrap();
        let x = GraphSignal::new(
            (0..n)
                .map(|k| (std::f64::consts::TAU * k as f64 / n as f64).sin())
                .collect(),
        )
        .unwrap();
        let a = analytic(&op, &x).unwrap();
        let amp = amplitude(&a);
        let phi = phase(&a);
        for v in &amp {
            assert!((v - 1.0).abs() < 1e-10);
        }
        let path: Vec<usize> = (0..n).collect();
        let omega = instantaneous_frequency(&phi, &path, PathKind::Closed).unwrap();
        let step = std::f64::consts::TAU / n as f64;
        for w in &omega {
            assert!((w.abs() - step).abs() < 1e-10, "{w} vs {step}");
        }
    }
}
