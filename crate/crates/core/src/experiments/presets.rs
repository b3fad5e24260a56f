//! Built-in parameter sets for the figure sweeps.
//!
//! Every preset uses `gamma = 0.1, J = 2` and, unless it sweeps it, `Jz = 2`.

use super::{uniform_grid, ChannelSpec, SweepAxis, SweepSpec, DEFAULT_POINTS};
use crate::channels::{GadParams, HybridParams};
use crate::error::{invalid, Result};
use crate::spinmodel::ModelParams;

/// Emission probabilities of the channel-fidelity curves.
pub const FIDELITY_PS: [f64; 4] = [1.0, 0.5, 0.3, 0.0];

/// Hybrid weights `(alpha, beta, delta)` of the hybrid-channel presets.
pub const HYBRID_WEIGHTS: (f64, f64, f64) = (0.3, 0.2, 0.5);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub model: ModelParams,
    pub channel: ChannelSpec,
    pub axis: SweepAxis,
}

impl Preset {
    pub fn sweep_spec(&self, points: usize) -> Result<SweepSpec> {
        let (lo, hi) = self.axis.default_range();
        Ok(SweepSpec {
            model: self.model,
            channel: self.channel,
            axis: self.axis,
            grid: uniform_grid(lo, hi, points)?,
        })
    }

    pub fn default_sweep(&self) -> Result<SweepSpec> {
        self.sweep_spec(DEFAULT_POINTS)
    }
}

const fn model(b: f64) -> ModelParams {
    ModelParams {
        j: 2.0,
        gamma: 0.1,
        jz: 2.0,
        b,
    }
}

const fn gad(p: f64, lambda: f64) -> ChannelSpec {
    ChannelSpec::Gad(GadParams { p, lambda })
}

const fn hybrid(p: f64) -> ChannelSpec {
    let (alpha, beta, delta) = HYBRID_WEIGHTS;
    ChannelSpec::Hybrid(HybridParams {
        alpha,
        beta,
        delta,
        p,
    })
}

const fn preset(
    name: &'static str,
    description: &'static str,
    model: ModelParams,
    channel: ChannelSpec,
    axis: SweepAxis,
) -> Preset {
    Preset {
        name,
        description,
        model,
        channel,
        axis,
    }
}

pub const PRESETS: [Preset; 14] = [
    preset(
        "fig1a",
        "GAD, B=0, p=0.5, measures vs lambda",
        model(0.0),
        gad(0.5, 0.0),
        SweepAxis::Lambda,
    ),
    preset(
        "fig1b_p0",
        "GAD, B=0, p=0, measures vs lambda",
        model(0.0),
        gad(0.0, 0.0),
        SweepAxis::Lambda,
    ),
    preset(
        "fig1b_p1",
        "GAD, B=0, p=1, measures vs lambda",
        model(0.0),
        gad(1.0, 0.0),
        SweepAxis::Lambda,
    ),
    preset(
        "fig1b_p01",
        "GAD, B=0, p=0.1, measures vs lambda",
        model(0.0),
        gad(0.1, 0.0),
        SweepAxis::Lambda,
    ),
    preset(
        "fig2a",
        "GAD, B=0, lambda=0.5, measures vs p",
        model(0.0),
        gad(0.5, 0.5),
        SweepAxis::P,
    ),
    preset(
        "fig2b",
        "GAD, B=0, lambda=0.75, measures vs p",
        model(0.0),
        gad(0.5, 0.75),
        SweepAxis::P,
    ),
    preset(
        "fig3a",
        "no channel, B=0, measures vs Jz",
        model(0.0),
        gad(0.5, 0.0),
        SweepAxis::Jz,
    ),
    preset(
        "fig3b",
        "GAD p=0.5 lambda=0.5, B=0, measures vs Jz",
        model(0.0),
        gad(0.5, 0.5),
        SweepAxis::Jz,
    ),
    preset(
        "fig4a",
        "GAD p=0.5 lambda=0.1, measures vs B",
        model(0.0),
        gad(0.5, 0.1),
        SweepAxis::B,
    ),
    preset(
        "fig4b",
        "GAD p=0.5 lambda=0.9, measures vs B",
        model(0.0),
        gad(0.5, 0.9),
        SweepAxis::B,
    ),
    preset(
        "fig5a",
        "GAD B=4, p=1, fidelity vs lambda",
        model(4.0),
        gad(1.0, 0.0),
        SweepAxis::Lambda,
    ),
    preset(
        "fig5b",
        "GAD B=8, p=1, fidelity vs lambda",
        model(8.0),
        gad(1.0, 0.0),
        SweepAxis::Lambda,
    ),
    preset(
        "fig6a",
        "hybrid (0.3,0.2,0.5), B=0, measures vs p",
        model(0.0),
        hybrid(0.0),
        SweepAxis::P,
    ),
    preset(
        "fig6b",
        "hybrid (0.3,0.2,0.5), B=4, measures vs p",
        model(4.0),
        hybrid(0.0),
        SweepAxis::P,
    ),
];

pub fn find(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        invalid(format!(
            "unknown preset {name:?}; known: {}",
            names.join(", ")
        ))
    })
}
