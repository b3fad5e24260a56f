//! Command-line flags, the optional `key = value` config file, and their
//! resolution against a preset.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use xyz_noise::experiments::presets::{self, Preset};
use xyz_noise::experiments::{SweepAxis, DEFAULT_POINTS};
use xyz_noise::{ChannelSpec, GadParams, HybridParams, ModelParams};

use crate::output::Format;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "xyz-noise",
    version,
    about = "Correlations of a noisy two-qubit XYZ thermal state"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Closed-form thermal state elements.
    Thermal,
    /// Thermal state after the channel.
    Evolve,
    /// Concurrence, the three MINs and fidelity at one point.
    Measures {
        /// Also print the concurrence halved.
        #[arg(long)]
        compare: bool,
    },
    /// Measures along a parameter grid.
    Sweep,
    /// Sudden-death point of the GAD channel.
    #[command(name = "lambda-c")]
    LambdaC,
    /// Fidelity between the thermal state and its GAD image versus lambda.
    Fidelity,
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value_t = xyz_noise::verify::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Built-in figure parameter set.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    #[arg(long = "J", global = true, allow_negative_numbers = true)]
    pub j: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long = "Jz", global = true, allow_negative_numbers = true)]
    pub jz: Option<f64>,
    #[arg(long = "B", global = true, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Swept parameter: lambda, p, B or Jz.
    #[arg(long, global = true)]
    pub axis: Option<String>,
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Write here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// File of `key = value` lines using the flag names; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

const NUMERIC_KEYS: [&str; 9] = [
    "J", "gamma", "Jz", "B", "p", "lambda", "alpha", "beta", "delta",
];

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Argument(msg.into())
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| bad(format!("config: cannot parse {key} = {v:?}")))
}

impl Options {
    fn numeric_mut(&mut self, key: &str) -> Option<&mut Option<f64>> {
        Some(match key {
            "J" => &mut self.j,
            "gamma" => &mut self.gamma,
            "Jz" => &mut self.jz,
            "B" => &mut self.b,
            "p" => &mut self.p,
            "lambda" => &mut self.lambda,
            "alpha" => &mut self.alpha,
            "beta" => &mut self.beta,
            "delta" => &mut self.delta,
            _ => return None,
        })
    }

    fn numeric(&self, key: &str) -> Option<f64> {
        self.clone().numeric_mut(key).and_then(|v| *v)
    }

    /// Fills fields not given on the command line from `key = value` text.
    pub fn merge_config(&mut self, text: &str) -> Result<(), CliError> {
        let mut seen = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("config line {}: expected key = value", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if seen.insert(k.to_string(), ()).is_some() {
                return Err(bad(format!("config: duplicate key {k}")));
            }
            if let Some(slot) = self.numeric_mut(k) {
                if slot.is_none() {
                    *slot = Some(parse_num(k, v)?);
                }
                continue;
            }
            match k {
                "preset" => fill(&mut self.preset, v.to_string()),
                "axis" => fill(&mut self.axis, v.to_string()),
                "points" => fill(&mut self.points, parse_num(k, v)?),
                "threads" => fill(&mut self.threads, parse_num(k, v)?),
                "output" => fill(&mut self.output, PathBuf::from(v)),
                "format" => fill(
                    &mut self.format,
                    <Format as clap::ValueEnum>::from_str(v, true)
                        .map_err(|_| bad(format!("config: unknown format {v:?}")))?,
                ),
                _ => return Err(bad(format!("config: unknown key {k:?}"))),
            }
        }
        Ok(())
    }

    pub fn load_config(&mut self) -> Result<(), CliError> {
        if let Some(path) = self.config.clone() {
            let text = fs::read_to_string(&path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            self.merge_config(&text)?;
        }
        Ok(())
    }
}

fn fill<T>(slot: &mut Option<T>, v: T) {
    if slot.is_none() {
        *slot = Some(v);
    }
}

/// Parameters after merging flags, config and preset.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub model: Option<ModelParams>,
    pub channel: Option<ChannelSpec>,
    pub axis: Option<SweepAxis>,
    pub points: usize,
    /// Per-field warnings about explicit values replacing preset ones.
    pub warnings: Vec<String>,
}

fn preset_value(pr: &Preset, key: &str) -> Option<f64> {
    let m = pr.model;
    match (key, pr.channel) {
        ("J", _) => Some(m.j),
        ("gamma", _) => Some(m.gamma),
        ("Jz", _) => Some(m.jz),
        ("B", _) => Some(m.b),
        ("p", c) => Some(c.p()),
        ("lambda", ChannelSpec::Gad(g)) => Some(g.lambda),
        ("alpha", ChannelSpec::Hybrid(h)) => Some(h.alpha),
        ("beta", ChannelSpec::Hybrid(h)) => Some(h.beta),
        ("delta", ChannelSpec::Hybrid(h)) => Some(h.delta),
        _ => None,
    }
}

pub fn resolve(opts: &Options) -> Result<Resolved, CliError> {
    let preset = opts.preset.as_deref().map(presets::find).transpose()?;
    let mut warnings = Vec::new();

    let axis = match (&opts.axis, preset) {
        (Some(a), _) => Some(
            SweepAxis::parse(a)
                .ok_or_else(|| bad(format!("unknown axis {a:?}; use lambda, p, B or Jz")))?,
        ),
        (None, Some(pr)) => Some(pr.axis),
        (None, None) => None,
    };
    if let (Some(pr), Some(a)) = (preset, axis) {
        if opts.axis.is_some() && a != pr.axis {
            warnings.push(format!(
                "--axis {} overrides preset {} axis {}",
                a.name(),
                pr.name,
                pr.axis.name()
            ));
        }
    }

    let explicit_hybrid = ["alpha", "beta", "delta"]
        .iter()
        .any(|k| opts.numeric(k).is_some());
    let mut value = |key: &str| -> Option<f64> {
        let explicit = opts.numeric(key);
        let from_preset = preset.and_then(|pr| {
            // a hybrid override drops the preset's GAD rate and vice versa
            match (key, pr.channel, explicit_hybrid) {
                ("lambda", _, true) => None,
                ("alpha" | "beta" | "delta", ChannelSpec::Hybrid(_), _) => preset_value(pr, key),
                ("alpha" | "beta" | "delta", _, _) => None,
                _ => preset_value(pr, key),
            }
        });
        if let (Some(e), Some(pv), Some(pr)) = (explicit, from_preset, preset) {
            if e != pv {
                warnings.push(format!(
                    "--{key} {e} overrides preset {} value {pv}",
                    pr.name
                ));
            }
        }
        // the swept field needs no value of its own
        let swept = match (key, axis) {
            ("lambda", Some(SweepAxis::Lambda))
            | ("p", Some(SweepAxis::P))
            | ("B", Some(SweepAxis::B))
            | ("Jz", Some(SweepAxis::Jz)) => Some(0.0),
            _ => None,
        };
        explicit.or(from_preset).or(swept)
    };

    let v: BTreeMap<&str, Option<f64>> = NUMERIC_KEYS.iter().map(|&k| (k, value(k))).collect();
    let get = |k: &str| v[k];

    let model_fields = [get("J"), get("gamma"), get("Jz"), get("B")];
    let model = match model_fields {
        [Some(j), Some(gamma), Some(jz), Some(b)] => Some(ModelParams::new(j, gamma, jz, b)?),
        [None, None, None, None] => None,
        _ => {
            let missing: Vec<_> = ["J", "gamma", "Jz", "B"]
                .iter()
                .zip(model_fields)
                .filter(|(_, f)| f.is_none())
                .map(|(k, _)| format!("--{k}"))
                .collect();
            return Err(bad(format!("missing {}", missing.join(", "))));
        }
    };

    let hybrid = [get("alpha"), get("beta"), get("delta")];
    let channel = if hybrid.iter().any(Option::is_some) {
        match (hybrid, get("p")) {
            ([Some(a), Some(b), Some(d)], Some(p)) => {
                Some(ChannelSpec::Hybrid(HybridParams::new(a, b, d, p)?))
            }
            _ => return Err(bad("hybrid channel needs --alpha, --beta, --delta and --p")),
        }
    } else {
        match (get("p"), get("lambda")) {
            (Some(p), Some(lambda)) => Some(ChannelSpec::Gad(GadParams::new(p, lambda)?)),
            (None, None) => None,
            (None, Some(_)) => return Err(bad("GAD channel needs --p")),
            (Some(_), None) => return Err(bad(
                "GAD channel needs --lambda (or --alpha, --beta, --delta for the hybrid channel)",
            )),
        }
    };

    let points = opts.points.unwrap_or(DEFAULT_POINTS);
    Ok(Resolved {
        model,
        channel,
        axis,
        points,
        warnings,
    })
}
