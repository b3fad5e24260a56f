use std::io::Write as _;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use clap::Parser;
use xyz_noise::experiments::presets::PRESETS;
use xyz_noise_cli::args::{resolve, Cli, Options};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xyz-noise"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn maximally_mixed_point_has_no_correlations() {
    let o = bin(&[
        "measures", "--J", "0", "--gamma", "0", "--Jz", "0", "--B", "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    for v in &row[10..14] {
        assert_eq!(v.parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn preset_sweep_shape() {
    let o = bin(&[
        "sweep", "--preset", "fig1a", "--axis", "lambda", "--points", "201",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 202);
    assert!(text.starts_with(
        "axis,J,gamma,Jz,B,p,lambda,alpha,beta,delta,concurrence,n2,n1,nf,fidelity\n"
    ));
    assert!(o.stderr.is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["sweep", "--preset", "fig99"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        bin(&[
            "evolve", "--J", "1", "--gamma", "0", "--Jz", "0", "--B", "0", "--p", "2", "--lambda",
            "0.5"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["thermal", "--J", "1", "--gamma", "0", "--Jz", "-2000", "--B", "0"])
            .status
            .code(),
        Some(3)
    );
    let o = bin(&[
        "sweep",
        "--preset",
        "fig1a",
        "--output",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn override_warns() {
    let o = bin(&["measures", "--preset", "fig2a", "--p", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(
        err.contains("warning: --p 0.25 overrides preset fig2a"),
        "{err}"
    );
}

#[test]
fn compare_adds_halved_concurrence() {
    let o = bin(&[
        "measures",
        "--preset",
        "fig1a",
        "--lambda",
        "0.2",
        "--compare",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .ends_with(",fidelity,concurrence_half"));
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .skip(1)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().unwrap())
        .collect();
    let (c, half) = (row[row.len() - 6], row[row.len() - 1]);
    assert_eq!(half, c / 2.0);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig4a.csv");
    let args = ["sweep", "--preset", "fig4a", "--points", "21"];
    let direct = bin(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    assert_eq!(bin(&with_file).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.conf");
    std::fs::File::create(&path)
        .unwrap()
        .write_all(text.as_bytes())
        .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let conf = write_config(
        dir.path(),
        "# fig1 model\nJ = 2\ngamma = 0.1\nJz = 2\nB = 0\np = 0.5\nlambda = 0.9\n",
    );
    let from_file = bin(&["evolve", "--config", &conf]);
    assert_eq!(from_file.status.code(), Some(0));
    let flagged = bin(&["evolve", "--config", &conf, "--lambda", "0.4"]);
    let line = stdout(&flagged);
    assert!(
        line.lines()
            .nth(1)
            .unwrap()
            .starts_with("2.0,0.1,2.0,0.0,0.5,0.4,"),
        "{line}"
    );
    assert_ne!(from_file.stdout, flagged.stdout);

    let bad = write_config(dir.path(), "colour = blue\n");
    assert_eq!(bin(&["thermal", "--config", &bad]).status.code(), Some(2));
}

#[test]
fn resolution_rules() {
    let cli = Cli::parse_from([
        "xyz-noise",
        "sweep",
        "--preset",
        "fig2b",
        "--alpha",
        "0.2",
        "--beta",
        "0.3",
        "--delta",
        "0.5",
    ]);
    let r = resolve(&cli.opts).unwrap();
    assert!(matches!(r.channel, Some(xyz_noise::ChannelSpec::Hybrid(_))));

    let mut opts = Options::default();
    opts.merge_config("J = 1\nJ = 2\n").unwrap_err();
    let mut opts = Options {
        j: Some(3.0),
        ..Options::default()
    };
    opts.merge_config("J = 1\ngamma=0\nJz = 0\nB=0").unwrap();
    assert_eq!(opts.j, Some(3.0));
    assert!(resolve(&opts).unwrap().channel.is_none());
}

#[test]
fn every_preset_runs_quickly_single_threaded() {
    for p in PRESETS.iter() {
        let t = Instant::now();
        let o = bin(&["sweep", "--preset", p.name, "--threads", "1"]);
        assert_eq!(o.status.code(), Some(0), "{}", p.name);
        assert!(
            t.elapsed() < Duration::from_secs(10),
            "{} took {:?}",
            p.name,
            t.elapsed()
        );
    }
}

#[test]
fn verify_command_passes() {
    let o = bin(&["verify", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o)
            .lines()
            .filter(|l| l.starts_with("[PASS]"))
            .count(),
        7
    );
}
