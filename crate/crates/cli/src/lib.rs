//! Front end for the `xyz-noise` binary.

use std::fmt;
use std::fs;
use std::io::{self, Write};

use xyz_noise::experiments::presets::FIDELITY_PS;
use xyz_noise::experiments::{
    channel_fidelity_curve, evaluate_point, sudden_death_lambda, sweep, uniform_grid, SweepSpec,
};
use xyz_noise::spinmodel::thermal_elements;
use xyz_noise::{verify, ChannelSpec, Error, GadParams, ModelParams, SweepAxis, XElements};

pub mod args;
pub mod output;

use args::{resolve, Cli, Command, Resolved};
use output::{
    channel_cells, model_cells, row_cells, sweep_table, Cell, Format, Table, ROW_COLUMNS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ARGUMENT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Argument(String),
    Numeric(Error),
    Io(String),
    VerifyFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Argument(_) => EXIT_ARGUMENT,
            CliError::Numeric(_) | CliError::Io(_) => EXIT_NUMERIC,
            CliError::VerifyFailed(_) => EXIT_VERIFY,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Argument(m) => write!(f, "{m}"),
            CliError::Numeric(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::VerifyFailed(n) => write!(f, "{n} verification check(s) failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_argument_error() {
            CliError::Argument(e.to_string())
        } else {
            CliError::Numeric(e)
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn need_model(r: &Resolved) -> Result<ModelParams, CliError> {
    r.model.ok_or_else(|| {
        CliError::Argument("model parameters required: --J, --gamma, --Jz, --B or --preset".into())
    })
}

fn need_channel(r: &Resolved) -> Result<ChannelSpec, CliError> {
    r.channel.ok_or_else(|| {
        CliError::Argument(
            "channel required: --p with --lambda (GAD) or --alpha, --beta, --delta (hybrid)".into(),
        )
    })
}

fn need_axis(r: &Resolved) -> Result<SweepAxis, CliError> {
    r.axis.ok_or_else(|| {
        CliError::Argument("--axis required (lambda, p, B or Jz) or --preset".into())
    })
}

fn grid_for(r: &Resolved, axis: SweepAxis) -> Result<Vec<f64>, CliError> {
    let (lo, hi) = axis.default_range();
    Ok(uniform_grid(lo, hi, r.points)?)
}

const X_COLUMNS: [&str; 6] = ["r11", "r22", "r33", "r44", "r14", "r23"];

fn x_cells(x: &XElements) -> Vec<Cell> {
    [x.r11, x.r22, x.r33, x.r44, x.r14, x.r23]
        .into_iter()
        .map(Cell::from)
        .collect()
}

fn thermal_table(r: &Resolved) -> Result<Table, CliError> {
    let model = need_model(r)?;
    let t = thermal_elements(&model)?;
    let z = t.z_part;
    let x = XElements::new(
        t.mu_minus / z,
        t.nu / z,
        t.nu / z,
        t.mu_plus / z,
        t.kappa / z,
        t.epsilon / z,
    )?;
    let mut table = Table::new([&["J", "gamma", "Jz", "B"][..], &X_COLUMNS, &["Z"]].concat());
    let mut row = model_cells(&model);
    row.extend(x_cells(&x));
    row.push(z.into());
    table.push(row);
    Ok(table)
}

fn evolve_table(r: &Resolved) -> Result<Table, CliError> {
    let model = need_model(r)?;
    let channel = need_channel(r)?;
    let x = channel.evolve(&thermal_elements(&model)?)?;
    let mut table = Table::new([&ROW_COLUMNS[1..10], &X_COLUMNS[..]].concat());
    let mut row = model_cells(&model);
    row.extend(channel_cells(Some(&channel)));
    row.extend(x_cells(&x));
    table.push(row);
    Ok(table)
}

fn measures_table(r: &Resolved, compare: bool) -> Result<Table, CliError> {
    let model = need_model(r)?;
    // without a channel the thermal state itself is measured
    let effective = r
        .channel
        .unwrap_or(ChannelSpec::Gad(GadParams::new(0.0, 0.0)?));
    let report = evaluate_point(&model, &effective)?;
    let mut columns = ROW_COLUMNS.to_vec();
    let mut row = row_cells(None, &model, r.channel.as_ref(), &report);
    if compare {
        columns.push("concurrence_half");
        row.push(report.concurrence_half().into());
    }
    let mut table = Table::new(columns);
    table.push(row);
    Ok(table)
}

fn sweep_rows(r: &Resolved) -> Result<Table, CliError> {
    let axis = need_axis(r)?;
    let spec = SweepSpec {
        model: need_model(r)?,
        channel: need_channel(r)?,
        axis,
        grid: grid_for(r, axis)?,
    };
    Ok(sweep_table(&sweep(&spec)?))
}

fn lambda_c_table(r: &Resolved) -> Result<Table, CliError> {
    let model = need_model(r)?;
    let ps = match r.axis {
        Some(SweepAxis::P) => grid_for(r, SweepAxis::P)?,
        _ => vec![r
            .channel
            .map(|c| c.p())
            .ok_or_else(|| CliError::Argument("--p required".into()))?],
    };
    let mut table = Table::new(vec!["J", "gamma", "Jz", "B", "p", "lambda_c"]);
    for p in ps {
        let mut row = model_cells(&model);
        row.push(p.into());
        row.push(sudden_death_lambda(&model, p)?.into());
        table.push(row);
    }
    Ok(table)
}

fn fidelity_table(r: &Resolved, explicit_p: Option<f64>) -> Result<Table, CliError> {
    let model = need_model(r)?;
    let grid = grid_for(r, SweepAxis::Lambda)?;
    let ps = explicit_p.map_or(FIDELITY_PS.to_vec(), |p| vec![p]);
    let mut table = Table::new(vec!["J", "gamma", "Jz", "B", "p", "lambda", "fidelity"]);
    for p in ps {
        for (lambda, f) in channel_fidelity_curve(&model, p, &grid)? {
            let mut row = model_cells(&model);
            row.extend([p.into(), lambda.into(), f.into()]);
            table.push(row);
        }
    }
    Ok(table)
}

fn verify_table(seed: u64) -> (Table, usize) {
    let checks = verify::run_all(seed);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut table = Table::new(vec!["criterion", "name", "passed", "detail"]);
    for c in checks {
        table.push(vec![
            (c.id as f64).into(),
            Cell::Text(c.name.to_string()),
            Cell::Bool(c.passed),
            Cell::Text(c.detail),
        ]);
    }
    (table, failed)
}

fn emit(bytes: &[u8], cli: &Cli) -> Result<(), CliError> {
    match &cli.opts.output {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            Ok(out.flush()?)
        }
    }
}

fn execute(cli: &Cli, warn: &mut (dyn Write + Send)) -> Result<(), CliError> {
    let r = resolve(&cli.opts)?;
    for w in &r.warnings {
        let _ = writeln!(warn, "warning: {w}");
    }
    let format = cli.opts.format.unwrap_or_default();
    let table = match &cli.command {
        Command::Thermal => thermal_table(&r)?,
        Command::Evolve => evolve_table(&r)?,
        Command::Measures { compare } => measures_table(&r, *compare)?,
        Command::Sweep => sweep_rows(&r)?,
        Command::LambdaC => lambda_c_table(&r)?,
        Command::Fidelity => fidelity_table(&r, cli.opts.p)?,
        Command::Verify { seed } => {
            let (table, failed) = verify_table(*seed);
            let mut buf = Vec::new();
            if cli.opts.format == Some(Format::Json) {
                table.write(Format::Json, &mut buf)?;
            } else {
                for row in &table.rows {
                    if let [Cell::Num(id), Cell::Text(name), Cell::Bool(ok), Cell::Text(detail)] =
                        &row[..]
                    {
                        let tag = if *ok { "PASS" } else { "FAIL" };
                        writeln!(buf, "[{tag}] criterion {id}: {name} ({detail})")?;
                    }
                }
            }
            emit(&buf, cli)?;
            return if failed == 0 {
                Ok(())
            } else {
                Err(CliError::VerifyFailed(failed))
            };
        }
    };
    let mut buf = Vec::new();
    table.write(format, &mut buf)?;
    emit(&buf, cli)
}

/// Runs a parsed invocation and returns the process exit code. Diagnostics
/// go to `warn`.
pub fn run(mut cli: Cli, warn: &mut (dyn Write + Send)) -> i32 {
    let result = cli
        .opts
        .load_config()
        .and_then(|()| match cli.opts.threads {
            Some(0) => Err(CliError::Argument("--threads must be at least 1".into())),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Io(e.to_string()))
                .and_then(|pool| pool.install(|| execute(&cli, warn))),
            None => execute(&cli, warn),
        });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(warn, "error: {e}");
            e.exit_code()
        }
    }
}
