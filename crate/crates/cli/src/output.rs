//! Tabular output in CSV or JSON.

use std::io::{self, Write};

use serde_json::{Map, Number, Value};
use xyz_noise::experiments::SweepRow;
use xyz_noise::{ChannelSpec, CorrelationReport, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Num(f64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        // -0.0 prints as 0.0
        Cell::Num(v + 0.0)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::from)
    }
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            // Debug is the shortest representation that parses back exactly
            Cell::Num(v) => format!("{v:?}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json_value(&self) -> Value {
        match self {
            Cell::Empty => Value::Null,
            Cell::Num(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, format: Format, sink: W) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(sink),
            Format::Json => self.write_json(sink),
        }
    }

    fn write_csv<W: Write>(&self, sink: W) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(sink);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))?;
        }
        w.flush()
    }

    fn write_json<W: Write>(&self, mut sink: W) -> io::Result<()> {
        let objects: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let m: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), v.json_value()))
                    .collect();
                Value::Object(m)
            })
            .collect();
        serde_json::to_writer_pretty(&mut sink, &objects)?;
        sink.write_all(b"\n")?;
        sink.flush()
    }
}

pub const ROW_COLUMNS: [&str; 15] = [
    "axis",
    "J",
    "gamma",
    "Jz",
    "B",
    "p",
    "lambda",
    "alpha",
    "beta",
    "delta",
    "concurrence",
    "n2",
    "n1",
    "nf",
    "fidelity",
];

pub fn model_cells(m: &ModelParams) -> Vec<Cell> {
    vec![m.j.into(), m.gamma.into(), m.jz.into(), m.b.into()]
}

/// `p, lambda, alpha, beta, delta`, blank where the channel has no such field.
pub fn channel_cells(c: Option<&ChannelSpec>) -> Vec<Cell> {
    match c {
        None => vec![Cell::Empty; 5],
        Some(ChannelSpec::Gad(g)) => {
            vec![
                g.p.into(),
                g.lambda.into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]
        }
        Some(ChannelSpec::Hybrid(h)) => {
            vec![
                h.p.into(),
                Cell::Empty,
                h.alpha.into(),
                h.beta.into(),
                h.delta.into(),
            ]
        }
    }
}

pub fn report_cells(r: &CorrelationReport) -> Vec<Cell> {
    vec![
        r.concurrence.into(),
        r.n2.into(),
        r.n1.into(),
        r.nf.into(),
        r.fidelity_to_initial.into(),
    ]
}

pub fn row_cells(
    axis: Option<&str>,
    model: &ModelParams,
    channel: Option<&ChannelSpec>,
    report: &CorrelationReport,
) -> Vec<Cell> {
    let mut cells = vec![axis.map_or(Cell::Empty, |a| Cell::Text(a.to_string()))];
    cells.extend(model_cells(model));
    cells.extend(channel_cells(channel));
    cells.extend(report_cells(report));
    cells
}

pub fn sweep_table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new(ROW_COLUMNS.to_vec());
    for r in rows {
        t.push(row_cells(
            Some(r.axis.name()),
            &r.model,
            Some(&r.channel),
            &r.report,
        ));
    }
    t
}

/// Serializes sweep rows in the fixed column schema.
pub fn write_rows<W: Write>(rows: &[SweepRow], format: Format, sink: W) -> io::Result<()> {
    sweep_table(rows).write(format, sink)
}
