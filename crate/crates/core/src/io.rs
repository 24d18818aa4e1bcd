//! Instance and result persistence: the canonical `.ilp.json` format, a
//! strict MPS-subset reader for external pure-binary instances, and the
//! JSON-lines / CSV writers the benchmark harness uses.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lns::RunTrace;
use crate::metrics::{self, GapSeries};
use crate::model::{Direction, IlpInstance, ModelError, RawProblem, Sense, VarKind};
use crate::scalar::Scalar;

pub const INSTANCE_FORMAT_TAG: &str = "binary-ilp-v1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Mps { line: usize, message: String },
    #[error("unsupported instance format tag `{0}`")]
    UnsupportedFormat(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// The canonical on-disk instance: minimization-normalized objective plus the
/// original-direction flag, rows as `[index, coefficient]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CanonicalInstanceFile<S> {
    pub format: String,
    pub name: String,
    pub n: usize,
    pub maximize: bool,
    pub objective: Vec<S>,
    pub rows: Vec<Vec<(usize, S)>>,
    pub senses: Vec<Sense>,
    pub rhs: Vec<S>,
}

pub fn serialize_instance<S: Scalar>(inst: &IlpInstance<S>) -> String {
    let file = CanonicalInstanceFile {
        format: INSTANCE_FORMAT_TAG.to_string(),
        name: inst.name().to_string(),
        n: inst.num_vars(),
        maximize: inst.is_maximization(),
        objective: inst.objective().to_vec(),
        rows: (0..inst.num_rows()).map(|i| inst.row(i).to_vec()).collect(),
        senses: (0..inst.num_rows()).map(|i| inst.sense(i)).collect(),
        rhs: (0..inst.num_rows()).map(|i| inst.rhs(i)).collect(),
    };
    serde_json::to_string_pretty(&file).expect("instance serialization cannot fail")
}

pub fn parse_instance<S: Scalar>(text: &str) -> Result<IlpInstance<S>, IoError> {
    let file: CanonicalInstanceFile<S> = serde_json::from_str(text)?;
    if file.format != INSTANCE_FORMAT_TAG {
        return Err(IoError::UnsupportedFormat(file.format));
    }
    Ok(IlpInstance::from_normalized_parts(
        file.name,
        file.n,
        file.maximize,
        file.objective,
        file.rows,
        file.senses,
        file.rhs,
    )?)
}

pub fn write_instance<S: Scalar>(path: &Path, inst: &IlpInstance<S>) -> Result<(), IoError> {
    Ok(fs::write(path, serialize_instance(inst))?)
}

pub fn read_instance<S: Scalar>(path: &Path) -> Result<IlpInstance<S>, IoError> {
    parse_instance(&fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// MPS subset
// ---------------------------------------------------------------------------

/// Parse the fixed/free MPS subset: NAME, OBJSENSE, ROWS (N/L/G/E), COLUMNS
/// with integrality markers, RHS, BOUNDS (BV/UP/UI/LO/LI) and ENDATA. Every
/// variable must resolve to a binary; RANGES and anything else is rejected
/// with the offending line number.
pub fn parse_mps<S: Scalar>(text: &str) -> Result<IlpInstance<S>, IoError> {
    #[derive(PartialEq, Clone, Copy)]
    enum Section {
        Start,
        Name,
        ObjSense,
        Rows,
        Columns,
        Rhs,
        Bounds,
        Done,
    }

    let err = |line: usize, message: String| IoError::Mps { line, message };

    #[derive(Default, Clone)]
    struct Column {
        integral: bool,
        binary_bound: bool,
        lower: Option<f64>,
        upper: Option<f64>,
        int_bound: bool,
        entries: Vec<(usize, f64)>, // row index (usize::MAX = objective)
        objective: f64,
    }

    let mut section = Section::Start;
    let mut name = String::new();
    let mut direction = Direction::Minimize;
    let mut objective_row: Option<String> = None;
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut senses: Vec<Sense> = Vec::new();
    let mut rhs_by_row: Vec<f64> = Vec::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut col_names: Vec<String> = Vec::new();
    let mut columns: Vec<Column> = Vec::new();
    let mut in_integer_block = false;

    for (lineno, raw_line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw_line.trim_end();
        if line.is_empty() || line.starts_with('*') {
            continue;
        }
        let indented = line.starts_with(' ') || line.starts_with('\t');
        let tokens: Vec<&str> = line.split_whitespace().collect();

        if !indented {
            if section == Section::Done {
                return Err(err(lineno, format!("data after ENDATA: `{}`", tokens[0])));
            }
            section = match tokens[0] {
                "NAME" => {
                    if tokens.len() > 1 {
                        name = tokens[1].to_string();
                    }
                    Section::Name
                }
                "OBJSENSE" => {
                    if let Some(word) = tokens.get(1) {
                        direction = parse_objsense(word).ok_or_else(|| {
                            err(lineno, format!("unknown objective sense `{word}`"))
                        })?;
                    }
                    Section::ObjSense
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "RANGES" => {
                    return Err(err(lineno, "RANGES sections are not supported".to_string()))
                }
                "ENDATA" => Section::Done,
                other => return Err(err(lineno, format!("unknown section `{other}`"))),
            };
            continue;
        }

        match section {
            Section::ObjSense => {
                direction = parse_objsense(tokens[0]).ok_or_else(|| {
                    err(lineno, format!("unknown objective sense `{}`", tokens[0]))
                })?;
            }
            Section::Rows => {
                if tokens.len() != 2 {
                    return Err(err(lineno, "expected `<type> <row name>`".to_string()));
                }
                let row_name = tokens[1].to_string();
                match tokens[0] {
                    "N" => {
                        if objective_row.is_some() {
                            return Err(err(
                                lineno,
                                "a second free (N) row is not supported".to_string(),
                            ));
                        }
                        objective_row = Some(row_name);
                    }
                    t @ ("L" | "G" | "E") => {
                        let sense = match t {
                            "L" => Sense::Le,
                            "G" => Sense::Ge,
                            _ => Sense::Eq,
                        };
                        if row_index.insert(row_name.clone(), senses.len()).is_some() {
                            return Err(err(lineno, format!("duplicate row `{row_name}`")));
                        }
                        senses.push(sense);
                        rhs_by_row.push(0.0);
                    }
                    other => {
                        return Err(err(lineno, format!("unknown row type `{other}`")));
                    }
                }
            }
            Section::Columns => {
                if tokens.len() >= 3 && tokens[1] == "'MARKER'" {
                    match tokens[2] {
                        "'INTORG'" => in_integer_block = true,
                        "'INTEND'" => in_integer_block = false,
                        other => {
                            return Err(err(lineno, format!("unknown marker `{other}`")));
                        }
                    }
                    continue;
                }
                if tokens.len() != 3 && tokens.len() != 5 {
                    return Err(err(
                        lineno,
                        "expected `<column> <row> <value> [<row> <value>]`".to_string(),
                    ));
                }
                let col_name = tokens[0];
                let col = *col_index.entry(col_name.to_string()).or_insert_with(|| {
                    col_names.push(col_name.to_string());
                    columns.push(Column::default());
                    columns.len() - 1
                });
                columns[col].integral |= in_integer_block;
                for pair in tokens[1..].chunks(2) {
                    let value: f64 = pair[1].parse().map_err(|_| {
                        err(lineno, format!("cannot parse number `{}`", pair[1]))
                    })?;
                    if objective_row.as_deref() == Some(pair[0]) {
                        columns[col].objective += value;
                    } else {
                        let row = *row_index.get(pair[0]).ok_or_else(|| {
                            err(lineno, format!("unknown row `{}`", pair[0]))
                        })?;
                        columns[col].entries.push((row, value));
                    }
                }
            }
            Section::Rhs => {
                if tokens.len() != 3 && tokens.len() != 5 {
                    return Err(err(
                        lineno,
                        "expected `<set> <row> <value> [<row> <value>]`".to_string(),
                    ));
                }
                for pair in tokens[1..].chunks(2) {
                    if objective_row.as_deref() == Some(pair[0]) {
                        return Err(err(
                            lineno,
                            "an objective-row RHS entry is not supported".to_string(),
                        ));
                    }
                    let row = *row_index
                        .get(pair[0])
                        .ok_or_else(|| err(lineno, format!("unknown row `{}`", pair[0])))?;
                    rhs_by_row[row] = pair[1]
                        .parse()
                        .map_err(|_| err(lineno, format!("cannot parse number `{}`", pair[1])))?;
                }
            }
            Section::Bounds => {
                let kind = tokens[0];
                let needs_value = kind != "BV";
                let expected = if needs_value { 4 } else { 3 };
                if tokens.len() != expected {
                    return Err(err(
                        lineno,
                        format!("expected `{kind} <set> <column>{}`", if needs_value { " <value>" } else { "" }),
                    ));
                }
                let col = *col_index
                    .get(tokens[2])
                    .ok_or_else(|| err(lineno, format!("unknown column `{}`", tokens[2])))?;
                let value = if needs_value {
                    tokens[3]
                        .parse::<f64>()
                        .map_err(|_| err(lineno, format!("cannot parse number `{}`", tokens[3])))?
                } else {
                    0.0
                };
                match kind {
                    "BV" => columns[col].binary_bound = true,
                    "UP" => columns[col].upper = Some(value),
                    "LO" => columns[col].lower = Some(value),
                    "UI" => {
                        columns[col].upper = Some(value);
                        columns[col].int_bound = true;
                    }
                    "LI" => {
                        columns[col].lower = Some(value);
                        columns[col].int_bound = true;
                    }
                    other => {
                        return Err(err(lineno, format!("unsupported bound type `{other}`")));
                    }
                }
            }
            Section::Start | Section::Name | Section::Done => {
                return Err(err(lineno, "data outside any section".to_string()));
            }
        }
    }
    if section != Section::Done {
        return Err(err(
            text.lines().count().max(1),
            "missing ENDATA".to_string(),
        ));
    }
    if objective_row.is_none() {
        return Err(err(1, "no objective (N) row declared".to_string()));
    }

    // Every column must resolve to a binary: an explicit BV bound, or an
    // integer declaration with bounds [0, 1].
    let mut variables = Vec::with_capacity(columns.len());
    for (name, col) in col_names.iter().zip(&columns) {
        let integral = col.integral || col.int_bound;
        let binary = col.binary_bound
            || (integral
                && col.lower.unwrap_or(0.0) == 0.0
                && col.upper == Some(1.0));
        let kind = if binary {
            VarKind::Binary
        } else if integral {
            VarKind::Other("integer".to_string())
        } else {
            VarKind::Other("continuous".to_string())
        };
        variables.push((name.clone(), kind));
    }

    let objective = columns.iter().map(|c| S::of(c.objective)).collect();
    let mut raw = RawProblem {
        name,
        direction,
        variables,
        objective,
        rows: Vec::new(),
    };
    let mut row_terms: Vec<Vec<(usize, S)>> = vec![Vec::new(); senses.len()];
    for (j, col) in columns.iter().enumerate() {
        for &(row, value) in &col.entries {
            row_terms[row].push((j, S::of(value)));
        }
    }
    for ((terms, sense), rhs) in row_terms.into_iter().zip(senses).zip(rhs_by_row) {
        raw.push_row(terms, sense, S::of(rhs));
    }
    Ok(raw.normalize()?)
}

fn parse_objsense(word: &str) -> Option<Direction> {
    match word.to_ascii_uppercase().as_str() {
        "MAX" | "MAXIMIZE" => Some(Direction::Maximize),
        "MIN" | "MINIMIZE" => Some(Direction::Minimize),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Run persistence
// ---------------------------------------------------------------------------

/// One event of a persisted run, objective in the source problem's original
/// sense.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordEvent {
    pub time: f64,
    pub iter: u64,
    pub objective: f64,
    pub tag: String,
    pub k: usize,
    pub improved: bool,
}

/// One run of one heuristic on one instance, self-contained for metric
/// recomputation without the instance file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub instance: String,
    pub heuristic: String,
    pub seed: u64,
    pub maximize: bool,
    pub horizon: f64,
    pub status: String,
    pub final_objective: Option<f64>,
    pub config: serde_json::Value,
    pub events: Vec<RecordEvent>,
}

impl ResultRecord {
    pub fn from_trace<S: Scalar>(
        inst: &IlpInstance<S>,
        trace: &RunTrace<S>,
        horizon: f64,
    ) -> Self {
        let events: Vec<RecordEvent> = trace
            .events
            .iter()
            .map(|e| RecordEvent {
                time: e.wall_time,
                iter: e.iter,
                objective: inst.original_objective(e.objective).to_f64_lossy(),
                tag: e.tag.clone(),
                k: e.k,
                improved: e.improved,
            })
            .collect();
        ResultRecord {
            instance: trace.instance.clone(),
            heuristic: trace.heuristic.name().to_string(),
            seed: trace.seed,
            maximize: inst.is_maximization(),
            horizon,
            status: "ok".to_string(),
            final_objective: events.last().map(|e| e.objective),
            config: serde_json::to_value(&trace.config).expect("config serializes"),
            events,
        }
    }

    /// A failed run: no events, recorded so reports can count it.
    pub fn failed(
        instance: &str,
        heuristic: &str,
        seed: u64,
        maximize: bool,
        horizon: f64,
        status: String,
    ) -> Self {
        ResultRecord {
            instance: instance.to_string(),
            heuristic: heuristic.to_string(),
            seed,
            maximize,
            horizon,
            status,
            final_objective: None,
            config: serde_json::Value::Null,
            events: Vec::new(),
        }
    }

    /// Best (latest) objective achieved by time `q`.
    pub fn objective_at(&self, q: f64) -> Option<f64> {
        self.events.iter().take_while(|e| e.time <= q).last().map(|e| e.objective)
    }

    pub fn gap_series(&self, v_star: f64) -> GapSeries {
        let events: Vec<(f64, f64)> =
            self.events.iter().map(|e| (e.time, e.objective)).collect();
        GapSeries::from_objectives(&events, v_star, metrics::DEFAULT_EPSILON)
            .expect("trace times are nondecreasing")
    }
}

/// Direction-aware best objective per instance across a record set: the
/// portfolio's "best known value" for gap computations.
pub fn virtual_best_by_instance(records: &[ResultRecord]) -> HashMap<String, f64> {
    let mut best: HashMap<String, f64> = HashMap::new();
    for r in records {
        let Some(v) = r.objective_at(r.horizon) else { continue };
        best.entry(r.instance.clone())
            .and_modify(|b| *b = if r.maximize { b.max(v) } else { b.min(v) })
            .or_insert(v);
    }
    best
}

/// Write one JSON object per run to `jsonl_path` and a per-run summary table
/// to `csv_path`: primal gap (percent) at each checkpoint against the
/// portfolio best, the primal integral at the last checkpoint, and the final
/// objective.
pub fn write_results(
    records: &[ResultRecord],
    jsonl_path: &Path,
    csv_path: &Path,
    checkpoints: &[f64],
) -> Result<(), IoError> {
    let mut jsonl = fs::File::create(jsonl_path)?;
    for record in records {
        writeln!(jsonl, "{}", serde_json::to_string(record)?)?;
    }

    let best = virtual_best_by_instance(records);
    let mut csv = csv::Writer::from_path(csv_path)?;
    let mut header = vec!["instance".to_string(), "heuristic".to_string(), "seed".to_string()];
    for &q in checkpoints {
        header.push(format!("pg_pct_at_{q}"));
    }
    if let Some(&q) = checkpoints.last() {
        header.push(format!("pi_at_{q}"));
    }
    header.push("final_objective".to_string());
    header.push("status".to_string());
    csv.write_record(&header)?;
    for r in records {
        let mut row = vec![r.instance.clone(), r.heuristic.clone(), r.seed.to_string()];
        let v_star = best.get(&r.instance).copied();
        for &q in checkpoints {
            let gap = match v_star {
                Some(v_star) => {
                    metrics::primal_gap(r.objective_at(q), v_star, metrics::DEFAULT_EPSILON)
                }
                None => 1.0,
            };
            row.push(format!("{}", gap * 100.0));
        }
        if let Some(&q) = checkpoints.last() {
            let pi = match v_star {
                Some(v_star) => r
                    .gap_series(v_star)
                    .primal_integral(q)
                    .expect("checkpoints are nonnegative"),
                None => q,
            };
            row.push(format!("{pi}"));
        }
        row.push(r.final_objective.map_or(String::new(), |v| format!("{v}")));
        row.push(r.status.clone());
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRecord>, IoError> {
    let text = fs::read_to_string(path)?;
    let mut records = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        records.push(serde_json::from_str(line)?);
    }
    Ok(records)
}
