//! Text rendering of the command reports.

use super::commands::{DeltaUsed, NuSolveReport, SpectrumRow, ValidateRow, WavefunctionReport};
use super::config::{Format, RunConfig};
use super::format::{document, json_real, json_reals, Cell, Table};
use crate::nu_engine::NuBranch;
use crate::radial_model::QuantumNumbers;
use serde_json::{Map, Value};

pub const SPECTRUM_COLUMNS: &[&str] = &[
    "n", "kappa", "l", "j", "delta_used", "E", "eps0", "eps1", "iterations", "residual", "flags",
];

pub const VALIDATE_COLUMNS: &[&str] = &[
    "n",
    "kappa",
    "l",
    "j",
    "delta_used",
    "E_closed_form",
    "E_oracle",
    "abs_diff",
    "rel_diff",
    "expansion_residual",
    "c_radicand_term",
    "oracle_iterations",
    "flags",
];

pub const WAVEFUNCTION_COLUMNS: &[&str] = &["r", "u", "v"];

const ENERGY_UNITS: &[(&str, &str)] = &[
    ("a", "GeV^2"),
    ("b", "1"),
    ("c", "GeV^3"),
    ("m", "GeV"),
    ("delta_used", "GeV"),
    ("E", "GeV"),
    ("eps0", "GeV"),
    ("eps1", "GeV"),
    ("residual", "GeV"),
    ("E_closed_form", "GeV"),
    ("E_oracle", "GeV"),
    ("abs_diff", "GeV"),
    ("c_radicand_term", "1"),
    ("oracle_r_min", "GeV^-1"),
    ("oracle_r_max", "GeV^-1"),
];

const WAVEFUNCTION_UNITS: &[(&str, &str)] = &[
    ("a", "GeV^2"),
    ("b", "1"),
    ("c", "GeV^3"),
    ("m", "GeV"),
    ("delta_used", "GeV"),
    ("E", "GeV"),
    ("r", "GeV^-1"),
    ("u", "GeV^1/2"),
    ("v", "GeV^1/2"),
    ("norm_grid_r_max", "GeV^-1"),
];

fn state_cells(qn: QuantumNumbers) -> Vec<Cell> {
    vec![qn.n.into(), qn.kappa.into(), qn.l().into(), qn.j().into()]
}

fn delta_flags(delta: &DeltaUsed, flags: &mut Vec<String>) {
    if let Some(flag) = delta.flag {
        flags.push(format!("delta_{}", flag.as_str()));
    }
}

fn flags_cell(flags: Vec<String>) -> Cell {
    Cell::Text(flags.join(";"))
}

fn parameters(cfg: &RunConfig) -> Value {
    let mut m = Map::new();
    m.insert("a".into(), json_real(cfg.params.a));
    m.insert("b".into(), json_real(cfg.params.b));
    m.insert("c".into(), json_real(cfg.params.c));
    m.insert("m".into(), json_real(cfg.mass));
    m.insert("branch".into(), Value::from(cfg.branch.as_str()));
    m.insert("tol".into(), json_real(cfg.tol));
    Value::Object(m)
}

fn emit(command: &str, table: &Table, format: Format, units: &[(&str, &str)], extra: Map<String, Value>) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut body = extra;
            body.insert("rows".into(), table.json_rows());
            document(command, units, body)
        }
    }
}

pub fn spectrum_table(rows: &[SpectrumRow]) -> Table {
    let mut table = Table::new(SPECTRUM_COLUMNS.to_vec());
    for row in rows {
        let mut cells = state_cells(row.qn);
        match &row.outcome {
            Ok(cell) => {
                let mut flags = Vec::new();
                delta_flags(&cell.delta, &mut flags);
                let e = &cell.energy;
                if e.boundary_flag {
                    flags.push("tau_slope_zero".into());
                }
                if e.root_count > 1 {
                    flags.push(format!("roots_in_bracket={}", e.root_count));
                }
                cells.extend([
                    cell.delta.delta.into(),
                    e.split.energy.into(),
                    e.split.eps0.into(),
                    e.split.eps1.into(),
                    e.iterations.into(),
                    e.residual.into(),
                    flags_cell(flags),
                ]);
            }
            Err(err) => {
                cells.extend((0..6).map(|_| Cell::error(err.name)));
                cells.push(Cell::Text(format!("failed:{}", err.name)));
            }
        }
        table.push(cells);
    }
    table
}

pub fn render_spectrum(cfg: &RunConfig, rows: &[SpectrumRow]) -> String {
    let mut extra = Map::new();
    extra.insert("parameters".into(), parameters(cfg));
    emit("spectrum", &spectrum_table(rows), cfg.format, ENERGY_UNITS, extra)
}

pub fn validate_table(rows: &[ValidateRow]) -> Table {
    let mut table = Table::new(VALIDATE_COLUMNS.to_vec());
    for row in rows {
        let mut cells = state_cells(row.qn);
        match &row.outcome {
            Ok(cell) => {
                let mut flags = Vec::new();
                delta_flags(&cell.delta, &mut flags);
                match cell.exact_limit_ok {
                    Some(true) => flags.push("exact_limit_ok".into()),
                    Some(false) => flags.push("exact_limit_violated".into()),
                    None => {}
                }
                cells.extend([
                    cell.delta.delta.into(),
                    cell.closed_form.split.energy.into(),
                    cell.oracle.energy.into(),
                    cell.abs_diff.into(),
                    cell.rel_diff.into(),
                    cell.expansion_residual.into(),
                    cell.c_radicand_term.map_or(Cell::Text(String::new()), Cell::Real),
                    cell.oracle.iterations.into(),
                    flags_cell(flags),
                ]);
            }
            Err(err) => {
                cells.extend((0..8).map(|_| Cell::error(err.name)));
                cells.push(Cell::Text(format!("failed:{}", err.name)));
            }
        }
        table.push(cells);
    }
    table
}

pub fn render_validate(cfg: &RunConfig, rows: &[ValidateRow]) -> String {
    let mut extra = Map::new();
    let mut params = parameters(cfg);
    if let Value::Object(m) = &mut params {
        m.insert("oracle_r_min".into(), json_real(cfg.grid.r_min));
        m.insert("oracle_r_max".into(), json_real(cfg.grid.r_max));
        m.insert("oracle_points".into(), Value::from(cfg.grid.num_points as u64));
        m.insert("oracle_tol".into(), json_real(cfg.oracle_tol));
    }
    extra.insert("parameters".into(), params);
    emit("validate", &validate_table(rows), cfg.format, ENERGY_UNITS, extra)
}

pub fn wavefunction_table(report: &WavefunctionReport) -> Table {
    let mut table = Table::new(WAVEFUNCTION_COLUMNS.to_vec());
    for &(r, u, v) in &report.samples {
        table.push(vec![r.into(), u.into(), v.into()]);
    }
    table
}

pub fn wavefunction_sidecar(report: &WavefunctionReport) -> Map<String, Value> {
    let s = &report.state;
    let mut m = Map::new();
    m.insert("n".into(), Value::from(s.qn.n as u64));
    m.insert("kappa".into(), Value::from(s.qn.kappa));
    m.insert("delta_used".into(), json_real(report.delta.delta));
    if let Some(flag) = report.delta.flag {
        m.insert("delta_flag".into(), Value::from(flag.as_str()));
    }
    m.insert("E".into(), json_real(s.energy.split.energy));
    m.insert("C_nk".into(), json_real(s.c_nk));
    m.insert("node_count".into(), Value::from(report.node_count as u64));
    let nc = &report.norm_check;
    let mut norm = Map::new();
    norm.insert("closed_form".into(), json_real(nc.closed_form));
    norm.insert("quadrature".into(), json_real(nc.quadrature));
    norm.insert("abs_diff".into(), json_real(nc.abs_diff()));
    norm.insert("quadrature_error_estimate".into(), json_real(nc.quadrature_error));
    norm.insert("norm_grid_points".into(), Value::from(nc.grid.num_points as u64));
    norm.insert("norm_grid_r_max".into(), json_real(nc.grid.r_max));
    m.insert("norm_check".into(), Value::Object(norm));
    m.insert("ode_residual".into(), json_real(report.ode_residual));
    let mut upper = Map::new();
    upper.insert("gamma".into(), json_real(s.upper.gamma));
    upper.insert("beta".into(), json_real(s.upper.beta));
    upper.insert("terms".into(), json_reals(&s.upper.terms));
    m.insert("u_closed_form".into(), Value::Object(upper));
    m
}

/// Main document and, in CSV mode, the separate sidecar JSON.
pub fn render_wavefunction(cfg: &RunConfig, report: &WavefunctionReport) -> (String, String) {
    let mut sidecar_body = Map::new();
    sidecar_body.insert("parameters".into(), parameters(cfg));
    sidecar_body.extend(wavefunction_sidecar(report));
    let sidecar = document("wavefunction", WAVEFUNCTION_UNITS, sidecar_body);
    let table = wavefunction_table(report);
    let main = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut body = Map::new();
            body.insert("parameters".into(), parameters(cfg));
            body.insert("sidecar".into(), Value::Object(wavefunction_sidecar(report)));
            body.insert("rows".into(), table.json_rows());
            document("wavefunction", WAVEFUNCTION_UNITS, body)
        }
    };
    (main, sidecar)
}

fn branch_json(b: &NuBranch) -> Value {
    let mut m = Map::new();
    m.insert("k".into(), json_real(b.k));
    m.insert("sign".into(), Value::from(b.sign.as_str()));
    m.insert("pi".into(), json_reals(b.pi.coeffs()));
    m.insert("tau".into(), json_reals(b.tau.coeffs()));
    m.insert("tau_slope".into(), json_real(b.tau_slope));
    Value::Object(m)
}

pub fn render_nu_solve(report: &NuSolveReport) -> String {
    let eq = &report.equation;
    let mut body = Map::new();
    let mut input = Map::new();
    input.insert("sigma".into(), json_reals(eq.sigma().coeffs()));
    input.insert("tau_tilde".into(), json_reals(eq.tau_tilde().coeffs()));
    input.insert("sigma_tilde".into(), json_reals(eq.sigma_tilde().coeffs()));
    input.insert("n".into(), Value::from(report.n as u64));
    input.insert("coefficient_order".into(), Value::from("constant_first"));
    body.insert("input".into(), Value::Object(input));
    let candidates = report
        .candidates
        .iter()
        .map(|(cand, branches)| {
            let mut m = Map::new();
            m.insert("k".into(), json_real(cand.k));
            m.insert("multiplicity".into(), Value::from(cand.multiplicity));
            m.insert("branches".into(), Value::Array(branches.iter().map(branch_json).collect()));
            Value::Object(m)
        })
        .collect();
    body.insert("k_candidates".into(), Value::Array(candidates));
    let mut selected = match branch_json(&report.selected.branch) {
        Value::Object(m) => m,
        _ => unreachable!("branch_json builds an object"),
    };
    selected.insert("boundary".into(), Value::from(report.selected.boundary));
    body.insert("selected".into(), Value::Object(selected));
    body.insert("lambda_n".into(), json_real(report.lambda_n));
    body.insert("lambda".into(), json_real(report.lambda));
    body.insert("quantization_residual".into(), json_real(report.quantization_residual));
    document("nu-solve", &[], body)
}
