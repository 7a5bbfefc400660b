//! Big-M export in LP and fixed-field MPS text, plus readers for both so
//! exported files can be re-solved independently.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use super::{binary_name, MilpModel};
use crate::error::{Error, Result};
use crate::lp::{lp_feasible, LpModel, LpStatus, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Lp,
    Mps,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lp" => Ok(ExportFormat::Lp),
            "mps" => Ok(ExportFormat::Mps),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

pub fn export_milp(model: &MilpModel, format: ExportFormat) -> Result<String> {
    match format {
        ExportFormat::Lp => Ok(write_lp(model)),
        ExportFormat::Mps => write_mps(model),
    }
}

/// A row of the exported model: named terms, relation, right-hand side.
struct FlatRow {
    name: String,
    terms: Vec<(String, f64)>,
    relation: Relation,
    rhs: f64,
}

fn flatten(model: &MilpModel) -> Vec<FlatRow> {
    model
        .rows
        .iter()
        .map(|row| {
            let (binary, rhs) = row.big_m_form(model.big_m);
            let mut terms: Vec<(String, f64)> = row
                .terms
                .iter()
                .map(|&(j, a)| (model.vars[j].name(), a))
                .collect();
            if let Some((x, a)) = binary {
                terms.push((binary_name(x), a));
            }
            FlatRow {
                name: row.name.clone(),
                terms,
                relation: row.relation,
                rhs,
            }
        })
        .collect()
}

/// Shortest text that parses back to the same `f64`.
fn fmt_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v)
    } else {
        format!("{:?}", v)
    }
}

fn header(model: &MilpModel, comment: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{comment} Affinely adjustable robust LCP: big-M feasibility model");
    let _ = writeln!(s, "{comment} b = {}", fmt_num(model.big_m));
    let _ = writeln!(
        s,
        "{comment} Caveat: b(1 - x_i) >= M_i r + q_i cuts genuine solutions when b is too small."
    );
    s
}

pub fn write_lp(model: &MilpModel) -> String {
    let mut out = header(model, "\\");
    out.push_str("Minimize\n obj: 0 x1\nSubject To\n");
    for row in flatten(model) {
        let mut expr = String::new();
        for (idx, (name, a)) in row.terms.iter().enumerate() {
            let sign = if *a < 0.0 { "-" } else { "+" };
            if idx == 0 {
                if *a < 0.0 {
                    expr.push_str("- ");
                }
            } else {
                let _ = write!(expr, " {sign} ");
            }
            if a.abs() != 1.0 {
                let _ = write!(expr, "{} ", fmt_num(a.abs()));
            }
            expr.push_str(name);
        }
        if expr.is_empty() {
            expr.push_str("0 x1");
        }
        let _ = writeln!(
            out,
            " {}: {} {} {}",
            row.name,
            expr,
            row.relation.symbol(),
            fmt_num(row.rhs)
        );
    }
    out.push_str("Bounds\n");
    for v in model.vars.iter().filter(|v| v.is_free()) {
        let _ = writeln!(out, " {} free", v.name());
    }
    out.push_str("Binaries\n");
    for i in 0..model.n_binaries {
        let _ = writeln!(out, " {}", binary_name(i));
    }
    out.push_str("End\n");
    out
}

/// Fits `v` into the 12-character MPS value field.
fn fmt_mps_num(v: f64) -> String {
    let s = fmt_num(v);
    if s.len() <= 12 {
        return s;
    }
    (0..=10)
        .rev()
        .map(|p| format!("{:.*e}", p, v))
        .find(|s| s.len() <= 12)
        .unwrap_or_else(|| format!("{:.0e}", v))
}

fn mps_line(f1: &str, f2: &str, f3: &str, f4: &str, f5: &str, f6: &str) -> String {
    let line = format!(" {f1:<2} {f2:<8}  {f3:<8}  {f4:>12}   {f5:<8}  {f6:>12}");
    line.trim_end().to_string()
}

pub fn write_mps(model: &MilpModel) -> Result<String> {
    let rows = flatten(model);
    let mut columns: Vec<String> = (0..model.n_binaries).map(binary_name).collect();
    columns.extend(model.vars.iter().map(|v| v.name()));
    if let Some(long) = columns.iter().find(|c| c.len() > 8) {
        return Err(Error::UnsupportedFormat(format!(
            "column name {long} exceeds the 8 characters of fixed MPS"
        )));
    }
    let row_names: Vec<String> = (1..=rows.len()).map(|i| format!("R{i}")).collect();
    if rows.len() > 9_999_999 {
        return Err(Error::UnsupportedFormat("too many rows for fixed MPS".into()));
    }

    let mut out = header(model, "*");
    for (name, row) in row_names.iter().zip(&rows) {
        let _ = writeln!(out, "* {name} = {}", row.name);
    }
    out.push_str("NAME          AARLCP\nROWS\n");
    out.push_str(&mps_line("N", "obj", "", "", "", ""));
    out.push('\n');
    for (name, row) in row_names.iter().zip(&rows) {
        let kind = match row.relation {
            Relation::Le => "L",
            Relation::Ge => "G",
            Relation::Eq => "E",
        };
        out.push_str(&mps_line(kind, name, "", "", "", ""));
        out.push('\n');
    }

    let col_index: HashMap<&str, usize> =
        columns.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let mut entries: Vec<Vec<(usize, f64)>> = vec![Vec::new(); columns.len()];
    for (ri, row) in rows.iter().enumerate() {
        for (name, a) in &row.terms {
            entries[col_index[name.as_str()]].push((ri, *a));
        }
    }
    out.push_str("COLUMNS\n");
    for (col, list) in columns.iter().zip(&entries) {
        if list.is_empty() {
            out.push_str(&mps_line("", col, "obj", "0", "", ""));
            out.push('\n');
        }
        for pair in list.chunks(2) {
            let (r1, a1) = pair[0];
            let (f5, f6) = match pair.get(1) {
                Some(&(r2, a2)) => (row_names[r2].as_str(), fmt_mps_num(a2)),
                None => ("", String::new()),
            };
            out.push_str(&mps_line("", col, &row_names[r1], &fmt_mps_num(a1), f5, &f6));
            out.push('\n');
        }
    }
    out.push_str("RHS\n");
    let nonzero: Vec<(usize, f64)> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.rhs != 0.0)
        .map(|(i, r)| (i, r.rhs))
        .collect();
    for pair in nonzero.chunks(2) {
        let (r1, v1) = pair[0];
        let (f5, f6) = match pair.get(1) {
            Some(&(r2, v2)) => (row_names[r2].as_str(), fmt_mps_num(v2)),
            None => ("", String::new()),
        };
        out.push_str(&mps_line("", "RHS", &row_names[r1], &fmt_mps_num(v1), f5, &f6));
        out.push('\n');
    }
    out.push_str("BOUNDS\n");
    for i in 0..model.n_binaries {
        out.push_str(&mps_line("BV", "BND", &binary_name(i), "", "", ""));
        out.push('\n');
    }
    for v in model.vars.iter().filter(|v| v.is_free()) {
        out.push_str(&mps_line("FR", "BND", &v.name(), "", "", ""));
        out.push('\n');
    }
    out.push_str("ENDATA\n");
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedRow {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A linear model read back from LP or MPS text.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParsedModel {
    pub vars: Vec<String>,
    pub rows: Vec<ParsedRow>,
    pub bounds: Vec<(f64, f64)>,
    pub binaries: Vec<usize>,
}

impl ParsedModel {
    fn var(&mut self, name: &str) -> usize {
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            return i;
        }
        self.vars.push(name.to_string());
        self.bounds.push((0.0, f64::INFINITY));
        self.vars.len() - 1
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn row(&self, name: &str) -> Option<&ParsedRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// LP over all variables with the binaries fixed to `assignment`.
    pub fn fixed_lp(&self, assignment: &[bool]) -> LpModel {
        let mut lp = LpModel::new(self.vars.len());
        lp.bounds = self.bounds.clone();
        for (&j, &v) in self.binaries.iter().zip(assignment) {
            let val = if v { 1.0 } else { 0.0 };
            lp.set_bounds(j, val, val);
        }
        for row in &self.rows {
            lp.add_sparse_row(&row.terms, row.relation, row.rhs);
        }
        lp
    }
}

/// Feasibility by enumerating every binary assignment. Returns the first
/// assignment whose LP is feasible, with the full point.
pub fn solve_by_enumeration(model: &ParsedModel, tol: f64) -> Result<Option<(Vec<bool>, Vec<f64>)>> {
    let nb = model.binaries.len();
    if nb > 24 {
        return Err(Error::Precondition(format!("{nb} binaries are too many to enumerate")));
    }
    for mask in 0u64..(1 << nb) {
        let assignment: Vec<bool> = (0..nb).map(|b| mask >> b & 1 == 1).collect();
        let res = lp_feasible(&model.fixed_lp(&assignment), tol)?;
        if res.status == LpStatus::Optimal {
            return Ok(Some((assignment, res.point)));
        }
    }
    Ok(None)
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_num(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = match tok.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => f64::INFINITY,
        "-inf" | "-infinity" => f64::NEG_INFINITY,
        t => t
            .parse()
            .map_err(|_| parse_err(line, format!("bad number '{tok}'")))?,
    };
    if v.is_nan() {
        return Err(parse_err(line, "NaN is not allowed"));
    }
    Ok(v)
}

fn is_number(tok: &str) -> bool {
    tok.starts_with(|c: char| c.is_ascii_digit() || c == '.')
        || (tok.len() > 1
            && tok.starts_with(['-', '+'])
            && tok[1..].starts_with(|c: char| c.is_ascii_digit() || c == '.'))
}

fn parse_relation(tok: &str) -> Option<Relation> {
    match tok {
        "<=" | "=<" | "<" => Some(Relation::Le),
        ">=" | "=>" | ">" => Some(Relation::Ge),
        "=" => Some(Relation::Eq),
        _ => None,
    }
}

fn parse_expr(model: &mut ParsedModel, toks: &[&str], line: usize) -> Result<Vec<(usize, f64)>> {
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    let mut pending = false;
    for &tok in toks {
        match tok {
            "+" | "-" if coef.is_some() => {
                return Err(parse_err(line, "sign after a coefficient"));
            }
            "+" => pending = true,
            "-" => {
                sign = -sign;
                pending = true;
            }
            t if is_number(t) => {
                if coef.is_some() {
                    return Err(parse_err(line, "two coefficients in a row"));
                }
                coef = Some(parse_num(t, line)?);
            }
            name => {
                let j = model.var(name);
                terms.push((j, sign * coef.unwrap_or(1.0)));
                sign = 1.0;
                coef = None;
                pending = false;
            }
        }
    }
    if coef.is_some() || pending {
        return Err(parse_err(line, "dangling coefficient or sign"));
    }
    Ok(terms)
}

#[derive(Clone, Copy, PartialEq)]
enum LpSection {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    Done,
}

/// Reads the LP-file subset written by [`write_lp`]: `Minimize`,
/// `Subject To`, `Bounds`, `Binaries`, `End`, one constraint per line.
pub fn parse_lp(text: &str) -> Result<ParsedModel> {
    let mut model = ParsedModel::default();
    let mut section = LpSection::Preamble;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('\\').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        let next = match lower.as_str() {
            "minimize" | "minimise" | "min" | "maximize" | "maximise" | "max" => {
                Some(LpSection::Objective)
            }
            "subject to" | "such that" | "st" | "s.t." => Some(LpSection::Constraints),
            "bounds" => Some(LpSection::Bounds),
            "binaries" | "binary" | "bin" => Some(LpSection::Binaries),
            "end" => Some(LpSection::Done),
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match section {
            LpSection::Preamble | LpSection::Done => {
                return Err(parse_err(line_no, "content outside of a section"))
            }
            LpSection::Objective => {
                let body = toks.iter().position(|t| t.ends_with(':')).map_or(0, |p| p + 1);
                parse_expr(&mut model, &toks[body..], line_no)?;
            }
            LpSection::Constraints => {
                let (name, rest) = match toks.first() {
                    Some(t) if t.ends_with(':') => (t.trim_end_matches(':').to_string(), &toks[1..]),
                    _ => (format!("row{}", model.rows.len() + 1), &toks[..]),
                };
                let rel_pos = rest
                    .iter()
                    .position(|t| parse_relation(t).is_some())
                    .ok_or_else(|| parse_err(line_no, "constraint without relation"))?;
                if rel_pos + 2 != rest.len() {
                    return Err(parse_err(line_no, "expected a single right-hand side"));
                }
                let terms = parse_expr(&mut model, &rest[..rel_pos], line_no)?;
                let relation = parse_relation(rest[rel_pos]).expect("checked above");
                let rhs = parse_num(rest[rel_pos + 1], line_no)?;
                model.rows.push(ParsedRow {
                    name,
                    terms,
                    relation,
                    rhs,
                });
            }
            LpSection::Bounds => parse_bound(&mut model, &toks, line_no)?,
            LpSection::Binaries => {
                for t in toks {
                    let j = model.var(t);
                    model.bounds[j] = (0.0, 1.0);
                    model.binaries.push(j);
                }
            }
        }
    }
    if section != LpSection::Done {
        return Err(parse_err(text.lines().count(), "missing End"));
    }
    Ok(model)
}

fn parse_bound(model: &mut ParsedModel, toks: &[&str], line: usize) -> Result<()> {
    match toks {
        [name, free] if free.eq_ignore_ascii_case("free") => {
            let j = model.var(name);
            model.bounds[j] = (f64::NEG_INFINITY, f64::INFINITY);
        }
        [lo, "<=", name, "<=", hi] => {
            let j = model.var(name);
            model.bounds[j] = (parse_num(lo, line)?, parse_num(hi, line)?);
        }
        [name, op, v] => {
            let v = parse_num(v, line)?;
            let j = model.var(name);
            match parse_relation(op) {
                Some(Relation::Le) => model.bounds[j].1 = v,
                Some(Relation::Ge) => model.bounds[j].0 = v,
                Some(Relation::Eq) => model.bounds[j] = (v, v),
                None => return Err(parse_err(line, "bad bound")),
            }
        }
        _ => return Err(parse_err(line, "bad bound")),
    }
    Ok(())
}

/// Reads MPS text (fixed or free spacing; names must not contain blanks).
pub fn parse_mps(text: &str) -> Result<ParsedModel> {
    let mut model = ParsedModel::default();
    let mut section = "";
    let mut row_kind: HashMap<String, Option<Relation>> = HashMap::new();
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut ended = false;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        if raw.starts_with('*') || raw.trim().is_empty() {
            continue;
        }
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') {
            section = match toks[0] {
                "NAME" => "NAME",
                "ROWS" => "ROWS",
                "COLUMNS" => "COLUMNS",
                "RHS" => "RHS",
                "BOUNDS" => "BOUNDS",
                "RANGES" => return Err(parse_err(line_no, "RANGES are not supported")),
                "ENDATA" => {
                    ended = true;
                    break;
                }
                other => return Err(parse_err(line_no, format!("unknown section {other}"))),
            };
            continue;
        }
        match section {
            "ROWS" => {
                let [kind, name] = toks[..] else {
                    return Err(parse_err(line_no, "bad ROWS entry"));
                };
                let rel = match kind {
                    "N" => None,
                    "L" => Some(Relation::Le),
                    "G" => Some(Relation::Ge),
                    "E" => Some(Relation::Eq),
                    _ => return Err(parse_err(line_no, format!("bad row type {kind}"))),
                };
                if let Some(relation) = rel {
                    row_index.insert(name.to_string(), model.rows.len());
                    model.rows.push(ParsedRow {
                        name: name.to_string(),
                        terms: Vec::new(),
                        relation,
                        rhs: 0.0,
                    });
                }
                row_kind.insert(name.to_string(), rel);
            }
            "COLUMNS" => {
                if toks.len() != 3 && toks.len() != 5 {
                    return Err(parse_err(line_no, "bad COLUMNS entry"));
                }
                let j = model.var(toks[0]);
                for pair in toks[1..].chunks(2) {
                    let v = parse_num(pair[1], line_no)?;
                    match row_kind.get(pair[0]) {
                        None => return Err(parse_err(line_no, format!("unknown row {}", pair[0]))),
                        Some(None) => {}
                        Some(Some(_)) => model.rows[row_index[pair[0]]].terms.push((j, v)),
                    }
                }
            }
            "RHS" => {
                if toks.len() != 3 && toks.len() != 5 {
                    return Err(parse_err(line_no, "bad RHS entry"));
                }
                for pair in toks[1..].chunks(2) {
                    let v = parse_num(pair[1], line_no)?;
                    match row_index.get(pair[0]) {
                        Some(&ri) => model.rows[ri].rhs = v,
                        None if row_kind.contains_key(pair[0]) => {}
                        None => return Err(parse_err(line_no, format!("unknown row {}", pair[0]))),
                    }
                }
            }
            "BOUNDS" => {
                let (kind, col, val) = match toks[..] {
                    [kind, _, col] => (kind, col, None),
                    [kind, _, col, v] => (kind, col, Some(parse_num(v, line_no)?)),
                    _ => return Err(parse_err(line_no, "bad BOUNDS entry")),
                };
                let j = model.var(col);
                let need = || val.ok_or_else(|| parse_err(line_no, "bound needs a value"));
                match kind {
                    "FR" => model.bounds[j] = (f64::NEG_INFINITY, f64::INFINITY),
                    "MI" => model.bounds[j].0 = f64::NEG_INFINITY,
                    "PL" => model.bounds[j].1 = f64::INFINITY,
                    "BV" => {
                        model.bounds[j] = (0.0, 1.0);
                        model.binaries.push(j);
                    }
                    "UP" => model.bounds[j].1 = need()?,
                    "LO" => model.bounds[j].0 = need()?,
                    "FX" => {
                        let v = need()?;
                        model.bounds[j] = (v, v);
                    }
                    other => return Err(parse_err(line_no, format!("bad bound type {other}"))),
                }
            }
            _ => return Err(parse_err(line_no, "data outside of a section")),
        }
    }
    if !ended {
        return Err(parse_err(text.lines().count(), "missing ENDATA"));
    }
    Ok(model)
}
