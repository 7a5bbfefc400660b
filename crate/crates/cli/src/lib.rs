//! File formats and subcommands behind the `aarlcp` binary.
//!
//! Every command returns an [`Outcome`] whose exit code follows one contract:
//! 0 success (feasible, verified), 1 negative answer (infeasible, violations,
//! failed validation), 2 input error, 3 numerical failure or resource limit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use aarlcp::matrix::Matrix;
use aarlcp::milp::{bnb_solve, build_milp, default_big_m, export_milp, BnbOptions, ExportFormat, SolveReport, SolveStatus};
use aarlcp::psd::{check_psd, psd_solve, PsdStatus};
use aarlcp::verify::{oracle_enumerate, verify_policy, OracleOptions, SupportOutcome, ORACLE_LIMIT};
use aarlcp::{
    compute_lin_hull, validate, Error, Instance, MixedExtension, Policy, Polyhedron, Tolerances,
    YPart,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "aarlcp",
    version,
    about = "Affinely adjustable robust solutions of uncertain LCPs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PsdMode {
    Auto,
    Force,
    Off,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check compactness, 0 in the relative interior, and rank of T.
    Validate { instance: PathBuf },
    /// Search for an affine robust policy.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        psd: PsdMode,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Write the policy JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value_t = 1 << 20)]
        node_limit: usize,
    },
    /// Certify a policy file against an instance.
    Verify {
        instance: PathBuf,
        policy: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Enumerate every support (small n only).
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = ORACLE_LIMIT)]
        limit: usize,
    },
    /// Print a basis of the linear hull of U.
    Linhull { instance: PathBuf },
    /// Write the big-M model in LP or MPS format.
    Export {
        instance: PathBuf,
        #[arg(long, default_value = "lp")]
        format: String,
        #[arg(long)]
        big_m: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, msg: impl Into<String>) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: msg.into(),
        }
    }

    fn from_error(err: &Error) -> Self {
        Self::fail(exit_code_for(err), format!("error: {err}"))
    }
}

/// Exit code for an error that aborts a command.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NumericalFailure(_) | Error::NodeLimit { .. } => EXIT_NUMERICAL,
        _ => EXIT_INPUT,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedFile {
    pub m: usize,
    #[serde(rename = "V")]
    pub v: Vec<Vec<f64>>,
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
    #[serde(rename = "N")]
    pub n: Vec<Vec<f64>>,
    pub p: Vec<f64>,
    #[serde(rename = "P")]
    pub p_mat: Vec<Vec<f64>>,
    #[serde(default)]
    pub y_adjustable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub k: usize,
    pub g: usize,
    #[serde(default)]
    pub h: usize,
    #[serde(rename = "M")]
    pub m: Vec<Vec<f64>>,
    pub q: Vec<f64>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<f64>>,
    #[serde(rename = "Theta")]
    pub theta: Vec<Vec<f64>>,
    pub zeta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixed: Option<MixedFile>,
}

fn matrix(what: &str, rows: &[Vec<f64>], r: usize, c: usize) -> aarlcp::Result<Matrix> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::DimensionMismatch(format!("{what} must be {r}x{c}")));
    }
    Matrix::from_rows(c, rows)
}

fn vector(what: &str, v: &[f64], len: usize) -> aarlcp::Result<Vec<f64>> {
    if v.len() != len {
        return Err(Error::DimensionMismatch(format!("{what} must have length {len}")));
    }
    Ok(v.to_vec())
}

impl InstanceFile {
    pub fn to_instance(&self) -> aarlcp::Result<Instance> {
        let (n, k, g) = (self.n, self.k, self.g);
        let u = Polyhedron::new(
            matrix("Theta", &self.theta, g, k)?,
            vector("zeta", &self.zeta, g)?,
        )?;
        let inst = Instance::new(
            matrix("M", &self.m, n, n)?,
            vector("q", &self.q, n)?,
            matrix("T", &self.t, n, k)?,
            u,
            self.h,
        )?;
        match &self.mixed {
            None => Ok(inst),
            Some(mx) => inst.with_mixed(MixedExtension {
                v: matrix("V", &mx.v, mx.m, n)?,
                w: matrix("W", &mx.w, mx.m, mx.m)?,
                n: matrix("N", &mx.n, n, mx.m)?,
                p: vector("p", &mx.p, mx.m)?,
                p_mat: matrix("P", &mx.p_mat, mx.m, k)?,
                y_adjustable: mx.y_adjustable,
            }),
        }
    }

    pub fn from_instance(inst: &Instance) -> Self {
        Self {
            n: inst.n(),
            k: inst.k(),
            g: inst.g(),
            h: inst.h,
            m: inst.m.to_rows(),
            q: inst.q.clone(),
            t: inst.t.to_rows(),
            theta: inst.uncertainty.theta.to_rows(),
            zeta: inst.uncertainty.zeta.clone(),
            mixed: inst.mixed.as_ref().map(|mx| MixedFile {
                m: mx.m(),
                v: mx.v.to_rows(),
                w: mx.w.to_rows(),
                n: mx.n.to_rows(),
                p: mx.p.clone(),
                p_mat: mx.p_mat.to_rows(),
                y_adjustable: mx.y_adjustable,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceFile {
    pub zero: f64,
    pub feas: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub nodes_explored: usize,
    pub lp_calls: usize,
    pub tolerances: ToleranceFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyFile {
    pub status: String,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<bool>>,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
}

impl PolicyFile {
    pub fn feasible(pol: &Policy, diagnostics: Option<Diagnostics>) -> Self {
        Self {
            status: "feasible".into(),
            d: Some(pol.d.to_rows()),
            r: Some(pol.r.clone()),
            x: Some(pol.x.clone()),
            e: pol.y_part.as_ref().map(|y| y.e.to_rows()),
            s: pol.y_part.as_ref().map(|y| y.s.clone()),
            diagnostics,
        }
    }

    pub fn infeasible(diagnostics: Option<Diagnostics>) -> Self {
        Self {
            status: "infeasible".into(),
            d: None,
            r: None,
            x: None,
            e: None,
            s: None,
            diagnostics,
        }
    }

    /// The policy stored in a feasible file, shaped for `inst`.
    pub fn to_policy(&self, inst: &Instance) -> aarlcp::Result<Policy> {
        if self.status != "feasible" {
            return Err(Error::InvalidPolicy(format!(
                "policy file has status '{}', expected 'feasible'",
                self.status
            )));
        }
        let (n, k) = (inst.n(), inst.k());
        let (Some(d), Some(r)) = (&self.d, &self.r) else {
            return Err(Error::InvalidPolicy("feasible policy needs D and r".into()));
        };
        let d = matrix("D", d, n, k)?;
        let r = vector("r", r, n)?;
        let mut pol = Policy::new(d, r);
        if let Some(x) = &self.x {
            if x.len() != n {
                return Err(Error::DimensionMismatch(format!("x must have length {n}")));
            }
            pol.x = x.clone();
        }
        match (&inst.mixed, &self.e, &self.s) {
            (None, None, None) => {}
            (Some(mx), e, Some(s)) => {
                let e = match e {
                    Some(e) => matrix("E", e, mx.m(), k)?,
                    None => Matrix::zeros(mx.m(), k),
                };
                pol.y_part = Some(YPart {
                    e,
                    s: vector("s", s, mx.m())?,
                });
            }
            (Some(_), _, None) => {
                return Err(Error::InvalidPolicy("mixed instance needs s".into()))
            }
            (None, _, _) => {
                return Err(Error::InvalidPolicy("E and s given for a pure LCP".into()))
            }
        }
        pol.check_against(inst, &Tolerances::default())?;
        Ok(pol)
    }
}

fn read(path: &Path) -> aarlcp::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> aarlcp::Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: format!("{}: {e}", path.display()),
    })
}

pub fn load_instance(path: &Path) -> aarlcp::Result<Instance> {
    parse_json::<InstanceFile>(path)?.to_instance()
}

fn write_out(path: &Path, text: &str) -> aarlcp::Result<()> {
    fs::write(path, text).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))
}

fn tolerances(tol: f64) -> aarlcp::Result<Tolerances> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Precondition(format!("--tol must be positive, got {tol}")));
    }
    Ok(Tolerances::with_feas(tol))
}

fn set_string(set: &[usize]) -> String {
    let items: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Validate { instance } => cmd_validate(&instance),
        Command::Solve {
            instance,
            psd,
            tol,
            out,
            parallel,
            node_limit,
        } => cmd_solve(&instance, psd, tol, out.as_deref(), parallel, node_limit),
        Command::Verify {
            instance,
            policy,
            tol,
        } => cmd_verify(&instance, &policy, tol),
        Command::Oracle {
            instance,
            tol,
            limit,
        } => cmd_oracle(&instance, tol, limit),
        Command::Linhull { instance } => cmd_linhull(&instance),
        Command::Export {
            instance,
            format,
            big_m,
            out,
        } => cmd_export(&instance, &format, big_m, out.as_deref()),
    };
    result.unwrap_or_else(|e| Outcome::from_error(&e))
}

pub fn cmd_validate(path: &Path) -> aarlcp::Result<Outcome> {
    let inst = load_instance(path)?;
    match validate(&inst, Tolerances::default().zero) {
        Ok(rep) => {
            let code = if rep.passed() { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome::ok(code, rep.to_string()))
        }
        Err(Error::EmptyUncertaintySet) => Ok(Outcome::ok(
            EXIT_NEGATIVE,
            "uncertainty set is empty\n".into(),
        )),
        Err(e) => Err(e),
    }
}

fn validated(path: &Path) -> aarlcp::Result<Instance> {
    let inst = load_instance(path)?;
    let rep = validate(&inst, Tolerances::default().zero)?;
    if !rep.passed() {
        return Err(Error::Precondition(format!(
            "instance fails validation:\n{}",
            rep.to_string().trim_end()
        )));
    }
    Ok(inst)
}

fn status_code(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::Feasible => EXIT_OK,
        SolveStatus::Infeasible => EXIT_NEGATIVE,
        SolveStatus::NumericalFailure => EXIT_NUMERICAL,
    }
}

fn diagnostics(rep: &SolveReport, route: &str) -> Diagnostics {
    Diagnostics {
        nodes_explored: rep.nodes_explored,
        lp_calls: rep.lp_calls,
        tolerances: ToleranceFile {
            zero: rep.tolerances.zero,
            feas: rep.tolerances.feas,
        },
        route: Some(route.into()),
    }
}

pub fn cmd_solve(
    path: &Path,
    psd: PsdMode,
    tol: f64,
    out: Option<&Path>,
    parallel: bool,
    node_limit: usize,
) -> aarlcp::Result<Outcome> {
    let tol = tolerances(tol)?;
    let inst = validated(path)?;
    let basis = compute_lin_hull(&inst, tol.zero)?;
    let pure = inst.mixed.is_none();
    let use_psd = match psd {
        PsdMode::Off => false,
        PsdMode::Auto => pure && check_psd(&inst.m, tol.zero),
        PsdMode::Force => {
            if !pure {
                return Err(Error::Precondition("--psd force needs a pure LCP".into()));
            }
            if !check_psd(&inst.m, tol.zero) {
                return Err(Error::Precondition(
                    "--psd force: M is not positive semidefinite".into(),
                ));
            }
            true
        }
    };
    let (report, route) = if use_psd {
        let rep = psd_solve(&inst, &basis, &tol)?;
        let status = match rep.status {
            PsdStatus::Feasible => SolveStatus::Feasible,
            PsdStatus::Infeasible => SolveStatus::Infeasible,
            PsdStatus::NumericalFailure | PsdStatus::NotPsd => SolveStatus::NumericalFailure,
        };
        let report = SolveReport {
            status,
            policy: rep.policy,
            nodes_explored: 1,
            lp_calls: rep.lp_calls,
            verification: rep.verification,
            tolerances: tol,
        };
        (report, "psd")
    } else {
        let opts = BnbOptions {
            tol,
            node_limit: Some(node_limit),
            parallel,
            ..BnbOptions::default()
        };
        (bnb_solve(&inst, &basis, &opts)?, "branch-and-bound")
    };
    let code = status_code(report.status);
    if report.status == SolveStatus::NumericalFailure {
        return Ok(Outcome::fail(
            code,
            "error: candidate policies failed verification; result inconclusive",
        ));
    }
    let diag = Some(diagnostics(&report, route));
    let file = match &report.policy {
        Some(pol) => PolicyFile::feasible(pol, diag),
        None => PolicyFile::infeasible(diag),
    };
    let json = serde_json::to_string_pretty(&file).expect("policy serializes") + "\n";
    let stdout = match out {
        Some(p) => {
            write_out(p, &json)?;
            format!(
                "status: {}\nnodes explored: {}\nLP calls: {}\nroute: {route}\nwrote {}\n",
                file.status,
                report.nodes_explored,
                report.lp_calls,
                p.display()
            )
        }
        None => json,
    };
    Ok(Outcome::ok(code, stdout))
}

pub fn cmd_verify(inst_path: &Path, pol_path: &Path, tol: f64) -> aarlcp::Result<Outcome> {
    let tol = tolerances(tol)?;
    let inst = load_instance(inst_path)?;
    let pol = parse_json::<PolicyFile>(pol_path)?.to_policy(&inst)?;
    let basis = compute_lin_hull(&inst, tol.zero)?;
    let rep = verify_policy(&inst, &basis, &pol, &tol)?;
    let code = if rep.is_verified() { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Outcome::ok(code, rep.to_string()))
}

pub fn cmd_oracle(path: &Path, tol: f64, limit: usize) -> aarlcp::Result<Outcome> {
    let tol = tolerances(tol)?;
    let inst = validated(path)?;
    let basis = compute_lin_hull(&inst, tol.zero)?;
    let opts = OracleOptions {
        tol,
        limit,
        classify: true,
    };
    let rep = oracle_enumerate(&inst, &basis, &opts)?;
    let mut out = String::new();
    let status = match rep.report.status {
        SolveStatus::Feasible => "feasible",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::NumericalFailure => "inconclusive",
    };
    let _ = writeln!(out, "status: {status}");
    if let Some(support) = rep.first_feasible() {
        let _ = writeln!(out, "first feasible support: {}", set_string(&support));
    }
    let tried = rep.outcomes.len();
    let total = 1usize << inst.n();
    let _ = writeln!(out, "supports tried: {tried}/{total}");
    for (label, kind) in [
        ("LP-infeasible", SupportOutcome::ComplementarityInfeasible),
        ("nonnegativity-infeasible", SupportOutcome::NonnegativityInfeasible),
        ("rejected by verification", SupportOutcome::Rejected),
    ] {
        let c = rep.count(kind);
        if c > 0 {
            let _ = writeln!(out, "{c}/{tried} supports {label}");
        }
    }
    let _ = writeln!(out, "LP calls: {}", rep.report.lp_calls);
    Ok(Outcome::ok(status_code(rep.report.status), out))
}

pub fn cmd_linhull(path: &Path) -> aarlcp::Result<Outcome> {
    let inst = load_instance(path)?;
    let basis = compute_lin_hull(&inst, Tolerances::default().zero)?;
    let mut out = String::new();
    let _ = writeln!(out, "dimension: {}", basis.dim());
    for (j, v) in basis.vectors.iter().enumerate() {
        let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "v{}: ({})", j + 1, parts.join(", "));
    }
    let _ = writeln!(out, "implicit equality rows: {}", set_string(&basis.equality_rows));
    Ok(Outcome::ok(EXIT_OK, out))
}

pub fn cmd_export(
    path: &Path,
    format: &str,
    big_m: Option<f64>,
    out: Option<&Path>,
) -> aarlcp::Result<Outcome> {
    let format: ExportFormat = format.parse()?;
    let inst = validated(path)?;
    let basis = compute_lin_hull(&inst, Tolerances::default().zero)?;
    let b = big_m.unwrap_or_else(|| default_big_m(&inst));
    let model = build_milp(&inst, &basis, b)?;
    let text = export_milp(&model, format)?;
    match out {
        Some(p) => {
            write_out(p, &text)?;
            Ok(Outcome::ok(EXIT_OK, format!("wrote {}\n", p.display())))
        }
        None => Ok(Outcome::ok(EXIT_OK, text)),
    }
}
