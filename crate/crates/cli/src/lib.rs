//! Command-line front end to the motive, A∞ and DT machinery.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on bad
//! input. `MDT_FIELD=rationals|closed` selects the field for square classes.

pub mod literal;

use std::fmt::Write as _;
use std::ffi::OsString;

use clap::{Parser, Subcommand};
use mdt_core::ainfty::{check_cyclic, check_stasheff, koszul_dual, AInftyCategory, MatElem, QuiverWithPotential, ShiftedObject};
use mdt_core::dt::{
    bridgeland_conjugation_check, framed_conifold, hilbert_by_conjugation, hn_factorization_check, hn_slopes, spherical_series,
    w0_series, QTSeries, Truncation,
};
use mdt_core::motive::parse_motive;
use mdt_core::orientation::{hom1_class, obstruction_at_extension, FieldMode};
use mdt_core::poly::Poly;
use mdt_core::twisted::{cyclic_split, mc_residual, EndAlgebra, VarSplit};
use mdt_core::vanishing::{milnor_fibre_ts, nearby_cycle, ResolutionData};

#[derive(Parser, Debug)]
#[command(name = "mdt", about = "Exact motivic DT workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Motive expressions.
    Motive {
        #[command(subcommand)]
        cmd: MotiveCmd,
    },
    /// Milnor-fibre classes from resolution data or Thom–Sebastiani.
    Mf {
        #[arg(long, conflicts_with = "ts")]
        resolution: Option<String>,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        ts: Option<Vec<u32>>,
    },
    /// Stasheff and cyclicity checks on the Koszul dual of a quiver.
    Stasheff {
        #[arg(long)]
        quiver: String,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
    /// Maurer–Cartan equations on generic matrices with the given slot counts.
    Mc {
        #[arg(long)]
        quiver: String,
        #[arg(long, value_delimiter = ',')]
        dim: Vec<usize>,
        #[arg(long)]
        symbolic: bool,
    },
    /// Minimal potential and quadratic form of a twisted object.
    Wmin {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        tw: String,
        #[arg(long, default_value_t = 8)]
        order: u32,
    },
    /// Square class of a twisted object, or the obstruction at an extension.
    J2 {
        #[arg(long)]
        quiver: String,
        #[arg(long, conflicts_with = "tw")]
        ext: Option<String>,
        #[arg(long)]
        tw: Option<String>,
    },
    /// Quantum-torus series.
    Dtseries {
        #[arg(long)]
        quiver: Option<String>,
        #[arg(long)]
        framed: bool,
        /// One number is a total-dimension bound; several give a rectangle.
        #[arg(long, value_delimiter = ',')]
        trunc: Vec<i64>,
        #[arg(long)]
        check: Option<String>,
        #[arg(long)]
        n: Option<i64>,
    },
}

#[derive(Subcommand, Debug)]
enum MotiveCmd {
    /// Parses and prints in canonical form.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

/// Result of a subcommand: text plus verdict.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, ok: true }
    }
}

type Run = Result<Outcome, String>;

fn field_mode() -> Result<FieldMode, String> {
    match std::env::var("MDT_FIELD").as_deref() {
        Err(_) | Ok("rationals") => Ok(FieldMode::Rational),
        Ok("closed") => Ok(FieldMode::AlgebraicallyClosed),
        Ok(other) => Err(format!("MDT_FIELD must be rationals or closed, not {other:?}")),
    }
}

fn read(path: &str) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn load_quiver(path: &str) -> Result<QuiverWithPotential, String> {
    QuiverWithPotential::parse(&read(path)?).map_err(|e| format!("{path}: {e}"))
}

fn load_dual(path: &str) -> Result<AInftyCategory, String> {
    Ok(koszul_dual(&load_quiver(path)?))
}

fn run_mf(resolution: Option<String>, ts: Option<Vec<u32>>) -> Run {
    let m = match (resolution, ts) {
        (Some(path), None) => {
            let data = ResolutionData::parse(&read(&path)?).map_err(|e| format!("{path}: {e}"))?;
            nearby_cycle(&data)
        }
        (None, Some(ab)) if ab.iter().all(|&x| x >= 1) => milnor_fibre_ts(ab[0], ab[1]),
        _ => return Err("mf needs --resolution <file> or --ts a b with a, b >= 1".into()),
    };
    Ok(Outcome::ok(m.to_string()))
}

fn run_stasheff(path: &str, nmax: usize) -> Run {
    let cat = load_dual(path)?;
    let st = check_stasheff(&cat, nmax);
    let cy = check_cyclic(&cat, nmax).map_err(|e| e.to_string())?;
    if st.passed() && cy.passed() {
        return Ok(Outcome::ok(format!("PASS (arities 1..{nmax})")));
    }
    let mut text = String::from("FAIL");
    if let Some(k) = st.first_failing_arity() {
        write!(text, " (stasheff at arity {k})").unwrap();
    }
    if !cy.passed() {
        write!(text, " (cyclic on {} tuples)", cy.violations.len()).unwrap();
    }
    Ok(Outcome { text, ok: false })
}

fn run_mc(path: &str, dim: &[usize], symbolic: bool) -> Run {
    let cat = load_dual(path)?;
    if dim.len() != cat.objects.len() {
        return Err(format!("--dim needs {} entries", cat.objects.len()));
    }
    let tau = ShiftedObject(dim.iter().enumerate().flat_map(|(v, &d)| std::iter::repeat_n((v, 0), d)).collect());
    let mut x = MatElem::zero();
    let mut names = Vec::new();
    for i in 0..tau.len() {
        for j in 0..tau.len() {
            for e in cat.hom_basis(tau.obj(j), tau.obj(i), 1) {
                x.add(i, j, e, Poly::var(names.len()));
                names.push(format!("{}[{i},{j}]", cat.basis[e].label));
            }
        }
    }
    let r = mc_residual(&cat, &tau, &x).map_err(|e| e.to_string())?;
    let mut eqs: Vec<_> = r.entries().filter(|(_, p)| !p.is_zero()).collect();
    eqs.sort_by_key(|(k, _)| **k);
    let mut text = format!("variables={} equations={}", names.len(), eqs.len());
    if symbolic {
        for ((i, j, e), p) in eqs {
            write!(text, "\n{}[{i},{j}]: {} = 0", cat.basis[*e].label, p.render(&names)).unwrap();
        }
    }
    Ok(Outcome::ok(text))
}

fn run_wmin(path: &str, tw: &str, order: u32) -> Run {
    let cat = load_dual(path)?;
    let obj = literal::parse_tw(&cat, tw).map_err(|e| e.to_string())?;
    let end = EndAlgebra::new(&cat, obj);
    let split = end.hodge_splitting().map_err(|e| e.to_string())?;
    let (h, y, z) = (split.h_in_degree(1), split.v1_in_degree(1), split.v2_in_degree(1));
    let (nh, ny, nz) = (h.len(), y.len(), z.len());
    let vecs: Vec<_> = h.into_iter().chain(y).chain(z).collect();
    let w = end.potential_on(&vecs);
    let vars = VarSplit { h: (0..nh).collect(), y: (nh..nh + ny).collect(), z: (nh + ny..nh + ny + nz).collect() };
    let s = cyclic_split(&w, &vars, order).map_err(|e| e.to_string())?;
    let names: Vec<String> = (0..nh).map(|i| format!("h{i}")).chain((0..ny).map(|i| format!("y{i}"))).chain((0..nz).map(|i| format!("z{i}"))).collect();
    Ok(Outcome::ok(format!("H1={nh}\nW_min={}\nQ={}", s.w_min.render(&names), s.q.render(&names))))
}

fn run_j2(path: &str, ext: Option<String>, tw: Option<String>) -> Run {
    let cat = load_dual(path)?;
    let mode = field_mode()?;
    let class = match (ext, tw) {
        (Some(text), None) => {
            let (m1, m2, alpha) = literal::parse_ext(&cat, &text).map_err(|e| e.to_string())?;
            obstruction_at_extension(&cat, &m1, &m2, &alpha, mode)
        }
        (None, Some(text)) => hom1_class(&cat, &literal::parse_tw(&cat, &text).map_err(|e| e.to_string())?, mode),
        _ => return Err("j2 needs --ext <extension> or --tw <literal>".into()),
    }
    .map_err(|e| e.to_string())?;
    Ok(Outcome::ok(class.to_string()))
}

fn truncation(bounds: &[i64]) -> Result<Truncation, String> {
    match bounds {
        [] => Err("--trunc is required".into()),
        _ if bounds.iter().any(|&b| b < 0) => Err("--trunc bounds must be nonnegative".into()),
        [d] => Ok(Truncation::TotalDim(*d)),
        _ => Ok(Truncation::Rect(bounds.to_vec())),
    }
}

fn series_lines(s: &QTSeries) -> String {
    s.terms()
        .map(|(g, c)| format!("gamma=({}) coeff={c}", g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join("\n")
}

fn verdict(mut text: String, ok: bool) -> Outcome {
    if !text.is_empty() {
        text.push('\n');
    }
    text.push_str(if ok { "PASS" } else { "FAIL" });
    Outcome { text, ok }
}

fn run_dtseries(quiver: Option<String>, framed: bool, trunc: &[i64], check: Option<String>, n: Option<i64>) -> Run {
    let tr = truncation(trunc)?;
    match check.as_deref() {
        Some("con1") => {
            let n = n.ok_or("--check con1 needs --n <k>")?;
            if n < 0 {
                return Err("--n must be nonnegative".into());
            }
            let t = framed_conifold();
            let x = QTSeries::monomial(3, tr.clone(), vec![1, 0, 0], mdt_core::motive::Motive::one());
            let lhs = t.conjugate(&spherical_series(&[0, n, n + 1], &tr), &x).map_err(|e| e.to_string())?;
            let ok = bridgeland_conjugation_check(n, &tr).map_err(|e| e.to_string())?;
            Ok(verdict(series_lines(&lhs), ok))
        }
        Some("hn") => {
            let slopes = hn_slopes(&tr);
            let ok = match hn_factorization_check(&tr, &slopes) {
                Ok(ok) => ok,
                Err(e) => return Ok(verdict(e.to_string(), false)),
            };
            let h = hilbert_by_conjugation(&tr, &slopes).map_err(|e| e.to_string())?;
            Ok(verdict(series_lines(&h), ok))
        }
        Some(other) => Err(format!("unknown check {other:?}; expected con1 or hn")),
        None if framed => {
            let h = hilbert_by_conjugation(&tr, &hn_slopes(&tr)).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(series_lines(&h)))
        }
        None => {
            let q = load_quiver(&quiver.ok_or("dtseries needs --quiver, --framed or --check")?)?;
            let s = w0_series(&q, &tr).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(series_lines(&s)))
        }
    }
}

fn run(cmd: Cmd) -> Run {
    match cmd {
        Cmd::Motive { cmd: MotiveCmd::Eval { expr } } => Ok(Outcome::ok(parse_motive(&expr).map_err(|e| e.to_string())?.to_string())),
        Cmd::Mf { resolution, ts } => run_mf(resolution, ts),
        Cmd::Stasheff { quiver, nmax } => run_stasheff(&quiver, nmax),
        Cmd::Mc { quiver, dim, symbolic } => run_mc(&quiver, &dim, symbolic),
        Cmd::Wmin { quiver, tw, order } => run_wmin(&quiver, &tw, order),
        Cmd::J2 { quiver, ext, tw } => run_j2(&quiver, ext, tw),
        Cmd::Dtseries { quiver, framed, trunc, check, n } => run_dtseries(quiver, framed, &trunc, check, n),
    }
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Runs `mdt` on the given argument list, first element being the program name.
pub fn invoke<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let done = |code, stdout, stderr| Invocation { code, stdout, stderr };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => return done(2, String::new(), e.to_string()),
        Err(e) => return done(0, e.to_string(), String::new()),
    };
    match run(cli.cmd) {
        Ok(out) => {
            let stdout = if out.text.is_empty() { out.text } else { format!("{}\n", out.text) };
            done(if out.ok { 0 } else { 1 }, stdout, String::new())
        }
        Err(msg) => done(2, String::new(), format!("error: {msg}\n")),
    }
}
