//! Command-line front end: file and expression parsing, report objects,
//! and the dispatch for the `itcalc` binary.

use crate::algebra::{parse_algebra, AlgebraRef};
use crate::error::{Error, Result};
use crate::exactlin::Mat;
use crate::homotopy::{check_relative_tilting, is_f_acyclic, verify_bound, Complex};
use crate::itcore::{find_d_division, nakayama_family, phi, phi_dim, Registry};
use crate::relstruct::{ext_f_dim, resolution, RelStructure};
use crate::rep::{decompose, direct_sum, Morphism, Rep};
use clap::{Args, Parser, Subcommand};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::Path;

pub const DEFAULT_HORIZON: usize = 50;

fn default_horizon() -> usize {
    std::env::var("ITCALC_HORIZON")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_HORIZON)
}

#[derive(Parser, Debug)]
#[command(name = "itcalc", version, about = "Relative homological invariants of bound quiver algebras")]
pub struct Invocation {
    #[command(subcommand)]
    pub command: Command,
    /// Replay a previously emitted report: re-run its recorded invocation.
    #[arg(long, global = true)]
    pub replay: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Path to the `.alg` algebra file.
    #[arg(long)]
    pub algebra: String,
    /// Generator expression for E = A (+) G; `A` means G = 0.
    #[arg(long, default_value = "A")]
    pub generator: String,
    /// Syzygy-orbit horizon.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// PRNG seed (decimal/hex integer, or `random`).
    #[arg(long, default_value = "0x49545F44")]
    pub seed: String,
    /// Render an aligned human-readable table instead of JSON.
    #[arg(long)]
    pub pretty: bool,
    /// Write the report to a file as well as stdout.
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// phi of a module.
    Phi {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        module: String,
    },
    /// phi of the direct sum of a family (`nakayama-all` or an expression).
    PhiDim {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        family: String,
    },
    /// F-projective resolution prefix of a module.
    Resolve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 5)]
        length: usize,
    },
    /// dim Ext_F^d(module, target).
    Ext {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        module: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        degree: usize,
    },
    /// F-acyclicity of a complex (covers F-exactness of short sequences).
    CheckExact {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        complex: String,
    },
    /// Relative tilting report for a complex or module stalk.
    TiltingCheck {
        #[command(flatten)]
        common: Common,
        /// A `.cpx` path, or a module expression taken as a stalk in degree 0.
        #[arg(long)]
        tilting: String,
    },
    /// Verify the derived-equivalence phi-dim bound.
    VerifyBound {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tilting: String,
        #[arg(long)]
        b_algebra: String,
        #[arg(long, default_value = "nakayama-all")]
        family_a: String,
        #[arg(long, default_value = "nakayama-all")]
        family_b: String,
    },
    /// Krull-Schmidt decomposition of a module.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        module: String,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Phi { common, .. }
            | Command::PhiDim { common, .. }
            | Command::Resolve { common, .. }
            | Command::Ext { common, .. }
            | Command::CheckExact { common, .. }
            | Command::TiltingCheck { common, .. }
            | Command::VerifyBound { common, .. }
            | Command::Decompose { common, .. } => common,
        }
    }
}

/// Parse a module expression: `term (+ term)*` with terms `S(i)`, `P(i)`,
/// `I(i)`, `P(i)/rad^k`, `A`, `file:<path>`, each optionally `^<mult>`.
pub fn parse_module_expr(algebra: &AlgebraRef, expr: &str) -> Result<Rep> {
    let mut parts: Vec<Rep> = Vec::new();
    for raw in expr.split('+') {
        let term = raw.trim();
        if term.is_empty() {
            return Err(Error::Parse { line: 0, msg: format!("empty term in `{}`", expr) });
        }
        let (body, mult) = match term.rsplit_once('^') {
            // `P(i)/rad^k` also contains '^'; only treat the suffix as a
            // multiplicity when the body stays well-formed
            Some((b, m)) if !b.trim_end().ends_with("/rad") => {
                let mult: usize = m.trim().parse().map_err(|_| Error::Parse {
                    line: 0,
                    msg: format!("bad multiplicity in `{}`", term),
                })?;
                (b.trim(), mult)
            }
            _ => (term, 1),
        };
        let rep = parse_module_term(algebra, body)?;
        for _ in 0..mult {
            parts.push(rep.clone());
        }
    }
    direct_sum(algebra, &parts)
}

fn parse_vertex_arg(body: &str, head: &str) -> Result<usize> {
    let inner = body
        .strip_prefix(head)
        .and_then(|r| r.strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse { line: 0, msg: format!("malformed term `{}`", body) })?;
    inner.trim().parse().map_err(|_| Error::Parse {
        line: 0,
        msg: format!("bad vertex in `{}`", body),
    })
}

fn parse_module_term(algebra: &AlgebraRef, body: &str) -> Result<Rep> {
    if body == "A" {
        let parts: Vec<Rep> = (1..=algebra.quiver.vertex_count)
            .map(|v| Rep::projective(algebra.clone(), v))
            .collect::<Result<_>>()?;
        return direct_sum(algebra, &parts);
    }
    if let Some(path) = body.strip_prefix("file:") {
        let text = std::fs::read_to_string(path.trim())?;
        return parse_module_file(algebra, &text);
    }
    if let Some((p_part, rad_part)) = body.split_once("/rad^") {
        let v = parse_vertex_arg(p_part.trim(), "P")?;
        let k: usize = rad_part.trim().parse().map_err(|_| Error::Parse {
            line: 0,
            msg: format!("bad radical power in `{}`", body),
        })?;
        return Rep::projective_mod_radical(algebra.clone(), v, k);
    }
    if body.starts_with("S(") {
        return Rep::simple(algebra.clone(), parse_vertex_arg(body, "S")?);
    }
    if body.starts_with("P(") {
        return Rep::projective(algebra.clone(), parse_vertex_arg(body, "P")?);
    }
    if body.starts_with("I(") {
        return Rep::injective(algebra.clone(), parse_vertex_arg(body, "I")?);
    }
    Err(Error::Parse { line: 0, msg: format!("unrecognized module term `{}`", body) })
}

/// Parse the `.mod` format: `module <name>` / `dims d_1 ... d_n` /
/// `map <arrow-id> <row-major entries>` (omitted maps are zero).
pub fn parse_module_file(algebra: &AlgebraRef, text: &str) -> Result<Rep> {
    let p = algebra.char_p;
    let nv = algebra.quiver.vertex_count;
    let mut dims: Option<Vec<usize>> = None;
    let mut maps: Vec<Option<Vec<u64>>> = vec![None; algebra.quiver.arrows.len()];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        let mut parts = l.split_whitespace();
        match parts.next().unwrap() {
            "module" => {}
            "dims" => {
                let d: std::result::Result<Vec<usize>, _> =
                    parts.map(|s| s.parse::<usize>()).collect();
                let d = d.map_err(|_| err("dims must be integers".into()))?;
                if d.len() != nv {
                    return Err(err(format!("expected {} dims, got {}", nv, d.len())));
                }
                dims = Some(d);
            }
            "map" => {
                let id: usize = parts
                    .next()
                    .ok_or_else(|| err("expected `map <arrow-id> <entries>`".into()))?
                    .parse()
                    .map_err(|_| err("arrow id must be an integer".into()))?;
                let pos = algebra
                    .quiver
                    .arrows
                    .iter()
                    .position(|a| a.id == id)
                    .ok_or_else(|| err(format!("unknown arrow {}", id)))?;
                let entries: std::result::Result<Vec<u64>, _> =
                    parts.map(|s| s.parse::<u64>()).collect();
                maps[pos] = Some(entries.map_err(|_| err("map entries must be integers".into()))?);
            }
            other => return Err(err(format!("unknown directive `{}`", other))),
        }
    }
    let dims = dims.ok_or(Error::Parse { line: 0, msg: "missing `dims` line".into() })?;
    let mut arrow_maps = Vec::new();
    for (pos, a) in algebra.quiver.arrows.iter().enumerate() {
        let rows = dims[a.target - 1];
        let cols = dims[a.source - 1];
        let mat = match &maps[pos] {
            None => Mat::zero(p, rows, cols),
            Some(entries) => {
                if entries.len() != rows * cols {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!(
                            "map for arrow {} needs {} entries, got {}",
                            a.id,
                            rows * cols,
                            entries.len()
                        ),
                    });
                }
                let mut m = Mat::zero(p, rows, cols);
                for i in 0..rows {
                    for j in 0..cols {
                        m.set(i, j, entries[i * cols + j]);
                    }
                }
                m
            }
        };
        arrow_maps.push(mat);
    }
    Rep::new(algebra.clone(), dims, arrow_maps)
}

/// Parse the `.cpx` format: `complex` / `degree <i>: <module-expr>` /
/// `diff <i>: <entries>` where the entries list the per-vertex blocks of
/// the differential out of degree `i`, each row-major, in vertex order.
pub fn parse_complex_file(algebra: &AlgebraRef, text: &str) -> Result<Complex> {
    use std::collections::BTreeMap;
    let mut degree_terms: BTreeMap<i64, Rep> = BTreeMap::new();
    let mut diff_entries: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') || l == "complex" {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        let (head, rest) = l
            .split_once(':')
            .ok_or_else(|| err("expected `degree <i>: ...` or `diff <i>: ...`".into()))?;
        let mut head_parts = head.split_whitespace();
        let kind = head_parts.next().unwrap_or("");
        let deg: i64 = head_parts
            .next()
            .ok_or_else(|| err("missing degree index".into()))?
            .parse()
            .map_err(|_| err("degree index must be an integer".into()))?;
        match kind {
            "degree" => {
                let rep = parse_module_expr(algebra, rest.trim())?;
                degree_terms.insert(deg, rep);
            }
            "diff" => {
                let entries: std::result::Result<Vec<u64>, _> =
                    rest.split_whitespace().map(|s| s.parse::<u64>()).collect();
                diff_entries.insert(deg, entries.map_err(|_| err("diff entries must be integers".into()))?);
            }
            other => return Err(err(format!("unknown directive `{}`", other))),
        }
    }
    if degree_terms.is_empty() {
        return Ok(Complex::zero(algebra.clone()));
    }
    let lo = *degree_terms.keys().next().unwrap();
    let hi = *degree_terms.keys().last().unwrap();
    let p = algebra.char_p;
    let terms: Vec<Rep> = (lo..=hi)
        .map(|d| degree_terms.get(&d).cloned().unwrap_or_else(|| Rep::zero(algebra.clone())))
        .collect();
    let mut diffs = Vec::new();
    for d in lo..hi {
        let src = &terms[(d - lo) as usize];
        let dst = &terms[(d - lo) as usize + 1];
        let blocks = match diff_entries.get(&d) {
            None => Morphism::zero(src, dst).blocks,
            Some(entries) => {
                let mut blocks = Vec::new();
                let mut cursor = 0usize;
                for v in 0..algebra.quiver.vertex_count {
                    let rows = dst.dims[v];
                    let cols = src.dims[v];
                    if cursor + rows * cols > entries.len() {
                        return Err(Error::Parse {
                            line: 0,
                            msg: format!("diff {} has too few entries", d),
                        });
                    }
                    let mut m = Mat::zero(p, rows, cols);
                    for i in 0..rows {
                        for j in 0..cols {
                            m.set(i, j, entries[cursor + i * cols + j]);
                        }
                    }
                    cursor += rows * cols;
                    blocks.push(m);
                }
                if cursor != entries.len() {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("diff {} has too many entries", d),
                    });
                }
                blocks
            }
        };
        diffs.push(Morphism { blocks });
    }
    Complex::new(algebra.clone(), lo, terms, diffs)
}

#[derive(Serialize)]
struct DivisionReport {
    d: usize,
    #[serde(rename = "X")]
    x: Vec<usize>,
    #[serde(rename = "Y")]
    y: Vec<usize>,
}

#[derive(Serialize)]
struct PhiReport {
    phi: usize,
    certified: bool,
    rank_sequence: Vec<usize>,
    registry_size: usize,
    seed: u64,
    horizon: usize,
    version: &'static str,
    division: Option<DivisionReport>,
    argv: Vec<String>,
}

#[derive(Serialize)]
struct PhiDimReport {
    phi_dim: usize,
    certified: bool,
    rank_sequence: Vec<usize>,
    registry_size: usize,
    seed: u64,
    horizon: usize,
    version: &'static str,
    argv: Vec<String>,
}

#[derive(Serialize)]
struct ResolveReport {
    term_dims: Vec<Vec<usize>>,
    syzygy_dims: Vec<Vec<usize>>,
    terminated: bool,
    seed: u64,
    horizon: usize,
    version: &'static str,
    argv: Vec<String>,
}

#[derive(Serialize)]
struct ExtReport {
    ext_dim: usize,
    degree: usize,
    seed: u64,
    version: &'static str,
    argv: Vec<String>,
}

#[derive(Serialize)]
struct CheckExactReport {
    f_acyclic: bool,
    seed: u64,
    version: &'static str,
    argv: Vec<String>,
}

#[derive(Serialize)]
struct TiltingCheckReport {
    self_orthogonal: bool,
    summand_count: usize,
    simple_count: usize,
    generation_heuristic: bool,
    term_length: usize,
    seed: u64,
    version: &'static str,
    argv: Vec<String>,
}

#[derive(Serialize)]
struct VerifyBoundReport {
    phi_dim_a: usize,
    phi_dim_b: usize,
    term_length: usize,
    holds: bool,
    certified: bool,
    slack_left: usize,
    slack_right: usize,
    endo_dim: usize,
    b_dim: usize,
    seed: u64,
    horizon: usize,
    version: &'static str,
    argv: Vec<String>,
}

#[derive(Serialize)]
struct DecomposeSummand {
    dims: Vec<usize>,
    multiplicity: usize,
}

#[derive(Serialize)]
struct DecomposeReport {
    summands: Vec<DecomposeSummand>,
    total_dim: usize,
    seed: u64,
    version: &'static str,
    argv: Vec<String>,
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    code: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorObject<'a>,
}

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn parse_seed(s: &str) -> Result<u64> {
    if s == "random" {
        use rand::RngCore;
        return Ok(rand::rngs::OsRng.next_u64());
    }
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse()
    };
    parsed.map_err(|_| Error::Invalid(format!("bad seed `{}`", s)))
}

struct Context {
    algebra: AlgebraRef,
    f: RelStructure,
    rng: ChaCha8Rng,
    seed: u64,
    horizon: usize,
}

fn load_context(common: &Common) -> Result<Context> {
    let text = std::fs::read_to_string(&common.algebra)?;
    let algebra = parse_algebra(&text)?;
    let seed = parse_seed(&common.seed)?;
    let mut rng = crate::rng_with_seed(seed);
    let g = parse_module_expr(&algebra, &common.generator)?;
    let f = RelStructure::new(algebra.clone(), &[g], &mut rng)?;
    let horizon = common.horizon.unwrap_or_else(default_horizon);
    if horizon == 0 {
        return Err(Error::Invalid("horizon must be at least 1".into()));
    }
    Ok(Context { algebra, f, rng, seed, horizon })
}

fn family_of(ctx: &mut Context, expr: &str) -> Result<Vec<Rep>> {
    if expr == "nakayama-all" {
        nakayama_family(&ctx.f)
    } else {
        Ok(vec![parse_module_expr(&ctx.algebra, expr)?])
    }
}

fn load_tilting(ctx: &Context, expr: &str) -> Result<Complex> {
    if Path::new(expr).extension().map_or(false, |e| e == "cpx") {
        let text = std::fs::read_to_string(expr)?;
        parse_complex_file(&ctx.algebra, &text)
    } else {
        Ok(Complex::stalk(parse_module_expr(&ctx.algebra, expr)?, 0))
    }
}

fn emit(common: &Common, json: String, pretty: String) -> Result<String> {
    let out = if common.pretty { pretty } else { json.clone() };
    if let Some(path) = &common.output {
        std::fs::write(path, &json)?;
    }
    Ok(out)
}

fn pretty_lines(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    pairs
        .iter()
        .map(|(k, v)| format!("{:width$}  {}", k, v, width = width))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Run one command; returns (exit code, stdout payload).
pub fn run(command: &Command, argv: Vec<String>) -> (i32, String) {
    match execute(command, argv) {
        Ok((code, out)) => (code, out),
        Err(e) => {
            let report = ErrorReport { error: ErrorObject { code: e.code(), message: e.to_string() } };
            (1, serde_json::to_string(&report).expect("error reports serialize"))
        }
    }
}

fn execute(command: &Command, argv: Vec<String>) -> Result<(i32, String)> {
    let common = command.common().clone();
    let mut ctx = load_context(&common)?;
    match command {
        Command::Phi { module, .. } => {
            let m = parse_module_expr(&ctx.algebra, module)?;
            let mut reg = Registry::new();
            let r = phi(&mut reg, &ctx.f, &m, ctx.horizon, &mut ctx.rng)?;
            let division = find_d_division(&mut reg, &ctx.f, &m, ctx.horizon, &mut ctx.rng)?
                .map(|d| DivisionReport { d: d.d, x: d.x.dims.clone(), y: d.y.dims.clone() });
            let report = PhiReport {
                phi: r.value,
                certified: r.certified,
                rank_sequence: r.rank_sequence.clone(),
                registry_size: reg.len(),
                seed: ctx.seed,
                horizon: ctx.horizon,
                version: VERSION,
                division,
                argv,
            };
            let pretty = pretty_lines(&[
                ("phi", report.phi.to_string()),
                ("certified", report.certified.to_string()),
                ("rank sequence", format!("{:?}", report.rank_sequence)),
                ("registry size", report.registry_size.to_string()),
            ]);
            Ok((0, emit(&common, serde_json::to_string(&report)?, pretty)?))
        }
        Command::PhiDim { family, .. } => {
            let fam = family_of(&mut ctx, family)?;
            let mut reg = Registry::new();
            let r = phi_dim(&mut reg, &ctx.f, &fam, ctx.horizon, &mut ctx.rng)?;
            let report = PhiDimReport {
                phi_dim: r.value,
                certified: r.certified,
                rank_sequence: r.rank_sequence.clone(),
                registry_size: reg.len(),
                seed: ctx.seed,
                horizon: ctx.horizon,
                version: VERSION,
                argv,
            };
            let pretty = pretty_lines(&[
                ("phi-dim", report.phi_dim.to_string()),
                ("certified", report.certified.to_string()),
                ("rank sequence", format!("{:?}", report.rank_sequence)),
            ]);
            Ok((0, emit(&common, serde_json::to_string(&report)?, pretty)?))
        }
        Command::Resolve { module, length, .. } => {
            let m = parse_module_expr(&ctx.algebra, module)?;
            let res = resolution(&ctx.f, &m, *length)?;
            let report = ResolveReport {
                term_dims: res.terms.iter().map(|t| t.dims.clone()).collect(),
                syzygy_dims: res.syzygies.iter().map(|t| t.dims.clone()).collect(),
                terminated: res.syzygies.last().map_or(false, |s| s.is_zero()),
                seed: ctx.seed,
                horizon: ctx.horizon,
                version: VERSION,
                argv,
            };
            let pretty = pretty_lines(&[
                ("terms", format!("{:?}", report.term_dims)),
                ("syzygies", format!("{:?}", report.syzygy_dims)),
                ("terminated", report.terminated.to_string()),
            ]);
            Ok((0, emit(&common, serde_json::to_string(&report)?, pretty)?))
        }
        Command::Ext { module, target, degree, .. } => {
            let m = parse_module_expr(&ctx.algebra, module)?;
            let n = parse_module_expr(&ctx.algebra, target)?;
            let d = ext_f_dim(&ctx.f, &m, &n, *degree)?;
            let report = ExtReport { ext_dim: d, degree: *degree, seed: ctx.seed, version: VERSION, argv };
            let pretty = pretty_lines(&[("ext dim", d.to_string()), ("degree", degree.to_string())]);
            Ok((0, emit(&common, serde_json::to_string(&report)?, pretty)?))
        }
        Command::CheckExact { complex, .. } => {
            let text = std::fs::read_to_string(complex)?;
            let c = parse_complex_file(&ctx.algebra, &text)?;
            let ok = is_f_acyclic(&ctx.f, &c)?;
            let report = CheckExactReport { f_acyclic: ok, seed: ctx.seed, version: VERSION, argv };
            let pretty = pretty_lines(&[("F-acyclic", ok.to_string())]);
            Ok((0, emit(&common, serde_json::to_string(&report)?, pretty)?))
        }
        Command::TiltingCheck { tilting, .. } => {
            let t = load_tilting(&ctx, tilting)?;
            let r = check_relative_tilting(&ctx.f, &t, &mut ctx.rng)?;
            let report = TiltingCheckReport {
                self_orthogonal: r.self_orthogonal,
                summand_count: r.summand_count,
                simple_count: r.simple_count,
                generation_heuristic: r.generation_heuristic,
                term_length: r.term_length,
                seed: ctx.seed,
                version: VERSION,
                argv,
            };
            let pretty = pretty_lines(&[
                ("self-orthogonal", report.self_orthogonal.to_string()),
                ("summands", report.summand_count.to_string()),
                ("simples", report.simple_count.to_string()),
                ("generation heuristic", report.generation_heuristic.to_string()),
                ("term length", report.term_length.to_string()),
            ]);
            Ok((0, emit(&common, serde_json::to_string(&report)?, pretty)?))
        }
        Command::VerifyBound { tilting, b_algebra, family_a, family_b, .. } => {
            let t = load_tilting(&ctx, tilting)?;
            let b_text = std::fs::read_to_string(b_algebra)?;
            let b_alg = parse_algebra(&b_text)?;
            let b = RelStructure::trivial(b_alg)?;
            let fam_a = family_of(&mut ctx, family_a)?;
            let fam_b = if family_b == "nakayama-all" {
                nakayama_family(&b)?
            } else {
                vec![parse_module_expr(&b.algebra, family_b)?]
            };
            let mut reg = Registry::new();
            let r = verify_bound(
                &ctx.f, &t, &b, &fam_a, &fam_b, ctx.horizon, &mut reg, &mut ctx.rng,
            )?;
            let report = VerifyBoundReport {
                phi_dim_a: r.lhs,
                phi_dim_b: r.rhs,
                term_length: r.term_len,
                holds: r.holds,
                certified: r.certified,
                slack_left: r.slack_left,
                slack_right: r.slack_right,
                endo_dim: r.endo_dim,
                b_dim: r.b_dim,
                seed: ctx.seed,
                horizon: ctx.horizon,
                version: VERSION,
                argv,
            };
            let pretty = pretty_lines(&[
                ("phi-dim_F(A)", report.phi_dim_a.to_string()),
                ("phi-dim(B)", report.phi_dim_b.to_string()),
                ("term length", report.term_length.to_string()),
                ("holds", report.holds.to_string()),
                ("certified", report.certified.to_string()),
            ]);
            let code = if r.holds { 0 } else { 2 };
            Ok((code, emit(&common, serde_json::to_string(&report)?, pretty)?))
        }
        Command::Decompose { module, .. } => {
            let m = parse_module_expr(&ctx.algebra, module)?;
            let summands = decompose(&m, &mut ctx.rng)?;
            let report = DecomposeReport {
                summands: summands
                    .iter()
                    .map(|(r, mult)| DecomposeSummand { dims: r.dims.clone(), multiplicity: *mult })
                    .collect(),
                total_dim: m.total_dim(),
                seed: ctx.seed,
                version: VERSION,
                argv,
            };
            let pretty = pretty_lines(
                &report
                    .summands
                    .iter()
                    .map(|s| ("summand", format!("dims {:?} x{}", s.dims, s.multiplicity)))
                    .collect::<Vec<_>>(),
            );
            Ok((0, emit(&common, serde_json::to_string(&report)?, pretty)?))
        }
    }
}

/// Entry point shared by the binary and tests: parse argv, honor --replay,
/// dispatch, return the exit code with the rendered output.
pub fn run_argv(argv: &[String]) -> (i32, String) {
    let parsed = match Invocation::try_parse_from(
        std::iter::once(&"itcalc".to_string()).chain(argv.iter()),
    ) {
        Ok(p) => p,
        Err(e) => return (1, e.to_string()),
    };
    if let Some(path) = &parsed.replay {
        return replay(path);
    }
    run(&parsed.command, argv.to_vec())
}

/// Re-run the invocation recorded in a report file.
fn replay(path: &str) -> (i32, String) {
    let run_inner = || -> Result<Vec<String>> {
        let text = std::fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Error::Invalid(format!("unreadable report: {}", e)))?;
        let argv = value
            .get("argv")
            .and_then(|a| a.as_array())
            .ok_or_else(|| Error::Invalid("report carries no argv record".into()))?;
        Ok(argv.iter().filter_map(|v| v.as_str().map(String::from)).collect())
    };
    match run_inner() {
        Ok(argv) => run_argv(&argv),
        Err(e) => {
            let report = ErrorReport { error: ErrorObject { code: e.code(), message: e.to_string() } };
            (1, serde_json::to_string(&report).expect("error reports serialize"))
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Error {
        Error::Invalid(format!("serialization failure: {}", e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures;

    #[test]
    fn module_expressions() {
        let a2 = fixtures::a2(2);
        assert_eq!(parse_module_expr(&a2, "S(1)+S(1)").unwrap().dims, vec![2, 0]);
        assert_eq!(parse_module_expr(&a2, "A").unwrap().dims, vec![1, 2]);
        assert_eq!(parse_module_expr(&a2, "S(1)^3").unwrap().dims, vec![3, 0]);
        assert_eq!(parse_module_expr(&a2, "P(1) + I(1)").unwrap().dims, vec![2, 1]);
        let l3 = fixtures::l3(2);
        assert_eq!(parse_module_expr(&l3, "P(1)/rad^1").unwrap().dims, vec![1]);
        assert_eq!(parse_module_expr(&l3, "P(1)/rad^2 ^ 2").unwrap().dims, vec![4]);
        assert!(parse_module_expr(&a2, "Q(1)").is_err());
        assert!(parse_module_expr(&a2, "S(9)").is_err());
    }

    #[test]
    fn module_file_roundtrip() {
        let l2 = fixtures::l2(3);
        let text = "module m\ndims 2\nmap 1 0 0 1 0\n";
        let m = parse_module_file(&l2, text).unwrap();
        assert_eq!(m.dims, vec![2]);
        assert_eq!(m.arrow_maps[0].get(1, 0), 1);
        // a non-nilpotent loop action violates the relation
        let bad = "module m\ndims 1\nmap 1 1\n";
        assert!(parse_module_file(&l2, bad).is_err());
    }

    #[test]
    fn complex_file_parses() {
        let a2 = fixtures::a2(2);
        let text = "complex\ndegree 0: P(2)\ndegree 1: P(1)\ndiff 0: 1\n";
        let c = parse_complex_file(&a2, &text).unwrap();
        assert_eq!(c.lo, 0);
        assert_eq!(c.term_or_zero(0).dims, vec![0, 1]);
        assert_eq!(c.term_or_zero(1).dims, vec![1, 1]);
        // entry layout: blocks per vertex; vertex 1 block is 1x0, vertex 2
        // block is 1x1 and carries the single entry
        assert_eq!(c.diff_or_zero(0).blocks[1].get(0, 0), 1);
    }

    #[test]
    fn seed_parsing() {
        assert_eq!(parse_seed("7").unwrap(), 7);
        assert_eq!(parse_seed("0x10").unwrap(), 16);
        assert!(parse_seed("xyz").is_err());
    }
}
