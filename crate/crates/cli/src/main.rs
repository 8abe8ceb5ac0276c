//! Command-line driver for the derivation workbench.
//!
//! Exit codes: 0 = completed with an affirmative result, 1 = the checked
//! hypothesis fails or the sought witness exists (the report is still
//! printed), 2 = malformed input.

mod parser;
mod report;
mod specfile;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use derivlab_core::{
    check_star, classify, commute_check, enumerate_commuting_triangular, family_cor211,
    family_cor212, family_cor29, image_membership, kernel_into_subring, shamsuddin_obstruction,
    subring_image_scan, translation_family_check, DegreeCap, DeskBounds, Derivation,
    ExtensionChain, FamilyChain, IsotropyConclusion, OracleStatus, OracleVerdict, PolyMap,
    Polynomial, Rational, SimplicityConclusion, StarVerdict, TriangularMap,
};

use parser::{parse_polynomial, parse_rational};
use report::{InputDigest, Report};
use specfile::SpecFile;

#[derive(Parser)]
#[command(name = "derivlab", version, about = "Exact workbench for extended derivations: cone checks, image oracles, isotropy search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanMode {
    /// Look for a nonzero univariate image `d(r) = g(x_var)`.
    Image,
    /// Look for a non-constant `f` in `Q[x_1..x_var]` with `d(f)` univariate.
    Kernel,
}

#[derive(clap::Args, Clone)]
struct BoundArgs {
    /// Degree bound for the image-condition oracle.
    #[arg(long, default_value_t = 8)]
    oracle_bound: u32,
    /// Degree bound for the per-link simplicity checks.
    #[arg(long, default_value_t = 8)]
    shamsuddin_bound: u32,
    /// Tail degree for the commuting-map enumeration.
    #[arg(long, default_value_t = 2)]
    tail_degree: u32,
    /// Coefficient grid for the enumeration (must contain 0 and 1).
    #[arg(long, default_value = "-1,0,1")]
    coeffs: String,
    /// Translation constants to sample.
    #[arg(long, default_value = "0,1,-1,2")]
    samples: String,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the spec file's derivation to a polynomial.
    Derive {
        #[arg(long)]
        spec: PathBuf,
        /// Polynomial over the spec's ring.
        #[arg(long)]
        apply: String,
    },
    /// Decide the cone condition (*) for a matrix, or search a derivation's
    /// candidate exponent matrices.
    CheckStar {
        /// Rows separated by `;`, entries by spaces: "2 1; 3 0".
        #[arg(long, conflicts_with = "spec")]
        matrix: Option<String>,
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Decide whether d(r) = target is solvable up to a degree bound.
    ImageMembership {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        bound: u32,
    },
    /// Scan for univariate values of the derivation: nonzero images
    /// g(x_var), or non-constant kernel-style elements.
    NoUnits {
        #[arg(long)]
        spec: PathBuf,
        /// 1-based index of the distinguished variable.
        #[arg(long)]
        var: usize,
        /// Degree cap on g: a nonnegative integer or `inf`.
        #[arg(long, default_value = "inf")]
        cap: String,
        #[arg(long)]
        bound: u32,
        #[arg(long, value_enum, default_value_t = ScanMode::Image)]
        mode: ScanMode,
        /// Degree bound on the univariate image in kernel mode
        /// (defaults to --bound).
        #[arg(long)]
        target_bound: Option<u32>,
    },
    /// Decide whether d(r) = a*r + b is solvable up to a degree bound.
    Shamsuddin {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        bound: u32,
    },
    /// Check whether a polynomial map commutes with the derivation.
    Commute {
        #[arg(long)]
        spec: PathBuf,
        /// Comma-separated generator images, e.g. "x1, x2, x3 + 5".
        #[arg(long)]
        map: String,
    },
    /// Enumerate commuting triangular maps and sample the translation family.
    IsotropySearch {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Run the classification pipeline on a chain spec file or a built-in
    /// family.
    Classify {
        #[arg(long, conflicts_with = "family")]
        spec: Option<PathBuf>,
        /// One of: cor29, cor211, cor212.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        m1: Option<u32>,
        #[arg(long)]
        m2: Option<u32>,
        /// Exponent m for cor212.
        #[arg(long)]
        m: Option<u32>,
        /// Polynomial g in x1 for cor212.
        #[arg(long)]
        g: Option<String>,
        /// Total number of variables n.
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated links, e.g. "x2, x3^2".
        #[arg(long)]
        links: Option<String>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Construct a built-in family chain and print it as a spec file.
    Family {
        /// One of: cor29, cor211, cor212.
        name: String,
        #[arg(long)]
        m1: Option<u32>,
        #[arg(long)]
        m2: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        links: Option<String>,
    },
}

/// Anything that makes the run an input error (exit 2).
struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

enum Exit {
    Completed,
    HypothesisFailure,
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let mut digest = InputDigest::new(&args);
    match run(cli.command, &mut digest) {
        Ok((report, exit)) => {
            print!("{}", report.finish());
            match exit {
                Exit::Completed => ExitCode::SUCCESS,
                Exit::HypothesisFailure => ExitCode::from(1),
            }
        }
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_spec(path: &Path, digest: &mut InputDigest) -> Result<SpecFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))?;
    digest.add_file(&text);
    SpecFile::parse(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn parse_list<T>(
    text: &str,
    what: &str,
    mut parse: impl FnMut(&str) -> Result<T, CliError>,
) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(s).map_err(|e| CliError(format!("bad {what} `{s}`: {}", e.0))))
        .collect()
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<u64>>, CliError> {
    let rows: Vec<Vec<u64>> = text
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|e| {
                    e.parse::<u64>()
                        .map_err(|_| CliError(format!("matrix entry `{e}` is not a nonnegative integer")))
                })
                .collect::<Result<Vec<u64>, CliError>>()
        })
        .collect::<Result<_, _>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return Err(CliError("matrix must be square: rows separated by `;`".into()));
    }
    Ok(rows)
}

fn parse_cap(text: &str) -> Result<DegreeCap, CliError> {
    if text == "inf" {
        return Ok(DegreeCap::Infinite);
    }
    text.parse::<u64>()
        .map(DegreeCap::Finite)
        .map_err(|_| CliError(format!("cap must be a nonnegative integer or `inf`, got `{text}`")))
}

fn desk_bounds(b: &BoundArgs) -> Result<DeskBounds, CliError> {
    let coeffs: Vec<Rational> = parse_list(&b.coeffs, "coefficient", |s| Ok(parse_rational(s)?))?;
    let samples: Vec<Rational> = parse_list(&b.samples, "sample", |s| Ok(parse_rational(s)?))?;
    Ok(DeskBounds {
        oracle_degree: b.oracle_bound,
        shamsuddin_degree: b.shamsuddin_bound,
        tail_degree: b.tail_degree,
        coeffs,
        translation_samples: samples,
    })
}

fn names_x(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("x{j}")).collect()
}

fn render_star(verdict: &StarVerdict) -> String {
    match &verdict.witness {
        None => "-".to_string(),
        Some(w) => {
            let entries: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            format!("({})", entries.join(", "))
        }
    }
}

fn matrix_string(rows: &[Vec<u64>]) -> String {
    let rendered: Vec<String> = rows
        .iter()
        .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rendered.join("; "))
}

fn render_oracle(v: &OracleVerdict, names: &[String]) -> String {
    match &v.status {
        OracleStatus::InfeasibleUpTo => format!("infeasible-up-to {}", v.bound),
        OracleStatus::WitnessFound { witness, image } => {
            let w = witness.resize_arity(names.len()).expect("subring of the report ring");
            let g = image.resize_arity(names.len()).expect("subring of the report ring");
            format!(
                "witness r = {} with d(r) = {} (bound {})",
                w.display_with(names),
                g.display_with(names),
                v.bound
            )
        }
    }
}

fn echo_derivation(rep: &mut Report, d: &Derivation, names: &[String]) {
    rep.kv("ring", names.join(" "));
    for j in 1..=d.arity() {
        rep.kv(&format!("d({})", names[j - 1]), d.image(j).display_with(names));
    }
}

fn family_by_name(
    name: &str,
    m1: Option<u32>,
    m2: Option<u32>,
    m: Option<u32>,
    g: Option<&str>,
    n: Option<usize>,
    links_text: Option<&str>,
) -> Result<FamilyChain, CliError> {
    let n = n.ok_or(CliError("--n is required for family mode".into()))?;
    let names = names_x(n);
    let links: Vec<Polynomial> = match links_text {
        Some(t) => parse_list(t, "link", |s| Ok(parse_polynomial(s, &names)?))?,
        None => Vec::new(),
    };
    let need = |opt: Option<u32>, flag: &str| {
        opt.ok_or(CliError(format!("--{flag} is required for this family")))
    };
    match name {
        "cor29" => Ok(family_cor29(need(m1, "m1")?, need(m2, "m2")?, n, links)?),
        "cor211" => Ok(family_cor211(need(m1, "m1")?, need(m2, "m2")?, n, links)?),
        "cor212" => {
            let g_text = g.ok_or(CliError("--g is required for cor212".into()))?;
            let g_poly = parse_polynomial(g_text, &names_x(1))
                .or_else(|_| parse_polynomial(g_text, &names))?;
            Ok(family_cor212(need(m, "m")?, &g_poly, n, links)?)
        }
        other => Err(CliError(format!(
            "unknown family `{other}` (expected cor29, cor211, or cor212)"
        ))),
    }
}

fn spec_from_family(fc: &FamilyChain) -> SpecFile {
    let chain = &fc.chain;
    let n = chain.arity();
    SpecFile {
        names: names_x(n),
        base_images: chain
            .base()
            .images()
            .iter()
            .map(|p| p.resize_arity(n).expect("lift"))
            .collect(),
        links: chain.links().to_vec(),
        cap: chain.cap(),
        flags: fc.flags.clone(),
        relaxed: false,
    }
}

fn run(command: Command, digest: &mut InputDigest) -> Result<(Report, Exit), CliError> {
    match command {
        Command::Derive { spec, apply } => {
            let file = load_spec(&spec, digest)?;
            let d = file.derivation()?;
            let f = parse_polynomial(&apply, &file.names)?;
            let image = d.apply(&f)?;
            let mut rep = Report::new("derive", &digest_done(digest));
            echo_derivation(&mut rep, &d, &file.names);
            rep.kv("apply", f.display_with(&file.names));
            rep.kv("image", image.display_with(&file.names));
            Ok((rep, Exit::Completed))
        }
        Command::CheckStar { matrix: Some(text), spec: None } => {
            let rows = parse_matrix(&text)?;
            let verdict = check_star(&rows)?;
            let mut rep = Report::new("check-star", &digest_done(digest));
            rep.kv("matrix", matrix_string(&rows));
            rep.kv("star-holds", verdict.holds);
            if !verdict.holds {
                rep.kv("witness", render_star(&verdict));
            }
            let exit = if verdict.holds { Exit::Completed } else { Exit::HypothesisFailure };
            Ok((rep, exit))
        }
        Command::CheckStar { matrix: None, spec: Some(path) } => {
            let file = load_spec(&path, digest)?;
            let d = file.base_derivation()?;
            let candidates = derivlab_core::candidate_matrices(&d)?;
            let mut rep = Report::new("check-star", &digest_done(digest));
            let base_names = file.names[..file.base_arity()].to_vec();
            echo_derivation(&mut rep, &d, &base_names);
            rep.kv("candidates", candidates.len());
            let mut first_holding: Option<String> = None;
            for (k, c) in candidates.iter().enumerate() {
                let v = c.check();
                let status = if v.holds {
                    if first_holding.is_none() {
                        first_holding = Some(c.to_string());
                    }
                    "holds".to_string()
                } else {
                    format!("fails, witness {}", render_star(&v))
                };
                rep.kv(&format!("candidate {}", k + 1), format!("{c} {status}"));
            }
            match &first_holding {
                Some(m) => rep.kv("star-matrix", m),
                None => rep.kv("star-matrix", "none"),
            }
            rep.kv("star-holds", first_holding.is_some());
            let exit =
                if first_holding.is_some() { Exit::Completed } else { Exit::HypothesisFailure };
            Ok((rep, exit))
        }
        Command::CheckStar { .. } => {
            Err(CliError("check-star needs exactly one of --matrix or --spec".into()))
        }
        Command::ImageMembership { spec, target, bound } => {
            let file = load_spec(&spec, digest)?;
            let d = file.derivation()?;
            let t = parse_polynomial(&target, &file.names)?;
            let verdict = image_membership(&d, &t, bound)?;
            let mut rep = Report::new("image-membership", &digest_done(digest));
            echo_derivation(&mut rep, &d, &file.names);
            rep.kv("target", t.display_with(&file.names));
            rep.kv("bound", bound);
            rep.kv("verdict", render_oracle(&verdict, &file.names));
            let exit =
                if verdict.is_witness() { Exit::HypothesisFailure } else { Exit::Completed };
            Ok((rep, exit))
        }
        Command::NoUnits { spec, var, cap, bound, mode, target_bound } => {
            let file = load_spec(&spec, digest)?;
            let d = file.derivation()?;
            let cap = parse_cap(&cap)?;
            let mut rep = Report::new("no-units", &digest_done(digest));
            echo_derivation(&mut rep, &d, &file.names);
            rep.kv("var", &file.names[var.checked_sub(1).filter(|j| *j < file.arity()).ok_or(
                CliError(format!("--var must be a 1-based index into the {}-variable ring", file.arity())),
            )?]);
            rep.kv("bound", bound);
            let verdict = match mode {
                ScanMode::Image => {
                    rep.kv("mode", "image");
                    rep.kv("cap", cap);
                    subring_image_scan(&d, var, cap, bound)?
                }
                ScanMode::Kernel => {
                    let dh = target_bound.unwrap_or(bound);
                    rep.kv("mode", "kernel");
                    rep.kv("target-bound", dh);
                    kernel_into_subring(&d, var, bound, dh)?
                }
            };
            rep.kv("verdict", render_oracle(&verdict, &file.names));
            let exit =
                if verdict.is_witness() { Exit::HypothesisFailure } else { Exit::Completed };
            Ok((rep, exit))
        }
        Command::Shamsuddin { spec, a, b, bound } => {
            let file = load_spec(&spec, digest)?;
            let d = file.derivation()?;
            let a_poly = parse_polynomial(&a, &file.names)?;
            let b_poly = parse_polynomial(&b, &file.names)?;
            let verdict = shamsuddin_obstruction(&d, &a_poly, &b_poly, bound)?;
            let mut rep = Report::new("shamsuddin", &digest_done(digest));
            echo_derivation(&mut rep, &d, &file.names);
            rep.kv("a", a_poly.display_with(&file.names));
            rep.kv("b", b_poly.display_with(&file.names));
            rep.kv("bound", bound);
            rep.kv("verdict", render_oracle(&verdict, &file.names));
            let exit =
                if verdict.is_witness() { Exit::HypothesisFailure } else { Exit::Completed };
            Ok((rep, exit))
        }
        Command::Commute { spec, map } => {
            let file = load_spec(&spec, digest)?;
            let d = file.derivation()?;
            let images: Vec<Polynomial> =
                parse_list(&map, "image", |s| Ok(parse_polynomial(s, &file.names)?))?;
            if images.len() != file.arity() {
                return Err(CliError(format!(
                    "--map needs {} comma-separated images, got {}",
                    file.arity(),
                    images.len()
                )));
            }
            let rho = PolyMap::new(images)?;
            let result = commute_check(&rho, &d)?;
            let mut rep = Report::new("commute", &digest_done(digest));
            echo_derivation(&mut rep, &d, &file.names);
            let imgs: Vec<String> =
                rho.images().iter().map(|p| p.display_with(&file.names).to_string()).collect();
            rep.kv("map", format!("({})", imgs.join(", ")));
            rep.kv("commutes", result.commutes);
            if let Some((j, diff)) = &result.discrepancy {
                rep.kv(
                    "discrepancy",
                    format!("at {}: {}", file.names[j - 1], diff.display_with(&file.names)),
                );
            }
            let exit = if result.commutes { Exit::Completed } else { Exit::HypothesisFailure };
            Ok((rep, exit))
        }
        Command::IsotropySearch { spec, bounds } => {
            let file = load_spec(&spec, digest)?;
            let d = file.derivation()?;
            let db = desk_bounds(&bounds)?;
            let translations = translation_family_check(&d, &db.translation_samples)?;
            let maps = enumerate_commuting_triangular(&d, db.tail_degree, &db.coeffs)?;
            let mut rep = Report::new("isotropy-search", &digest_done(digest));
            echo_derivation(&mut rep, &d, &file.names);
            rep.kv("tail-degree", db.tail_degree);
            rep.kv("coeffs", join_rationals(&db.coeffs));
            rep.kv("samples", join_rationals(&db.translation_samples));
            rep.kv("translation-family-commutes", translations);
            rep.kv("commuting-maps", maps.len());
            for (k, m) in maps.iter().enumerate() {
                rep.kv(&format!("map {}", k + 1), render_map(m, &file.names));
            }
            rep.kv(
                "only-translations",
                maps.iter().all(TriangularMap::is_translation_in_last),
            );
            Ok((rep, Exit::Completed))
        }
        Command::Classify { spec, family, m1, m2, m, g, n, links, bounds } => {
            let db = desk_bounds(&bounds)?;
            let (chain, flags, notes, names, family_name): (
                ExtensionChain,
                _,
                Vec<String>,
                Vec<String>,
                Option<String>,
            ) = match (&spec, &family) {
                (Some(path), None) => {
                    let file = load_spec(path, digest)?;
                    let chain = file.chain()?.ok_or(CliError(
                        "classify needs an `extend:` block (or use --family)".into(),
                    ))?;
                    (chain, file.flags.clone(), Vec::new(), file.names.clone(), None)
                }
                (None, Some(name)) => {
                    let fc = family_by_name(
                        name,
                        m1,
                        m2,
                        m,
                        g.as_deref(),
                        n,
                        links.as_deref(),
                    )?;
                    let names = names_x(fc.chain.arity());
                    (fc.chain.clone(), fc.flags.clone(), fc.notes.clone(), names, Some(name.clone()))
                }
                _ => {
                    return Err(CliError(
                        "classify needs exactly one of --spec or --family".into(),
                    ))
                }
            };
            let mut report = classify(&chain, &flags, &db)?;
            report.notes.extend(notes);
            let mut rep = Report::new("classify", &digest_done(digest));
            if let Some(f) = family_name {
                rep.kv("family", f);
            }
            rep.block(&report.render(&names));
            let ok = report.isotropy_conclusion == IsotropyConclusion::TranslationsInXn
                && !matches!(report.simplicity_conclusion, SimplicityConclusion::NotSimpleWitness(_));
            let exit = if ok { Exit::Completed } else { Exit::HypothesisFailure };
            Ok((rep, exit))
        }
        Command::Family { name, m1, m2, m, g, n, links } => {
            let fc = family_by_name(&name, m1, m2, m, g.as_deref(), n, links.as_deref())?;
            let file = spec_from_family(&fc);
            let mut rep = Report::new("family", &digest_done(digest));
            rep.kv("family", fc.family);
            for note in &fc.notes {
                rep.kv("note", note);
            }
            rep.raw("spec-file:");
            rep.block(&file.print());
            Ok((rep, Exit::Completed))
        }
    }
}

fn digest_done(digest: &mut InputDigest) -> String {
    std::mem::replace(digest, InputDigest::new(&[])).finish()
}

fn join_rationals(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(Rational::to_string).collect();
    parts.join(", ")
}

fn render_map(m: &TriangularMap, names: &[String]) -> String {
    let pm = m.to_poly_map();
    let imgs: Vec<String> =
        pm.images().iter().map(|p| p.display_with(names).to_string()).collect();
    let mut out = String::new();
    let _ = write!(out, "({})", imgs.join(", "));
    out
}
