//! The classification pipeline: assemble the hypothesis checks on a base
//! derivation, decide what the extension's isotropy group and simplicity
//! look like, and say honestly how each ingredient was established.
//!
//! Three trust tiers appear in reports. An `ExactDecision` was computed here
//! in exact arithmetic. `PaperCertified` leans on a cited published result
//! (the built-in families carry such citations). A `DeskOracle` verdict
//! holds only up to its recorded degree or tail bound. `UserAsserted` is
//! exactly that. Conclusions never claim more than their weakest input.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::deriv::{ChainError, DegreeCap, Derivation, DerivError, ExtensionChain};
use crate::isotropy::{
    commute_check, enumerate_commuting_triangular, translation_family_check, MapError,
    TriangularMap,
};
use crate::linalg::{
    shamsuddin_obstruction, subring_image_scan, OracleError, OracleStatus, OracleVerdict,
};
use crate::poly::{rat, Degree, Polynomial, Rational};
use crate::starcone::{candidate_matrices, ExponentMatrix, StarError, StarVerdict};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("chain has no extension links; nothing to classify")]
    EmptyChain,
    #[error("flags certify the image condition, but the desk oracle found d({witness}) = {image}")]
    ContradictoryFlags { witness: String, image: String },
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Deriv(#[from] DerivError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("{family} rejected: {requirement}")]
    Guard { family: &'static str, requirement: String },
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// How a hypothesis was established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    ExactDecision,
    DeskOracle { bound: u32 },
    PaperCertified { citation: String },
    UserAsserted,
}

impl fmt::Display for Certification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certification::ExactDecision => write!(f, "exact"),
            Certification::DeskOracle { bound } => write!(f, "desk-oracle(bound {bound})"),
            Certification::PaperCertified { citation } => write!(f, "cited({citation})"),
            Certification::UserAsserted => write!(f, "user-asserted"),
        }
    }
}

/// An externally supplied certificate: either a literature citation or a
/// bare assertion by the user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assertion {
    Cited(String),
    UserAsserted,
}

impl Assertion {
    fn certification(&self) -> Certification {
        match self {
            Assertion::Cited(c) => Certification::PaperCertified { citation: c.clone() },
            Assertion::UserAsserted => Certification::UserAsserted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Pass => write!(f, "pass"),
            Outcome::Fail => write!(f, "fail"),
            Outcome::Unknown => write!(f, "unknown"),
        }
    }
}

/// The hypotheses tracked per classification run. `CondI` is the image
/// condition (no nonzero `g(x_i)` of capped degree in the image of the
/// base), `CondIIStar` the exponent-matrix cone condition, and
/// `CondIIITrivialIsotropy` triviality of the base isotropy group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisKind {
    CondI,
    CondIIStar,
    CondIIITrivialIsotropy,
    LinksNonConstant,
    DegCapRespected,
}

impl fmt::Display for HypothesisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisKind::CondI => write!(f, "cond-i-image"),
            HypothesisKind::CondIIStar => write!(f, "cond-ii-star"),
            HypothesisKind::CondIIITrivialIsotropy => write!(f, "cond-iii-trivial-isotropy"),
            HypothesisKind::LinksNonConstant => write!(f, "links-nonconstant"),
            HypothesisKind::DegCapRespected => write!(f, "cap-respected"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisStatus {
    pub which: HypothesisKind,
    pub method: Certification,
    pub outcome: Outcome,
    pub detail: Option<String>,
}

/// External certificates for the base derivation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BaseFlags {
    pub simple: Option<Assertion>,
    pub trivial_isotropy: Option<Assertion>,
    pub cond_i: Option<Assertion>,
}

/// Bounds for the desk-scale checks. Defaults reproduce every built-in
/// family in seconds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeskBounds {
    pub oracle_degree: u32,
    pub shamsuddin_degree: u32,
    pub tail_degree: u32,
    pub coeffs: Vec<Rational>,
    pub translation_samples: Vec<Rational>,
}

impl Default for DeskBounds {
    fn default() -> Self {
        DeskBounds {
            oracle_degree: 8,
            shamsuddin_degree: 8,
            tail_degree: 2,
            coeffs: vec![rat(-1), rat(0), rat(1)],
            translation_samples: vec![rat(0), rat(1), rat(-1), rat(2)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsotropyConclusion {
    TranslationsInXn,
    Unknown,
}

impl fmt::Display for IsotropyConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsotropyConclusion::TranslationsInXn => write!(f, "translations-in-xn"),
            IsotropyConclusion::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplicityConclusion {
    Simple,
    Unknown,
    NotSimpleWitness(Polynomial),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificationLevel {
    ExactUnderPaperCitations,
    DeskScaleOnly { oracle_degree: u32, tail_degree: u32 },
}

impl fmt::Display for CertificationLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificationLevel::ExactUnderPaperCitations => {
                write!(f, "exact-under-citations")
            }
            CertificationLevel::DeskScaleOnly { oracle_degree, tail_degree } => {
                write!(f, "desk-scale-only(oracle {oracle_degree}, tails {tail_degree})")
            }
        }
    }
}

/// Per-link Shamsuddin check: does anything in the partial extension's ring
/// map onto the link?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkCheck {
    /// 0-based link position `t`; the link extends `Q[x_1..x_{i+t}]`.
    pub index: usize,
    /// The variable the link is univariate in (`i + t`).
    pub variable: usize,
    pub link: Polynomial,
    pub verdict: OracleVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationSummary {
    pub tail_degree: u32,
    pub coeffs: Vec<Rational>,
    pub maps: Vec<TriangularMap>,
    pub only_translations: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationCheck {
    pub samples: Vec<Rational>,
    pub passed: bool,
}

/// The engine's verdict: which hypotheses hold, by what method, at what
/// bound, and what follows. The conclusion fields never claim more than the
/// statuses support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub base_arity: usize,
    pub arity: usize,
    pub base_images: Vec<Polynomial>,
    pub links: Vec<Polynomial>,
    pub cap: DegreeCap,
    pub statuses: Vec<HypothesisStatus>,
    pub star_candidates: Vec<(ExponentMatrix, StarVerdict)>,
    pub star_matrix: Option<ExponentMatrix>,
    pub cond_i_scan: Option<OracleVerdict>,
    pub isotropy_conclusion: IsotropyConclusion,
    pub simplicity_conclusion: SimplicityConclusion,
    pub certification: CertificationLevel,
    pub translation_check: TranslationCheck,
    pub enumeration: EnumerationSummary,
    pub link_checks: Vec<LinkCheck>,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    pub fn status(&self, which: HypothesisKind) -> &HypothesisStatus {
        self.statuses
            .iter()
            .find(|s| s.which == which)
            .expect("all hypothesis kinds are recorded")
    }

    /// Canonical multi-line rendering; byte-identical for identical inputs.
    pub fn render(&self, names: &[String]) -> String {
        use std::fmt::Write as _;
        assert_eq!(names.len(), self.arity);
        let mut out = String::new();
        let p = |poly: &Polynomial, out: &mut String| {
            let _ = write!(out, "{}", poly.display_with(names));
        };
        let _ = writeln!(out, "chain:");
        let _ = writeln!(out, "  base-arity: {}", self.base_arity);
        let _ = writeln!(out, "  arity: {}", self.arity);
        for (j, img) in self.base_images.iter().enumerate() {
            let lifted = img.resize_arity(self.arity).expect("lift");
            let _ = write!(out, "  d({}) = ", names[j]);
            p(&lifted, &mut out);
            let _ = writeln!(out);
        }
        for (t, link) in self.links.iter().enumerate() {
            let _ = write!(out, "  {} <- ", names[self.base_arity + t]);
            p(link, &mut out);
            let _ = writeln!(out);
        }
        let _ = writeln!(out, "  cap: {}", self.cap);
        let _ = writeln!(out, "hypotheses:");
        for s in &self.statuses {
            let _ = write!(out, "  {}: {} [{}]", s.which, s.outcome, s.method);
            if let Some(d) = &s.detail {
                let _ = write!(out, " {d}");
            }
            let _ = writeln!(out);
        }
        match &self.star_matrix {
            Some(m) => {
                let _ = writeln!(out, "star-matrix: {m}");
            }
            None => {
                let _ = writeln!(out, "star-matrix: none");
                for (m, v) in &self.star_candidates {
                    let w = v
                        .witness
                        .as_ref()
                        .map(|w| {
                            let entries: Vec<String> =
                                w.iter().map(|x| x.to_string()).collect();
                            format!("({})", entries.join(", "))
                        })
                        .unwrap_or_else(|| "-".into());
                    let _ = writeln!(out, "  candidate {m}: witness {w}");
                }
            }
        }
        if let Some(v) = &self.cond_i_scan {
            let _ = write!(out, "image-scan: ");
            render_verdict(&mut out, v, names);
            let _ = writeln!(out);
        }
        let _ = writeln!(out, "conclusions:");
        let _ = writeln!(out, "  isotropy: {}", self.isotropy_conclusion);
        match &self.simplicity_conclusion {
            SimplicityConclusion::Simple => {
                let _ = writeln!(out, "  simplicity: simple");
            }
            SimplicityConclusion::Unknown => {
                let _ = writeln!(out, "  simplicity: unknown");
            }
            SimplicityConclusion::NotSimpleWitness(r) => {
                let _ = write!(out, "  simplicity: not-simple, witness ");
                p(r, &mut out);
                let _ = writeln!(out);
            }
        }
        let _ = writeln!(out, "  certification: {}", self.certification);
        let _ = writeln!(out, "confirmations:");
        let samples: Vec<String> =
            self.translation_check.samples.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(
            out,
            "  translations (c in {{{}}}): {}",
            samples.join(", "),
            if self.translation_check.passed { "commute" } else { "FAIL" }
        );
        let coeffs: Vec<String> = self.enumeration.coeffs.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(
            out,
            "  enumeration (tail degree {}, coeffs {{{}}}): {} commuting map(s), {}",
            self.enumeration.tail_degree,
            coeffs.join(", "),
            self.enumeration.maps.len(),
            if self.enumeration.only_translations {
                "all are xn-translations"
            } else {
                "contains a non-translation"
            }
        );
        for m in &self.enumeration.maps {
            let pm = m.to_poly_map();
            let imgs: Vec<String> = pm
                .images()
                .iter()
                .map(|img| img.display_with(names).to_string())
                .collect();
            let _ = writeln!(out, "    ({})", imgs.join(", "));
        }
        for lc in &self.link_checks {
            let _ = write!(
                out,
                "  link {} (g = {}): ",
                lc.index + 1,
                lc.link
                    .resize_arity(self.arity)
                    .expect("lift")
                    .display_with(names)
            );
            render_verdict(&mut out, &lc.verdict, names);
            let _ = writeln!(out);
        }
        if !self.notes.is_empty() {
            let _ = writeln!(out, "notes:");
            for n in &self.notes {
                let _ = writeln!(out, "  - {n}");
            }
        }
        out
    }
}

fn render_verdict(out: &mut String, v: &OracleVerdict, names: &[String]) {
    use std::fmt::Write as _;
    match &v.status {
        OracleStatus::InfeasibleUpTo => {
            let _ = write!(out, "infeasible-up-to {}", v.bound);
        }
        OracleStatus::WitnessFound { witness, image } => {
            // witnesses live in a subring of the report's ring
            let w = witness.resize_arity(names.len()).ok();
            let g = image.resize_arity(names.len()).ok();
            match (w, g) {
                (Some(w), Some(g)) => {
                    let _ = write!(
                        out,
                        "witness d({}) = {} (bound {})",
                        w.display_with(names),
                        g.display_with(names),
                        v.bound
                    );
                }
                _ => {
                    let _ = write!(out, "witness d({witness}) = {image} (bound {})", v.bound);
                }
            }
        }
    }
}

/// Runs the per-link Shamsuddin obstruction checks down the chain: link `t`
/// extends `d_{i+t}`, and the extension step stays simple (for a simple
/// base) iff no `r` in that ring has `d_{i+t}(r) = g_{i+t}`. A witness at
/// any step gives a non-constant kernel element of the next extension, so
/// it refutes simplicity outright.
pub fn shamsuddin_extend_simple(
    chain: &ExtensionChain,
    bound: u32,
) -> Result<Vec<LinkCheck>, EngineError> {
    let i = chain.base_arity();
    let mut out = Vec::with_capacity(chain.links().len());
    for t in 0..chain.links().len() {
        let d = chain.partial_extension(t);
        let g = chain.link_in_ring(t);
        let zero = Polynomial::zero(d.arity());
        let verdict = shamsuddin_obstruction(&d, &zero, &g, bound)?;
        out.push(LinkCheck { index: t, variable: i + t, link: g, verdict });
    }
    Ok(out)
}

pub fn classify(
    chain: &ExtensionChain,
    flags: &BaseFlags,
    bounds: &DeskBounds,
) -> Result<ClassificationReport, EngineError> {
    if chain.links().is_empty() {
        return Err(EngineError::EmptyChain);
    }
    let i = chain.base_arity();
    let n = chain.arity();
    let base = chain.base();
    let dn = chain.extend();
    let mut statuses = Vec::new();
    let mut notes = vec![
        "ground field fixed to Q; cited char-0 results instantiated over exact rationals".into(),
    ];

    // links g_j in k[x_j] \ k
    let constant_links: Vec<usize> = chain
        .links()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_constant())
        .map(|(t, _)| t + 1)
        .collect();
    statuses.push(HypothesisStatus {
        which: HypothesisKind::LinksNonConstant,
        method: Certification::ExactDecision,
        outcome: if constant_links.is_empty() { Outcome::Pass } else { Outcome::Fail },
        detail: (!constant_links.is_empty()).then(|| {
            let list: Vec<String> = constant_links.iter().map(|t| t.to_string()).collect();
            format!("constant link(s) at position {}", list.join(", "))
        }),
    });

    // deg_{x_i} g_i <= cap
    let first_link_degree = chain.links()[0].degree_in(i).expect("valid index");
    let cap_ok = match first_link_degree {
        Degree::MinusInfinity => true,
        Degree::Finite(deg) => chain.cap().allows(deg),
    };
    statuses.push(HypothesisStatus {
        which: HypothesisKind::DegCapRespected,
        method: Certification::ExactDecision,
        outcome: if cap_ok { Outcome::Pass } else { Outcome::Fail },
        detail: Some(format!("deg g_{i} in x{i} is {first_link_degree}, cap {}", chain.cap())),
    });

    // (ii): some exponent matrix satisfies the cone condition
    let mut star_candidates = Vec::new();
    let mut star_matrix = None;
    match candidate_matrices(base) {
        Ok(cands) => {
            for m in cands {
                let v = m.check();
                if v.holds && star_matrix.is_none() {
                    star_matrix = Some(m.clone());
                }
                star_candidates.push((m, v));
            }
            statuses.push(HypothesisStatus {
                which: HypothesisKind::CondIIStar,
                method: Certification::ExactDecision,
                outcome: if star_matrix.is_some() { Outcome::Pass } else { Outcome::Fail },
                detail: star_matrix.as_ref().map(|m| format!("matrix {m}")).or_else(|| {
                    Some(format!(
                        "none of the {} candidate matrix(es) satisfies the cone condition",
                        star_candidates.len()
                    ))
                }),
            });
        }
        Err(StarError::ZeroImage { var }) => {
            statuses.push(HypothesisStatus {
                which: HypothesisKind::CondIIStar,
                method: Certification::ExactDecision,
                outcome: Outcome::Fail,
                detail: Some(format!("d(x{var}) = 0: no exponent matrix is defined")),
            });
        }
        Err(e) => return Err(e.into()),
    }

    // (i): nothing maps onto a nonzero g(x_i) of capped degree
    let scan = subring_image_scan(base, i, chain.cap(), bounds.oracle_degree)?;
    let cond_i = match (&flags.cond_i, &scan.status) {
        (Some(_), OracleStatus::WitnessFound { witness, image }) => {
            return Err(EngineError::ContradictoryFlags {
                witness: witness.to_string(),
                image: image.to_string(),
            });
        }
        (Some(a), OracleStatus::InfeasibleUpTo) => HypothesisStatus {
            which: HypothesisKind::CondI,
            method: a.certification(),
            outcome: Outcome::Pass,
            detail: Some(format!("desk scan concurs up to degree {}", scan.bound)),
        },
        (None, OracleStatus::WitnessFound { witness, image }) => HypothesisStatus {
            which: HypothesisKind::CondI,
            method: Certification::ExactDecision,
            outcome: Outcome::Fail,
            detail: Some(format!("d({witness}) = {image}")),
        },
        (None, OracleStatus::InfeasibleUpTo) => HypothesisStatus {
            which: HypothesisKind::CondI,
            method: Certification::DeskOracle { bound: scan.bound },
            outcome: Outcome::Pass,
            detail: None,
        },
    };
    statuses.push(cond_i);

    // (iii): trivial isotropy of the base
    let cond_iii = if let Some(a) = &flags.trivial_isotropy {
        HypothesisStatus {
            which: HypothesisKind::CondIIITrivialIsotropy,
            method: a.certification(),
            outcome: Outcome::Pass,
            detail: None,
        }
    } else if i == 2 && flags.simple.is_some() {
        HypothesisStatus {
            which: HypothesisKind::CondIIITrivialIsotropy,
            method: Certification::PaperCertified { citation: "MP17".into() },
            outcome: Outcome::Pass,
            detail: Some("two-variable isotropy of a simple derivation is trivial".into()),
        }
    } else {
        // No certificate: a desk enumeration can refute triviality but
        // never certify it.
        let maps = enumerate_commuting_triangular(base, bounds.tail_degree, &bounds.coeffs)?;
        let non_identity = maps.iter().find(|m| !m.to_poly_map().is_identity());
        match non_identity {
            Some(m) => HypothesisStatus {
                which: HypothesisKind::CondIIITrivialIsotropy,
                method: Certification::ExactDecision,
                outcome: Outcome::Fail,
                detail: Some(format!("non-identity commuting map {m}")),
            },
            None => HypothesisStatus {
                which: HypothesisKind::CondIIITrivialIsotropy,
                method: Certification::DeskOracle { bound: bounds.tail_degree },
                outcome: Outcome::Unknown,
                detail: Some(
                    "no counterexample in the desk family; triviality needs a certificate".into(),
                ),
            },
        }
    };
    statuses.push(cond_iii);

    let all_pass = statuses.iter().all(|s| s.outcome == Outcome::Pass);
    let isotropy_conclusion = if all_pass {
        IsotropyConclusion::TranslationsInXn
    } else {
        IsotropyConclusion::Unknown
    };

    // Simplicity along the chain.
    let link_checks = shamsuddin_extend_simple(chain, bounds.shamsuddin_degree)?;
    let link_witness = link_checks
        .iter()
        .find_map(|lc| lc.verdict.witness().map(|(r, _)| r.clone()));
    let pass = |k: HypothesisKind| {
        statuses.iter().any(|s| s.which == k && s.outcome == Outcome::Pass)
    };
    let simplicity_conclusion = match link_witness {
        Some(r) => SimplicityConclusion::NotSimpleWitness(r),
        None => {
            if flags.simple.is_some()
                && pass(HypothesisKind::CondI)
                && pass(HypothesisKind::LinksNonConstant)
                && pass(HypothesisKind::DegCapRespected)
            {
                SimplicityConclusion::Simple
            } else {
                SimplicityConclusion::Unknown
            }
        }
    };

    let desk_or_unknown = statuses.iter().any(|s| {
        matches!(s.method, Certification::DeskOracle { .. }) && s.outcome == Outcome::Pass
            || s.outcome == Outcome::Unknown
    });
    let certification = if desk_or_unknown {
        CertificationLevel::DeskScaleOnly {
            oracle_degree: bounds.oracle_degree,
            tail_degree: bounds.tail_degree,
        }
    } else {
        CertificationLevel::ExactUnderPaperCitations
    };

    // Confirmations on the extended derivation.
    let translation_passed = translation_family_check(&dn, &bounds.translation_samples)?;
    let maps = enumerate_commuting_triangular(&dn, bounds.tail_degree, &bounds.coeffs)?;
    for m in &maps {
        debug_assert!(commute_check(&m.to_poly_map(), &dn)?.commutes);
    }
    let only_translations = maps.iter().all(TriangularMap::is_translation_in_last);
    if isotropy_conclusion == IsotropyConclusion::TranslationsInXn {
        notes.push(format!(
            "desk enumeration bound: tails of degree <= {} with coefficients in the listed set",
            bounds.tail_degree
        ));
    }

    Ok(ClassificationReport {
        base_arity: i,
        arity: n,
        base_images: base.images().to_vec(),
        links: chain.links().to_vec(),
        cap: chain.cap(),
        statuses,
        star_candidates,
        star_matrix,
        cond_i_scan: Some(scan),
        isotropy_conclusion,
        simplicity_conclusion,
        certification,
        translation_check: TranslationCheck {
            samples: bounds.translation_samples.clone(),
            passed: translation_passed,
        },
        enumeration: EnumerationSummary {
            tail_degree: bounds.tail_degree,
            coeffs: bounds.coeffs.clone(),
            maps,
            only_translations,
        },
        link_checks,
        notes,
    })
}

/// A chain bundled with the certificates its construction guarantees.
#[derive(Debug, Clone)]
pub struct FamilyChain {
    pub family: &'static str,
    pub chain: ExtensionChain,
    pub flags: BaseFlags,
    pub notes: Vec<String>,
}

impl FamilyChain {
    pub fn classify(&self, bounds: &DeskBounds) -> Result<ClassificationReport, EngineError> {
        let mut report = classify(&self.chain, &self.flags, bounds)?;
        report.notes.extend(self.notes.iter().cloned());
        Ok(report)
    }
}

fn guard(family: &'static str, requirement: impl Into<String>) -> FamilyError {
    FamilyError::Guard { family, requirement: requirement.into() }
}

fn check_link_count(
    family: &'static str,
    n: usize,
    links: &[Polynomial],
) -> Result<(), FamilyError> {
    if n <= 2 {
        return Err(guard(family, format!("needs n > 2, got n = {n}")));
    }
    if links.len() != n - 2 {
        return Err(guard(
            family,
            format!("needs one link per new variable: n = {n} wants {} link(s), got {}", n - 2, links.len()),
        ));
    }
    Ok(())
}

/// Base `(1 + x1^m2 x2) d/dx1 + x1^m1 d/dx2` with `m2` not dividing `m1`,
/// extended by the given links. The image condition holds with no degree
/// cap by the cited two-variable lemma (stated there for
/// `y^m1 d/dx + (1 + y^m2 x) d/dy`; the roles swap under `x <-> y`), and the
/// base is simple by the cited simplicity theorems.
pub fn family_cor29(
    m1: u32,
    m2: u32,
    n: usize,
    links: Vec<Polynomial>,
) -> Result<FamilyChain, FamilyError> {
    const FAMILY: &str = "cor29";
    if m1 == 0 || m2 == 0 {
        return Err(guard(FAMILY, "needs positive exponents m1, m2"));
    }
    if m1 % m2 == 0 {
        if m1 == m2 {
            return Err(guard(
                FAMILY,
                format!(
                    "m2 must not divide m1, got ({m1}, {m2}): with m1 = m2 the image contains 1 \
                     (d(-x1^2/2 + x2) = 1), so the image condition fails"
                ),
            ));
        }
        return Err(guard(FAMILY, format!("m2 must not divide m1, got ({m1}, {m2})")));
    }
    check_link_count(FAMILY, n, &links)?;
    let img1 = Polynomial::from_terms(2, [(rat(1), vec![0, 0]), (rat(1), vec![m2, 1])]);
    let img2 = Polynomial::from_terms(2, [(rat(1), vec![m1, 0])]);
    let base = Derivation::new(vec![img1, img2]).expect("two images of arity 2");
    let chain = ExtensionChain::new(base, links, DegreeCap::Infinite)?;
    Ok(FamilyChain {
        family: FAMILY,
        chain,
        flags: BaseFlags {
            simple: Some(Assertion::Cited("2.9 via k14 thm 4.1+6.1".into())),
            trivial_isotropy: None,
            cond_i: Some(Assertion::Cited("2.9 via image lemma, l = inf".into())),
        },
        notes: vec![
            "image-condition citation is stated for y^m1 d/dx + (1 + y^m2 x) d/dy and applies \
             here under the identification x -> x2, y -> x1; the desk scan re-checks it in the \
             x1, x2 coordinates"
                .into(),
        ],
    })
}

/// Base `(1 - x2^m2 x1) d/dx1 + x1^m1 d/dx2` with `m1 >= 2`; the image
/// condition is cited with cap `l = 1`, so the first link must be linear.
pub fn family_cor211(
    m1: u32,
    m2: u32,
    n: usize,
    links: Vec<Polynomial>,
) -> Result<FamilyChain, FamilyError> {
    const FAMILY: &str = "cor211";
    if m1 < 2 {
        return Err(guard(FAMILY, format!("needs m1 >= 2, got m1 = {m1}")));
    }
    if m2 == 0 {
        return Err(guard(FAMILY, "needs m2 >= 1"));
    }
    check_link_count(FAMILY, n, &links)?;
    if let Some(first) = links.first() {
        if let Degree::Finite(deg) = first.degree_in(2).map_err(ChainError::from)? {
            if deg > 1 {
                return Err(guard(
                    FAMILY,
                    format!("first link must have degree <= 1 in x2 (cited cap l = 1), got degree {deg}"),
                ));
            }
        }
    }
    let img1 = Polynomial::from_terms(2, [(rat(1), vec![0, 0]), (rat(-1), vec![1, m2])]);
    let img2 = Polynomial::from_terms(2, [(rat(1), vec![m1, 0])]);
    let base = Derivation::new(vec![img1, img2]).expect("two images of arity 2");
    let chain = ExtensionChain::new(base, links, DegreeCap::Finite(1))?;
    Ok(FamilyChain {
        family: FAMILY,
        chain,
        flags: BaseFlags {
            simple: Some(Assertion::Cited("2.11 via ap23 thm 2.6".into())),
            trivial_isotropy: None,
            cond_i: Some(Assertion::Cited("2.11 via MMS25 prop 2.3, l = 1".into())),
        },
        notes: Vec::new(),
    })
}

/// Base `(x1^m x2 + g) d/dx1 + x1^{m-1} d/dx2` with `m >= 2`,
/// `g in Q[x1]`, `deg g <= m`, and `gcd(x1, g) = 1` (over Q: nonzero
/// constant term).
pub fn family_cor212(
    m: u32,
    g: &Polynomial,
    n: usize,
    links: Vec<Polynomial>,
) -> Result<FamilyChain, FamilyError> {
    const FAMILY: &str = "cor212";
    if m < 2 {
        return Err(guard(FAMILY, format!("needs m >= 2, got m = {m}")));
    }
    if !g.involves_only_first(1) {
        return Err(guard(FAMILY, "g must be a polynomial in x1 alone"));
    }
    let g = g.resize_arity(2).map_err(ChainError::from)?;
    if let Degree::Finite(deg) = g.degree_in(1).map_err(ChainError::from)? {
        if deg > u64::from(m) {
            return Err(guard(FAMILY, format!("needs deg_x1 g <= m = {m}, got degree {deg}")));
        }
    }
    if g.constant_term().is_zero() {
        return Err(guard(
            FAMILY,
            "needs gcd(x1, g) = 1: g must have a nonzero constant term",
        ));
    }
    check_link_count(FAMILY, n, &links)?;
    let lead = Polynomial::from_terms(2, [(rat(1), vec![m, 1])]);
    let img1 = lead.try_add(&g).expect("same arity");
    let img2 = Polynomial::from_terms(2, [(rat(1), vec![m - 1, 0])]);
    let base = Derivation::new(vec![img1, img2]).expect("two images of arity 2");
    let chain = ExtensionChain::new(base, links, DegreeCap::Infinite)?;
    Ok(FamilyChain {
        family: FAMILY,
        chain,
        flags: BaseFlags {
            simple: Some(Assertion::Cited("2.12 via k14 thm 4.1".into())),
            trivial_isotropy: None,
            cond_i: Some(Assertion::Cited("2.12 via k12 lemma 3.2, l = inf".into())),
        },
        notes: Vec::new(),
    })
}
