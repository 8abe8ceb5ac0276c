//! Exact rational linear algebra and the bounded-degree decision oracles.
//!
//! The hypotheses of the classification theorems quantify over the whole
//! polynomial ring; the oracles here decide them only for candidates up to
//! a total-degree bound `D`, by solving the induced linear system in the
//! unknown coefficients. Every verdict carries its bound: `InfeasibleUpTo`
//! never claims global infeasibility, and every witness is re-verified by
//! exact application before being returned.
//!
//! Elimination is fraction-free (Bareiss pivoting with exact division) to
//! keep intermediate entries from swelling; systems reach a few hundred
//! unknowns at desk bounds.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::deriv::{DegreeCap, Derivation, DerivError};
use crate::poly::{Monomial, PolyError, Polynomial, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("expected arity {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for arity {arity}")]
    VarIndexOutOfRange { index: usize, arity: usize },
    #[error(transparent)]
    Deriv(#[from] DerivError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// All monomials of total degree `<= max_degree` supported on the first
/// `max_var` variables of an arity-`arity` ring, indexed in ascending
/// graded-lex order.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    arity: usize,
    max_degree: u32,
    monos: Vec<Monomial>,
}

impl MonomialBasis {
    pub fn new(arity: usize, max_degree: u32) -> Self {
        Self::supported_on_first(arity, arity, max_degree)
    }

    pub fn supported_on_first(arity: usize, max_var: usize, max_degree: u32) -> Self {
        assert!(max_var <= arity);
        let mut monos = Vec::new();
        let mut exps = vec![0u32; arity];
        enumerate_exponents(&mut monos, &mut exps, 0, max_var, max_degree);
        monos.sort();
        MonomialBasis { arity, max_degree, monos }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomial(&self, idx: usize) -> &Monomial {
        &self.monos[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Monomial> {
        self.monos.iter()
    }

    pub fn monomial_poly(&self, idx: usize) -> Polynomial {
        Polynomial::from_terms(
            self.arity,
            [(Rational::one(), self.monos[idx].exponents().to_vec())],
        )
    }

    /// Assembles the polynomial with the given basis coefficients.
    pub fn polynomial_from_coeffs(&self, coeffs: &[Rational]) -> Polynomial {
        assert_eq!(coeffs.len(), self.monos.len());
        Polynomial::from_terms(
            self.arity,
            coeffs
                .iter()
                .zip(&self.monos)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, m)| (c.clone(), m.exponents().to_vec())),
        )
    }

}

fn enumerate_exponents(
    out: &mut Vec<Monomial>,
    exps: &mut Vec<u32>,
    var: usize,
    max_var: usize,
    remaining: u32,
) {
    if var == max_var {
        let mut e = exps.clone();
        e[var..].iter_mut().for_each(|x| *x = 0);
        out.push(Monomial::new(e));
        return;
    }
    for e in 0..=remaining {
        exps[var] = e;
        enumerate_exponents(out, exps, var + 1, max_var, remaining - e);
    }
    exps[var] = 0;
}

/// A linear system over an indexed monomial basis: sparse exact-rational
/// rows, one unknown per basis monomial.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub unknowns: MonomialBasis,
    rows: Vec<Vec<(usize, Rational)>>,
    rhs: Vec<Rational>,
}

impl LinearSystem {
    pub fn new(unknowns: MonomialBasis) -> Self {
        LinearSystem { unknowns, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<(usize, Rational)>, rhs: Rational) {
        debug_assert!(row.iter().all(|(c, _)| *c < self.unknowns.len()));
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }
}

/// Result of exact elimination: a particular solution when the system is
/// consistent (free unknowns set to zero), plus a basis of the homogeneous
/// nullspace ordered by free column.
#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub particular: Option<Vec<Rational>>,
    pub nullspace: Vec<Vec<Rational>>,
}

pub fn solve_linear(sys: &LinearSystem) -> LinearSolution {
    solve_raw(sys.unknowns.len(), &sys.rows, &sys.rhs)
}

/// Fraction-free Gaussian elimination on a sparse system with `ncols`
/// unknowns. Inconsistency is a result (`particular = None`), not an error.
pub fn solve_raw(
    ncols: usize,
    rows: &[Vec<(usize, Rational)>],
    rhs: &[Rational],
) -> LinearSolution {
    assert_eq!(rows.len(), rhs.len());

    // Clear denominators row by row; every entry becomes a BigInt.
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
    for (row, b) in rows.iter().zip(rhs) {
        let mut lcm = b.denom().clone();
        for (_, c) in row {
            lcm = lcm.lcm(c.denom());
        }
        let mut dense = vec![BigInt::zero(); ncols + 1];
        for (col, c) in row {
            dense[*col] = c.numer() * (&lcm / c.denom());
        }
        dense[ncols] = b.numer() * (&lcm / b.denom());
        m.push(dense);
    }

    let (echelon, pivots) = bareiss(&mut m, ncols);

    // A row of zeros with nonzero right-hand side kills consistency.
    let pivot_rows: BTreeSet<usize> = pivots.iter().map(|&(r, _)| r).collect();
    let consistent = echelon
        .iter()
        .enumerate()
        .all(|(r, row)| pivot_rows.contains(&r) || row[ncols].is_zero());

    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();

    let back_substitute = |target: &mut Vec<Rational>, rhs_col: Option<usize>| {
        for &(r, c) in pivots.iter().rev() {
            let mut acc = match rhs_col {
                Some(col) => Rational::from_integer(echelon[r][col].clone()),
                None => Rational::zero(),
            };
            for cc in c + 1..ncols {
                if !echelon[r][cc].is_zero() && !target[cc].is_zero() {
                    acc -= Rational::from_integer(echelon[r][cc].clone()) * &target[cc];
                }
            }
            target[c] = acc / Rational::from_integer(echelon[r][c].clone());
        }
    };

    let particular = consistent.then(|| {
        let mut x = vec![Rational::zero(); ncols];
        back_substitute(&mut x, Some(ncols));
        x
    });

    let mut nullspace = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        // Solve A v = 0 with the free unknown pinned to 1.
        for &(r, c) in pivots.iter().rev() {
            let mut acc = Rational::zero();
            for cc in c + 1..ncols {
                if !echelon[r][cc].is_zero() && !v[cc].is_zero() {
                    acc -= Rational::from_integer(echelon[r][cc].clone()) * &v[cc];
                }
            }
            v[c] = acc / Rational::from_integer(echelon[r][c].clone());
        }
        nullspace.push(v);
    }

    LinearSolution { particular, nullspace }
}

/// Forward Bareiss elimination with column skipping. Each update divides by
/// the previous pivot; by Sylvester's identity the division is exact, which
/// is asserted on every step.
fn bareiss(m: &mut [Vec<BigInt>], ncols: usize) -> (Vec<Vec<BigInt>>, Vec<(usize, usize)>) {
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let mut best: Option<usize> = None;
        for rr in r..nrows {
            if m[rr][c].is_zero() {
                continue;
            }
            best = match best {
                None => Some(rr),
                Some(b) if m[rr][c].magnitude() < m[b][c].magnitude() => Some(rr),
                keep => keep,
            };
        }
        let Some(p) = best else { continue };
        m.swap(r, p);
        for rr in r + 1..nrows {
            for cc in c + 1..=ncols {
                let num = &m[rr][cc] * &m[r][c] - &m[rr][c] * &m[r][cc];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                m[rr][cc] = q;
            }
            m[rr][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push((r, c));
        r += 1;
    }
    (m.to_vec(), pivots)
}

/// Verdict of a bounded-degree oracle. A witness always carries the exact
/// image it was re-verified against; `InfeasibleUpTo` only rules out
/// candidates of total degree up to `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub bound: u32,
    pub status: OracleStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleStatus {
    WitnessFound { witness: Polynomial, image: Polynomial },
    InfeasibleUpTo,
}

impl OracleVerdict {
    pub fn is_witness(&self) -> bool {
        matches!(self.status, OracleStatus::WitnessFound { .. })
    }

    pub fn witness(&self) -> Option<(&Polynomial, &Polynomial)> {
        match &self.status {
            OracleStatus::WitnessFound { witness, image } => Some((witness, image)),
            OracleStatus::InfeasibleUpTo => None,
        }
    }
}

fn check_var(index: usize, arity: usize) -> Result<(), OracleError> {
    if index == 0 || index > arity {
        return Err(OracleError::VarIndexOutOfRange { index, arity });
    }
    Ok(())
}

/// Images of the basis monomials under `m -> d(m)` (optionally shifted by
/// `-a * m`), plus the union of their supports with `extra`.
fn column_images(
    d: &Derivation,
    basis: &MonomialBasis,
    shift: Option<&Polynomial>,
    extra: Option<&Polynomial>,
) -> Result<(Vec<Polynomial>, Vec<Monomial>), OracleError> {
    let mut cols = Vec::with_capacity(basis.len());
    let mut support: BTreeSet<Monomial> = BTreeSet::new();
    for idx in 0..basis.len() {
        let mono = basis.monomial_poly(idx);
        let mut img = d.apply(&mono)?;
        if let Some(a) = shift {
            img = img.try_sub(&a.try_mul(&mono)?)?;
        }
        for (m, _) in img.terms() {
            support.insert(m.clone());
        }
        cols.push(img);
    }
    if let Some(p) = extra {
        for (m, _) in p.terms() {
            support.insert(m.clone());
        }
    }
    Ok((cols, support.into_iter().collect()))
}

fn rows_for_support(
    cols: &[Polynomial],
    support: &[Monomial],
    keep: impl Fn(&Monomial) -> bool,
) -> Vec<(Monomial, Vec<(usize, Rational)>)> {
    support
        .iter()
        .filter(|m| keep(m))
        .map(|m| {
            let row: Vec<(usize, Rational)> = cols
                .iter()
                .enumerate()
                .filter_map(|(idx, p)| {
                    let c = p.coefficient(m);
                    (!c.is_zero()).then_some((idx, c))
                })
                .collect();
            (m.clone(), row)
        })
        .collect()
}

/// Decides whether some `r` with `deg r <= bound` satisfies `d(r) = target`.
/// The witness is the particular solution with all free coefficients set to
/// zero; it is not rescaled (scaling would break the equation).
pub fn image_membership(
    d: &Derivation,
    target: &Polynomial,
    bound: u32,
) -> Result<OracleVerdict, OracleError> {
    if target.arity() != d.arity() {
        return Err(OracleError::ArityMismatch { expected: d.arity(), got: target.arity() });
    }
    let basis = MonomialBasis::new(d.arity(), bound);
    let (cols, support) = column_images(d, &basis, None, Some(target))?;
    let rows = rows_for_support(&cols, &support, |_| true);
    let rhs: Vec<Rational> = rows.iter().map(|(m, _)| target.coefficient(m)).collect();
    let lhs: Vec<Vec<(usize, Rational)>> = rows.into_iter().map(|(_, row)| row).collect();
    let sol = solve_raw(basis.len(), &lhs, &rhs);
    match sol.particular {
        Some(coeffs) => {
            let witness = basis.polynomial_from_coeffs(&coeffs);
            let image = d.apply(&witness)?;
            assert_eq!(&image, target, "witness failed exact re-verification");
            Ok(OracleVerdict { bound, status: OracleStatus::WitnessFound { witness, image } })
        }
        None => Ok(OracleVerdict { bound, status: OracleStatus::InfeasibleUpTo }),
    }
}

/// Decides whether some `r` with `deg r <= bound` has `d(r) = g(x_var)` for a
/// *nonzero* `g` of degree `<= min(cap, bound)`: first solve for the space
/// `V = { r : d(r) in k[x_var]_<=cap }` (all other image coefficients
/// vanish), then look for a basis element of `V` with nonzero image. The
/// witness is scaled so its graded-lex leading coefficient is 1.
pub fn subring_image_scan(
    d: &Derivation,
    var: usize,
    cap: DegreeCap,
    bound: u32,
) -> Result<OracleVerdict, OracleError> {
    check_var(var, d.arity())?;
    let g_bound = match cap {
        DegreeCap::Infinite => u64::from(bound),
        DegreeCap::Finite(c) => c.min(u64::from(bound)),
    };
    let basis = MonomialBasis::new(d.arity(), bound);
    let (cols, support) = column_images(d, &basis, None, None)?;
    let allowed = |m: &Monomial| {
        m.is_unit()
            || (m.exponents().iter().enumerate().all(|(j, &e)| e == 0 || j + 1 == var)
                && m.total_degree() <= g_bound)
    };
    let rows = rows_for_support(&cols, &support, |m| !allowed(m));
    let rhs = vec![Rational::zero(); rows.len()];
    let lhs: Vec<Vec<(usize, Rational)>> = rows.into_iter().map(|(_, row)| row).collect();
    let sol = solve_raw(basis.len(), &lhs, &rhs);
    for v in &sol.nullspace {
        let r = basis.polynomial_from_coeffs(v);
        let g = d.apply(&r)?;
        if !g.is_zero() {
            let witness = r.monic();
            let image = d.apply(&witness)?;
            debug_assert!(image.is_univariate_in(var));
            return Ok(OracleVerdict { bound, status: OracleStatus::WitnessFound { witness, image } });
        }
    }
    Ok(OracleVerdict { bound, status: OracleStatus::InfeasibleUpTo })
}

/// Decides whether some *non-constant* `f` supported on `x_1..x_j` with
/// `deg f <= deg_f` has `d(f) = h(x_j)` with `deg h <= deg_h` (`h = 0`
/// counts: a non-constant kernel element is a witness). The reported bound
/// is `deg_f`.
pub fn kernel_into_subring(
    d: &Derivation,
    j: usize,
    deg_f: u32,
    deg_h: u32,
) -> Result<OracleVerdict, OracleError> {
    check_var(j, d.arity())?;
    let basis = MonomialBasis::supported_on_first(d.arity(), j, deg_f);
    let (cols, support) = column_images(d, &basis, None, None)?;
    let allowed = |m: &Monomial| {
        m.is_unit()
            || (m.exponents().iter().enumerate().all(|(q, &e)| e == 0 || q + 1 == j)
                && m.total_degree() <= u64::from(deg_h))
    };
    let rows = rows_for_support(&cols, &support, |m| !allowed(m));
    let rhs = vec![Rational::zero(); rows.len()];
    let lhs: Vec<Vec<(usize, Rational)>> = rows.into_iter().map(|(_, row)| row).collect();
    let sol = solve_raw(basis.len(), &lhs, &rhs);
    for v in &sol.nullspace {
        let f = basis.polynomial_from_coeffs(v);
        if f.is_constant() {
            continue;
        }
        let witness = f.monic();
        let image = d.apply(&witness)?;
        debug_assert!(image.is_univariate_in(j));
        return Ok(OracleVerdict {
            bound: deg_f,
            status: OracleStatus::WitnessFound { witness, image },
        });
    }
    Ok(OracleVerdict { bound: deg_f, status: OracleStatus::InfeasibleUpTo })
}

/// Decides whether some `r` with `deg r <= bound` satisfies `d(r) = a r + b`
/// (the obstruction to simplicity of the extension `d(t) = a t + b`).
pub fn shamsuddin_obstruction(
    d: &Derivation,
    a: &Polynomial,
    b: &Polynomial,
    bound: u32,
) -> Result<OracleVerdict, OracleError> {
    for p in [a, b] {
        if p.arity() != d.arity() {
            return Err(OracleError::ArityMismatch { expected: d.arity(), got: p.arity() });
        }
    }
    let basis = MonomialBasis::new(d.arity(), bound);
    let (cols, support) = column_images(d, &basis, Some(a), Some(b))?;
    let rows = rows_for_support(&cols, &support, |_| true);
    let rhs: Vec<Rational> = rows.iter().map(|(m, _)| b.coefficient(m)).collect();
    let lhs: Vec<Vec<(usize, Rational)>> = rows.into_iter().map(|(_, row)| row).collect();
    let sol = solve_raw(basis.len(), &lhs, &rhs);
    match sol.particular {
        Some(coeffs) => {
            let witness = basis.polynomial_from_coeffs(&coeffs);
            let image = d.apply(&witness)?;
            let expected = a.try_mul(&witness)?.try_add(b)?;
            assert_eq!(image, expected, "witness failed exact re-verification");
            Ok(OracleVerdict { bound, status: OracleStatus::WitnessFound { witness, image } })
        }
        None => Ok(OracleVerdict { bound, status: OracleStatus::InfeasibleUpTo }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn x(arity: usize, j: usize) -> Polynomial {
        Polynomial::var(arity, j).unwrap()
    }

    /// d = x2^m1 d/dx1 + (1 + x2^m2 x1) d/dx2 (the two-variable family of
    /// the image lemma, positional variables x = x1, y = x2).
    fn mixed_pair(m1: u32, m2: u32) -> Derivation {
        let img1 = Polynomial::from_terms(2, [(rat(1), vec![0, m1])]);
        let img2 = Polynomial::from_terms(2, [(rat(1), vec![0, 0]), (rat(1), vec![1, m2])]);
        Derivation::new(vec![img1, img2]).unwrap()
    }

    #[test]
    fn basis_counts_and_order() {
        let b = MonomialBasis::new(2, 2);
        assert_eq!(b.len(), 6);
        let names: Vec<String> = vec!["x1".into(), "x2".into()];
        let rendered: Vec<String> = (0..b.len())
            .map(|i| b.monomial_poly(i).display_with(&names).to_string())
            .collect();
        assert_eq!(rendered, vec!["1", "x2", "x1", "x2^2", "x1*x2", "x1^2"]);

        let restricted = MonomialBasis::supported_on_first(3, 2, 2);
        assert_eq!(restricted.len(), 6);
        assert!(restricted.iter().all(|m| m.exponents()[2] == 0));
    }

    #[test]
    fn solve_unique_system() {
        // x + y = 1, x - y = 1
        let rows = vec![
            vec![(0, rat(1)), (1, rat(1))],
            vec![(0, rat(1)), (1, rat(-1))],
        ];
        let sol = solve_raw(2, &rows, &[rat(1), rat(1)]);
        assert_eq!(sol.particular, Some(vec![rat(1), rat(0)]));
        assert!(sol.nullspace.is_empty());
    }

    #[test]
    fn solve_inconsistent_system() {
        let rows: Vec<Vec<(usize, Rational)>> = vec![vec![]];
        let sol = solve_raw(1, &rows, &[rat(1)]);
        assert!(sol.particular.is_none());
    }

    #[test]
    fn solve_underdetermined_system() {
        // x + 2y = 3 over two unknowns: one-dimensional nullspace
        let rows = vec![vec![(0, rat(1)), (1, rat(2))]];
        let sol = solve_raw(2, &rows, &[rat(3)]);
        assert_eq!(sol.particular, Some(vec![rat(3), rat(0)]));
        assert_eq!(sol.nullspace, vec![vec![rat(-2), rat(1)]]);
    }

    #[test]
    fn solve_verifies_by_substitution() {
        // random-ish rational rectangular system: check A x = b and A v = 0
        let rows = vec![
            vec![(0, ratio(1, 2)), (2, rat(3))],
            vec![(1, rat(-2)), (2, ratio(5, 3)), (3, rat(1))],
            vec![(0, rat(1)), (1, rat(1)), (2, rat(1)), (3, rat(1))],
        ];
        let rhs = [ratio(7, 2), rat(0), rat(4)];
        let sol = solve_raw(4, &rows, &rhs);
        let p = sol.particular.unwrap();
        for (row, b) in rows.iter().zip(&rhs) {
            let acc: Rational = row.iter().map(|(c, a)| a * &p[*c]).sum();
            assert_eq!(&acc, b);
        }
        assert_eq!(sol.nullspace.len(), 1);
        for v in &sol.nullspace {
            for row in &rows {
                let acc: Rational = row.iter().map(|(c, a)| a * &v[*c]).sum();
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn membership_antiderivative() {
        // d = d/dx1 on two variables, target 1: witness x1
        let d = Derivation::new(vec![Polynomial::one(2), Polynomial::zero(2)]).unwrap();
        let v = image_membership(&d, &Polynomial::one(2), 1).unwrap();
        let (r, img) = v.witness().unwrap();
        assert_eq!(r, &x(2, 1));
        assert_eq!(img, &Polynomial::one(2));
    }

    #[test]
    fn membership_equal_exponents_vector() {
        // m1 = m2 = 2: the unique normalized witness of d(r) = 1 at D = 2
        let d = mixed_pair(2, 2);
        let v = image_membership(&d, &Polynomial::one(2), 2).unwrap();
        let (r, _) = v.witness().unwrap();
        let expect = Polynomial::from_terms(2, [(ratio(-1, 2), vec![2, 0]), (rat(1), vec![0, 1])]);
        assert_eq!(r, &expect);
    }

    #[test]
    fn membership_infeasible_target_x1() {
        let d = mixed_pair(3, 2);
        let v = image_membership(&d, &x(2, 1), 8).unwrap();
        assert_eq!(v.status, OracleStatus::InfeasibleUpTo);
        assert_eq!(v.bound, 8);
        // monotone: lower bounds stay infeasible
        for lower in [0, 2, 5] {
            assert!(!image_membership(&d, &x(2, 1), lower).unwrap().is_witness());
        }
    }

    #[test]
    fn membership_rejects_foreign_arity() {
        let d = mixed_pair(3, 2);
        assert!(matches!(
            image_membership(&d, &Polynomial::one(3), 2),
            Err(OracleError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn scan_finds_equal_exponents_unit() {
        // m1 = m2 means the image reaches 1 (in k[x1] of degree 0)
        let d = mixed_pair(2, 2);
        let v = subring_image_scan(&d, 1, DegreeCap::Infinite, 2).unwrap();
        let (r, g) = v.witness().unwrap();
        assert!(!g.is_zero());
        assert!(g.is_univariate_in(1));
        assert_eq!(&d.apply(r).unwrap(), g);
        assert_eq!(r.leading_term().unwrap().1, &rat(1));
    }

    #[test]
    fn scan_image_lemma_is_infeasible() {
        let d = mixed_pair(3, 2);
        let v = subring_image_scan(&d, 1, DegreeCap::Infinite, 8).unwrap();
        assert_eq!(v.status, OracleStatus::InfeasibleUpTo);
    }

    #[test]
    fn scan_cap_zero_matches_membership_of_one() {
        // cap 0 restricts g to nonzero constants; by linearity that is the
        // same question as membership of the constant 1.
        for (m1, m2, expect_witness) in [(3u32, 2u32, false), (2, 2, true)] {
            let d = mixed_pair(m1, m2);
            let scan = subring_image_scan(&d, 1, DegreeCap::Finite(0), 4).unwrap();
            let member = image_membership(&d, &Polynomial::one(2), 4).unwrap();
            assert_eq!(scan.is_witness(), expect_witness);
            assert_eq!(scan.is_witness(), member.is_witness());
        }
    }

    #[test]
    fn kernel_scan_detects_first_integral() {
        // d = x1 d/dx1 - x2 d/dx2 annihilates x1 x2
        let d = Derivation::new(vec![x(2, 1), x(2, 2).neg()]).unwrap();
        let v = kernel_into_subring(&d, 2, 4, 4).unwrap();
        let (f, h) = v.witness().unwrap();
        assert!(!f.is_constant());
        assert_eq!(&d.apply(f).unwrap(), h);
        assert!(h.is_univariate_in(2));
        // the monomial x1 x2 is itself annihilated
        let fi = Polynomial::from_terms(2, [(rat(1), vec![1, 1])]);
        assert!(d.apply(&fi).unwrap().is_zero());
    }

    #[test]
    fn kernel_scan_trivial_at_zero_bound() {
        let d = mixed_pair(3, 2);
        let v = kernel_into_subring(&d, 2, 0, 0).unwrap();
        assert_eq!(v.status, OracleStatus::InfeasibleUpTo);
    }

    #[test]
    fn kernel_scan_family_extension() {
        // d3 = (1 + x1^2 x2) d/dx1 + x1^3 d/dx2 + x2 d/dx3: nothing
        // non-constant in Q[x1,x2,x3] of degree <= 5 maps into k[x3]
        let img1 = Polynomial::from_terms(3, [(rat(1), vec![0, 0, 0]), (rat(1), vec![2, 1, 0])]);
        let img2 = Polynomial::from_terms(3, [(rat(1), vec![3, 0, 0])]);
        let img3 = x(3, 2);
        let d3 = Derivation::new(vec![img1, img2, img3]).unwrap();
        let v = kernel_into_subring(&d3, 3, 5, 5).unwrap();
        assert_eq!(v.status, OracleStatus::InfeasibleUpTo);
    }

    #[test]
    fn shamsuddin_antiderivative_witness() {
        // d = d/dx on one variable, a = 0, b = 1: r = x
        let d = Derivation::new(vec![Polynomial::one(1)]).unwrap();
        let v = shamsuddin_obstruction(&d, &Polynomial::zero(1), &Polynomial::one(1), 4).unwrap();
        let (r, img) = v.witness().unwrap();
        assert_eq!(r, &x(1, 1));
        assert_eq!(img, &Polynomial::one(1));
    }

    #[test]
    fn shamsuddin_linear_shift_is_obstructed() {
        // d = d/dx, a = x, b = 1: deg(r') < deg(x r), so no solution
        let d = Derivation::new(vec![Polynomial::one(1)]).unwrap();
        let v = shamsuddin_obstruction(&d, &x(1, 1), &Polynomial::one(1), 12).unwrap();
        assert_eq!(v.status, OracleStatus::InfeasibleUpTo);
        assert_eq!(v.bound, 12);
    }

    #[test]
    fn shamsuddin_family_link_is_clear() {
        // base (1 + x1^2 x2, x1^3): no r with d(r) = x2 up to degree 8
        let img1 = Polynomial::from_terms(2, [(rat(1), vec![0, 0]), (rat(1), vec![2, 1])]);
        let img2 = Polynomial::from_terms(2, [(rat(1), vec![3, 0])]);
        let d = Derivation::new(vec![img1, img2]).unwrap();
        let v = shamsuddin_obstruction(&d, &Polynomial::zero(2), &x(2, 2), 8).unwrap();
        assert_eq!(v.status, OracleStatus::InfeasibleUpTo);
    }
}
