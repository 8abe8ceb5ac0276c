//! Exponent matrices of derivations and the cone condition (*).
//!
//! For a derivation of `Q[x_1, ..., x_i]` with nonzero generator images
//! `h_j`, pick one monomial from the top homogeneous part of each `h_j` and
//! collect the exponent rows into an `i x i` matrix `A`. The condition (*)
//! asks that `(A - I) Y <= 0` has no nontrivial solution `Y >= 0`; since the
//! feasible set is a rational polyhedral cone, triviality over the
//! nonnegative integers and over the nonnegative rationals coincide.
//!
//! The decision procedure is Fourier-Motzkin elimination over exact
//! rationals on `{Y >= 0, (A - I) Y <= 0, sum Y = 1}`. Dimensions here are
//! tiny, so the doubly exponential worst case never bites; a witness ray is
//! recovered by back-substitution and cleared to integers.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::deriv::Derivation;
use crate::poly::{Monomial, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StarError {
    #[error("image of x{var} is zero; no exponent matrix is defined")]
    ZeroImage { var: usize },
    #[error("matrix must be square and non-empty")]
    NotSquare,
}

/// An exponent matrix together with the monomial choice it came from:
/// row `j` records the chosen top monomial of `h_j` and its coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    dim: usize,
    entries: Vec<Vec<u64>>,
    provenance: Vec<(Monomial, Rational)>,
}

impl ExponentMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    /// The monomial and coefficient chosen from each image.
    pub fn provenance(&self) -> &[(Monomial, Rational)] {
        &self.provenance
    }

    pub fn check(&self) -> StarVerdict {
        check_star(&self.entries).expect("exponent matrices are square")
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (j, row) in self.entries.iter().enumerate() {
            if j > 0 {
                write!(f, "; ")?;
            }
            for (q, e) in row.iter().enumerate() {
                if q > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, "]")
    }
}

/// Outcome of the (*) test. When the condition fails, `witness` holds a
/// nonzero vector in `Z_{>=0}^i` with `(A - I) witness <= 0`, verified in
/// exact integer arithmetic before being returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarVerdict {
    pub holds: bool,
    pub witness: Option<Vec<BigInt>>,
}

/// All exponent matrices of `d`: the Cartesian product, over the generator
/// images, of their top-monomial choices. Rows iterate choices in ascending
/// graded-lex order and the product runs with the last row fastest, so the
/// output order is deterministic.
pub fn candidate_matrices(d: &Derivation) -> Result<Vec<ExponentMatrix>, StarError> {
    let dim = d.arity();
    let mut row_choices: Vec<Vec<(Monomial, Rational)>> = Vec::with_capacity(dim);
    for j in 1..=dim {
        let image = d.image(j);
        if image.is_zero() {
            return Err(StarError::ZeroImage { var: j });
        }
        row_choices.push(image.top_monomials().expect("image is nonzero"));
    }

    let total: usize = row_choices.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    let mut pick = vec![0usize; dim];
    loop {
        let provenance: Vec<(Monomial, Rational)> = pick
            .iter()
            .zip(&row_choices)
            .map(|(&c, choices)| choices[c].clone())
            .collect();
        let entries = provenance
            .iter()
            .map(|(m, _)| m.exponents().iter().map(|&e| u64::from(e)).collect())
            .collect();
        out.push(ExponentMatrix { dim, entries, provenance });

        // odometer, last row fastest
        let mut pos = dim;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < row_choices[pos].len() {
                break;
            }
            pick[pos] = 0;
        }
    }
}

/// Decides condition (*) for a square nonnegative integer matrix: `holds`
/// is true iff the cone `{Y >= 0, (A - I) Y <= 0}` is exactly `{0}`.
pub fn check_star(matrix: &[Vec<u64>]) -> Result<StarVerdict, StarError> {
    let dim = matrix.len();
    if dim == 0 || matrix.iter().any(|row| row.len() != dim) {
        return Err(StarError::NotSquare);
    }
    match cone_ray(matrix) {
        None => Ok(StarVerdict { holds: true, witness: None }),
        Some(ray) => {
            let witness = integerize(&ray);
            verify_witness(matrix, &witness);
            Ok(StarVerdict { holds: false, witness: Some(witness) })
        }
    }
}

/// First candidate matrix, in enumeration order, whose (*) check holds.
pub fn exists_star_matrix(d: &Derivation) -> Result<Option<ExponentMatrix>, StarError> {
    for m in candidate_matrices(d)? {
        if m.check().holds {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

fn verify_witness(matrix: &[Vec<u64>], witness: &[BigInt]) {
    assert!(witness.iter().all(|w| !w.is_negative()), "witness must be nonnegative");
    assert!(witness.iter().any(|w| !w.is_zero()), "witness must be nonzero");
    for (j, row) in matrix.iter().enumerate() {
        let mut acc = BigInt::zero();
        for (q, &a) in row.iter().enumerate() {
            let mut coeff = BigInt::from(a);
            if q == j {
                coeff -= 1;
            }
            acc += coeff * &witness[q];
        }
        assert!(!acc.is_positive(), "witness violates row {j}");
    }
}

/// One inequality `sum coeffs[q] * y_q <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Constraint {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Constraint {
    fn normalized(mut self) -> Self {
        let scale = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.abs())
            .unwrap_or_else(|| self.rhs.abs());
        if !scale.is_zero() && !scale.is_one() {
            for c in &mut self.coeffs {
                *c = &*c / &scale;
            }
            self.rhs = &self.rhs / &scale;
        }
        self
    }
}

/// Searches for a nonzero rational point of `{Y >= 0, (A - I) Y <= 0}` by
/// eliminating the variables of the normalized system (`sum Y = 1`) in
/// order. Returns `None` when the cone is trivial.
fn cone_ray(matrix: &[Vec<u64>]) -> Option<Vec<Rational>> {
    let dim = matrix.len();
    let one = Rational::one();

    let mut constraints: Vec<Constraint> = Vec::new();
    for (j, row) in matrix.iter().enumerate() {
        let mut coeffs: Vec<Rational> =
            row.iter().map(|&a| Rational::from_integer(a.into())).collect();
        coeffs[j] -= &one;
        constraints.push(Constraint { coeffs, rhs: Rational::zero() });
    }
    for q in 0..dim {
        let mut coeffs = vec![Rational::zero(); dim];
        coeffs[q] = -one.clone();
        constraints.push(Constraint { coeffs, rhs: Rational::zero() });
    }
    constraints.push(Constraint { coeffs: vec![one.clone(); dim], rhs: one.clone() });
    constraints.push(Constraint { coeffs: vec![-one.clone(); dim], rhs: -one.clone() });

    // stages[k] = system before eliminating y_k
    let mut stages: Vec<Vec<Constraint>> = Vec::with_capacity(dim);
    for k in 0..dim {
        stages.push(constraints.clone());
        let mut keep: Vec<Constraint> = Vec::new();
        let mut uppers: Vec<Constraint> = Vec::new();
        let mut lowers: Vec<Constraint> = Vec::new();
        for c in constraints.drain(..) {
            if c.coeffs[k].is_zero() {
                keep.push(c);
            } else if c.coeffs[k].is_positive() {
                uppers.push(c);
            } else {
                lowers.push(c);
            }
        }
        let mut next: BTreeSet<Constraint> = BTreeSet::new();
        for c in keep {
            if c.coeffs.iter().all(Zero::is_zero) {
                if c.rhs.is_negative() {
                    return None; // 0 <= negative: infeasible
                }
                continue;
            }
            next.insert(c.normalized());
        }
        for up in &uppers {
            for lo in &lowers {
                // up: a y_k <= r1 (a > 0), lo: -b y_k <= r2 (b > 0 after sign flip)
                let a = up.coeffs[k].clone();
                let b = -lo.coeffs[k].clone();
                let coeffs: Vec<Rational> = up
                    .coeffs
                    .iter()
                    .zip(&lo.coeffs)
                    .map(|(u, l)| u * &b + l * &a)
                    .collect();
                let rhs = &up.rhs * &b + &lo.rhs * &a;
                if coeffs.iter().all(Zero::is_zero) {
                    if rhs.is_negative() {
                        return None;
                    }
                    continue;
                }
                next.insert(Constraint { coeffs, rhs }.normalized());
            }
        }
        constraints = next.into_iter().collect();
    }

    // Everything eliminated and no contradiction: feasible. Back-substitute,
    // taking each variable at its greatest lower bound when one exists.
    let mut values = vec![Rational::zero(); dim];
    for k in (0..dim).rev() {
        let mut lower: Option<Rational> = None;
        let mut upper: Option<Rational> = None;
        for c in &stages[k] {
            let ck = &c.coeffs[k];
            if ck.is_zero() {
                continue;
            }
            let mut rest = c.rhs.clone();
            for q in k + 1..dim {
                rest -= &c.coeffs[q] * &values[q];
            }
            let bound = &rest / ck;
            if ck.is_positive() {
                upper = Some(match upper {
                    None => bound,
                    Some(u) => u.min(bound),
                });
            } else {
                lower = Some(match lower {
                    None => bound,
                    Some(l) => l.max(bound),
                });
            }
        }
        values[k] = match (lower, upper) {
            (Some(l), _) => l,
            (None, Some(u)) => u.min(Rational::zero()),
            (None, None) => Rational::zero(),
        };
    }
    Some(values)
}

/// Clears denominators and divides by the gcd, giving a primitive
/// nonnegative integer ray.
fn integerize(ray: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for v in ray {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: Vec<BigInt> = ray.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let mut gcd = BigInt::zero();
    for v in &out {
        gcd = gcd.gcd(v);
    }
    if gcd > BigInt::one() {
        for v in &mut out {
            *v /= &gcd;
        }
    }
    out
}

/// Test oracle: exhaustive search for a nonzero solution of
/// `(A - I) Y <= 0` with entries in `0..=bound`.
pub fn brute_force_star(matrix: &[Vec<u64>], bound: u64) -> Option<Vec<u64>> {
    let dim = matrix.len();
    let mut y = vec![0u64; dim];
    loop {
        // advance odometer (skip the all-zero vector)
        let mut pos = 0;
        loop {
            if pos == dim {
                return None;
            }
            y[pos] += 1;
            if y[pos] <= bound {
                break;
            }
            y[pos] = 0;
            pos += 1;
        }
        let ok = matrix.iter().enumerate().all(|(j, row)| {
            let lhs: i128 = row
                .iter()
                .enumerate()
                .map(|(q, &a)| {
                    let coeff = a as i128 - i128::from(q == j);
                    coeff * y[q] as i128
                })
                .sum();
            lhs <= 0
        });
        if ok {
            return Some(y.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Polynomial};

    fn family_base(m1: u32, m2: u32) -> Derivation {
        let img1 = Polynomial::from_terms(2, [(rat(1), vec![0, 0]), (rat(1), vec![m2, 1])]);
        let img2 = Polynomial::from_terms(2, [(rat(1), vec![m1, 0])]);
        Derivation::new(vec![img1, img2]).unwrap()
    }

    fn m(rows: &[&[u64]]) -> Vec<Vec<u64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn candidates_for_family_base() {
        let d = family_base(3, 2);
        let cands = candidate_matrices(&d).unwrap();
        assert_eq!(cands.len(), 1);
        assert_eq!(cands[0].entries(), &[vec![2, 1], vec![3, 0]]);
        assert_eq!(cands[0].provenance()[0].1, rat(1));
    }

    #[test]
    fn candidates_enumerate_degree_ties() {
        // h1 = x1^2 x2 + x1^3, h2 = x1: two choices for row 1
        let h1 = Polynomial::from_terms(2, [(rat(1), vec![2, 1]), (rat(1), vec![3, 0])]);
        let h2 = Polynomial::var(2, 1).unwrap();
        let d = Derivation::new(vec![h1, h2]).unwrap();
        let cands = candidate_matrices(&d).unwrap();
        assert_eq!(cands.len(), 2);
        assert_eq!(cands[0].entries(), &[vec![2, 1], vec![1, 0]]);
        assert_eq!(cands[1].entries(), &[vec![3, 0], vec![1, 0]]);
    }

    #[test]
    fn candidates_constant_images() {
        let d = Derivation::new(vec![Polynomial::one(2), Polynomial::one(2)]).unwrap();
        let cands = candidate_matrices(&d).unwrap();
        assert_eq!(cands.len(), 1);
        assert_eq!(cands[0].entries(), &[vec![0, 0], vec![0, 0]]);
    }

    #[test]
    fn candidates_reject_zero_image() {
        let d = Derivation::new(vec![Polynomial::zero(2), Polynomial::one(2)]).unwrap();
        assert_eq!(candidate_matrices(&d).unwrap_err(), StarError::ZeroImage { var: 1 });
    }

    #[test]
    fn star_holds_for_family_matrices() {
        // rows (m2, 1) / (m1, 0): adding the two inequalities forces t1 = 0
        assert!(check_star(&m(&[&[2, 1], &[3, 0]])).unwrap().holds);
        // rows (1, m2) / (m1, 0)
        assert!(check_star(&m(&[&[1, 2], &[3, 0]])).unwrap().holds);
        // rows (m, 1) / (m-1, 0)
        for mm in 2..=6u64 {
            assert!(check_star(&m(&[&[mm, 1], &[mm - 1, 0]])).unwrap().holds, "m = {mm}");
        }
    }

    #[test]
    fn star_fails_for_identity_with_unit_witness() {
        let v = check_star(&m(&[&[1, 0], &[0, 1]])).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap(), vec![BigInt::from(1), BigInt::from(0)]);
        let v3 = check_star(&m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(
            v3.witness.unwrap(),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(0)]
        );
    }

    #[test]
    fn star_fails_for_zero_matrix() {
        let v = check_star(&m(&[&[0, 0], &[0, 0]])).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap(), vec![BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn witness_scale_invariance() {
        let v = check_star(&m(&[&[1, 1], &[0, 1]])).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        let doubled: Vec<BigInt> = w.iter().map(|x| x * 2).collect();
        verify_witness(&m(&[&[1, 1], &[0, 1]]), &doubled);
    }

    #[test]
    fn exists_star_matrix_family_and_failure() {
        let d = family_base(3, 2);
        let found = exists_star_matrix(&d).unwrap().unwrap();
        assert_eq!(found.entries(), &[vec![2, 1], vec![3, 0]]);

        // d = x1 d/dx1 + x2 d/dx2 has A = I, which fails
        let d = Derivation::new(vec![
            Polynomial::var(2, 1).unwrap(),
            Polynomial::var(2, 2).unwrap(),
        ])
        .unwrap();
        assert!(exists_star_matrix(&d).unwrap().is_none());
    }

    #[test]
    fn exists_star_matrix_scans_ties() {
        let h1 = Polynomial::from_terms(2, [(rat(1), vec![2, 1]), (rat(1), vec![3, 0])]);
        let h2 = Polynomial::var(2, 1).unwrap();
        let d = Derivation::new(vec![h1, h2]).unwrap();
        let found = exists_star_matrix(&d).unwrap();
        let verdicts: Vec<bool> = candidate_matrices(&d)
            .unwrap()
            .iter()
            .map(|c| c.check().holds)
            .collect();
        match found {
            Some(mat) => {
                let idx = verdicts.iter().position(|&h| h).unwrap();
                assert_eq!(mat.entries(), candidate_matrices(&d).unwrap()[idx].entries());
            }
            None => assert!(verdicts.iter().all(|&h| !h)),
        }
    }

    #[test]
    fn brute_force_agrees_on_small_grid() {
        // all 2x2 matrices with entries in 0..=2
        for a in 0..3u64 {
            for b in 0..3u64 {
                for c in 0..3u64 {
                    for dd in 0..3u64 {
                        let mat = m(&[&[a, b], &[c, dd]]);
                        let fm = check_star(&mat).unwrap();
                        let brute = brute_force_star(&mat, 10);
                        assert_eq!(
                            fm.holds,
                            brute.is_none(),
                            "disagreement on {mat:?} (brute {brute:?})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn non_square_rejected() {
        assert_eq!(check_star(&m(&[&[1, 0]])).unwrap_err(), StarError::NotSquare);
        assert_eq!(check_star(&[]).unwrap_err(), StarError::NotSquare);
    }
}
