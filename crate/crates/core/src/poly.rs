//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are positional: a polynomial of arity `n` lives in the ring
//! `Q[x_1, ..., x_n]`, and every public index is 1-based to match the
//! `x_1..x_n` convention. Terms are kept in a `BTreeMap` ordered by the
//! graded-lexicographic order (total degree first, then lexicographic with
//! `x_1 > x_2 > ... > x_n`), so equal polynomials are structurally equal and
//! iteration order is canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational coefficients. `BigRational` keeps values in lowest terms
/// with a positive denominator and represents zero as `0/1`.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for integer-valued coefficients.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Convenience constructor for `p/q` coefficients. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for arity {arity} (indices are 1-based)")]
    VarIndexOutOfRange { index: usize, arity: usize },
    #[error("substitution expects {expected} images, got {got}")]
    ImageCountMismatch { expected: usize, got: usize },
    #[error("substitution images do not share a common arity")]
    MixedImageArity,
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("cannot shrink arity: variable x{index} is used")]
    ShrinkLosesVariable { index: usize },
}

/// Total degree of a polynomial: a genuine `-inf` marker for the zero
/// polynomial, never a sentinel integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(u64),
}

impl Degree {
    pub fn finite(self) -> Option<u64> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Degree::Finite(_))
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// An exponent vector of fixed length (the ring arity).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn unit(arity: usize) -> Self {
        Monomial { exps: vec![0; arity] }
    }

    /// The monomial `x_j` (1-based index).
    pub fn var(arity: usize, j: usize) -> Result<Self, PolyError> {
        if j == 0 || j > arity {
            return Err(PolyError::VarIndexOutOfRange { index: j, arity });
        }
        let mut exps = vec![0; arity];
        exps[j - 1] = 1;
        Ok(Monomial { exps })
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Exponent of `x_j` (1-based).
    pub fn exponent_of(&self, j: usize) -> u32 {
        self.exps[j - 1]
    }

    pub fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
            .collect();
        Monomial { exps }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded-lexicographic order: compare total degree first, then the exponent
/// vectors lexicographically (`x_1 > x_2 > ...`).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.exps.len(), other.exps.len(), "comparing monomials of different arity");
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

/// A sparse polynomial in `Q[x_1, ..., x_arity]`.
///
/// Invariants: no stored coefficient is zero, and every key has length equal
/// to the arity. Both are enforced by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = Polynomial::zero(arity);
        p.add_term(Monomial::unit(arity), c);
        p
    }

    /// The generator `x_j` (1-based).
    pub fn var(arity: usize, j: usize) -> Result<Self, PolyError> {
        let m = Monomial::var(arity, j)?;
        let mut p = Polynomial::zero(arity);
        p.add_term(m, Rational::one());
        Ok(p)
    }

    /// Builds a polynomial from `(coefficient, exponent vector)` pairs.
    /// Repeated monomials are summed; zero coefficients are pruned.
    pub fn from_terms<I>(arity: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Vec<u32>)>,
    {
        let mut p = Polynomial::zero(arity);
        for (c, exps) in terms {
            assert_eq!(exps.len(), arity, "exponent vector length must equal arity");
            p.add_term(Monomial::new(exps), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_unit)
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    /// Coefficient of the unit monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::unit(self.arity))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Leading term under graded-lex, `None` for the zero polynomial.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        let mut out = Polynomial::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        Polynomial { arity: self.arity, terms }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.arity);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        Polynomial { arity: self.arity, terms }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one(self.arity);
        for _ in 0..e {
            out = out.try_mul(self).expect("same arity");
        }
        out
    }

    /// Formal partial derivative with respect to `x_j` (1-based).
    pub fn partial(&self, j: usize) -> Result<Polynomial, PolyError> {
        if j == 0 || j > self.arity {
            return Err(PolyError::VarIndexOutOfRange { index: j, arity: self.arity });
        }
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.exponent_of(j);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[j - 1] = e - 1;
            out.add_term(Monomial::new(exps), c * rat(i64::from(e)));
        }
        Ok(out)
    }

    /// Evaluates `self` at the image vector: the ring homomorphism
    /// `x_j -> images[j-1]`. All images must share one codomain arity.
    pub fn try_substitute(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.arity {
            return Err(PolyError::ImageCountMismatch { expected: self.arity, got: images.len() });
        }
        let codomain = match images.first() {
            Some(p) => p.arity,
            // arity-0 polynomial is a constant; keep its value in an arity-0 ring
            None => 0,
        };
        if images.iter().any(|p| p.arity != codomain) {
            return Err(PolyError::MixedImageArity);
        }

        // Precompute the powers of each image that actually occur.
        let mut max_exp = vec![0u32; self.arity];
        for m in self.terms.keys() {
            for (j, &e) in m.exponents().iter().enumerate() {
                max_exp[j] = max_exp[j].max(e);
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = Vec::with_capacity(self.arity);
        for (j, img) in images.iter().enumerate() {
            let mut ps = Vec::with_capacity(max_exp[j] as usize + 1);
            ps.push(Polynomial::one(codomain));
            for e in 1..=max_exp[j] {
                let next = ps[(e - 1) as usize].try_mul(img)?;
                ps.push(next);
            }
            powers.push(ps);
        }

        let mut out = Polynomial::zero(codomain);
        for (m, c) in &self.terms {
            let mut prod = Polynomial::constant(codomain, c.clone());
            for (j, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    prod = prod.try_mul(&powers[j][e as usize])?;
                }
            }
            out = out.try_add(&prod)?;
        }
        Ok(out)
    }

    /// Maximum exponent of `x_j` across all terms; `-inf` for zero.
    pub fn degree_in(&self, j: usize) -> Result<Degree, PolyError> {
        if j == 0 || j > self.arity {
            return Err(PolyError::VarIndexOutOfRange { index: j, arity: self.arity });
        }
        Ok(self
            .terms
            .keys()
            .map(|m| u64::from(m.exponent_of(j)))
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite))
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    /// All terms whose monomial reaches the total degree, i.e. the top
    /// homogeneous part. Ascending graded-lex order. Errors on zero.
    pub fn top_monomials(&self) -> Result<Vec<(Monomial, Rational)>, PolyError> {
        let top = match self.total_degree() {
            Degree::MinusInfinity => return Err(PolyError::ZeroPolynomial),
            Degree::Finite(d) => d,
        };
        Ok(self
            .terms
            .iter()
            .filter(|(m, _)| m.total_degree() == top)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect())
    }

    /// Highest 1-based variable index that occurs with a nonzero exponent,
    /// `None` for constants and zero.
    pub fn max_var_index(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| {
                m.exponents()
                    .iter()
                    .rposition(|&e| e > 0)
                    .map(|idx| idx + 1)
            })
            .max()
    }

    /// True when the polynomial only involves `x_1..x_k`.
    pub fn involves_only_first(&self, k: usize) -> bool {
        self.max_var_index().is_none_or(|m| m <= k)
    }

    /// True when every term is a power of the single variable `x_j`.
    pub fn is_univariate_in(&self, j: usize) -> bool {
        self.terms.keys().all(|m| {
            m.exponents()
                .iter()
                .enumerate()
                .all(|(idx, &e)| e == 0 || idx + 1 == j)
        })
    }

    /// Re-arities the polynomial. Growing pads exponent vectors with zeros;
    /// shrinking fails if a dropped variable is used.
    pub fn resize_arity(&self, new_arity: usize) -> Result<Polynomial, PolyError> {
        if new_arity == self.arity {
            return Ok(self.clone());
        }
        if new_arity < self.arity {
            if let Some(mv) = self.max_var_index() {
                if mv > new_arity {
                    return Err(PolyError::ShrinkLosesVariable { index: mv });
                }
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = m.exponents().to_vec();
                exps.resize(new_arity, 0);
                (Monomial::new(exps), c.clone())
            })
            .collect();
        Ok(Polynomial { arity: new_arity, terms })
    }

    /// Divides by the graded-lex leading coefficient, making it 1.
    /// Returns zero unchanged.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = Rational::one() / c.clone();
                self.scale(&inv)
            }
        }
    }

    fn check_arity(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.arity != other.arity {
            return Err(PolyError::ArityMismatch { left: self.arity, right: other.arity });
        }
        Ok(())
    }

    /// Canonical rendering with caller-supplied variable names; this is the
    /// exact grammar the CLI parser accepts back.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        assert_eq!(names.len(), self.arity, "need one name per variable");
        PolyDisplay { poly: self, names: Some(names) }
    }
}

impl<'a> std::ops::Add for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_add(rhs).expect("arity mismatch in +")
    }
}

impl<'a> std::ops::Sub for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("arity mismatch in -")
    }
}

impl<'a> std::ops::Mul for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("arity mismatch in *")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: Option<&'a [String]>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.poly, self.names)
    }
}

/// Default display uses `x1..xn`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self, None)
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &Polynomial, names: Option<&[String]>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    // Leading term first: descending graded-lex.
    for (idx, (m, c)) in p.terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if idx == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let mut wrote_factor = false;
        if m.is_unit() || !mag.is_one() {
            write!(f, "{mag}")?;
            wrote_factor = true;
        }
        for (j, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if wrote_factor {
                write!(f, "*")?;
            }
            match names {
                Some(ns) => write!(f, "{}", ns[j])?,
                None => write!(f, "x{}", j + 1)?,
            }
            if e > 1 {
                write!(f, "^{e}")?;
            }
            wrote_factor = true;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(arity: usize, j: usize) -> Polynomial {
        Polynomial::var(arity, j).unwrap()
    }

    #[test]
    fn add_cancels_and_prunes() {
        let x1 = x(1, 1);
        let f = x1.try_add(&Polynomial::one(1)).unwrap();
        let g = x1.neg();
        let sum = f.try_add(&g).unwrap();
        assert_eq!(sum, Polynomial::one(1));
        assert!(sum.terms().all(|(_, c)| !c.is_zero()));
    }

    #[test]
    fn add_identity() {
        let f = Polynomial::from_terms(2, [(rat(3), vec![2, 1]), (ratio(-1, 2), vec![0, 0])]);
        assert_eq!(f.try_add(&Polynomial::zero(2)).unwrap(), f);
    }

    #[test]
    fn add_merges_equal_monomials() {
        // (x1^2 x2 + x1^3) + x1^3 = x1^2 x2 + 2 x1^3
        let f = Polynomial::from_terms(2, [(rat(1), vec![2, 1]), (rat(1), vec![3, 0])]);
        let g = Polynomial::from_terms(2, [(rat(1), vec![3, 0])]);
        let expect = Polynomial::from_terms(2, [(rat(1), vec![2, 1]), (rat(2), vec![3, 0])]);
        assert_eq!(f.try_add(&g).unwrap(), expect);
    }

    #[test]
    fn add_arity_mismatch() {
        let e = Polynomial::one(1).try_add(&Polynomial::one(2)).unwrap_err();
        assert_eq!(e, PolyError::ArityMismatch { left: 1, right: 2 });
    }

    #[test]
    fn mul_basics() {
        let x1 = x(2, 1);
        let x2 = x(2, 2);
        assert_eq!(
            x1.try_mul(&x2).unwrap(),
            Polynomial::from_terms(2, [(rat(1), vec![1, 1])])
        );
        let f = Polynomial::from_terms(2, [(rat(5), vec![1, 2]), (rat(-1), vec![0, 0])]);
        assert_eq!(f.try_mul(&Polynomial::one(2)).unwrap(), f);
        // (1 + x1^2 x2) * x1 = x1 + x1^3 x2
        let g = Polynomial::from_terms(2, [(rat(1), vec![0, 0]), (rat(1), vec![2, 1])]);
        let expect = Polynomial::from_terms(2, [(rat(1), vec![1, 0]), (rat(1), vec![3, 1])]);
        assert_eq!(g.try_mul(&x1).unwrap(), expect);
    }

    #[test]
    fn partial_derivatives() {
        let f = Polynomial::from_terms(1, [(rat(1), vec![3])]);
        assert_eq!(f.partial(1).unwrap(), Polynomial::from_terms(1, [(rat(3), vec![2])]));
        assert!(x(2, 2).partial(1).unwrap().is_zero());
        // d/dx2 (x1^2 x2 + x2^2) = x1^2 + 2 x2
        let g = Polynomial::from_terms(2, [(rat(1), vec![2, 1]), (rat(1), vec![0, 2])]);
        let expect = Polynomial::from_terms(2, [(rat(1), vec![2, 0]), (rat(2), vec![0, 1])]);
        assert_eq!(g.partial(2).unwrap(), expect);
        assert!(matches!(g.partial(3), Err(PolyError::VarIndexOutOfRange { .. })));
    }

    #[test]
    fn substitution() {
        let x1 = x(2, 1);
        let x2 = x(2, 2);
        let f = x1.try_mul(&x2).unwrap();
        assert_eq!(f.try_substitute(&[x1.clone(), x2.clone()]).unwrap(), f);

        // x3 under (x1, x2, x3 + 5) is x3 + 5
        let g = x(3, 3);
        let imgs = vec![
            x(3, 1),
            x(3, 2),
            x(3, 3).try_add(&Polynomial::constant(3, rat(5))).unwrap(),
        ];
        assert_eq!(g.try_substitute(&imgs).unwrap(), imgs[2]);

        // x1^2 at x1 -> x1 + x2 expands to x1^2 + 2 x1 x2 + x2^2
        let sq = Polynomial::from_terms(2, [(rat(1), vec![2, 0])]);
        let expect = Polynomial::from_terms(
            2,
            [(rat(1), vec![2, 0]), (rat(2), vec![1, 1]), (rat(1), vec![0, 2])],
        );
        assert_eq!(
            sq.try_substitute(&[x1.try_add(&x2).unwrap(), x2.clone()]).unwrap(),
            expect
        );

        assert!(matches!(
            sq.try_substitute(&[x1.clone()]),
            Err(PolyError::ImageCountMismatch { .. })
        ));
        assert!(matches!(
            sq.try_substitute(&[x1, Polynomial::one(3)]),
            Err(PolyError::MixedImageArity)
        ));
    }

    #[test]
    fn degrees() {
        let f = Polynomial::from_terms(2, [(rat(1), vec![2, 1])]);
        assert_eq!(f.degree_in(2).unwrap(), Degree::Finite(1));
        assert_eq!(Polynomial::zero(2).degree_in(1).unwrap(), Degree::MinusInfinity);
        // 1 + x1^2 x2 has x1-degree 2
        let g = Polynomial::from_terms(2, [(rat(1), vec![0, 0]), (rat(1), vec![2, 1])]);
        assert_eq!(g.degree_in(1).unwrap(), Degree::Finite(2));

        let h = Polynomial::from_terms(2, [(rat(1), vec![2, 1]), (rat(1), vec![3, 0])]);
        assert_eq!(h.total_degree(), Degree::Finite(3));
        assert_eq!(Polynomial::constant(2, rat(7)).total_degree(), Degree::Finite(0));
        assert_eq!(Polynomial::zero(2).total_degree(), Degree::MinusInfinity);
        assert!(Degree::MinusInfinity < Degree::Finite(0));
    }

    #[test]
    fn top_monomials_cases() {
        let g = Polynomial::from_terms(2, [(rat(1), vec![0, 0]), (rat(1), vec![2, 1])]);
        let tops = g.top_monomials().unwrap();
        assert_eq!(tops, vec![(Monomial::new(vec![2, 1]), rat(1))]);

        // degree tie keeps both terms, ascending graded-lex
        let h = Polynomial::from_terms(2, [(rat(1), vec![2, 1]), (rat(1), vec![3, 0])]);
        let tops = h.top_monomials().unwrap();
        assert_eq!(
            tops,
            vec![
                (Monomial::new(vec![2, 1]), rat(1)),
                (Monomial::new(vec![3, 0]), rat(1)),
            ]
        );

        let c = Polynomial::constant(2, rat(5));
        assert_eq!(c.top_monomials().unwrap(), vec![(Monomial::unit(2), rat(5))]);
        assert_eq!(Polynomial::zero(2).top_monomials().unwrap_err(), PolyError::ZeroPolynomial);
    }

    #[test]
    fn canonical_form_ignores_insertion_order() {
        let a = Polynomial::from_terms(
            3,
            [(rat(2), vec![1, 0, 2]), (rat(-1), vec![0, 0, 0]), (ratio(1, 3), vec![0, 2, 0])],
        );
        let b = Polynomial::from_terms(
            3,
            [(ratio(1, 3), vec![0, 2, 0]), (rat(2), vec![1, 0, 2]), (rat(-1), vec![0, 0, 0])],
        );
        assert_eq!(a, b);
        use std::collections::hash_map::DefaultHasher;
        use std::hash::{Hash, Hasher};
        let mut ha = DefaultHasher::new();
        let mut hb = DefaultHasher::new();
        a.hash(&mut ha);
        b.hash(&mut hb);
        assert_eq!(ha.finish(), hb.finish());
    }

    #[test]
    fn grlex_ordering() {
        // 1 < x2 < x1 < x2^2 < x1 x2 < x1^2
        let order = [
            Monomial::new(vec![0, 0]),
            Monomial::new(vec![0, 1]),
            Monomial::new(vec![1, 0]),
            Monomial::new(vec![0, 2]),
            Monomial::new(vec![1, 1]),
            Monomial::new(vec![2, 0]),
        ];
        for w in order.windows(2) {
            assert!(w[0] < w[1], "{:?} should be below {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn display_canonical() {
        let names: Vec<String> = vec!["x".into(), "y".into()];
        let r = Polynomial::from_terms(2, [(ratio(-1, 2), vec![2, 0]), (rat(1), vec![0, 1])]);
        assert_eq!(r.display_with(&names).to_string(), "-1/2*x^2 + y");
        assert_eq!(r.to_string(), "-1/2*x1^2 + x2");

        let p = Polynomial::from_terms(2, [(rat(2), vec![3, 0]), (rat(1), vec![2, 1])]);
        assert_eq!(p.to_string(), "2*x1^3 + x1^2*x2");

        assert_eq!(Polynomial::zero(2).to_string(), "0");
        assert_eq!(Polynomial::constant(2, ratio(-3, 4)).to_string(), "-3/4");
        let q = Polynomial::from_terms(2, [(rat(-1), vec![1, 0]), (rat(-5), vec![0, 0])]);
        assert_eq!(q.to_string(), "-x1 - 5");
    }

    #[test]
    fn resize_and_var_queries() {
        let f = Polynomial::from_terms(2, [(rat(1), vec![1, 1])]);
        let lifted = f.resize_arity(4).unwrap();
        assert_eq!(lifted.arity(), 4);
        assert_eq!(lifted.max_var_index(), Some(2));
        assert_eq!(lifted.resize_arity(2).unwrap(), f);
        assert!(matches!(
            lifted.resize_arity(1),
            Err(PolyError::ShrinkLosesVariable { index: 2 })
        ));
        assert!(f.involves_only_first(2));
        assert!(!f.involves_only_first(1));
        assert!(!f.is_univariate_in(1));
        let g = Polynomial::from_terms(3, [(rat(2), vec![0, 3, 0]), (rat(1), vec![0, 1, 0])]);
        assert!(g.is_univariate_in(2));
    }

    #[test]
    fn monic_normalization() {
        let f = Polynomial::from_terms(2, [(rat(-2), vec![2, 0]), (rat(4), vec![0, 1])]);
        let m = f.monic();
        assert_eq!(m.leading_term().unwrap().1, &rat(1));
        assert_eq!(m, Polynomial::from_terms(2, [(rat(1), vec![2, 0]), (rat(-2), vec![0, 1])]));
    }
}
