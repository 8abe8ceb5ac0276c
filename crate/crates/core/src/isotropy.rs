//! Ring endomorphisms, commutation with derivations, and desk-scale
//! enumeration of commuting triangular automorphisms.
//!
//! Enumeration is restricted to triangular (de Jonquieres) maps
//! `rho(x_j) = a_j x_j + f_j(x_1, ..., x_{j-1})` with `a_j != 0`: invertible
//! by back-substitution, and the shape any automorphism commuting with an
//! extended derivation is forced into under the classification hypotheses.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::deriv::Derivation;
use crate::poly::{PolyError, Polynomial, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("map needs at least one generator image")]
    EmptyImageList,
    #[error("image of x{index} has arity {got}, expected {expected}")]
    ImageArity { index: usize, expected: usize, got: usize },
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("diagonal coefficient {index} is zero; triangular maps must be invertible")]
    ZeroDiagonal { index: usize },
    #[error("tail {index} may only involve x_1..x_{limit}")]
    TailTooWide { index: usize, limit: usize },
    #[error("enumeration coefficient set must contain 0 and 1")]
    CoeffSetMissingZeroOne,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A ring endomorphism of `Q[x_1, ..., x_n]` given by generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    arity: usize,
    images: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(images: Vec<Polynomial>) -> Result<Self, MapError> {
        if images.is_empty() {
            return Err(MapError::EmptyImageList);
        }
        let arity = images.len();
        for (idx, img) in images.iter().enumerate() {
            if img.arity() != arity {
                return Err(MapError::ImageArity {
                    index: idx + 1,
                    expected: arity,
                    got: img.arity(),
                });
            }
        }
        Ok(PolyMap { arity, images })
    }

    pub fn identity(arity: usize) -> Self {
        let images = (1..=arity)
            .map(|j| Polynomial::var(arity, j).expect("in range"))
            .collect();
        PolyMap { arity, images }
    }

    /// `(x_1, ..., x_{n-1}, x_n + c)`.
    pub fn translation_last(arity: usize, c: &Rational) -> Self {
        let mut map = Self::identity(arity);
        map.images[arity - 1] = map.images[arity - 1]
            .try_add(&Polynomial::constant(arity, c.clone()))
            .expect("same arity");
        map
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `rho(x_j)` (1-based).
    pub fn image(&self, j: usize) -> &Polynomial {
        &self.images[j - 1]
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// `rho(f) = f(rho(x_1), ..., rho(x_n))`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, MapError> {
        if f.arity() != self.arity {
            return Err(MapError::ArityMismatch { left: self.arity, right: f.arity() });
        }
        Ok(f.try_substitute(&self.images)?)
    }

    /// `self . other`: first `other`, then `self`.
    pub fn compose(&self, other: &PolyMap) -> Result<PolyMap, MapError> {
        if self.arity != other.arity {
            return Err(MapError::ArityMismatch { left: self.arity, right: other.arity });
        }
        let images = other
            .images
            .iter()
            .map(|img| self.apply(img))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMap { arity: self.arity, images })
    }

    pub fn is_identity(&self) -> bool {
        *self == PolyMap::identity(self.arity)
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, img) in self.images.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{img}")?;
        }
        write!(f, ")")
    }
}

/// A triangular map `rho(x_j) = diag[j-1] * x_j + tails[j-1]` where
/// `tails[j-1]` involves only `x_1..x_{j-1}` and every diagonal entry is
/// nonzero. Invertible by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularMap {
    diag: Vec<Rational>,
    tails: Vec<Polynomial>,
}

impl TriangularMap {
    pub fn new(diag: Vec<Rational>, tails: Vec<Polynomial>) -> Result<Self, MapError> {
        let n = diag.len();
        if n == 0 {
            return Err(MapError::EmptyImageList);
        }
        if tails.len() != n {
            return Err(MapError::ImageArity { index: tails.len(), expected: n, got: tails.len() });
        }
        for (idx, a) in diag.iter().enumerate() {
            if a.is_zero() {
                return Err(MapError::ZeroDiagonal { index: idx + 1 });
            }
        }
        let mut normalized = Vec::with_capacity(n);
        for (idx, tail) in tails.into_iter().enumerate() {
            if !tail.involves_only_first(idx) {
                return Err(MapError::TailTooWide { index: idx + 1, limit: idx });
            }
            normalized.push(tail.resize_arity(n)?);
        }
        Ok(TriangularMap { diag, tails: normalized })
    }

    pub fn arity(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[Rational] {
        &self.diag
    }

    pub fn tails(&self) -> &[Polynomial] {
        &self.tails
    }

    pub fn to_poly_map(&self) -> PolyMap {
        let n = self.arity();
        let images = (1..=n)
            .map(|j| {
                let xj = Polynomial::var(n, j).expect("in range");
                xj.scale(&self.diag[j - 1])
                    .try_add(&self.tails[j - 1])
                    .expect("same arity")
            })
            .collect();
        PolyMap { arity: n, images }
    }

    /// Two-sided inverse by back-substitution from `x_1` upward:
    /// `sigma(x_j) = (x_j - f_j(sigma(x_1), ..., sigma(x_{j-1}))) / a_j`.
    pub fn invert(&self) -> TriangularMap {
        let n = self.arity();
        let mut inv_images: Vec<Polynomial> = Vec::with_capacity(n);
        let mut diag = Vec::with_capacity(n);
        let mut tails = Vec::with_capacity(n);
        for j in 1..=n {
            // substitute the already-inverted lower variables into the tail
            let mut subst = inv_images.clone();
            for q in j..=n {
                subst.push(Polynomial::var(n, q).expect("in range"));
            }
            let shifted = self.tails[j - 1]
                .try_substitute(&subst)
                .expect("tail only involves lower variables");
            let ainv = Rational::one() / self.diag[j - 1].clone();
            let img = Polynomial::var(n, j)
                .expect("in range")
                .try_sub(&shifted)
                .expect("same arity")
                .scale(&ainv);
            diag.push(ainv);
            tails.push(shifted.scale(&(-Rational::one() / self.diag[j - 1].clone())));
            inv_images.push(img);
        }
        TriangularMap { diag, tails }
    }

    /// True for `(x_1, ..., x_{n-1}, x_n + c)` (identity included).
    pub fn is_translation_in_last(&self) -> bool {
        let n = self.arity();
        self.diag.iter().all(One::is_one)
            && self.tails[..n - 1].iter().all(Polynomial::is_zero)
            && self.tails[n - 1].is_constant()
    }
}

impl fmt::Display for TriangularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly_map())
    }
}

/// Outcome of a commutation check. On failure, `discrepancy` holds the first
/// generator (in index order) where `d(rho(x_j)) != rho(d(x_j))` together
/// with the exact difference `d(rho(x_j)) - rho(d(x_j))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommuteReport {
    pub commutes: bool,
    pub discrepancy: Option<(usize, Polynomial)>,
}

/// Checks `d(rho(x_j)) = rho(d(x_j))` for every generator; equivalent to
/// `rho . d = d . rho` since both sides are derivations along `rho`.
pub fn commute_check(rho: &PolyMap, d: &Derivation) -> Result<CommuteReport, MapError> {
    if rho.arity() != d.arity() {
        return Err(MapError::ArityMismatch { left: rho.arity(), right: d.arity() });
    }
    for j in 1..=d.arity() {
        let lhs = d.apply(rho.image(j)).map_err(|_| MapError::ArityMismatch {
            left: rho.arity(),
            right: d.arity(),
        })?;
        let rhs = rho.apply(d.image(j))?;
        if lhs != rhs {
            return Ok(CommuteReport {
                commutes: false,
                discrepancy: Some((j, lhs.try_sub(&rhs)?)),
            });
        }
    }
    Ok(CommuteReport { commutes: true, discrepancy: None })
}

/// Checks that `(x_1, ..., x_n + c)` commutes with `d` for every sampled `c`.
/// The commutator entries are polynomial in `c` of degree at most
/// `max_j deg_{x_n} d(x_j)`, so agreement on that many + 1 distinct samples
/// certifies the identity for all `c`.
pub fn translation_family_check(d: &Derivation, samples: &[Rational]) -> Result<bool, MapError> {
    for c in samples {
        let rho = PolyMap::translation_last(d.arity(), c);
        if !commute_check(&rho, d)?.commutes {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustively enumerates the triangular maps with diagonal entries in
/// `coeffs \ {0}`, tail coefficients in `coeffs`, and tail total degree at
/// most `tail_degree`, keeping exactly those that commute with `d`.
///
/// `coeffs` must contain 0 and 1 so the family includes the identity. The
/// search is depth-first over the generators; the commutation equation for
/// `x_j` is checked as soon as all images it mentions are fixed, which
/// prunes most of the grid. Output order is deterministic: coefficients
/// ascend, later tail monomials vary fastest.
pub fn enumerate_commuting_triangular(
    d: &Derivation,
    tail_degree: u32,
    coeffs: &[Rational],
) -> Result<Vec<TriangularMap>, MapError> {
    let n = d.arity();
    let mut sorted: Vec<Rational> = coeffs.to_vec();
    sorted.sort();
    sorted.dedup();
    if !sorted.iter().any(Zero::is_zero) || !sorted.iter().any(One::is_one) {
        return Err(MapError::CoeffSetMissingZeroOne);
    }
    let nonzero: Vec<Rational> = sorted.iter().filter(|c| !c.is_zero()).cloned().collect();

    // Generator j's equation can be checked once images for x_1..ready(j)
    // are fixed.
    let ready_at = |j: usize| -> usize { d.image(j).max_var_index().unwrap_or(0).max(j) };
    let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for j in 1..=n {
        check_at[ready_at(j)].push(j);
    }

    // Tail monomial exponent vectors per level, ascending graded-lex.
    let tail_monos: Vec<Vec<Vec<u32>>> = (1..=n)
        .map(|j| {
            let basis = crate::linalg::MonomialBasis::supported_on_first(n, j - 1, tail_degree);
            basis.iter().map(|m| m.exponents().to_vec()).collect()
        })
        .collect();

    struct Search<'a> {
        d: &'a Derivation,
        n: usize,
        nonzero: Vec<Rational>,
        coeffs: Vec<Rational>,
        tail_monos: Vec<Vec<Vec<u32>>>,
        check_at: Vec<Vec<usize>>,
        images: Vec<Polynomial>,
        diag: Vec<Rational>,
        tails: Vec<Polynomial>,
        found: Vec<TriangularMap>,
    }

    impl Search<'_> {
        fn equations_hold(&self, level: usize) -> bool {
            let rho_images = &self.images;
            self.check_at[level].iter().all(|&j| {
                let lhs = self.d.apply(&rho_images[j - 1]).expect("same arity");
                let rhs = self
                    .d
                    .image(j)
                    .try_substitute(rho_images)
                    .expect("same arity");
                lhs == rhs
            })
        }

        fn descend(&mut self, level: usize) {
            if level > self.n {
                self.found.push(
                    TriangularMap::new(self.diag.clone(), self.tails.clone())
                        .expect("search respects the triangular shape"),
                );
                return;
            }
            let monos = self.tail_monos[level - 1].clone();
            let xj = Polynomial::var(self.n, level).expect("in range");
            let mut pick = vec![0usize; monos.len()];
            loop {
                let tail = Polynomial::from_terms(
                    self.n,
                    pick.iter()
                        .zip(&monos)
                        .map(|(&c, exps)| (self.coeffs[c].clone(), exps.clone())),
                );
                for alpha in self.nonzero.clone() {
                    let image = xj.scale(&alpha).try_add(&tail).expect("same arity");
                    self.images[level - 1] = image;
                    self.diag.push(alpha);
                    self.tails.push(tail.clone());
                    if self.equations_hold(level) {
                        self.descend(level + 1);
                    }
                    self.diag.pop();
                    self.tails.pop();
                }
                self.images[level - 1] = xj.clone();

                let mut pos = monos.len();
                loop {
                    if pos == 0 {
                        return;
                    }
                    pos -= 1;
                    pick[pos] += 1;
                    if pick[pos] < self.coeffs.len() {
                        break;
                    }
                    pick[pos] = 0;
                }
            }
        }
    }

    let mut search = Search {
        d,
        n,
        nonzero,
        coeffs: sorted,
        tail_monos,
        check_at,
        images: PolyMap::identity(n).images().to_vec(),
        diag: Vec::new(),
        tails: Vec::new(),
        found: Vec::new(),
    };
    search.descend(1);
    Ok(search.found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn x(arity: usize, j: usize) -> Polynomial {
        Polynomial::var(arity, j).unwrap()
    }

    fn family_d3(m1: u32, m2: u32) -> Derivation {
        let img1 = Polynomial::from_terms(3, [(rat(1), vec![0, 0, 0]), (rat(1), vec![m2, 1, 0])]);
        let img2 = Polynomial::from_terms(3, [(rat(1), vec![m1, 0, 0])]);
        Derivation::new(vec![img1, img2, x(3, 2)]).unwrap()
    }

    #[test]
    fn compose_translations_adds_constants() {
        let a = PolyMap::translation_last(3, &rat(2));
        let b = PolyMap::translation_last(3, &ratio(1, 2));
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab, PolyMap::translation_last(3, &ratio(5, 2)));
    }

    #[test]
    fn compose_identity_neutral() {
        let rho = TriangularMap::new(
            vec![rat(2), rat(1)],
            vec![Polynomial::zero(2), x(1, 1).resize_arity(2).unwrap()],
        )
        .unwrap()
        .to_poly_map();
        let id = PolyMap::identity(2);
        assert_eq!(rho.compose(&id).unwrap(), rho);
        assert_eq!(id.compose(&rho).unwrap(), rho);
    }

    #[test]
    fn compose_triangular_closure() {
        let a = TriangularMap::new(
            vec![rat(1), rat(-1)],
            vec![
                Polynomial::constant(2, rat(3)),
                Polynomial::from_terms(2, [(rat(2), vec![2, 0])]),
            ],
        )
        .unwrap();
        let b = TriangularMap::new(
            vec![rat(2), rat(1)],
            vec![Polynomial::zero(2), Polynomial::from_terms(2, [(rat(-1), vec![1, 0])])],
        )
        .unwrap();
        let c = a.to_poly_map().compose(&b.to_poly_map()).unwrap();
        // image of x1 stays a polynomial in x1 alone, x2 image is linear in x2
        assert!(c.image(1).involves_only_first(1));
        assert_eq!(c.image(2).degree_in(2).unwrap(), crate::poly::Degree::Finite(1));
    }

    #[test]
    fn invert_jonquieres() {
        let rho = TriangularMap::new(
            vec![rat(1), rat(1)],
            vec![Polynomial::zero(2), Polynomial::from_terms(2, [(rat(1), vec![2, 0])])],
        )
        .unwrap();
        let inv = rho.invert();
        assert_eq!(
            inv.to_poly_map().images()[1],
            x(2, 2).try_sub(&Polynomial::from_terms(2, [(rat(1), vec![2, 0])])).unwrap()
        );
    }

    #[test]
    fn invert_scaling() {
        let rho = TriangularMap::new(vec![rat(2), rat(1)], vec![Polynomial::zero(2); 2]).unwrap();
        let inv = rho.invert();
        assert_eq!(inv.diag()[0], ratio(1, 2));
        assert!(rho
            .to_poly_map()
            .compose(&inv.to_poly_map())
            .unwrap()
            .is_identity());
    }

    #[test]
    fn invert_three_variables_round_trip() {
        let rho = TriangularMap::new(
            vec![rat(1), rat(3), rat(1)],
            vec![
                Polynomial::zero(3),
                x(3, 1),
                Polynomial::from_terms(3, [(rat(1), vec![1, 1, 0])]),
            ],
        )
        .unwrap();
        let inv = rho.invert();
        let p = rho.to_poly_map();
        let q = inv.to_poly_map();
        assert!(p.compose(&q).unwrap().is_identity());
        assert!(q.compose(&p).unwrap().is_identity());
    }

    #[test]
    fn commute_translation_with_family() {
        let d = family_d3(3, 2);
        let rho = PolyMap::translation_last(3, &rat(5));
        assert!(commute_check(&rho, &d).unwrap().commutes);
    }

    #[test]
    fn commute_scaling_fails_with_discrepancy() {
        let d = family_d3(3, 2);
        let rho = PolyMap::new(vec![x(3, 1), x(3, 2), x(3, 3).scale(&rat(2))]).unwrap();
        let report = commute_check(&rho, &d).unwrap();
        assert!(!report.commutes);
        let (j, diff) = report.discrepancy.unwrap();
        assert_eq!(j, 3);
        assert_eq!(diff, x(3, 2));
    }

    #[test]
    fn commute_identity_always() {
        let d = family_d3(2, 1);
        assert!(commute_check(&PolyMap::identity(3), &d).unwrap().commutes);
    }

    #[test]
    fn translation_family_on_chain() {
        let d = family_d3(3, 2);
        let samples = [rat(0), rat(1), rat(-1), rat(2)];
        assert!(translation_family_check(&d, &samples).unwrap());
    }

    #[test]
    fn translation_family_detects_bad_last_image() {
        // d(x3) depends on x3, so x3-translations no longer commute
        let d = Derivation::new(vec![x(3, 2).resize_arity(3).unwrap(), x(3, 1), x(3, 3)]).unwrap();
        let samples = [rat(0), rat(1)];
        assert!(!translation_family_check(&d, &samples).unwrap());
    }

    #[test]
    fn enumerate_family_finds_only_translations() {
        let d = family_d3(3, 2);
        let maps = enumerate_commuting_triangular(&d, 2, &[rat(-1), rat(0), rat(1)]).unwrap();
        assert_eq!(maps.len(), 3);
        assert!(maps.iter().all(TriangularMap::is_translation_in_last));
        let constants: Vec<Rational> =
            maps.iter().map(|m| m.tails()[2].constant_term()).collect();
        assert_eq!(constants, vec![rat(-1), rat(0), rat(1)]);
        for m in &maps {
            assert!(commute_check(&m.to_poly_map(), &d).unwrap().commutes);
        }
    }

    #[test]
    fn enumerate_linear_derivation_finds_scalings() {
        // d = x1 d/dx1 + x2 d/dx2 commutes with all diagonal scalings
        let d = Derivation::new(vec![x(2, 1), x(2, 2)]).unwrap();
        let maps =
            enumerate_commuting_triangular(&d, 1, &[rat(-1), rat(0), rat(1), rat(2)]).unwrap();
        let non_translation = maps.iter().any(|m| !m.is_translation_in_last());
        assert!(non_translation);
        let has_scaling = maps
            .iter()
            .any(|m| m.diag() == [rat(2), rat(1)] && m.tails().iter().all(Polynomial::is_zero));
        assert!(has_scaling);
    }

    #[test]
    fn enumerate_includes_identity() {
        let d = family_d3(2, 1);
        let maps = enumerate_commuting_triangular(&d, 0, &[rat(0), rat(1)]).unwrap();
        assert!(maps.iter().any(|m| m.to_poly_map().is_identity()));
    }

    #[test]
    fn enumerate_rejects_degenerate_coeff_set() {
        let d = family_d3(2, 1);
        assert_eq!(
            enumerate_commuting_triangular(&d, 1, &[rat(0), rat(2)]).unwrap_err(),
            MapError::CoeffSetMissingZeroOne
        );
    }

    #[test]
    fn isotropy_closed_under_inverse() {
        let d = Derivation::new(vec![x(2, 1), x(2, 2)]).unwrap();
        let rho = TriangularMap::new(vec![rat(2), rat(-1)], vec![Polynomial::zero(2); 2]).unwrap();
        let fwd = commute_check(&rho.to_poly_map(), &d).unwrap().commutes;
        let bwd = commute_check(&rho.invert().to_poly_map(), &d).unwrap().commutes;
        assert_eq!(fwd, bwd);
        assert!(fwd);
    }
}
