//! Derivations of `Q[x_1, ..., x_n]` and extensions along new variables.
//!
//! A derivation is determined by its images on the generators; application
//! uses the chain-rule form `d(f) = sum_j df/dx_j * d(x_j)`, which agrees
//! with term-recursive Leibniz expansion (the property suite cross-checks
//! the two on random inputs).

use std::fmt;

use thiserror::Error;

use crate::isotropy::{commute_check, PolyMap};
use crate::poly::{Degree, PolyError, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivError {
    #[error("derivation needs at least one generator image")]
    EmptyImageList,
    #[error("image of x{index} has arity {got}, expected {expected}")]
    ImageArity { index: usize, expected: usize, got: usize },
    #[error("cannot apply arity-{deriv} derivation to arity-{poly} polynomial")]
    ApplyArityMismatch { deriv: usize, poly: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("link {index} is constant; extension links must satisfy g in k[x]\\k")]
    ConstantLink { index: usize },
    #[error("link {index} must be univariate in x{designated}")]
    NotUnivariate { index: usize, designated: usize },
    #[error("first link has degree {degree} in x{var}, exceeding the cap {cap}")]
    CapExceeded { var: usize, degree: u64, cap: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A k-derivation of `Q[x_1, ..., x_n]`, stored as the generator images
/// `images[j-1] = d(x_j)`, each of arity `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    arity: usize,
    images: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(images: Vec<Polynomial>) -> Result<Self, DerivError> {
        if images.is_empty() {
            return Err(DerivError::EmptyImageList);
        }
        let arity = images.len();
        for (idx, img) in images.iter().enumerate() {
            if img.arity() != arity {
                return Err(DerivError::ImageArity {
                    index: idx + 1,
                    expected: arity,
                    got: img.arity(),
                });
            }
        }
        Ok(Derivation { arity, images })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `d(x_j)` (1-based).
    pub fn image(&self, j: usize) -> &Polynomial {
        &self.images[j - 1]
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// `d(f)` via the chain rule; exact, linear in `f`, satisfies Leibniz.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, DerivError> {
        if f.arity() != self.arity {
            return Err(DerivError::ApplyArityMismatch { deriv: self.arity, poly: f.arity() });
        }
        let mut out = Polynomial::zero(self.arity);
        for j in 1..=self.arity {
            let df = f.partial(j)?;
            if df.is_zero() {
                continue;
            }
            out = out.try_add(&df.try_mul(&self.images[j - 1])?)?;
        }
        Ok(out)
    }

    /// True iff `rho . d = d . rho` on every generator.
    pub fn commutes_with_map(&self, rho: &PolyMap) -> bool {
        commute_check(rho, self).map(|r| r.commutes).unwrap_or(false)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, img) in self.images.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "d(x{}) = {}", j + 1, img)?;
        }
        Ok(())
    }
}

/// Degree cap `l` for the first extension link: a natural number or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeCap {
    Finite(u64),
    Infinite,
}

impl DegreeCap {
    pub fn allows(&self, degree: u64) -> bool {
        match self {
            DegreeCap::Infinite => true,
            DegreeCap::Finite(cap) => degree <= *cap,
        }
    }
}

impl fmt::Display for DegreeCap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeCap::Finite(c) => write!(f, "{c}"),
            DegreeCap::Infinite => write!(f, "inf"),
        }
    }
}

/// The data of an extension
/// `d_n = d_i + g_i(x_i) d/dx_{i+1} + ... + g_{n-1}(x_{n-1}) d/dx_n`:
/// a base derivation of arity `i` plus an ordered list of links, where
/// `links[t]` is univariate in `x_{i+t}` and becomes the image of `x_{i+t+1}`.
///
/// The strict constructor rejects constant links (`g in k[x]\k`). The relaxed
/// constructor admits them for experiments with the weaker hypothesis
/// `g in k[x]`; the classification engine refuses such chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionChain {
    base: Derivation,
    links: Vec<Polynomial>,
    cap: DegreeCap,
}

impl ExtensionChain {
    pub fn new(base: Derivation, links: Vec<Polynomial>, cap: DegreeCap) -> Result<Self, ChainError> {
        Self::build(base, links, cap, true)
    }

    /// Admits constant links (but still requires univariateness and the cap).
    pub fn new_relaxed(
        base: Derivation,
        links: Vec<Polynomial>,
        cap: DegreeCap,
    ) -> Result<Self, ChainError> {
        Self::build(base, links, cap, false)
    }

    fn build(
        base: Derivation,
        links: Vec<Polynomial>,
        cap: DegreeCap,
        strict: bool,
    ) -> Result<Self, ChainError> {
        let i = base.arity();
        let n = i + links.len();
        let mut normalized = Vec::with_capacity(links.len());
        for (t, link) in links.into_iter().enumerate() {
            let designated = i + t;
            if !link.is_univariate_in(designated) {
                return Err(ChainError::NotUnivariate { index: t, designated });
            }
            if strict && link.is_constant() {
                return Err(ChainError::ConstantLink { index: t });
            }
            let link = link.resize_arity(n)?;
            if t == 0 {
                if let Degree::Finite(deg) = link.degree_in(designated)? {
                    if !cap.allows(deg) {
                        let DegreeCap::Finite(c) = cap else { unreachable!() };
                        return Err(ChainError::CapExceeded { var: designated, degree: deg, cap: c });
                    }
                }
            }
            normalized.push(link);
        }
        Ok(ExtensionChain { base, links: normalized, cap })
    }

    pub fn base(&self) -> &Derivation {
        &self.base
    }

    /// Links normalized to the full arity `n`.
    pub fn links(&self) -> &[Polynomial] {
        &self.links
    }

    pub fn cap(&self) -> DegreeCap {
        self.cap
    }

    /// Arity `i` of the base ring.
    pub fn base_arity(&self) -> usize {
        self.base.arity()
    }

    /// Arity `n = i + number of links` of the extended ring.
    pub fn arity(&self) -> usize {
        self.base.arity() + self.links.len()
    }

    pub fn has_constant_link(&self) -> bool {
        self.links.iter().any(Polynomial::is_constant)
    }

    /// The extended derivation `d_n`: base images lifted by zero-padding,
    /// `d_n(x_{i+t+1}) = g_{i+t}`.
    pub fn extend(&self) -> Derivation {
        let n = self.arity();
        let mut images = Vec::with_capacity(n);
        for img in self.base.images() {
            images.push(img.resize_arity(n).expect("lifting never loses variables"));
        }
        for link in &self.links {
            images.push(link.clone());
        }
        Derivation::new(images).expect("chain arities are consistent")
    }

    /// The partial extension `d_{i+t}` on `Q[x_1, ..., x_{i+t}]`
    /// (`t = 0` gives the base).
    pub fn partial_extension(&self, t: usize) -> Derivation {
        assert!(t <= self.links.len());
        let m = self.base_arity() + t;
        let mut images = Vec::with_capacity(m);
        for img in self.base.images() {
            images.push(img.resize_arity(m).expect("lift"));
        }
        for link in &self.links[..t] {
            images.push(link.resize_arity(m).expect("link t only involves x_{i+t}"));
        }
        Derivation::new(images).expect("consistent")
    }

    /// Link `g_{i+t}` as an element of the ring it extends,
    /// `Q[x_1, ..., x_{i+t}]`.
    pub fn link_in_ring(&self, t: usize) -> Polynomial {
        self.links[t]
            .resize_arity(self.base_arity() + t)
            .expect("link t only involves x_{i+t}")
    }
}

/// True iff the first `i` images of `dn` involve only `x_1..x_i` and equal
/// the images of `di` lifted. Violations return `false`, never an error.
pub fn restricts_to(dn: &Derivation, di: &Derivation, i: usize) -> bool {
    if di.arity() != i || i > dn.arity() {
        return false;
    }
    for j in 1..=i {
        let img = dn.image(j);
        if !img.involves_only_first(i) {
            return false;
        }
        match img.resize_arity(i) {
            Ok(projected) => {
                if &projected != di.image(j) {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn x(arity: usize, j: usize) -> Polynomial {
        Polynomial::var(arity, j).unwrap()
    }

    /// d = x2^m1 d/dx1 + (1 + x2^m2 x1) d/dx2 on Q[x1, x2].
    fn mixed_pair(m1: u32, m2: u32) -> Derivation {
        let img1 = Polynomial::from_terms(2, [(rat(1), vec![0, m1])]);
        let img2 = Polynomial::from_terms(2, [(rat(1), vec![0, 0]), (rat(1), vec![1, m2])]);
        Derivation::new(vec![img1, img2]).unwrap()
    }

    #[test]
    fn apply_equal_exponent_pair_hits_one() {
        // m1 = m2 = 2: d(-x1^2/2 + x2) = 1
        let d = mixed_pair(2, 2);
        let r = Polynomial::from_terms(2, [(ratio(-1, 2), vec![2, 0]), (rat(1), vec![0, 1])]);
        assert_eq!(d.apply(&r).unwrap(), Polynomial::one(2));
    }

    #[test]
    fn apply_kills_constants() {
        let d = mixed_pair(3, 2);
        assert!(d.apply(&Polynomial::constant(2, ratio(7, 3))).unwrap().is_zero());
    }

    #[test]
    fn apply_leibniz_hand_case() {
        // d = x2^3 d/dx1 + (1 + x2^2 x1) d/dx2, f = x1 x2
        // d(f) = x2^4 + x1 + x1^2 x2^2
        let d = mixed_pair(3, 2);
        let f = Polynomial::from_terms(2, [(rat(1), vec![1, 1])]);
        let expect = Polynomial::from_terms(
            2,
            [(rat(1), vec![0, 4]), (rat(1), vec![1, 0]), (rat(1), vec![2, 2])],
        );
        assert_eq!(d.apply(&f).unwrap(), expect);
    }

    #[test]
    fn apply_arity_mismatch() {
        let d = mixed_pair(2, 2);
        assert!(matches!(
            d.apply(&Polynomial::one(3)),
            Err(DerivError::ApplyArityMismatch { .. })
        ));
    }

    /// Base of the (1 + x1^m2 x2, x1^m1) family on Q[x1, x2].
    fn family_base(m1: u32, m2: u32) -> Derivation {
        let img1 = Polynomial::from_terms(2, [(rat(1), vec![0, 0]), (rat(1), vec![m2, 1])]);
        let img2 = Polynomial::from_terms(2, [(rat(1), vec![m1, 0])]);
        Derivation::new(vec![img1, img2]).unwrap()
    }

    #[test]
    fn extend_family_chain() {
        let base = family_base(3, 2);
        let chain = ExtensionChain::new(base.clone(), vec![x(3, 2)], DegreeCap::Infinite).unwrap();
        let d3 = chain.extend();
        assert_eq!(d3.arity(), 3);
        assert_eq!(d3.image(3), &x(3, 2));
        assert_eq!(d3.image(1), &base.image(1).resize_arity(3).unwrap());
        assert!(restricts_to(&d3, &base, 2));
    }

    #[test]
    fn extend_empty_links_is_base() {
        let base = family_base(3, 2);
        let chain = ExtensionChain::new(base.clone(), vec![], DegreeCap::Infinite).unwrap();
        assert_eq!(chain.extend(), base);
    }

    #[test]
    fn extend_from_one_variable() {
        // base d/dx1 on Q[x1], links (x1, x2) -> images (1, x1, x2)
        let base = Derivation::new(vec![Polynomial::one(1)]).unwrap();
        let chain =
            ExtensionChain::new(base, vec![x(2, 1), x(3, 2)], DegreeCap::Infinite).unwrap();
        let d = chain.extend();
        assert_eq!(d.images(), &[Polynomial::one(3), x(3, 1), x(3, 2)]);
    }

    #[test]
    fn chain_rejects_constant_link() {
        let base = family_base(3, 2);
        let err = ExtensionChain::new(base.clone(), vec![Polynomial::one(3)], DegreeCap::Infinite)
            .unwrap_err();
        assert_eq!(err, ChainError::ConstantLink { index: 0 });
        // relaxed constructor admits it
        assert!(ExtensionChain::new_relaxed(base, vec![Polynomial::one(3)], DegreeCap::Infinite)
            .is_ok());
    }

    #[test]
    fn chain_rejects_multivariate_link() {
        let base = family_base(3, 2);
        let link = Polynomial::from_terms(3, [(rat(1), vec![1, 1, 0])]);
        let err = ExtensionChain::new(base, vec![link], DegreeCap::Infinite).unwrap_err();
        assert_eq!(err, ChainError::NotUnivariate { index: 0, designated: 2 });
    }

    #[test]
    fn chain_enforces_cap_on_first_link() {
        let base = family_base(2, 1);
        let quad = Polynomial::from_terms(2, [(rat(1), vec![0, 2])]);
        let err =
            ExtensionChain::new(base.clone(), vec![quad], DegreeCap::Finite(1)).unwrap_err();
        assert_eq!(err, ChainError::CapExceeded { var: 2, degree: 2, cap: 1 });
        let lin = Polynomial::from_terms(2, [(rat(1), vec![0, 1]), (rat(1), vec![0, 0])]);
        assert!(ExtensionChain::new(base, vec![lin], DegreeCap::Finite(1)).is_ok());
    }

    #[test]
    fn restriction_detects_foreign_variables() {
        // d3 whose first image involves x3 restricts to no d2
        let img1 = x(3, 3);
        let d3 = Derivation::new(vec![img1, x(3, 1), x(3, 2)]).unwrap();
        let d2 = Derivation::new(vec![x(2, 2), x(2, 1)]).unwrap();
        assert!(!restricts_to(&d3, &d2, 2));
    }

    #[test]
    fn partial_extensions_walk_the_chain() {
        let base = family_base(3, 2);
        let chain = ExtensionChain::new(
            base.clone(),
            vec![x(3, 2), Polynomial::from_terms(4, [(rat(1), vec![0, 0, 2, 0])])],
            DegreeCap::Infinite,
        )
        .unwrap();
        assert_eq!(chain.partial_extension(0), base);
        let d3 = chain.partial_extension(1);
        assert_eq!(d3.arity(), 3);
        assert_eq!(d3.image(3), &x(3, 2));
        assert_eq!(chain.partial_extension(2), chain.extend());
        assert_eq!(chain.link_in_ring(0), x(2, 2));
    }
}
