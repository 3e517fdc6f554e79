//! The incidence algebra of a simplicial object: rational functions on `X₁`
//! with the convolution product induced by the span `X₁ × X₁ ← X₂ → X₁`.
//!
//! All arithmetic is exact. The algebra is associative when `X` is 2-Segal.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{input_err, validation_err, Result};
use crate::finset::FinSet;
use crate::sset::SSet;

/// A function `X₁ → ℚ`. Labels missing from a sparse presentation are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceElement {
    carrier: FinSet,
    coeffs: Vec<BigRational>,
}

impl IncidenceElement {
    pub fn new(carrier: FinSet, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != carrier.len() {
            return Err(input_err!("expected {} coefficients, got {}", carrier.len(), coeffs.len()));
        }
        Ok(IncidenceElement { carrier, coeffs })
    }

    /// From a sparse `label → value` table.
    pub fn from_sparse(carrier: FinSet, values: &BTreeMap<alloc::string::String, BigRational>) -> Result<Self> {
        let mut coeffs = vec![BigRational::zero(); carrier.len()];
        for (label, v) in values {
            let i = carrier.index_of(label).ok_or_else(|| input_err!("{label} is not an edge"))?;
            coeffs[i] = v.clone();
        }
        Ok(IncidenceElement { carrier, coeffs })
    }

    pub fn zero(carrier: FinSet) -> Self {
        let coeffs = vec![BigRational::zero(); carrier.len()];
        IncidenceElement { carrier, coeffs }
    }

    /// The constant function 1.
    pub fn zeta(carrier: FinSet) -> Self {
        let coeffs = vec![BigRational::one(); carrier.len()];
        IncidenceElement { carrier, coeffs }
    }

    /// The indicator of edge `i`.
    pub fn delta(carrier: FinSet, i: usize) -> Self {
        let mut e = Self::zero(carrier);
        e.coeffs[i] = BigRational::one();
        e
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn get(&self, label: &str) -> Option<&BigRational> {
        self.carrier.index_of(label).map(|i| &self.coeffs[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_carrier(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(IncidenceElement { carrier: self.carrier.clone(), coeffs })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        IncidenceElement { carrier: self.carrier.clone(), coeffs }
    }

    /// Nonzero coefficients by label.
    pub fn support(&self) -> BTreeMap<&str, &BigRational> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.carrier.label(i), c)).collect()
    }

    fn same_carrier(&self, other: &Self) -> Result<()> {
        if self.carrier != other.carrier {
            return Err(input_err!("incidence elements live on different carriers"));
        }
        Ok(())
    }
}

fn on_edges(x: &SSet, f: &IncidenceElement) -> Result<()> {
    if x.dim() < 2 {
        return Err(crate::Error::Truncation { what: "incidence algebra".into(), required: 2, available: x.dim() });
    }
    if f.carrier != *x.level(1) {
        return Err(input_err!("incidence element is not defined on the edges of this simplicial set"));
    }
    Ok(())
}

/// `(f * g)(z) = Σ_{w ∈ X₂, d₁w = z} f(d₂w)·g(d₀w)`.
pub fn convolve(x: &SSet, f: &IncidenceElement, g: &IncidenceElement) -> Result<IncidenceElement> {
    on_edges(x, f)?;
    on_edges(x, g)?;
    let mut out = IncidenceElement::zero(f.carrier.clone());
    for w in 0..x.size(2) {
        let (a, b) = (&f.coeffs[x.face(2, 2, w)], &g.coeffs[x.face(2, 0, w)]);
        if !a.is_zero() && !b.is_zero() {
            out.coeffs[x.face(2, 1, w)] += a * b;
        }
    }
    Ok(out)
}

/// Checks the unitality squares `X₁ → X₂ ×_{X₁} X₀` for `i = 0, 1`.
fn require_unital(x: &SSet) -> Result<()> {
    let report = crate::segal::check_2segal_dk(&x.truncate(2), 2, false)?;
    if !report.passed {
        return Err(validation_err!("degenerate edges do not form a unit: the unitality squares fail"));
    }
    Ok(())
}

/// The indicator of the degenerate edges `s₀(X₀)`.
pub fn unit(x: &SSet) -> Result<IncidenceElement> {
    if x.dim() < 2 {
        return Err(crate::Error::Truncation { what: "unit".into(), required: 2, available: x.dim() });
    }
    require_unital(x)?;
    let mut e = IncidenceElement::zero(x.level(1).clone());
    for v in 0..x.size(0) {
        e.coeffs[x.degen(0, 0, v)] = BigRational::one();
    }
    Ok(e)
}

/// `ε(f) = Σ_{v ∈ X₀} f(s₀v)`.
pub fn counit(x: &SSet, f: &IncidenceElement) -> Result<BigRational> {
    on_edges(x, f)?;
    require_unital(x)?;
    Ok((0..x.size(0)).map(|v| f.coeffs[x.degen(0, 0, v)].clone()).sum())
}

/// A function `X₁ × X₁ → ℚ`, stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coproduct {
    pub carrier: FinSet,
    pub coeffs: BTreeMap<(usize, usize), BigRational>,
}

impl Coproduct {
    pub fn get(&self, x: usize, y: usize) -> BigRational {
        self.coeffs.get(&(x, y)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Zero::is_zero)
    }
}

/// `Δ(f)(x, y) = Σ_{w ∈ X₂, d₂w = x, d₀w = y} f(d₁w)`.
pub fn comultiply(x: &SSet, f: &IncidenceElement) -> Result<Coproduct> {
    on_edges(x, f)?;
    let mut coeffs: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
    for w in 0..x.size(2) {
        let c = &f.coeffs[x.face(2, 1, w)];
        if !c.is_zero() {
            *coeffs.entry((x.face(2, 2, w), x.face(2, 0, w))).or_insert_with(BigRational::zero) += c;
        }
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(Coproduct { carrier: f.carrier.clone(), coeffs })
}

/// The left inverse `μ` of `f` (`μ * f = e`), by solving
/// `μ(z)·c(z) = e(z) − Σ μ(d₂w)·f(d₀w)` over the 2-simplices with `d₁w = z`
/// and `d₂w ≠ z`, where `c(z)` collects the terms with `d₂w = z`.
///
/// Succeeds when these equations are triangular, as for nerves of posets.
pub fn mobius_invert(x: &SSet, f: &IncidenceElement) -> Result<IncidenceElement> {
    on_edges(x, f)?;
    let e = unit(x)?;
    let edges = x.size(1);
    let mut diagonal = vec![BigRational::zero(); edges];
    let mut terms: Vec<Vec<(usize, usize)>> = vec![Vec::new(); edges];
    for w in 0..x.size(2) {
        let (z, left, right) = (x.face(2, 1, w), x.face(2, 2, w), x.face(2, 0, w));
        if left == z {
            diagonal[z] += &f.coeffs[right];
        } else {
            terms[z].push((left, right));
        }
    }
    // Solve in an order where every μ(d₂w) is known before μ(z).
    let mut solved: Vec<Option<BigRational>> = vec![None; edges];
    let mut remaining = edges;
    while remaining > 0 {
        let mut progress = false;
        for z in 0..edges {
            if solved[z].is_some() || terms[z].iter().any(|&(l, _)| solved[l].is_none()) {
                continue;
            }
            if diagonal[z].is_zero() {
                return Err(validation_err!("not invertible: vanishing diagonal coefficient at {}", x.level(1).label(z)));
            }
            let mut rhs = e.coeffs[z].clone();
            for &(l, r) in &terms[z] {
                rhs -= solved[l].as_ref().expect("solved") * &f.coeffs[r];
            }
            solved[z] = Some(rhs / &diagonal[z]);
            remaining -= 1;
            progress = true;
        }
        if !progress {
            return Err(validation_err!("the convolution equations are not triangular on this simplicial set"));
        }
    }
    let coeffs = solved.into_iter().map(|c| c.expect("solved")).collect();
    Ok(IncidenceElement { carrier: f.carrier.clone(), coeffs })
}

/// `n/1` as a rational.
pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FinPoset;
    use crate::sset::{nerve_poset, standard_simplex};

    #[test]
    fn zeta_squared_counts_chains() {
        let x = nerve_poset(&FinPoset::chain(2), 3);
        let z = IncidenceElement::zeta(x.level(1).clone());
        let zz = convolve(&x, &z, &z).unwrap();
        assert_eq!(zz.get("0,2").unwrap(), &integer(3));
        let y = nerve_poset(&FinPoset::chain(1), 2);
        let z = IncidenceElement::zeta(y.level(1).clone());
        assert_eq!(convolve(&y, &z, &z).unwrap().get("0,1").unwrap(), &integer(2));
    }

    #[test]
    fn unit_and_counit() {
        let x = nerve_poset(&FinPoset::chain(2), 2);
        let e = unit(&x).unwrap();
        assert_eq!(counit(&x, &e).unwrap(), integer(3));
        let f = IncidenceElement::delta(x.level(1).clone(), 4);
        assert_eq!(convolve(&x, &e, &f).unwrap(), f);
        let point = standard_simplex(0, 2);
        assert!(unit(&point).unwrap().coeffs().iter().all(One::is_one));
    }

    #[test]
    fn mobius_of_an_edge() {
        let x = nerve_poset(&FinPoset::chain(1), 2);
        let mu = mobius_invert(&x, &IncidenceElement::zeta(x.level(1).clone())).unwrap();
        assert_eq!(mu.get("0,1").unwrap(), &integer(-1));
        assert_eq!(mu.get("0,0").unwrap(), &integer(1));
    }

    #[test]
    fn zero_is_absorbing() {
        let x = nerve_poset(&FinPoset::chain(2), 2);
        let zero = IncidenceElement::zero(x.level(1).clone());
        let z = IncidenceElement::zeta(x.level(1).clone());
        assert!(convolve(&x, &zero, &z).unwrap().is_zero());
        assert!(comultiply(&x, &zero).unwrap().is_zero());
        assert!(mobius_invert(&x, &zero).is_err());
    }
}
