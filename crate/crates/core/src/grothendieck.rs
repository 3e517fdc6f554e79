//! Chains of simplicial operators `[n_k] → ⋯ → [n_0]` and their Grothendieck
//! posets `M_φ`.
//!
//! For a chain `φ` of length `k`, `M_φ` has elements `(a,b)` with `b ∈ [k]`
//! and `a ∈ [n_b]`, labelled `(a,b)`, and `(a,b) ≤ (a',b')` iff `b ≥ b'` and
//! `φ_{b,b'}(a) ≤ a'`. The projection `p_φ` sends `(a,b)` to `φ_{b,0}(a)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input_err, internal_err, validation_err, Result};
use crate::finset::FinSet;
use crate::poset::{FinPoset, PosetMap};

/// A monotone map `[m] → [n]` given by its values.
pub fn is_monotone(values: &[usize], n: usize) -> bool {
    values.windows(2).all(|w| w[0] <= w[1]) && values.iter().all(|&v| v <= n)
}

/// Endpoint preserving: `0 ↦ 0` and `m ↦ n`.
pub fn is_active(values: &[usize], n: usize) -> bool {
    values.first() == Some(&0) && values.last() == Some(&n)
}

/// A subinterval inclusion `i ↦ i + c`.
pub fn is_inert(values: &[usize]) -> bool {
    values.windows(2).all(|w| w[1] == w[0] + 1)
}

/// A `k`-simplex of the nerve of `Δᵒᵖ`: objects `[n_0], …, [n_k]` and
/// monotone maps `maps[i]: [n_{i+1}] → [n_i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaChain {
    sizes: Vec<usize>,
    maps: Vec<Vec<usize>>,
}

impl DeltaChain {
    pub fn new(sizes: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Self> {
        if sizes.is_empty() || maps.len() + 1 != sizes.len() {
            return Err(input_err!("a chain of length k needs k+1 sizes and k maps"));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.len() != sizes[i + 1] + 1 || !is_monotone(m, sizes[i]) {
                return Err(input_err!("map {i} is not a monotone map [{}] → [{}]", sizes[i + 1], sizes[i]));
            }
        }
        Ok(DeltaChain { sizes, maps })
    }

    /// Chain given only by its maps; `maps[i]` must map into `[n_i]`, which
    /// is read off as the largest value unless `n_0` is given.
    pub fn from_maps(n0: usize, maps: Vec<Vec<usize>>) -> Result<Self> {
        let mut sizes = vec![n0];
        for m in &maps {
            if m.is_empty() {
                return Err(input_err!("simplicial operators have nonempty domain"));
            }
            sizes.push(m.len() - 1);
        }
        Self::new(sizes, maps)
    }

    /// The constant chain on `[n]` of length `k`.
    pub fn constant(n: usize, k: usize) -> Self {
        DeltaChain { sizes: vec![n; k + 1], maps: vec![(0..=n).collect(); k] }
    }

    /// The length-one chain given by a single operator `[m] → [n]`.
    pub fn single(n: usize, map: Vec<usize>) -> Result<Self> {
        Self::from_maps(n, vec![map])
    }

    /// Length `k`.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// `n_b`.
    pub fn size(&self, b: usize) -> usize {
        self.sizes[b]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    /// `φ_{j',j}: [n_{j'}] → [n_j]` for `j ≤ j'`.
    pub fn composite(&self, from: usize, to: usize) -> Vec<usize> {
        assert!(to <= from && from <= self.len(), "composite needs to ≤ from ≤ k");
        (0..=self.sizes[from]).map(|a| self.apply(from, to, a)).collect()
    }

    /// `φ_{from,to}(a)`.
    pub fn apply(&self, from: usize, to: usize, a: usize) -> usize {
        (to..from).rev().fold(a, |x, i| self.maps[i][x])
    }

    /// `φ ∘ γ` for a monotone `γ: [m] → [k]`.
    pub fn precompose(&self, gamma: &[usize]) -> Result<DeltaChain> {
        if gamma.is_empty() || !is_monotone(gamma, self.len()) {
            return Err(input_err!("γ is not a monotone map into [{}]", self.len()));
        }
        let sizes = gamma.iter().map(|&g| self.sizes[g]).collect();
        let maps = gamma.windows(2).map(|w| self.composite(w[1], w[0])).collect();
        DeltaChain::new(sizes, maps)
    }

    /// Whether every map is endpoint preserving.
    pub fn is_active(&self) -> bool {
        self.maps.iter().enumerate().all(|(i, m)| is_active(m, self.sizes[i]))
    }

    /// Whether every map is a subinterval inclusion.
    pub fn is_inert(&self) -> bool {
        self.maps.iter().all(|m| is_inert(m))
    }
}

/// `M_φ` with its projection onto `[n_0]`.
#[derive(Clone, Debug)]
pub struct GrothendieckPoset {
    pub chain: DeltaChain,
    pub poset: FinPoset,
    /// `points[i] = (a, b)` for element `i`.
    pub points: Vec<(usize, usize)>,
    pub projection: PosetMap,
}

impl GrothendieckPoset {
    pub fn index(&self, a: usize, b: usize) -> usize {
        self.points.iter().position(|&p| p == (a, b)).expect("point of M_φ")
    }
}

fn points(phi: &DeltaChain) -> Vec<(usize, usize)> {
    (0..=phi.len()).flat_map(|b| (0..=phi.size(b)).map(move |a| (a, b))).collect()
}

fn point_set(points: &[(usize, usize)]) -> FinSet {
    FinSet::new(points.iter().map(|(a, b)| format!("({a},{b})"))).expect("points are distinct")
}

/// `M_φ` and `p_φ: M_φ → [n_0]`.
pub fn grothendieck_m(phi: &DeltaChain) -> GrothendieckPoset {
    let points = points(phi);
    let poset = FinPoset::from_fn(point_set(&points), |x, y| {
        let ((a, b), (a2, b2)) = (points[x], points[y]);
        b >= b2 && phi.apply(b, b2, a) <= a2
    })
    .expect("the Grothendieck construction of a chain is a poset");
    let table = points.iter().map(|&(a, b)| phi.apply(b, 0, a)).collect();
    let projection = PosetMap::new(poset.clone(), FinPoset::chain(phi.size(0)), table).expect("p_φ is monotone");
    GrothendieckPoset { chain: phi.clone(), poset, points, projection }
}

/// `V_φ`: the relations `(a,b) ≤ (φ_{b,b'}(a), b')`.
pub fn vertical_subposet(phi: &DeltaChain) -> FinPoset {
    let points = points(phi);
    FinPoset::from_fn(point_set(&points), |x, y| {
        let ((a, b), (a2, b2)) = (points[x], points[y]);
        b >= b2 && phi.apply(b, b2, a) == a2
    })
    .expect("vertical relations form a poset")
}

/// `Λ_{M_φ}` as a full subposet of `Tw(M_φ)`: the intervals
/// `[(a,b);(φ_{b,b'}(a'),b')]` with `|b'−b| ≤ 1` and `|a'−a| ≤ 1`.
/// Returns the subposet and the indices of its members in `Tw(M_φ)`.
pub fn wedge_subposet(phi: &DeltaChain) -> (FinPoset, Vec<usize>) {
    let m = grothendieck_m(phi);
    let intervals = m.poset.intervals();
    let members: Vec<usize> = intervals
        .iter()
        .enumerate()
        .filter(|&(_, &(x, y))| {
            let ((a, b), (c, b2)) = (m.points[x], m.points[y]);
            b.abs_diff(b2) <= 1
                && (0..=phi.size(b)).any(|a2| a2.abs_diff(a) <= 1 && phi.apply(b, b2, a2) == c)
        })
        .map(|(i, _)| i)
        .collect();
    let (sub, _) = m.poset.twisted_arrow().full_subposet(&members).expect("members are distinct");
    (sub, members)
}

/// `M(η): M_{φ'} → M_φ, (a,b) ↦ (η_b(a), b)` for a natural `η: φ' ⇒ φ`.
pub fn reindex_eta(phi_prime: &DeltaChain, phi: &DeltaChain, eta: &[Vec<usize>]) -> Result<PosetMap> {
    if phi_prime.len() != phi.len() || eta.len() != phi.len() + 1 {
        return Err(input_err!("η needs one component per level of chains of equal length"));
    }
    for (b, e) in eta.iter().enumerate() {
        if e.len() != phi_prime.size(b) + 1 || !is_monotone(e, phi.size(b)) {
            return Err(input_err!("η_{b} is not a monotone map [{}] → [{}]", phi_prime.size(b), phi.size(b)));
        }
    }
    for b in 0..phi.len() {
        for a in 0..=phi_prime.size(b + 1) {
            if phi.maps[b][eta[b + 1][a]] != eta[b][phi_prime.maps[b][a]] {
                return Err(input_err!("η is not natural at level {b}"));
            }
        }
    }
    let (src, tgt) = (grothendieck_m(phi_prime), grothendieck_m(phi));
    let table = src.points.iter().map(|&(a, b)| tgt.index(eta[b][a], b)).collect();
    PosetMap::new(src.poset, tgt.poset, table)
}

/// `M(γ): M_{φγ} → M_φ, (a,b) ↦ (a, γ(b))`, together with `φγ`.
pub fn reindex_gamma(phi: &DeltaChain, gamma: &[usize]) -> Result<(DeltaChain, PosetMap)> {
    let pg = phi.precompose(gamma)?;
    let (src, tgt) = (grothendieck_m(&pg), grothendieck_m(phi));
    let table = src.points.iter().map(|&(a, b)| tgt.index(a, gamma[b])).collect();
    Ok((pg, PosetMap::new(src.poset, tgt.poset, table)?))
}

/// Checks that `M_φ` is presented by the diagram `L(φ)` on `I(k)`.
///
/// `I(k)` has objects `(j, J)` with `∅ ≠ J ⊆ [j]`, and `L(φ)(j, J) =
/// [n_j] × Jᵒᵖ`. For `j' ≤ j` and `J ⊆ J' ⊆ [j']` the transition map is
/// `(a, b) ↦ (φ_{j,j'}(a), b)`. The cocone `(a, b) ↦ (φ_{j,b}(a), b)` must
/// be monotone and compatible with the transitions, its images must cover
/// `M_φ`, and the order of `M_φ` must be the transitive closure of the image
/// relations.
pub fn colimit_certificate(phi: &DeltaChain) -> Result<()> {
    let m = grothendieck_m(phi);
    let k = phi.len();
    let mut covered = vec![false; m.poset.len()];
    let mut generated: Vec<(usize, usize)> = Vec::new();
    let cocone = |j: usize, a: usize, b: usize| m.index(phi.apply(j, b, a), b);
    for j in 0..=k {
        for mask in 1usize..(1 << (j + 1)) {
            let members: Vec<usize> = (0..=j).filter(|b| mask >> b & 1 == 1).collect();
            let cell: Vec<(usize, usize)> =
                members.iter().flat_map(|&b| (0..=phi.size(j)).map(move |a| (a, b))).collect();
            for &(a, b) in &cell {
                covered[cocone(j, a, b)] = true;
                for &(a2, b2) in &cell {
                    // The order of [n_j] × Jᵒᵖ.
                    if a <= a2 && b >= b2 {
                        let (x, y) = (cocone(j, a, b), cocone(j, a2, b2));
                        if !m.poset.le(x, y) {
                            return Err(internal_err!("cocone component at ({j},{mask:#b}) is not monotone"));
                        }
                        generated.push((x, y));
                    }
                }
                for j2 in 0..=j {
                    if members.iter().all(|&b| b <= j2) && cocone(j2, phi.apply(j, j2, a), b) != cocone(j, a, b) {
                        return Err(internal_err!("cocone does not commute with L(φ)"));
                    }
                }
            }
        }
    }
    if let Some(x) = covered.iter().position(|c| !c) {
        return Err(validation_err!("{} is not in the image of the cocone", m.poset.label(x)));
    }
    let closure = FinPoset::generated(m.poset.elements().clone(), &generated)?;
    if closure != m.poset {
        return Err(validation_err!("the cocone images do not generate the order of M_φ"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn active_2_1() -> DeltaChain {
        DeltaChain::single(2, vec![0, 2]).unwrap()
    }

    fn cover_labels(p: &FinPoset) -> Vec<(&str, &str)> {
        let mut v: Vec<(&str, &str)> = p.covers().into_iter().map(|(a, b)| (p.label(a), p.label(b))).collect();
        v.sort();
        v
    }

    #[test]
    fn active_example_poset() {
        let m = grothendieck_m(&active_2_1());
        assert_eq!(m.poset.len(), 5);
        assert_eq!(
            cover_labels(&m.poset),
            [("(0,0)", "(1,0)"), ("(0,1)", "(0,0)"), ("(0,1)", "(1,1)"), ("(1,0)", "(2,0)"), ("(1,1)", "(2,0)")]
        );
    }

    #[test]
    fn active_example_vertical() {
        let v = vertical_subposet(&active_2_1());
        assert_eq!(cover_labels(&v), [("(0,1)", "(0,0)"), ("(1,1)", "(2,0)")]);
    }

    #[test]
    fn active_example_wedge() {
        let (wedge, _) = wedge_subposet(&active_2_1());
        assert_eq!(wedge.len(), 11);
        for label in ["[(0,1);(2,0)]", "[(0,1);(0,0)]", "[(1,1);(2,0)]", "[(1,0);(2,0)]"] {
            assert!(wedge.index_of(label).is_some(), "{label}");
        }
    }

    #[test]
    fn constant_chains_are_products() {
        for n in 0..=3 {
            for k in 0..=3 {
                let m = grothendieck_m(&DeltaChain::constant(n, k));
                let expected = FinPoset::chain(n).product(&FinPoset::chain(k).opposite());
                assert!(m.poset.is_isomorphic(&expected), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn wedge_of_single_level() {
        for n in 0..5 {
            assert_eq!(wedge_subposet(&DeltaChain::constant(n, 0)).0.len(), 2 * n + 1);
        }
        let (w, _) = wedge_subposet(&DeltaChain::constant(1, 0));
        assert!(w.is_isomorphic(&FinPoset::chain(1).twisted_arrow()));
    }

    #[test]
    fn single_level_is_the_ordinal() {
        let m = grothendieck_m(&DeltaChain::constant(3, 0));
        assert!(m.poset.is_isomorphic(&FinPoset::chain(3)));
        assert!(vertical_subposet(&DeltaChain::constant(3, 0)).covers().is_empty());
    }

    #[test]
    fn identity_eta_is_identity() {
        let phi = active_2_1();
        let eta = vec![vec![0, 1, 2], vec![0, 1]];
        let f = reindex_eta(&phi, &phi, &eta).unwrap();
        assert_eq!(f, PosetMap::identity(&grothendieck_m(&phi).poset));
        assert!(reindex_eta(&phi, &phi, &[vec![0, 1, 2], vec![1, 1]]).is_err());
    }

    #[test]
    fn gamma_face_and_constant() {
        let phi = DeltaChain::from_maps(2, vec![vec![0, 2], vec![1, 1]]).unwrap();
        // d⁰: [1] → [2] skipping level 0.
        let (pg, f) = reindex_gamma(&phi, &[1, 2]).unwrap();
        assert_eq!(pg.sizes(), &[1, 1]);
        let m = grothendieck_m(&phi);
        for (i, &(a, b)) in grothendieck_m(&pg).points.iter().enumerate() {
            assert_eq!(m.points[f.apply(i)], (a, b + 1));
        }
        // γ constant at 0: M_{φγ} = [2] × [1]ᵒᵖ into the 0-column.
        let (pg, f) = reindex_gamma(&phi, &[0, 0]).unwrap();
        assert_eq!(pg, DeltaChain::constant(2, 1));
        assert!(f.table().iter().all(|&i| m.points[i].1 == 0));
    }

    #[test]
    fn colimit_certificates() {
        assert!(colimit_certificate(&active_2_1()).is_ok());
        assert!(colimit_certificate(&DeltaChain::constant(2, 2)).is_ok());
    }
}
