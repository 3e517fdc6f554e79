//! The category `Alg`: finite sets, and maps `p: X → Y` together with a
//! linear order on every (possibly empty) fibre `p⁻¹(y)`.
//!
//! Composition orders a composite fibre by ordered concatenation: the fibre
//! of `q ∘ p` over `z` lists, for each `y` in `q⁻¹(z)` in order, the fibre
//! `p⁻¹(y)` in order. Disjoint unions tag labels `L:`/`R:`; the n-ary union
//! [`disjoint_union_all`] tags the i-th summand with `i:`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{input_err, Result};
use crate::finset::{FinMap, FinSet};

/// A morphism of `Alg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgMorphism {
    base: FinMap,
    /// `fibers[y]` lists `p⁻¹(y)` in its chosen order.
    fibers: Vec<Vec<usize>>,
}

impl AlgMorphism {
    /// `fibers[y]` must enumerate exactly `base⁻¹(y)`, each element once.
    pub fn new(base: FinMap, fibers: Vec<Vec<usize>>) -> Result<Self> {
        if fibers.len() != base.target().len() {
            return Err(input_err!("{} fibre orders given for a target of size {}", fibers.len(), base.target().len()));
        }
        let mut seen = alloc::vec![false; base.source().len()];
        for (y, fiber) in fibers.iter().enumerate() {
            for &x in fiber {
                if x >= seen.len() || base.apply(x) != y {
                    return Err(input_err!("fibre order over {:?} lists an element outside the fibre", base.target().label(y)));
                }
                if core::mem::replace(&mut seen[x], true) {
                    return Err(input_err!("fibre order over {:?} repeats an element", base.target().label(y)));
                }
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(input_err!("{:?} is missing from its fibre order", base.source().label(x)));
        }
        Ok(AlgMorphism { base, fibers })
    }

    /// Fibre orders given by labels, keyed by target label. Missing keys are empty fibres.
    pub fn from_label_orders(base: FinMap, orders: &BTreeMap<String, Vec<String>>) -> Result<Self> {
        let mut fibers = alloc::vec![Vec::new(); base.target().len()];
        for (y, xs) in orders {
            let yi = base.target().index_of(y).ok_or_else(|| input_err!("order given for {y:?}, which is not in the target"))?;
            fibers[yi] = xs
                .iter()
                .map(|x| base.source().index_of(x).ok_or_else(|| input_err!("{x:?} is not in the source")))
                .collect::<Result<_>>()?;
        }
        Self::new(base, fibers)
    }

    /// Fibres inherit the order of the source.
    pub fn with_source_order(base: FinMap) -> Self {
        let fibers = (0..base.target().len()).map(|y| base.fiber(y)).collect();
        AlgMorphism { base, fibers }
    }

    pub fn identity(set: &FinSet) -> Self {
        AlgMorphism { base: FinMap::identity(set), fibers: (0..set.len()).map(|i| alloc::vec![i]).collect() }
    }

    /// The order-preserving map `{0..n-1} → {0..k-1}` whose consecutive fibres
    /// have the given sizes.
    pub fn monotone(fiber_sizes: &[usize]) -> Self {
        let n: usize = fiber_sizes.iter().sum();
        let mut table = Vec::with_capacity(n);
        let mut fibers = Vec::with_capacity(fiber_sizes.len());
        for (y, &size) in fiber_sizes.iter().enumerate() {
            fibers.push((table.len()..table.len() + size).collect());
            table.extend(core::iter::repeat_n(y, size));
        }
        let base = FinMap::new(FinSet::range(n), FinSet::range(fiber_sizes.len()), table).expect("monotone table in range");
        AlgMorphism { base, fibers }
    }

    /// The multiplication `m: 2 → 1`.
    pub fn multiplication() -> Self {
        Self::monotone(&[2])
    }

    pub fn base(&self) -> &FinMap {
        &self.base
    }

    pub fn source(&self) -> &FinSet {
        self.base.source()
    }

    pub fn target(&self) -> &FinSet {
        self.base.target()
    }

    pub fn fiber(&self, y: usize) -> &[usize] {
        &self.fibers[y]
    }

    pub fn fibers(&self) -> &[Vec<usize>] {
        &self.fibers
    }

    pub fn max_fiber(&self) -> usize {
        self.fibers.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// 1-based position of `x` within its fibre.
    pub fn rank(&self, x: usize) -> usize {
        let y = self.base.apply(x);
        1 + self.fibers[y].iter().position(|&e| e == x).expect("x lies in its own fibre")
    }

    pub fn is_identity_like(&self) -> bool {
        self.fibers.iter().all(|f| f.len() == 1)
    }
}

/// `q ∘ p`, fibres ordered by concatenation.
pub fn compose_alg(p: &AlgMorphism, q: &AlgMorphism) -> Result<AlgMorphism> {
    if p.target() != q.source() {
        return Err(input_err!("Alg morphisms are not composable"));
    }
    let base = p.base.then(&q.base)?;
    let fibers = q.fibers.iter().map(|qf| qf.iter().flat_map(|&y| p.fibers[y].iter().copied()).collect()).collect();
    Ok(AlgMorphism { base, fibers })
}

/// `p ⊔ q` on `L:`/`R:`-tagged labels.
pub fn disjoint_union(p: &AlgMorphism, q: &AlgMorphism) -> AlgMorphism {
    disjoint_union_tagged(&[("L", p), ("R", q)])
}

/// n-ary disjoint union with summand `i` tagged `i:`.
pub fn disjoint_union_all(parts: &[AlgMorphism]) -> AlgMorphism {
    let tags: Vec<String> = (0..parts.len()).map(|i| i.to_string()).collect();
    let tagged: Vec<(&str, &AlgMorphism)> = tags.iter().map(String::as_str).zip(parts.iter()).collect();
    disjoint_union_tagged(&tagged)
}

fn disjoint_union_tagged(parts: &[(&str, &AlgMorphism)]) -> AlgMorphism {
    let source = FinSet::new(parts.iter().flat_map(|(t, p)| p.source().iter().map(move |l| format!("{t}:{l}"))))
        .expect("tagged labels are distinct");
    let target = FinSet::new(parts.iter().flat_map(|(t, p)| p.target().iter().map(move |l| format!("{t}:{l}"))))
        .expect("tagged labels are distinct");
    let (mut table, mut fibers) = (Vec::new(), Vec::new());
    let (mut xo, mut yo) = (0, 0);
    for (_, p) in parts {
        table.extend(p.base.table().iter().map(|&y| y + yo));
        fibers.extend(p.fibers.iter().map(|f| f.iter().map(|&x| x + xo).collect::<Vec<_>>()));
        xo += p.source().len();
        yo += p.target().len();
    }
    AlgMorphism { base: FinMap::new(source, target, table).expect("offsets stay in range"), fibers }
}

/// The restriction `p⁻¹(y) → {y}` with the inherited order.
pub fn fiber_restriction(p: &AlgMorphism, y: &str) -> Result<AlgMorphism> {
    let yi = p.target().index_of(y).ok_or_else(|| input_err!("{y:?} is not in the target"))?;
    let fiber = &p.fibers[yi];
    let source = FinSet::new(fiber.iter().map(|&x| p.source().label(x).to_string()))?;
    let base = FinMap::new(source, FinSet::singleton(y), alloc::vec![0; fiber.len()])?;
    Ok(AlgMorphism { base, fibers: alloc::vec![(0..fiber.len()).collect()] })
}

/// The pair `(p, q)` restricted over `z`: `p⁻¹(q⁻¹(z)) → q⁻¹(z) → {z}`.
pub fn restrict_over(p: &AlgMorphism, q: &AlgMorphism, z: &str) -> Result<(AlgMorphism, AlgMorphism)> {
    if p.target() != q.source() {
        return Err(input_err!("Alg morphisms are not composable"));
    }
    let qz = fiber_restriction(q, z)?;
    let zi = q.target().index_of(z).expect("checked by fiber_restriction");
    let ys = &q.fibers[zi];
    let source = FinSet::new(ys.iter().flat_map(|&y| p.fibers[y].iter().map(|&x| p.source().label(x).to_string())))?;
    let table = ys.iter().enumerate().flat_map(|(r, &y)| core::iter::repeat_n(r, p.fibers[y].len())).collect();
    let base = FinMap::new(source, qz.source().clone(), table)?;
    let mut fibers = Vec::with_capacity(ys.len());
    let mut offset = 0;
    for &y in ys {
        fibers.push((offset..offset + p.fibers[y].len()).collect());
        offset += p.fibers[y].len();
    }
    Ok((AlgMorphism { base, fibers }, qz))
}

/// Writes `p` as `(⊔_y p|_{p⁻¹(y)}) ∘ σ` for a bijection `σ`.
///
/// Returns the n-ary disjoint union of the fibre restrictions together with
/// the bijection from `p.source()` onto its source and the bijection from
/// `p.target()` onto its target.
pub fn decompose(p: &AlgMorphism) -> Result<(AlgMorphism, FinMap, FinMap)> {
    let parts = p
        .target()
        .iter()
        .map(|y| fiber_restriction(p, y))
        .collect::<Result<Vec<_>>>()?;
    let union = disjoint_union_all(&parts);
    let mut source_table = alloc::vec![0; p.source().len()];
    let mut offset = 0;
    for fiber in &p.fibers {
        for (r, &x) in fiber.iter().enumerate() {
            source_table[x] = offset + r;
        }
        offset += fiber.len();
    }
    let sigma = FinMap::new(p.source().clone(), union.source().clone(), source_table)?;
    let tau = FinMap::new(p.target().clone(), union.target().clone(), (0..p.target().len()).collect())?;
    Ok((union, sigma, tau))
}

/// Whether `(a, b)` carry `p` to `q`: `b ∘ p = q ∘ a` and `a` preserves the fibre orders.
pub fn is_alg_isomorphism(p: &AlgMorphism, q: &AlgMorphism, a: &FinMap, b: &FinMap) -> bool {
    if !a.is_bijection() || !b.is_bijection() {
        return false;
    }
    let (Ok(l), Ok(r)) = (p.base.then(b), a.then(&q.base)) else { return false };
    if l != r {
        return false;
    }
    (0..p.target().len()).all(|y| {
        let mapped: Vec<usize> = p.fibers[y].iter().map(|&x| a.apply(x)).collect();
        mapped == q.fibers[b.apply(y)]
    })
}

/// A composable string `X₀ → X₁ → ⋯ → X_k` in `Alg`; `k = 0` is a bare object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgChain {
    start: FinSet,
    morphisms: Vec<AlgMorphism>,
}

impl AlgChain {
    pub fn new(morphisms: Vec<AlgMorphism>) -> Result<Self> {
        let start = morphisms.first().ok_or_else(|| input_err!("a chain needs at least one morphism"))?.source().clone();
        for w in morphisms.windows(2) {
            if w[0].target() != w[1].source() {
                return Err(input_err!("chain morphisms are not composable"));
            }
        }
        Ok(AlgChain { start, morphisms })
    }

    /// The length-zero chain on a single object.
    pub fn object(set: FinSet) -> Self {
        AlgChain { start: set, morphisms: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    pub fn morphisms(&self) -> &[AlgMorphism] {
        &self.morphisms
    }

    /// `X_i`.
    pub fn object_at(&self, i: usize) -> &FinSet {
        if i == 0 { &self.start } else { self.morphisms[i - 1].target() }
    }

    /// The composite `X_i → X_j` for `i ≤ j`, the identity when `i = j`.
    pub fn composite(&self, i: usize, j: usize) -> Result<AlgMorphism> {
        if i > j || j > self.len() {
            return Err(input_err!("no composite from {i} to {j} in a chain of length {}", self.len()));
        }
        let mut acc = AlgMorphism::identity(self.object_at(i));
        for p in &self.morphisms[i..j] {
            acc = compose_alg(&acc, p)?;
        }
        Ok(acc)
    }

    /// Largest set appearing in the chain.
    pub fn max_object(&self) -> usize {
        (0..=self.len()).map(|i| self.object_at(i).len()).max().unwrap_or(0)
    }

    /// Morphism-wise disjoint union of two chains of equal length.
    pub fn disjoint_union(&self, other: &AlgChain) -> Result<AlgChain> {
        if self.len() != other.len() {
            return Err(input_err!("chains of different lengths"));
        }
        if self.is_empty() {
            let (set, _, _) = crate::finset::coproduct(&self.start, &other.start);
            return Ok(AlgChain::object(set));
        }
        AlgChain::new(self.morphisms.iter().zip(&other.morphisms).map(|(p, q)| disjoint_union(p, q)).collect())
    }
}

/// All weak compositions of `n` into `parts` parts, in lexicographic order.
pub fn weak_compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if n == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if parts == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=n {
            prefix.push(first);
            go(n - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, parts, &mut Vec::new(), &mut out);
    out
}

/// Every chain of `len` order-preserving morphisms with naturally ordered
/// fibres whose objects all have at most `max_size` elements. When
/// `final_size` is given the last object has exactly that size.
///
/// Every chain in `Alg` is isomorphic to one of these (relabel each object
/// backwards along the chain so that fibres become consecutive blocks).
pub fn monotone_chains(len: usize, max_size: usize, final_size: Option<usize>) -> Vec<AlgChain> {
    let finals: Vec<usize> = match final_size {
        Some(s) => alloc::vec![s],
        None => (0..=max_size).collect(),
    };
    let mut out = Vec::new();
    for last in finals {
        // Build backwards: the morphism into an object of size `k` is a weak
        // composition of the previous object's size into `k` parts.
        let mut partial: Vec<(usize, Vec<AlgMorphism>)> = alloc::vec![(last, Vec::new())];
        for _ in 0..len {
            let mut next = Vec::new();
            for (k, tail) in &partial {
                for n in 0..=max_size {
                    for comp in weak_compositions(n, *k) {
                        let mut ms = alloc::vec![AlgMorphism::monotone(&comp)];
                        ms.extend(tail.iter().cloned());
                        next.push((n, ms));
                    }
                }
            }
            partial = next;
        }
        for (size, ms) in partial {
            out.push(if ms.is_empty() { AlgChain::object(FinSet::range(size)) } else { AlgChain::new(ms).expect("built composable") });
        }
    }
    out
}
