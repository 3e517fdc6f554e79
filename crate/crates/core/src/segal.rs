//! Segal conditions for simplicial objects in finite sets, and the lax
//! associator of the algebra structure on `X₁`.
//!
//! Every square is checked by building the comparison map into the fibre
//! product explicitly: it is a bijection iff it is injective and its image
//! has the size of the fibre product.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::alg::{monotone_chains, AlgChain, AlgMorphism};
use crate::error::{input_err, internal_err, Error, Result};
use crate::finset::FinMap;
use crate::sset::{self, evaluate, SSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Form {
    /// Polygon-subdivision and unitality squares.
    Dk,
    /// Active-inert pushout squares.
    Gkt,
    /// The spine condition.
    OneSegal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// `X_n → X_{0..i,j..n} ×_{X_{ij}} X_{i..j}`.
    Subdivision,
    /// `X_{n−1} → X_n ×_{X_1} X_0` along `s_i`.
    Unitality,
    /// `X_l → X_m ×_{X_n} X_k` for an active `[n] → [m]` and an inert `[n] → [k]`.
    ActiveInert,
    /// `X_n → X_1 ×_{X_0} ⋯ ×_{X_0} X_1`.
    Spine,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Subdivision => "subdivision",
            Condition::Unitality => "unitality",
            Condition::ActiveInert => "active-inert",
            Condition::Spine => "spine",
        }
    }
}

/// A square whose comparison map is not a bijection.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub condition: Condition,
    /// The dimension of the simplex level being decomposed.
    pub n: usize,
    /// Condition parameters: `(i, j)` for subdivision, `(i)` for unitality,
    /// the active map followed by the shifts `a, b` for active-inert.
    pub params: Vec<usize>,
    /// Size of the source of the comparison map.
    pub domain: usize,
    /// Size of the fibre product.
    pub pullback: usize,
    pub injective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegalReport {
    pub form: Form,
    pub max_n: usize,
    pub passed: bool,
    /// Number of squares examined.
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl SegalReport {
    fn new(form: Form, max_n: usize, checked: usize, mut violations: Vec<Violation>) -> Self {
        violations.sort();
        SegalReport { form, max_n, passed: violations.is_empty(), checked, violations }
    }
}

fn require_dim(x: &SSet, max_n: usize) -> Result<()> {
    if max_n > x.dim() {
        return Err(Error::Truncation { what: String::from("Segal check"), required: max_n, available: x.dim() });
    }
    Ok(())
}

/// Tests whether `x ↦ (u(x), v(x))` is a bijection onto `{(a,b) : f(a) = g(b)}`.
fn comparison(domain: usize, u: impl Fn(usize) -> usize, v: impl Fn(usize) -> usize, f: &[usize], g: &[usize], over: usize) -> (bool, usize) {
    let mut left = alloc::vec![0usize; over];
    let mut right = alloc::vec![0usize; over];
    for &e in f {
        left[e] += 1;
    }
    for &e in g {
        right[e] += 1;
    }
    let pullback = left.iter().zip(&right).map(|(a, b)| a * b).sum();
    let mut seen = BTreeSet::new();
    let injective = (0..domain).all(|x| seen.insert((u(x), v(x))));
    (injective, pullback)
}

/// Values of the inclusion of `{0..i} ∪ {j..n}` into `[n]`.
fn outer(n: usize, i: usize, j: usize) -> Vec<usize> {
    (0..=i).chain(j..=n).collect()
}

fn subdivision(x: &SSet, n: usize, i: usize, j: usize) -> Option<Violation> {
    let a_map = outer(n, i, j);
    let b_map: Vec<usize> = (i..=j).collect();
    let (na, nb) = (a_map.len() - 1, j - i);
    // The edge {i, j} sits at positions (i, i+1) in A and (0, j−i) in B.
    let edge_a: Vec<usize> = (0..x.size(na)).map(|s| x.act(&[i, i + 1], na, s)).collect();
    let edge_b: Vec<usize> = (0..x.size(nb)).map(|s| x.act(&[0, nb], nb, s)).collect();
    let (injective, pullback) =
        comparison(x.size(n), |s| x.act(&a_map, n, s), |s| x.act(&b_map, n, s), &edge_a, &edge_b, x.size(1));
    let domain = x.size(n);
    (!injective || domain != pullback).then(|| Violation {
        condition: Condition::Subdivision,
        n,
        params: alloc::vec![i, j],
        domain,
        pullback,
        injective,
    })
}

fn unitality(x: &SSet, n: usize, i: usize) -> Option<Violation> {
    // X_{n−1} → X_n ×_{X_1} X_0: (s_i y, vertex i of y) against (edge (i,i+1), s_0).
    let edge: Vec<usize> = (0..x.size(n)).map(|s| x.act(&[i, i + 1], n, s)).collect();
    let degenerate: Vec<usize> = (0..x.size(0)).map(|v| x.degen(0, 0, v)).collect();
    let (injective, pullback) =
        comparison(x.size(n - 1), |y| x.degen(n - 1, i, y), |y| x.act(&[i], n - 1, y), &edge, &degenerate, x.size(1));
    let domain = x.size(n - 1);
    (!injective || domain != pullback).then(|| Violation {
        condition: Condition::Unitality,
        n,
        params: alloc::vec![i],
        domain,
        pullback,
        injective,
    })
}

/// The subdivision squares for `3 ≤ n ≤ max_n` and either `i = 0` or
/// `j = n` (all `0 ≤ i < j ≤ n` when `exhaustive`), and the unitality
/// squares for `2 ≤ n ≤ max_n`, `0 ≤ i < n`.
pub fn check_2segal_dk(x: &SSet, max_n: usize, exhaustive: bool) -> Result<SegalReport> {
    require_dim(x, max_n)?;
    let mut violations = Vec::new();
    let mut checked = 0;
    for n in 3..=max_n {
        for i in 0..n {
            for j in i + 1..=n {
                if exhaustive || i == 0 || j == n {
                    checked += 1;
                    violations.extend(subdivision(x, n, i, j));
                }
            }
        }
    }
    for n in 2..=max_n {
        for i in 0..n {
            checked += 1;
            violations.extend(unitality(x, n, i));
        }
    }
    Ok(SegalReport::new(Form::Dk, max_n, checked, violations))
}

/// Active maps `[n] → [m]`: monotone, `0 ↦ 0`, `n ↦ m`.
fn active_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    sset::monotone_tuples(n, m).into_iter().filter(|t| t[0] == 0 && t[n] == m).collect()
}

/// Every pushout of an active `f: [n] → [m]` along an inert
/// `[n] → [k] = [a + n + b]` with `k, l = a + m + b ≤ max_n`, i.e. that
/// `X_l → X_m ×_{X_n} X_k` is a bijection.
pub fn check_2segal_gkt(x: &SSet, max_n: usize) -> Result<SegalReport> {
    require_dim(x, max_n)?;
    let mut violations = Vec::new();
    let mut checked = 0;
    for n in 1..=max_n {
        for m in 0..=max_n {
            for f in active_maps(n, m) {
                for a in 0..=max_n - n {
                    for b in 0..=max_n - n - a {
                        let (k, l) = (a + n + b, a + m + b);
                        if l > max_n {
                            continue;
                        }
                        checked += 1;
                        // [m] → [l] and [k] → [l] are the legs of the pushout.
                        let to_m: Vec<usize> = (a..=a + m).collect();
                        let g: Vec<usize> = (0..=k)
                            .map(|t| if t < a { t } else if t <= a + n { a + f[t - a] } else { t - n + m })
                            .collect();
                        let inert_n: Vec<usize> = (a..=a + n).collect();
                        let along_f: Vec<usize> = (0..x.size(m)).map(|s| x.act(&f, m, s)).collect();
                        let along_inert: Vec<usize> = (0..x.size(k)).map(|s| x.act(&inert_n, k, s)).collect();
                        let (injective, pullback) = comparison(
                            x.size(l),
                            |s| x.act(&to_m, l, s),
                            |s| x.act(&g, l, s),
                            &along_f,
                            &along_inert,
                            x.size(n),
                        );
                        let domain = x.size(l);
                        if !injective || domain != pullback {
                            let mut params = f.clone();
                            params.extend([a, b]);
                            violations.push(Violation {
                                condition: Condition::ActiveInert,
                                n: l,
                                params,
                                domain,
                                pullback,
                                injective,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(SegalReport::new(Form::Gkt, max_n, checked, violations))
}

/// The spine maps `X_n → X_1 ×_{X_0} ⋯ ×_{X_0} X_1` for `2 ≤ n ≤ max_n`.
pub fn check_1segal(x: &SSet, max_n: usize) -> Result<SegalReport> {
    require_dim(x, max_n)?;
    let mut violations = Vec::new();
    let (source, target): (Vec<usize>, Vec<usize>) =
        (0..x.size(1)).map(|e| (x.face(1, 1, e), x.face(1, 0, e))).unzip();
    for n in 2..=max_n {
        // Count spine paths of length n by dynamic programming over end vertices.
        let mut paths = alloc::vec![1usize; x.size(0)];
        for _ in 0..n {
            let mut next = alloc::vec![0usize; x.size(0)];
            for e in 0..x.size(1) {
                next[target[e]] += paths[source[e]];
            }
            paths = next;
        }
        let pullback: usize = paths.iter().sum();
        let mut seen = BTreeSet::new();
        let injective = (0..x.size(n)).all(|s| seen.insert((0..n).map(|t| x.act(&[t, t + 1], n, s)).collect::<Vec<_>>()));
        let domain = x.size(n);
        if !injective || domain != pullback {
            violations.push(Violation { condition: Condition::Spine, n, params: Vec::new(), domain, pullback, injective });
        }
    }
    Ok(SegalReport::new(Form::OneSegal, max_n, max_n.saturating_sub(1), violations))
}

/// The lax associator `δ: X(α(qp)) → X(α(q) ⊔_{α(Y)} α(p))` of a composable
/// pair `p: X → Y`, `q: Y → Z`.
#[derive(Clone, Debug)]
pub struct AssociatorCheck {
    pub chain: AlgChain,
    pub delta: FinMap,
    pub delta_domain_size: usize,
    pub delta_codomain_size: usize,
    pub bijective: bool,
}

/// The simplicial-set side of an associator: the gluings for a composable
/// pair `p: X → Y`, `q: Y → 1`, independent of the simplicial object they
/// are evaluated in.
#[derive(Clone, Debug)]
pub struct AssociatorShape {
    chain: AlgChain,
    needed: usize,
    component: sset::OplaxComponent,
    /// Level-1 indices in `α(q)` of the spine edges, one per `y`.
    spine_edges: Vec<usize>,
    /// Per `y`: the summand `Δ^{n_y}` of `α(p)`, its map into the gluing
    /// and the index of its long edge.
    pieces: Vec<(SSet, sset::SSetMap, usize)>,
}

impl AssociatorShape {
    pub fn new(p: &AlgMorphism, q: &AlgMorphism) -> Result<Self> {
        if q.target().len() != 1 {
            return Err(input_err!("the associator is computed for pairs into a point"));
        }
        let chain = AlgChain::new(alloc::vec![p.clone(), q.clone()])?;
        let needed = chain.composite(0, 2)?.max_fiber().max(q.max_fiber()).max(1);
        // Every simplicial set below is `needed`-skeletal, so maps out of it
        // are determined by, and freely extend from, levels `≤ needed`.
        let component = sset::oplax_component(p, q, needed)?;
        let (aq, ap) = (sset::alpha(q, needed)?, sset::alpha(p, needed)?);
        let spine_edges = (0..q.source().len()).map(|y| aq.spine.apply(1, aq.source.simplex(y, &[0, 1]))).collect();
        let pieces = ap
            .apex
            .parts()
            .iter()
            .enumerate()
            .map(|(k, (tag, n))| {
                let single = sset::SimplexSum::new(alloc::vec![(tag.clone(), *n)], needed)?;
                let into_gluing = single.map_to(&ap.apex, &[(k, (0..=*n).collect())])?.then(&component.gluing.injections[1])?;
                Ok((single.sset().clone(), into_gluing, single.simplex(0, &[0, *n])))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AssociatorShape { chain, needed, component, spine_edges, pieces })
    }

    /// The truncation level an evaluating simplicial object must have.
    pub fn needed_dim(&self) -> usize {
        self.needed
    }

    /// Computes `δ` by restriction along the oplax component, and checks
    /// that the evaluation on the gluing is the fibre product
    /// `X(α(q)) ×_{X(Y·Δ¹)} ∏_y X(Δ^{n_y})`, counted fibrewise over `X(α(q))`.
    pub fn check(&self, x: &SSet) -> Result<AssociatorCheck> {
        if self.needed > x.dim() {
            return Err(Error::Truncation { what: String::from("associator"), required: self.needed, available: x.dim() });
        }
        let component = &self.component;
        let domain = evaluate(x, component.map.target())?;
        let codomain = evaluate(x, &component.gluing.apex)?;
        let delta = domain.restrict(&component.map, &codomain)?;

        // Finite-limit preservation: X(A ⊔_C B) ≅ X(A) ×_{X(C)} X(B).
        let q_side = component.gluing.injections[0].clone();
        let eq = evaluate(x, q_side.source())?;
        let mut keys: Vec<Vec<usize>> = codomain.restrict(&q_side, &eq)?.table().iter().map(|&a| alloc::vec![a]).collect();
        let mut fibre_counts = Vec::with_capacity(self.pieces.len());
        for (simplex, into_gluing, long) in &self.pieces {
            let ev = evaluate(x, simplex)?;
            for (key, b) in keys.iter_mut().zip(codomain.restrict(into_gluing, &ev)?.table()) {
                key.push(*b);
            }
            let mut counts = alloc::vec![0usize; x.size(1)];
            for b in 0..ev.len() {
                counts[ev.value(b, 1, *long)] += 1;
            }
            fibre_counts.push(counts);
        }
        let pullback: usize = (0..eq.len())
            .map(|a| self.spine_edges.iter().zip(&fibre_counts).map(|(&e, c)| c[eq.value(a, 1, e)]).product::<usize>())
            .sum();
        let distinct = keys.iter().collect::<BTreeSet<_>>().len();
        if distinct != keys.len() || keys.len() != pullback {
            return Err(internal_err!("evaluation does not preserve the gluing pushout"));
        }

        Ok(AssociatorCheck {
            chain: self.chain.clone(),
            delta_domain_size: delta.source().len(),
            delta_codomain_size: delta.target().len(),
            bijective: delta.is_bijection(),
            delta,
        })
    }
}

/// `δ` for the composable pair `p`, `q`.
pub fn associator_delta(x: &SSet, p: &AlgMorphism, q: &AlgMorphism) -> Result<AssociatorCheck> {
    AssociatorShape::new(p, q)?.check(x)
}

/// Outcome of [`check_algebra`].
#[derive(Clone, Debug)]
pub struct AlgebraCertificate {
    pub holds: bool,
    /// Number of chains examined.
    pub chains: usize,
    /// Number of distinct composable pairs into a point whose `δ` was computed.
    pub pairs: usize,
    /// A composable pair with non-bijective `δ`, if any.
    pub witness: Option<AssociatorCheck>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub bijective: bool,
    pub codomain_empty: bool,
}

/// Whether a product of maps with the given verdicts is a bijection.
pub fn product_verdict(factors: &[Verdict]) -> Verdict {
    let codomain_empty = factors.iter().any(|v| v.codomain_empty);
    Verdict { bijective: codomain_empty || factors.iter().all(|v| v.bijective), codomain_empty }
}

/// The chain data of [`check_algebra`], built once and reusable across
/// simplicial objects.
///
/// Chains are monotone, so a pair into a point is determined by the fibre
/// sizes of its first morphism. A pair `(p, q)` with target `Z` glues
/// fibrewise, so its `δ` is the product over `z ∈ Z` of the `δ` of the
/// restrictions to `q⁻¹(z)`; it is bijective iff every factor is, or some
/// factor has empty codomain.
#[derive(Clone, Debug)]
pub struct AlgebraChecker {
    max_fiber: usize,
    short: Vec<Vec<usize>>,
    /// Every composable pair of composites of a longer chain, as the list of
    /// its fibrewise shapes.
    long: BTreeSet<Vec<Vec<usize>>>,
    chains: usize,
    shapes: BTreeMap<Vec<usize>, AssociatorShape>,
}

impl AlgebraChecker {
    pub fn new(max_fiber: usize, max_chain: usize) -> Result<Self> {
        if max_chain < 2 {
            return Err(input_err!("chains must have at least two morphisms"));
        }
        let shape_of = |p: &AlgMorphism, q: &AlgMorphism| -> Vec<Vec<usize>> {
            (0..q.target().len()).map(|z| q.fiber(z).iter().map(|&y| p.fiber(y).len()).collect()).collect()
        };
        let mut short = Vec::new();
        let mut chains = 0;
        for chain in monotone_chains(2, max_fiber, Some(1)) {
            chains += 1;
            let ms = chain.morphisms();
            short.push(shape_of(&ms[0], &ms[1]).remove(0));
        }
        let mut long = BTreeSet::new();
        for len in 3..=max_chain {
            for chain in monotone_chains(len, max_fiber, Some(1)) {
                chains += 1;
                for i in 0..len {
                    for j in i + 1..len {
                        for k in j + 1..=len {
                            long.insert(shape_of(&chain.composite(i, j)?, &chain.composite(j, k)?));
                        }
                    }
                }
            }
        }
        let mut shapes = BTreeMap::new();
        for sizes in short.iter().chain(long.iter().flatten()) {
            if !shapes.contains_key(sizes) {
                let shape = AssociatorShape::new(&AlgMorphism::monotone(sizes), &AlgMorphism::monotone(&[sizes.len()]))?;
                shapes.insert(sizes.clone(), shape);
            }
        }
        Ok(AlgebraChecker { max_fiber, short, long, chains, shapes })
    }

    /// See [`check_algebra`].
    pub fn check(&self, x: &SSet) -> Result<AlgebraCertificate> {
        require_dim(x, self.max_fiber.max(1))?;
        let mut verdicts: BTreeMap<&[usize], Verdict> = BTreeMap::new();
        let mut witness = None;
        let mut point = |sizes: &[usize]| -> Result<Verdict> {
            if let Some(&v) = verdicts.get(sizes) {
                return Ok(v);
            }
            let (key, shape) = self.shapes.get_key_value(sizes).ok_or_else(|| internal_err!("missing shape"))?;
            let check = shape.check(x)?;
            let v = Verdict { bijective: check.bijective, codomain_empty: check.delta_codomain_size == 0 };
            if !v.bijective && witness.is_none() {
                witness = Some(check);
            }
            verdicts.insert(key.as_slice(), v);
            Ok(v)
        };
        let mut short_ok = true;
        for sizes in &self.short {
            short_ok &= point(sizes)?.bijective;
        }
        let mut long_ok = true;
        for pair in &self.long {
            let factors = pair.iter().map(|s| point(s)).collect::<Result<Vec<_>>>()?;
            long_ok &= product_verdict(&factors).bijective;
        }
        if short_ok && !long_ok {
            return Err(internal_err!("a long chain fails although every two-step chain has bijective associator"));
        }
        Ok(AlgebraCertificate { holds: short_ok, chains: self.chains, pairs: self.shapes.len(), witness })
    }
}

/// `δ` is bijective for every chain `X₀ → X₁ → 1` with `|X₀|, |X₁| ≤
/// max_fiber`, and for every composable pair of composites of every chain
/// `X₀ → ⋯ → X_r → 1` with `r < max_chain` and all sizes `≤ max_fiber`,
/// the latter reduced to fibres as described at [`AlgebraChecker`].
/// A longer chain failing while every two-step chain passes would
/// contradict that reduction and is reported as an internal error.
pub fn check_algebra(x: &SSet, max_fiber: usize, max_chain: usize) -> Result<AlgebraCertificate> {
    AlgebraChecker::new(max_fiber, max_chain)?.check(x)
}
