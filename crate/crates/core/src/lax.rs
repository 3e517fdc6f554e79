//! The simplex-level data of the lax functor `α`.
//!
//! For a chain `θ: X_0 → ⋯ → X_n` in `Alg` and a chain `φ` of simplicial
//! operators with `φ(0) = [n]`, the pyramid `ᾱ(θ)` is the functor on
//! `Tw([n])` obtained from the normal oplax functor
//! `i ↦ X_i·Δ¹`, `(i<j) ↦ α(θ_{ij})`, `Φ = oplax components`, with values in
//! the opposite of simplicial sets. It is then restricted along
//! `Tw(p_φ): Tw(M_φ) → Tw([n])`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use alloc::collections::BTreeMap;

use crate::alg::{AlgChain, AlgMorphism};
use crate::error::{input_err, internal_err, Error, Result};
use crate::grothendieck::{grothendieck_m, reindex_gamma, vertical_subposet, DeltaChain, GrothendieckPoset};
use crate::oplax::{oplax_to_twisted, OpMor, OplaxFunctor, SSetOp, SpanCategory, SpanOf, TwistedFunctor};
use crate::poset::{FinPoset, PosetMap};
use crate::sset::{self, alpha, alpha_object, oplax_component, SSet};

#[derive(Clone, Debug)]
pub struct AlphaSimplex {
    chain: AlgChain,
    phi: DeltaChain,
    dim: usize,
    oplax: OplaxFunctor<SSetOp>,
    pyramid: TwistedFunctor<SSetOp>,
    m: GrothendieckPoset,
    /// `Tw(p_φ)`.
    tw_projection: PosetMap,
}

/// Failures of properties that hold by construction are bugs.
fn as_bug(e: Error) -> Error {
    match e {
        Error::Validation(msg) => internal_err!("{msg}"),
        other => other,
    }
}

/// Builds `ᾱ(θ)` and its reindexing along `p_φ`, verifying oplax coherence
/// and vertical constancy.
pub fn build_alpha(chain: &AlgChain, phi: &DeltaChain, dim: usize) -> Result<AlphaSimplex> {
    let n = chain.len();
    if phi.size(0) != n {
        return Err(input_err!("a chain of length {n} needs φ(0) = [{n}], got [{}]", phi.size(0)));
    }
    let d = FinPoset::chain(n);
    let objects = (0..=n).map(|i| Ok(alpha_object(chain.object_at(i), dim)?.sset().clone())).collect::<Result<Vec<_>>>()?;
    let mut spans = BTreeMap::new();
    let mut composites = BTreeMap::new();
    for i in 0..=n {
        for j in i + 1..=n {
            let p = chain.composite(i, j)?;
            let a = alpha(&p, dim)?;
            spans.insert((i, j), SpanOf::<SSetOp> { left: OpMor(a.spine), right: OpMor(a.longedge) });
            composites.insert((i, j), p);
        }
    }
    let mut comparison = BTreeMap::new();
    for i in 0..=n {
        for j in i + 1..=n {
            for l in j + 1..=n {
                let c = oplax_component(&composites[&(i, j)], &composites[&(j, l)], dim)?;
                comparison.insert((i, j, l), OpMor(c.map));
            }
        }
    }
    let oplax = OplaxFunctor::new(d, objects, spans, comparison).map_err(as_bug)?;
    let pyramid = oplax_to_twisted(&oplax).map_err(as_bug)?;
    let m = grothendieck_m(phi);
    let tw_projection = m.projection.twisted();
    let simplex = AlphaSimplex { chain: chain.clone(), phi: phi.clone(), dim, oplax, pyramid, m, tw_projection };
    simplex.check_vertical_constancy()?;
    Ok(simplex)
}

impl AlphaSimplex {
    pub fn chain(&self) -> &AlgChain {
        &self.chain
    }

    pub fn phi(&self) -> &DeltaChain {
        &self.phi
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn oplax(&self) -> &OplaxFunctor<SSetOp> {
        &self.oplax
    }

    pub fn pyramid(&self) -> &TwistedFunctor<SSetOp> {
        &self.pyramid
    }

    pub fn grothendieck(&self) -> &GrothendieckPoset {
        &self.m
    }

    /// `Tw(M_φ)`.
    pub fn reindexed_domain(&self) -> &FinPoset {
        self.tw_projection.source()
    }

    /// The reindexed functor on an element of `Tw(M_φ)`.
    pub fn reindexed_object(&self, a: usize) -> &SSet {
        &self.pyramid.objects()[self.tw_projection.apply(a)]
    }

    /// The reindexed functor on a relation `a ≤ b` of `Tw(M_φ)`.
    pub fn reindexed_map(&self, a: usize, b: usize) -> &OpMor {
        self.pyramid.map_at(self.tw_projection.apply(a), self.tw_projection.apply(b))
    }

    /// Every relation of `Tw(V_φ)` goes to an isomorphism.
    pub fn check_vertical_constancy(&self) -> Result<()> {
        let v = vertical_subposet(&self.phi);
        let tw = self.reindexed_domain();
        let intervals = self.m.poset.intervals();
        for (a, b) in tw.relations() {
            let ((x, y), (x2, y2)) = (intervals[a], intervals[b]);
            if v.le(x, x2) && v.le(y2, y) && !SSetOp::is_iso(self.reindexed_map(a, b)) {
                return Err(internal_err!("vertical relation {} → {} is not sent to an isomorphism", tw.label(a), tw.label(b)));
            }
        }
        Ok(())
    }
}

/// `ι*θ` for a monotone `ι: [m] → [n]`: the chain `X_{ι(0)} → ⋯ → X_{ι(m)}`
/// of composites, with identities where `ι` repeats a value.
pub fn pull_back_chain(chain: &AlgChain, iota: &[usize]) -> Result<AlgChain> {
    if iota.is_empty() || !crate::grothendieck::is_monotone(iota, chain.len()) {
        return Err(input_err!("ι is not a monotone map into [{}]", chain.len()));
    }
    if iota.len() == 1 {
        return Ok(AlgChain::object(chain.object_at(iota[0]).clone()));
    }
    let ms: Vec<AlgMorphism> = iota.windows(2).map(|w| chain.composite(w[0], w[1])).collect::<Result<_>>()?;
    AlgChain::new(ms)
}

/// `γ*α(θ, φ)`, computed as `α(ι*θ, φγ)` with `ι = φ_{γ(0),0}`, and
/// compared with the restriction of `α(θ, φ)` along `M(γ)`.
pub fn face_degeneracy_action(a: &AlphaSimplex, gamma: &[usize]) -> Result<AlphaSimplex> {
    let (pg, m_gamma) = reindex_gamma(&a.phi, gamma)?;
    let iota = a.phi.composite(gamma[0], 0);
    let pulled = pull_back_chain(&a.chain, &iota)?;
    let b = build_alpha(&pulled, &pg, a.dim)?;
    let tw_gamma = m_gamma.twisted();
    let tw = b.reindexed_domain();
    for s in 0..tw.len() {
        if b.reindexed_object(s) != a.reindexed_object(tw_gamma.apply(s)) {
            return Err(internal_err!("γ*α and α(γ*) differ on {}", tw.label(s)));
        }
    }
    for (s, t) in tw.relations() {
        let lhs = b.reindexed_map(s, t);
        let rhs = a.reindexed_map(tw_gamma.apply(s), tw_gamma.apply(t));
        if !SSetOp::mor_eq(lhs, rhs) {
            return Err(internal_err!("γ*α and α(γ*) differ on {} → {}", tw.label(s), tw.label(t)));
        }
    }
    Ok(b)
}

/// Checks that `α` of a morphism-wise disjoint union of chains is the
/// coproduct of the two pyramids, object- and map-wise.
pub fn check_monoidal(first: &AlgChain, second: &AlgChain, dim: usize) -> Result<()> {
    let n = first.len();
    let phi = DeltaChain::constant(n, 0);
    let (l, r) = (build_alpha(first, &phi, dim)?, build_alpha(second, &phi, dim)?);
    let u = build_alpha(&first.disjoint_union(second)?, &phi, dim)?;
    let tw = u.pyramid().twisted().clone();
    let mut sums = Vec::with_capacity(tw.len());
    for s in 0..tw.len() {
        let c = sset::coproduct(&l.pyramid().objects()[s], &r.pyramid().objects()[s])?;
        if c.apex != u.pyramid().objects()[s] {
            return Err(internal_err!("α of a disjoint union differs from the coproduct at {}", tw.label(s)));
        }
        sums.push(c);
    }
    for (s, t) in tw.relations() {
        // The map of the union restricted to each summand is the summand's map.
        let (ls, rs) = (l.pyramid().map_at(s, t), r.pyramid().map_at(s, t));
        let expected = sums[t].mediate(&[
            ls.0.then(&sums[s].injections[0])?,
            rs.0.then(&sums[s].injections[1])?,
        ])?;
        if expected != u.pyramid().map_at(s, t).0 {
            return Err(internal_err!("α of a disjoint union differs from the coproduct on {} → {}", tw.label(s), tw.label(t)));
        }
    }
    Ok(())
}

/// Short description used in reports.
pub fn describe(a: &AlphaSimplex) -> String {
    let sizes: Vec<String> = (0..=a.chain.len()).map(|i| format!("{}", a.chain.object_at(i).len())).collect();
    format!("chain {} over φ {:?}", sizes.join("→"), a.phi.sizes())
}
