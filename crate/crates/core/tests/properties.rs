use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use segal_core::alg::{compose_alg, decompose, is_alg_isomorphism, AlgMorphism};
use segal_core::finset::{compose_spans, pullback, pushout, span_isomorphism, FinMap, FinSet, Span};
use segal_core::hall::{convolve, mobius_invert, unit, IncidenceElement};
use segal_core::oplax::{oplax_to_twisted, twisted_to_oplax, FinSets, TwistedFunctor};
use segal_core::poset::FinPoset;
use segal_core::segal::{check_1segal, check_2segal_dk, check_2segal_gkt};
use segal_core::sset::{evaluate, glue, nerve_poset, standard_simplex, Identification};

fn set(n: usize) -> FinSet {
    FinSet::range(n)
}

fn map(source: usize, target: usize) -> impl Strategy<Value = FinMap> {
    prop::collection::vec(0..target.max(1), source)
        .prop_map(move |t| FinMap::new(set(source), set(target), t).unwrap())
}

/// A cospan `A → C ← B` with `C` nonempty.
fn cospan() -> impl Strategy<Value = (FinMap, FinMap)> {
    (0usize..5, 0usize..5, 1usize..4).prop_flat_map(|(a, b, c)| (map(a, c), map(b, c)))
}

/// A random poset on `0..n`, generated by pairs `i < j` so that the labels
/// form a linear extension.
fn poset(max: usize) -> impl Strategy<Value = FinPoset> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .zip(bits)
                .filter_map(|(p, b)| b.then_some(p))
                .collect();
            FinPoset::generated(set(n), &pairs).unwrap()
        })
    })
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn element(carrier: &FinSet, values: &[i64]) -> IncidenceElement {
    let coeffs = (0..carrier.len()).map(|i| rational(values[i % values.len()])).collect();
    IncidenceElement::new(carrier.clone(), coeffs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pullback_is_the_set_of_matching_pairs((f, g) in cospan()) {
        let pb = pullback(&f, &g).unwrap();
        let naive: Vec<(usize, usize)> = (0..f.source().len())
            .flat_map(|a| (0..g.source().len()).map(move |b| (a, b)))
            .filter(|&(a, b)| f.apply(a) == g.apply(b))
            .collect();
        let got: Vec<(usize, usize)> = (0..pb.apex.len()).map(|k| (pb.first.apply(k), pb.second.apply(k))).collect();
        prop_assert_eq!(got, naive);
        prop_assert!(pb.mediate(&pb.first, &pb.second).unwrap().is_bijection());
    }

    #[test]
    fn pushout_classes_are_connected_components((f, g) in (0usize..5, 1usize..4, 1usize..4).prop_flat_map(|(a, b, c)| (map(a, b), map(a, c)))) {
        let po = pushout(&f, &g).unwrap();
        for a in 0..f.source().len() {
            prop_assert_eq!(po.first.apply(f.apply(a)), po.second.apply(g.apply(a)));
        }
        // Every class is hit, and the cocone into the apex mediates to the identity.
        let mut hit = vec![false; po.apex.len()];
        for k in po.first.table().iter().chain(po.second.table()) {
            hit[*k] = true;
        }
        prop_assert!(hit.into_iter().all(|h| h));
        prop_assert!(po.mediate(&po.first, &po.second).unwrap().is_bijection());
    }

    #[test]
    fn span_composition_is_associative_up_to_isomorphism(
        legs in (1usize..4, 1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(a, b, c, d)| {
            (0usize..4, 0usize..4, 0usize..4).prop_flat_map(move |(s, t, u)| {
                (map(s, a), map(s, b), map(t, b), map(t, c), map(u, c), map(u, d))
            })
        })
    ) {
        let (l1, r1, l2, r2, l3, r3) = legs;
        let (s, t, u) = (Span::new(l1, r1).unwrap(), Span::new(l2, r2).unwrap(), Span::new(l3, r3).unwrap());
        let left = compose_spans(&compose_spans(&s, &t).unwrap(), &u).unwrap();
        let right = compose_spans(&s, &compose_spans(&t, &u).unwrap()).unwrap();
        prop_assert!(span_isomorphism(&left, &right).is_some());
        let id = Span::identity(s.left().target());
        prop_assert!(span_isomorphism(&compose_spans(&id, &s).unwrap(), &s).is_some());
    }

    #[test]
    fn covers_match_the_naive_definition(p in poset(6)) {
        let n = p.len();
        let naive: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| p.lt(a, b) && !(0..n).any(|c| p.lt(a, c) && p.lt(c, b)))
            .collect();
        let mut covers = p.covers();
        covers.sort();
        prop_assert_eq!(covers, naive);
    }

    #[test]
    fn twisted_arrow_order(p in poset(5)) {
        let tw = p.twisted_arrow();
        let intervals = p.intervals();
        prop_assert_eq!(tw.len(), p.relations().len());
        for a in 0..tw.len() {
            for b in 0..tw.len() {
                let ((x, y), (u, v)) = (intervals[a], intervals[b]);
                prop_assert_eq!(tw.le(a, b), p.le(x, u) && p.le(v, y));
            }
        }
        prop_assert!(p.opposite().twisted_arrow().is_isomorphic(&tw));
        prop_assert!(p.opposite().opposite().is_isomorphic(&p));
    }

    #[test]
    fn nerves_satisfy_the_simplicial_identities(p in poset(5)) {
        let x = nerve_poset(&p, 3);
        for m in 2..=3 {
            for i in 0..=m {
                for j in i + 1..=m {
                    for s in 0..x.size(m) {
                        prop_assert_eq!(x.face(m - 1, i, x.face(m, j, s)), x.face(m - 1, j - 1, x.face(m, i, s)));
                    }
                }
            }
        }
        for m in 0..3 {
            for i in 0..=m {
                for s in 0..x.size(m) {
                    prop_assert_eq!(x.face(m + 1, i, x.degen(m, i, s)), s);
                    prop_assert_eq!(x.face(m + 1, i + 1, x.degen(m, i, s)), s);
                }
            }
        }
        // Nerves are 1-Segal, hence 2-Segal in both forms.
        prop_assert!(check_1segal(&x, 3).unwrap().passed);
        prop_assert!(check_2segal_dk(&x, 3, true).unwrap().passed);
        prop_assert!(check_2segal_gkt(&x, 3).unwrap().passed);
    }

    #[test]
    fn evaluation_at_a_simplex_recovers_the_level(p in poset(4), n in 0usize..3) {
        let x = nerve_poset(&p, 3);
        prop_assert_eq!(evaluate(&x, &standard_simplex(n, 3)).unwrap().len(), x.size(n));
    }

    #[test]
    fn convolution_on_nerves(p in poset(4), a in prop::collection::vec(-3i64..4, 1..5), b in prop::collection::vec(-3i64..4, 1..5), c in prop::collection::vec(-3i64..4, 1..5)) {
        let x = nerve_poset(&p, 3);
        let edges = x.level(1);
        let (f, g, h) = (element(edges, &a), element(edges, &b), element(edges, &c));
        let fg_h = convolve(&x, &convolve(&x, &f, &g).unwrap(), &h).unwrap();
        let f_gh = convolve(&x, &f, &convolve(&x, &g, &h).unwrap()).unwrap();
        prop_assert_eq!(fg_h, f_gh);
        let e = unit(&x).unwrap();
        prop_assert_eq!(&convolve(&x, &e, &f).unwrap(), &f);
        prop_assert_eq!(&convolve(&x, &f, &e).unwrap(), &f);
        let zeta = IncidenceElement::zeta(edges.clone());
        let mu = mobius_invert(&x, &zeta).unwrap();
        prop_assert_eq!(&convolve(&x, &mu, &zeta).unwrap(), &e);
        prop_assert_eq!(&convolve(&x, &zeta, &mu).unwrap(), &e);
        // Philip Hall: μ(x, y) is the reduced Euler characteristic of the open interval.
        for z in 0..edges.len() {
            let (lo, hi) = (x.face(1, 1, z), x.face(1, 0, z));
            let inner: Vec<usize> = (0..p.len()).filter(|&w| p.lt(lo, w) && p.lt(w, hi)).collect();
            let expected = if lo == hi { 1 } else { euler_of_chains(&p, &inner) };
            prop_assert_eq!(mu.coeff(z), &rational(expected));
        }
    }

    #[test]
    fn functors_on_twisted_arrows_round_trip(p in poset(4), weights in prop::collection::vec(0usize..4, 8)) {
        let g = product_functor(&p, &weights);
        let f = twisted_to_oplax(&g).unwrap();
        prop_assert!(oplax_to_twisted(&f).unwrap().same_as(&g));
    }

    #[test]
    fn alg_composites_decompose(sizes in prop::collection::vec(0usize..3, 1..4), more in prop::collection::vec(0usize..3, 1..3)) {
        // p: Σ sizes → |sizes|, q: |sizes| → |more| whenever Σ more = |sizes|.
        let p = AlgMorphism::monotone(&sizes);
        let total: usize = more.iter().sum();
        prop_assume!(total == sizes.len());
        let q = AlgMorphism::monotone(&more);
        let pq = compose_alg(&p, &q).unwrap();
        prop_assert_eq!(pq.source().len(), sizes.iter().sum::<usize>());
        let (r, a, b) = decompose(&pq).unwrap();
        prop_assert!(is_alg_isomorphism(&pq, &r, &a, &b));
        let id = AlgMorphism::identity(p.source());
        let left = compose_alg(&id, &p).unwrap();
        prop_assert!(is_alg_isomorphism(&left, &p, &FinMap::identity(p.source()), &FinMap::identity(p.target())));
    }

    #[test]
    fn glued_edges_are_identified(dims in prop::collection::vec(1usize..4, 2..4), pick in any::<u64>()) {
        // Identify the edge 0→1 of every summand with that of the first.
        let ids: Vec<Identification> = (1..dims.len())
            .map(|k| Identification { left: (0, vec![0, 1]), right: (k, vec![0, 1]) })
            .collect();
        let g = glue(&dims, &ids, 3).unwrap();
        let x = g.apex();
        let vertices: usize = dims.iter().map(|d| d + 1).sum::<usize>() - 2 * (dims.len() - 1);
        prop_assert_eq!(x.size(0), vertices);
        let k = (pick as usize) % dims.len();
        let edge = x.act(&[0, 1], dims[k], g.top(k));
        prop_assert_eq!(edge, x.act(&[0, 1], dims[0], g.top(0)));
        let top = dims.iter().copied().max().unwrap().min(3);
        prop_assert!(x.nondegenerate_counts()[top] > 0);
    }
}

/// `Σ_k (−1)^(k+1) c_k`, where `c_k` counts the chains of `k` elements of
/// `inner`, the empty chain included.
fn euler_of_chains(p: &FinPoset, inner: &[usize]) -> i64 {
    fn extend(p: &FinPoset, inner: &[usize], last: Option<usize>, len: usize) -> i64 {
        let sign = if len.is_multiple_of(2) { -1 } else { 1 };
        let mut total = sign;
        for &w in inner {
            if last.is_none_or(|l| p.lt(l, w)) {
                total += extend(p, inner, Some(w), len + 1);
            }
        }
        total
    }
    extend(p, inner, None, 0)
}

/// `F[x;y] = ({s : h(s) ≤ x} ∪ {*}) × ({s : h'(s) ≥ y} ∪ {*})` with the
/// maps collapsing to `*` whatever leaves the subsets; `h`, `h'` come from
/// `weights`.
fn product_functor(p: &FinPoset, weights: &[usize]) -> TwistedFunctor<FinSets> {
    let n = p.len();
    let below = |x: usize| -> Vec<Option<usize>> {
        std::iter::once(None).chain((0..weights.len()).filter(|&s| p.le(weights[s] % n, x)).map(Some)).collect()
    };
    let above = |y: usize| -> Vec<Option<usize>> {
        std::iter::once(None).chain((0..weights.len()).filter(|&s| p.le(y, (weights[s] + s) % n)).map(Some)).collect()
    };
    let intervals = p.intervals();
    let elements: Vec<Vec<(Option<usize>, Option<usize>)>> = intervals
        .iter()
        .map(|&(x, y)| below(x).into_iter().flat_map(|a| above(y).into_iter().map(move |b| (a, b))).collect())
        .collect();
    let objects: Vec<FinSet> = elements.iter().map(|e| set(e.len())).collect();
    let tw = p.twisted_arrow();
    let mut maps = BTreeMap::new();
    for (a, b) in tw.relations() {
        let (u, v) = intervals[b];
        let table = elements[a]
            .iter()
            .map(|&(s, t)| {
                // Only the target interval decides what survives.
                let s2 = s.filter(|&s| p.le(weights[s] % n, u));
                let t2 = t.filter(|&t| p.le(v, (weights[t] + t) % n));
                elements[b].iter().position(|&e| e == (s2, t2)).unwrap()
            })
            .collect();
        maps.insert((a, b), FinMap::new(objects[a].clone(), objects[b].clone(), table).unwrap());
    }
    TwistedFunctor::new(p.clone(), objects, maps).unwrap()
}

#[test]
fn zeta_squared_counts_intervals() {
    let x = nerve_poset(&FinPoset::chain(3), 2);
    let zeta = IncidenceElement::zeta(x.level(1).clone());
    let z2 = convolve(&x, &zeta, &zeta).unwrap();
    for e in 0..x.size(1) {
        let len = x.face(1, 0, e) - x.face(1, 1, e);
        assert_eq!(z2.coeff(e), &rational(len as i64 + 1));
    }
}
