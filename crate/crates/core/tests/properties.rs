use std::collections::HashSet;

use hermitian_cokernels::classify::{classify, verify_congruence};
use hermitian_cokernels::cokernel::{cokernel_type, count_automorphisms, count_surjections};
use hermitian_cokernels::experiment::stats::chi_square;
use hermitian_cokernels::experiment::{run_distribution_experiment, sample_cell_counts, ExperimentConfig};
use hermitian_cokernels::oracles::{count_perfect_hermitian_pairings, Budget};
use hermitian_cokernels::sampler::{sample_haar, sample_stream, Sampler};
use hermitian_cokernels::{ExtensionKind, ExtensionSpec, HermitianMatrix, Matrix, Partition, RingElem};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

const KINDS: [(u64, ExtensionKind, i64); 8] = [
    (2, ExtensionKind::Unramified, 1),
    (3, ExtensionKind::Unramified, 1),
    (5, ExtensionKind::Unramified, 1),
    (3, ExtensionKind::RamifiedOdd, 1),
    (3, ExtensionKind::RamifiedOdd, 2),
    (2, ExtensionKind::Ramified2TypeI, 1),
    (2, ExtensionKind::Ramified2TypeI, 3),
    (2, ExtensionKind::Ramified2TypeII, 1),
];

fn spec_at(i: usize, m: u32) -> ExtensionSpec {
    let (p, kind, u) = KINDS[i];
    ExtensionSpec::new(p, kind, u, m).unwrap()
}

fn spec_strategy(max_m: u32) -> impl Strategy<Value = ExtensionSpec> {
    (0..KINDS.len(), 1..=max_m).prop_map(|(i, m)| spec_at(i, m))
}

fn elem(spec: &ExtensionSpec) -> impl Strategy<Value = RingElem> {
    let s = *spec;
    (0..s.order()).prop_map(move |i| s.elem_at(i))
}

fn matrix(spec: ExtensionSpec, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(0..spec.order(), rows * cols).prop_map(move |v| {
        let rows_v = v.chunks(cols).map(|r| r.iter().map(|&i| spec.elem_at(i)).collect()).collect();
        Matrix::from_rows(spec, rows_v).unwrap()
    })
}

/// Product of random elementary matrices: row additions, unit scalings, swaps.
fn unimodular(spec: ExtensionSpec, n: usize, ops: &[(usize, usize, u64)]) -> Matrix {
    let mut u = Matrix::identity(spec, n);
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        let c = spec.elem_at(c % spec.order());
        if i != j {
            u.add_row_multiple(i, j, c);
        } else if spec.is_unit(c) {
            u.scale_row(i, c);
        } else {
            u.swap_rows(i, (i + 1) % n);
        }
    }
    u
}

fn hermitian(spec: ExtensionSpec, n: usize) -> impl Strategy<Value = HermitianMatrix> {
    any::<u64>().prop_map(move |seed| sample_haar(&spec, n, &mut sample_stream(seed, 0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn ring_axioms((spec, a, b, c) in spec_strategy(5).prop_flat_map(|s| (Just(s), elem(&s), elem(&s), elem(&s)))) {
        let r = spec;
        prop_assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
        prop_assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.mul(a, b), r.mul(b, a));
        prop_assert_eq!(r.add(a, b), r.add(b, a));
        prop_assert_eq!(r.add(a, r.neg(a)), r.zero());
        prop_assert_eq!(r.mul(a, r.one()), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn sigma_is_an_automorphism((spec, a, b) in spec_strategy(5).prop_flat_map(|s| (Just(s), elem(&s), elem(&s)))) {
        let r = spec;
        prop_assert_eq!(r.sigma(r.mul(a, b)), r.mul(r.sigma(a), r.sigma(b)));
        prop_assert_eq!(r.sigma(r.add(a, b)), r.add(r.sigma(a), r.sigma(b)));
        prop_assert_eq!(r.sigma(r.sigma(a)), a);
    }

    #[test]
    fn norm_is_multiplicative((spec, a, b) in spec_strategy(5).prop_flat_map(|s| (Just(s), elem(&s), elem(&s)))) {
        let r = spec;
        let m = r.modulus_x() as u128;
        let lhs = r.norm(r.mul(a, b)) as u128;
        prop_assert_eq!(lhs, r.norm(a) as u128 * r.norm(b) as u128 % m);
        // N(a) = a·σ(a), embedded as x-digit
        prop_assert_eq!(r.mul(a, r.sigma(a)), RingElem { x: r.norm(a), y: 0 });
    }

    #[test]
    fn valuation_rules((spec, a, b) in spec_strategy(6).prop_flat_map(|s| (Just(s), elem(&s), elem(&s)))) {
        let r = spec;
        if let (Some(va), Some(vb)) = (r.valuation(a), r.valuation(b)) {
            if va + vb < r.trunc() {
                prop_assert_eq!(r.valuation(r.mul(a, b)), Some(va + vb));
            }
            if let Some(vs) = r.valuation(r.add(a, b)) {
                prop_assert!(vs >= va.min(vb));
            }
        }
        prop_assert_eq!(r.valuation(a).is_none(), a.is_zero());
    }

    #[test]
    fn unit_inverse((spec, a) in spec_strategy(6).prop_flat_map(|s| (Just(s), elem(&s)))) {
        let r = spec;
        match r.invert_unit(a) {
            Ok(b) => prop_assert_eq!(r.mul(a, b), r.one()),
            Err(_) => prop_assert!(!r.is_unit(a)),
        }
    }

    #[test]
    fn trace_doubles((spec, a) in spec_strategy(6).prop_filter("ramified", |s| s.kind().is_ramified())
        .prop_flat_map(|s| (Just(s), elem(&s)))) {
        let r = spec;
        prop_assert_eq!(r.add(a, r.sigma(a)), r.from_int(2 * r.trace_map(a) as i64));
    }

    #[test]
    fn reduction_commutes((i, m, drop, xa, xb) in (0..KINDS.len(), 2..=6u32, 1..=5u32, any::<u64>(), any::<u64>())) {
        let big = spec_at(i, m);
        let small = spec_at(i, m.saturating_sub(drop).max(1));
        let (a, b) = (big.elem_at(xa % big.order()), big.elem_at(xb % big.order()));
        let red = |e| big.reduce_to(e, &small);
        prop_assert_eq!(red(big.mul(a, b)), small.mul(red(a), red(b)));
        prop_assert_eq!(red(big.add(a, b)), small.add(red(a), red(b)));
        prop_assert_eq!(red(big.sigma(a)), small.sigma(red(a)));
    }
}

/// Type of `R^n / A·R^n` from the orders of `π^k R^n + A·R^n`, each spanned
/// by enumeration.
fn brute_cokernel(a: &Matrix) -> Partition {
    let spec = *a.spec();
    let n = a.rows();
    let m = spec.trunc();
    let key = |v: &[RingElem]| v.iter().fold(0u64, |acc, &e| acc * spec.order() + spec.index_of(e));
    let span = |gens: &[Vec<RingElem>]| {
        let mut set: HashSet<u64> = HashSet::new();
        let mut vecs = vec![vec![spec.zero(); n]];
        set.insert(key(&vecs[0]));
        for g in gens {
            let mut next = Vec::new();
            for v in &vecs {
                for c in spec.elements() {
                    let w: Vec<RingElem> = v.iter().zip(g).map(|(&x, &y)| spec.add(x, spec.mul(c, y))).collect();
                    if set.insert(key(&w)) {
                        next.push(w);
                    }
                }
            }
            vecs.extend(next);
        }
        set.len() as f64
    };
    let cols: Vec<Vec<RingElem>> = (0..a.cols()).map(|j| (0..n).map(|i| a.get(i, j)).collect()).collect();
    let sizes: Vec<f64> = (0..=m)
        .map(|k| {
            let mut gens = cols.clone();
            for i in 0..n {
                let mut e = vec![spec.zero(); n];
                e[i] = spec.pi_pow(k);
                gens.push(e);
            }
            span(&gens)
        })
        .collect();
    let q = spec.q() as f64;
    let mut parts = vec![0u32; n];
    for k in 0..m as usize {
        let above = ((sizes[k] / sizes[k + 1]).ln() / q.ln()).round() as usize;
        for p in parts.iter_mut().take(above) {
            *p += 1;
        }
    }
    Partition::with_clamp(parts.into_iter().filter(|&p| p > 0).collect::<Vec<_>>(), Some(m)).unwrap()
}

fn tiny_spec() -> impl Strategy<Value = ExtensionSpec> {
    prop_oneof![
        Just(ExtensionSpec::new(2, ExtensionKind::Unramified, 1, 2).unwrap()),
        Just(ExtensionSpec::new(3, ExtensionKind::RamifiedOdd, 1, 2).unwrap()),
        Just(ExtensionSpec::new(2, ExtensionKind::Ramified2TypeI, 1, 3).unwrap()),
        Just(ExtensionSpec::new(2, ExtensionKind::Ramified2TypeII, 1, 3).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cokernel_matches_enumeration(a in (tiny_spec(), 1..=3usize, 1..=3usize)
        .prop_flat_map(|(s, r, c)| matrix(s, r, c))) {
        prop_assert_eq!(cokernel_type(&a, a.spec().trunc()).unwrap(), brute_cokernel(&a));
    }

    #[test]
    fn smith_form_invariance((a, u_ops, v_ops) in (spec_strategy(4), 1..=5usize)
        .prop_flat_map(|(s, n)| (matrix(s, n, n), prop::collection::vec((0..5usize, 0..5usize, any::<u64>()), 0..12),
            prop::collection::vec((0..5usize, 0..5usize, any::<u64>()), 0..12)))) {
        let spec = *a.spec();
        let n = a.rows();
        let (u, v) = (unimodular(spec, n, &u_ops), unimodular(spec, n, &v_ops));
        prop_assert!(u.is_unimodular() && v.is_unimodular());
        let b = u.mul(&a).unwrap().mul(&v).unwrap();
        for clamp in 1..=spec.trunc() {
            prop_assert_eq!(cokernel_type(&b, clamp).unwrap(), cokernel_type(&a, clamp).unwrap());
        }
    }

    #[test]
    fn congruence_invariance((a, ops) in (spec_strategy(4), 1..=5usize)
        .prop_flat_map(|(s, n)| (hermitian(s, n), prop::collection::vec((0..5usize, 0..5usize, any::<u64>()), 0..12)))) {
        let spec = *a.spec();
        let y = unimodular(spec, a.n(), &ops);
        let b = a.congruence(&y).unwrap();
        prop_assert_eq!(cokernel_type(&b, spec.trunc()).unwrap(), cokernel_type(&a, spec.trunc()).unwrap());
    }

    #[test]
    fn clamp_coherence(a in (spec_strategy(5), 1..=6usize).prop_flat_map(|(s, n)| hermitian(s, n))) {
        let m = a.spec().trunc();
        let full = cokernel_type(&a, m).unwrap();
        for clamp in 1..=m {
            prop_assert_eq!(cokernel_type(&a, clamp).unwrap(), full.clamped(clamp));
        }
    }

    #[test]
    fn ramified_parity(a in (spec_strategy(5).prop_filter("ramified", |s| s.kind().is_ramified()), 1..=7usize)
        .prop_flat_map(|(s, n)| hermitian(s, n))) {
        prop_assert!(cokernel_type(&a, a.spec().trunc()).unwrap().satisfies_parity_law());
    }

    #[test]
    fn sampled_matrices_are_hermitian(a in (spec_strategy(5), 1..=6usize).prop_flat_map(|(s, n)| hermitian(s, n))) {
        prop_assert!(a.as_matrix().hermitian_defect().is_none());
        for i in 0..a.n() {
            prop_assert_eq!(a.get(i, i).y, 0);
        }
    }

    #[test]
    fn classifier_sound((a, clamp) in (0..KINDS.len(), 1..=2u32, 1..=5usize)
        .prop_flat_map(|(i, clamp, n)| (hermitian(spec_at(i, 2 * clamp + 2), n), Just(clamp)))) {
        let spec = *a.spec();
        let (y, form) = classify(&a).unwrap();
        prop_assert!(verify_congruence(&a, &y, &form));
        prop_assert_eq!(form.shape_defect(&spec), None);
        let canon = form.materialize(&spec).unwrap();
        prop_assert_eq!(cokernel_type(&canon, clamp).unwrap(), cokernel_type(&a, clamp).unwrap());
    }

    #[test]
    fn surjections_onto_self_are_automorphisms((parts, q) in (prop::collection::vec(1..=3u32, 0..=4), prop::sample::select(vec![2u64, 3, 4, 5, 9]))) {
        let lambda = Partition::new(parts);
        prop_assert_eq!(count_surjections(&lambda, &lambda, q).unwrap(), count_automorphisms(&lambda, q));
    }
}

#[test]
fn pairings_vanish_exactly_off_the_parity_law() {
    let budget = Budget::default();
    for (p, kind, u) in KINDS.iter().copied().filter(|k| k.1.is_ramified()) {
        let spec = ExtensionSpec::new(p, kind, u, 1).unwrap();
        for gamma in Partition::enumerate(3, 3).into_iter().filter(|g| g.order(spec.q()) <= 64u32.into()) {
            let count = count_perfect_hermitian_pairings(&gamma, &spec, budget).unwrap();
            assert_eq!(count == 0, !gamma.satisfies_parity_law(), "{kind:?} u={u} {gamma}: {count}");
        }
    }
}

#[test]
fn haar_reduction_is_haar() {
    let big = ExtensionSpec::new(2, ExtensionKind::Unramified, 1, 3).unwrap();
    let small = big.with_truncation(1).unwrap();
    let samples = 4000u64;
    let mut off = vec![0u64; small.order() as usize];
    let mut diag = vec![0u64; 2];
    for i in 0..samples {
        let a = sample_haar(&big, 2, &mut sample_stream(99, i)).reduce_to(&small).unwrap();
        off[small.index_of(a.get(0, 1)) as usize] += 1;
        diag[a.get(1, 1).x as usize] += 1;
    }
    let uniform = |k: usize| vec![1.0 / k as f64; k];
    let s = chi_square(&off, &uniform(off.len())).unwrap();
    assert!(s.p_value > 1e-3, "{s:?}");
    let s = chi_square(&diag, &uniform(2)).unwrap();
    assert!(s.p_value > 1e-3, "{s:?}");
}

#[test]
fn counts_do_not_depend_on_threads() {
    let spec = ExtensionSpec::new(3, ExtensionKind::RamifiedOdd, 1, 2).unwrap();
    let run = |t: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
        pool.install(|| sample_cell_counts(&spec, &Sampler::Haar, 5, 2, 3000, 17).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));

    let mut cfg = ExperimentConfig::new(2, ExtensionKind::Unramified, 4);
    cfg.clamp = 2;
    cfg.samples = 1500;
    cfg.threads = Some(1);
    let a = run_distribution_experiment(&cfg).unwrap().without_timing();
    cfg.threads = Some(5);
    let b = run_distribution_experiment(&cfg).unwrap().without_timing();
    assert_eq!(a.distributions, b.distributions);
}

#[test]
fn frequencies_sum_to_one() {
    let mut cfg = ExperimentConfig::new(2, ExtensionKind::Ramified2TypeII, 5);
    cfg.clamp = 3;
    cfg.samples = 777;
    let report = run_distribution_experiment(&cfg).unwrap();
    for run in &report.distributions {
        let total = run
            .cells
            .iter()
            .fold(BigRational::zero(), |acc, c| acc + c.frequency_exact.parse::<BigRational>().unwrap());
        assert!(total.is_one(), "{total}");
    }
}
