//! Acceptance run: one PASS/FAIL line per criterion. Seeds and tolerances are
//! fixed here and nowhere else.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hermitian_cokernels::classify::{classify, verify_congruence, Cell};
use hermitian_cokernels::closed_forms::{count_invertible_hermitian, count_invertible_symmetric, TheoryContext};
use hermitian_cokernels::cokernel::{cokernel_type, count_automorphisms, count_surjections};
use hermitian_cokernels::experiment::{
    run_distribution_experiment, run_moment_experiment, run_universality_sweep, sample_cell_counts, ExperimentConfig,
};
use hermitian_cokernels::oracles::{
    automorphisms_by_extension, brute_force_automorphisms, brute_force_invertible_count, brute_force_surjection_count,
    exhaustive_character_check, pairing_classes, Budget, MatrixField,
};
use hermitian_cokernels::sampler::{sample_haar, sample_stream, EntryDistribution, Sampler};
use hermitian_cokernels::{ExtensionKind, ExtensionSpec, Matrix, Partition};
use num_bigint::BigUint;

const SEED: u64 = 2026;
const Z_BAND: f64 = 3.0;

const C1_LIMIT: Duration = Duration::from_secs(10);
const C2_LIMIT: Duration = Duration::from_secs(60);
const C2_SAMPLES: u64 = 100_000;
const C3_LIMIT: Duration = Duration::from_secs(300);
const C3_SAMPLES: u64 = 50_000;
const C3_N: u32 = 8;
const C3_CLAMP: u32 = 2;
const C3_MIN_PROB: f64 = 0.01;
const C4_LIMIT: Duration = Duration::from_secs(300);
const C4_SAMPLES: u64 = 100_000;
const C4_N: u32 = 12;
const C5_LIMIT: Duration = Duration::from_secs(600);
const C5_SAMPLES: u64 = 20_000;
const C5_LADDER: [u32; 3] = [4, 8, 16];
const C5_RESIDUES: [f64; 2] = [0.7, 0.3];
const C5_TV_CAP: f64 = 0.06;
const C5_SE_FACTOR: f64 = 2.0;
const C6_LIMIT: Duration = Duration::from_secs(60);
const C6_SAMPLES: u64 = 10_000;
const C6_N: u32 = 8;
const C6_CLAMP: u32 = 5;
const C7_LIMIT: Duration = Duration::from_secs(300);
const C7_PAIRING_ORDER: u32 = 64;
const C7_AUT_ORDER: u32 = 1 << 12;
const C7_LITERAL_BUDGET: u128 = 1 << 22;
const C7_SUR_ORDER: u32 = 64;
const C8_LIMIT: Duration = Duration::from_secs(60);
const C9_LIMIT: Duration = Duration::from_secs(300);
const C9_SAMPLES: u64 = 1_000;
const C9_CLAMP: u32 = 2;
const C9_N: usize = 6;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(cond: bool, failures: &mut Vec<String>, what: impl FnOnce() -> String) {
    if !cond {
        failures.push(what());
    }
}

fn finish(failures: Vec<String>, elapsed: Duration, limit: Duration, summary: String) -> Outcome {
    let in_time = elapsed <= limit;
    let mut detail = format!("{summary}; {:.1}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs());
    if !failures.is_empty() {
        detail.push_str(&format!("; {} failure(s): {}", failures.len(), failures.join(" | ")));
    }
    Outcome { pass: failures.is_empty() && in_time, detail }
}

fn spec(p: u64, kind: ExtensionKind, m: u32) -> ExtensionSpec {
    ExtensionSpec::new(p, kind, 1, m).unwrap()
}

fn counting_identities() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let budget = Budget::unlimited();
    for (n, want) in [(1usize, 1u32), (2, 10), (3, 280)] {
        let brute = brute_force_invertible_count(n, 2, MatrixField::Hermitian, budget).unwrap().count;
        let closed = count_invertible_hermitian(n as u32, 2).unwrap();
        check(brute == want as u128 && closed == want.into(), &mut f, || {
            format!("hermitian n={n}: {brute} / {closed}")
        });
    }
    for p in [2u64, 3] {
        for n in 1..=3usize {
            let brute = brute_force_invertible_count(n, p, MatrixField::Symmetric, budget).unwrap().count;
            let closed = count_invertible_symmetric(n as u32, p).unwrap();
            check(closed == BigUint::from(brute), &mut f, || format!("symmetric n={n} p={p}: {brute} / {closed}"));
        }
    }
    check(count_invertible_symmetric(2, 2).unwrap() == 4u32.into(), &mut f, || "symmetric 2,2 ≠ 4".into());
    check(count_invertible_symmetric(2, 3).unwrap() == 18u32.into(), &mut f, || "symmetric 2,3 ≠ 18".into());
    finish(f, start.elapsed(), C1_LIMIT, "hermitian n≤3 at p=2, symmetric n≤3 at p∈{2,3}".into())
}

fn finite_n_exactness() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut notes = Vec::new();
    for (p, kind, exact, value) in
        [(2u64, ExtensionKind::Unramified, "5/8", 0.625), (3, ExtensionKind::RamifiedOdd, "2/3", 2.0 / 3.0)]
    {
        let mut cfg = ExperimentConfig::new(p, kind, 2);
        cfg.samples = C2_SAMPLES;
        cfg.seed = SEED;
        let report = run_distribution_experiment(&cfg).unwrap();
        let cell = report.distributions[0].cells.iter().find(|c| c.cell.is_empty()).unwrap();
        let se = (value * (1.0 - value) / C2_SAMPLES as f64).sqrt();
        let dev = (cell.frequency - value).abs();
        notes.push(format!("{kind} p={p}: {:.5} vs {exact} (z={:+.2})", cell.frequency, (cell.frequency - value) / se));
        check(cell.theory_finite_n_exact.as_deref() == Some(exact), &mut f, || {
            format!("{kind}: theory {:?}", cell.theory_finite_n_exact)
        });
        check(dev <= Z_BAND * se, &mut f, || format!("{kind}: |Δ| = {dev:.5} > {:.5}", Z_BAND * se));
    }
    finish(f, start.elapsed(), C2_LIMIT, notes.join(", "))
}

fn distribution_convergence() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for (p, kind) in [(2u64, ExtensionKind::Unramified), (3, ExtensionKind::RamifiedOdd)] {
        let mut cfg = ExperimentConfig::new(p, kind, C3_N);
        cfg.clamp = C3_CLAMP;
        cfg.samples = C3_SAMPLES;
        cfg.seed = SEED;
        let report = run_distribution_experiment(&cfg).unwrap();
        let ctx = TheoryContext::new(spec(p, kind, 1), 40).unwrap();
        let mut covered = 0.0;
        for c in &report.distributions[0].cells {
            let Some(t) = c.theory_finite_n else { continue };
            covered += t;
            if t < C3_MIN_PROB {
                continue;
            }
            checked += 1;
            let z = c.z_score.unwrap_or(f64::INFINITY);
            worst = worst.max(z.abs());
            check(z.abs() <= Z_BAND, &mut f, || format!("{kind} {}: z = {z:+.2}", c.cell));
            if c.cell.largest() < C3_CLAMP {
                let direct = ctx.finite_n_haar_probability(&c.cell.unclamped(), C3_N).unwrap();
                check(c.theory_finite_n_exact.as_deref() == Some(direct.to_string().as_str()), &mut f, || {
                    format!("{kind} {}: routes disagree", c.cell)
                });
            }
        }
        // every cell of probability ≥ 0.01 must carry theory
        check(covered > 1.0 - C3_MIN_PROB, &mut f, || format!("{kind}: theory covers only {covered:.4}"));
    }
    finish(f, start.elapsed(), C3_LIMIT, format!("{checked} cells ≥ {C3_MIN_PROB}, max |z| = {worst:.2}"))
}

fn moments() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut notes = Vec::new();
    let cases = [
        (
            2u64,
            ExtensionKind::Unramified,
            1u32,
            vec![(Partition::new([1]), 2.0, 0.05), (Partition::new([1, 1]), 16.0, 0.10)],
        ),
        (3, ExtensionKind::RamifiedOdd, 2, vec![(Partition::new([1]), 1.0, 0.05), (Partition::new([2]), 3.0, 0.10)]),
    ];
    for (p, kind, clamp, targets) in cases {
        let mut cfg = ExperimentConfig::new(p, kind, C4_N);
        cfg.clamp = clamp;
        cfg.samples = C4_SAMPLES;
        cfg.seed = SEED;
        let mus: Vec<Partition> = targets.iter().map(|t| t.0.clone()).collect();
        let report = run_moment_experiment(&cfg, &mus).unwrap();
        for (row, (mu, want, band)) in report.moments[0].moments.iter().zip(&targets) {
            let rel = (row.mean - want).abs() / want;
            notes.push(format!("{kind} {mu}: {:.3} (±{:.0}%)", row.mean, rel * 100.0));
            check(row.closed_form == *want, &mut f, || format!("{kind} {mu}: closed form {}", row.closed_form));
            check(rel <= *band, &mut f, || format!("{kind} {mu}: {:.3} off {want} by {:.1}%", row.mean, rel * 100.0));
        }
    }
    finish(f, start.elapsed(), C4_LIMIT, notes.join(", "))
}

fn universality() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let skew = EntryDistribution::new(C5_RESIDUES.to_vec()).unwrap();
    let eps = Sampler::Eps { dist_y: skew.clone(), dist_z: skew };
    let mut cfg = ExperimentConfig::new(2, ExtensionKind::Unramified, C5_LADDER[0]);
    cfg.n_ladder = C5_LADDER.to_vec();
    cfg.samples = C5_SAMPLES;
    cfg.seed = SEED;
    cfg.samplers = vec![Sampler::Haar, eps.clone()];
    let report = run_universality_sweep(&cfg).unwrap();
    let s = report.sweep.iter().find(|s| s.sampler == eps.label()).unwrap();
    let (first, last) = (&s.points[0], &s.points[s.points.len() - 1]);
    let band = C5_SE_FACTOR * first.se.hypot(last.se);
    check(last.tv < first.tv + band, &mut f, || format!("TV{} = {:.4} ≥ TV{} + {band:.4}", last.n, last.tv, first.n));
    check(last.tv < C5_TV_CAP, &mut f, || format!("TV{} = {:.4} ≥ {C5_TV_CAP}", last.n, last.tv));
    let trend: Vec<String> = s.points.iter().map(|p| format!("TV{}={:.4}±{:.4}", p.n, p.tv, p.se)).collect();
    finish(f, start.elapsed(), C5_LIMIT, trend.join(" "))
}

fn parity_law() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut total = 0;
    for (p, kind) in
        [(3u64, ExtensionKind::RamifiedOdd), (2, ExtensionKind::Ramified2TypeI), (2, ExtensionKind::Ramified2TypeII)]
    {
        let s = spec(p, kind, C6_CLAMP);
        let counts = sample_cell_counts(&s, &Sampler::Haar, C6_N, C6_CLAMP, C6_SAMPLES, SEED).unwrap();
        let bad: u64 = counts.iter().filter(|(g, _)| !g.satisfies_parity_law()).map(|(_, c)| c).sum();
        total += counts.values().sum::<u64>();
        check(bad == 0, &mut f, || format!("{kind}: {bad} violations"));
    }
    finish(f, start.elapsed(), C6_LIMIT, format!("{total} samples"))
}

fn oracle_coherence() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let budget = Budget::default();
    let mut gammas_checked = 0;
    for s in [spec(2, ExtensionKind::Unramified, 1), spec(3, ExtensionKind::RamifiedOdd, 1)] {
        let q = s.q();
        for gamma in Partition::enumerate(6, 6).into_iter().filter(|g| g.order(q) <= C7_PAIRING_ORDER.into()) {
            let c = pairing_classes(&gamma, &s, budget).unwrap();
            gammas_checked += 1;
            check(c.orbit_stabilizer_sum() == Some(c.perfect_pairings), &mut f, || {
                format!("{} {gamma}: Σ = {:?}, |Φ| = {}", s.kind(), c.orbit_stabilizer_sum(), c.perfect_pairings)
            });
            check(BigUint::from(c.automorphisms) == count_automorphisms(&gamma, q), &mut f, || {
                format!("{gamma}: |Aut|")
            });
            for class in &c.classes {
                check(class.orbit_size * class.stabilizer == c.automorphisms, &mut f, || {
                    format!("{gamma}: orbit·stab")
                });
            }
        }
    }
    let (mut auts, mut literal) = (0, 0);
    for q in [2u64, 3, 4] {
        for mu in Partition::enumerate(12, 12).into_iter().filter(|m| m.order(q) <= C7_AUT_ORDER.into()) {
            auts += 1;
            let formula = count_automorphisms(&mu, q);
            let ext = automorphisms_by_extension(&mu, q).unwrap();
            check(formula == ext, &mut f, || format!("q={q} {mu}: {formula} vs extension {ext}"));
            if let Ok(lit) = brute_force_automorphisms(&mu, q, Budget::new(C7_LITERAL_BUDGET)) {
                literal += 1;
                check(formula == BigUint::from(lit.count), &mut f, || {
                    format!("q={q} {mu}: {formula} vs literal {}", lit.count)
                });
            }
        }
    }
    let mut surs = 0;
    for q in [2u64, 3, 4] {
        let small: Vec<Partition> =
            Partition::enumerate(6, 6).into_iter().filter(|l| l.order(q) <= C7_SUR_ORDER.into()).collect();
        for lambda in &small {
            for mu in &small {
                surs += 1;
                let brute = brute_force_surjection_count(lambda, mu, q, Budget::unlimited()).unwrap().count;
                let formula = count_surjections(lambda, mu, q).unwrap();
                check(formula == BigUint::from(brute), &mut f, || {
                    format!("q={q} Sur({lambda},{mu}): {formula} vs {brute}")
                });
            }
        }
    }
    finish(
        f,
        start.elapsed(),
        C7_LIMIT,
        format!("{gammas_checked} pairing types, {auts} automorphism groups ({literal} enumerated), {surs} surjection counts"),
    )
}

fn character_identity() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut instances = 0;
    let g = Partition::new([1]);
    for (p, kind) in [
        (2u64, ExtensionKind::Unramified),
        (3, ExtensionKind::Unramified),
        (3, ExtensionKind::RamifiedOdd),
        (2, ExtensionKind::Ramified2TypeI),
        (2, ExtensionKind::Ramified2TypeII),
    ] {
        for n in 1..=2 {
            let c = exhaustive_character_check(&spec(p, kind, 1), n, &g).unwrap();
            instances += c.instances;
            check(c.agreements == c.instances, &mut f, || {
                format!("{kind} p={p} n={n}: {}/{}", c.agreements, c.instances)
            });
        }
    }
    finish(f, start.elapsed(), C8_LIMIT, format!("{instances} (F, X) pairs"))
}

fn classifier_soundness() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut blocks = 0;
    let m = 2 * C9_CLAMP + 2;
    let specs = [
        spec(2, ExtensionKind::Unramified, m),
        spec(3, ExtensionKind::Unramified, m),
        spec(3, ExtensionKind::RamifiedOdd, m),
        spec(2, ExtensionKind::Ramified2TypeI, m),
        spec(2, ExtensionKind::Ramified2TypeII, m),
    ];
    for s in specs {
        for i in 0..C9_SAMPLES {
            let a = sample_haar(&s, C9_N, &mut sample_stream(SEED, i));
            let (y, form) = match classify(&a) {
                Ok(v) => v,
                Err(e) => {
                    f.push(format!("{} #{i}: {e}", s.kind()));
                    continue;
                }
            };
            check(verify_congruence(&a, &y, &form), &mut f, || format!("{} #{i}: congruence", s.kind()));
            check(form.shape_defect(&s).is_none(), &mut f, || {
                format!("{} #{i}: {:?}", s.kind(), form.shape_defect(&s))
            });
            let canon = form.materialize(&s).unwrap();
            let same = cokernel_type(&canon, C9_CLAMP).unwrap() == cokernel_type(&a, C9_CLAMP).unwrap();
            check(same, &mut f, || format!("{} #{i}: cokernel changed", s.kind()));
            for cell in &form.cells {
                if let Cell::Block { a: x, b, c } = *cell {
                    blocks += 1;
                    let e = s.valuation(c).unwrap_or(m);
                    let block = Matrix::from_rows(s, vec![vec![x, c], vec![s.sigma(c), b]]).unwrap();
                    let want = Partition::new([e, e]).clamped(m);
                    check(cokernel_type(&block, m).unwrap() == want, &mut f, || {
                        format!("{} #{i}: block cokernel", s.kind())
                    });
                }
            }
        }
    }
    finish(f, start.elapsed(), C9_LIMIT, format!("{} matrices per spec at M={m}, {blocks} blocks", C9_SAMPLES))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 counting identities", counting_identities),
        ("2 finite-n exactness", finite_n_exactness),
        ("3 distribution convergence", distribution_convergence),
        ("4 moments", moments),
        ("5 universality", universality),
        ("6 ramified parity law", parity_law),
        ("7 oracle coherence", oracle_coherence),
        ("8 character identity", character_identity),
        ("9 classifier soundness", classifier_soundness),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
