//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use boundstab::catalog::catalog;
use boundstab::cert::{certify_ube, is_separable};
use boundstab::dense::{
    matrix_of, product_state_excluded, projector, rho_of, rho_s, separable_form_deviation, verify_sector_decomposition,
    verify_separable_form,
};
use boundstab::partition::{bipartition_sides, set_partitions};
use boundstab::unlock::{enumerate_outcomes, simulate, CorrelationRule, Protocol};
use boundstab::{close, unlock, GeneratorSet, Partition, SearchOptions, SectorLabel, StabilizerGroup, Tolerances};
use common::*;
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::time::Instant;

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn gens(name: &str) -> GeneratorSet {
    catalog(name).unwrap().gens
}

fn group(name: &str) -> StabilizerGroup {
    close(&gens(name)).unwrap()
}

fn named(name: &str, part: &str) -> Partition {
    catalog(name).unwrap().partition(part).unwrap().clone()
}

/// `(1/4) sum_ab |Phi_ab><Phi_ab|` on pair `p` times the same Bell projector
/// on pair `q`, written out index by index.
fn paired_bell_mixture(p: (usize, usize), q: (usize, usize)) -> M {
    let mut out = M::zeros(16, 16);
    for a in 0..2 {
        for b in 0..2 {
            let phi = bell(a, b);
            let mut v = M::zeros(16, 1);
            for idx in 0..16 {
                let bit = |s: usize| (idx >> (3 - s)) & 1;
                v[(idx, 0)] = phi[(2 * bit(p.0) + bit(p.1), 0)] * phi[(2 * bit(q.0) + bit(q.1), 0)];
            }
            out += proj(&v) * c(0.25);
        }
    }
    out
}

fn stabilizer_state_by_hand(n: usize) -> M {
    let id = M::identity(1 << n, 1 << n);
    let gx = kron_all(&vec![pauli('X'); n]);
    let gz = kron_all(&vec![pauli('Z'); n]);
    (&id + gx) * (&id + gz) * c(1.0 / (1u64 << n) as f64)
}

fn criterion_smolin_identity() -> Check {
    let s = group("smolin4");
    let rho = to_na(rho_s::<f64>(&s).unwrap().matrix());
    let by_hand = stabilizer_state_by_hand(4);
    ensure!(max_diff(&rho, &by_hand) < 1e-9, "rho_S differs from (I+g1)(I+g2)/16");
    for (p, q) in [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))] {
        let mix = paired_bell_mixture(p, q);
        let d = max_diff(&rho, &mix);
        ensure!(d < 1e-9, "Bell mixture on pairs {p:?} {q:?} differs by {d:e}");
    }
    for name in ["pairs", "crossed", "nested"] {
        let p = named("smolin4", name);
        ensure!(
            verify_separable_form(&s, &p, &Tolerances::<f64>::default()).unwrap(),
            "separable form fails on {p}"
        );
    }
    Ok(())
}

fn criterion_permutation_invariance() -> Check {
    for (name, n) in [("smolin4", 4), ("gsmolin:3", 6)] {
        let rho = rho_s::<f64>(&group(name)).unwrap();
        let mut count = 0;
        for perm in (0..n).permutations(n) {
            let moved = rho.permute_sites(&perm).unwrap();
            let d = moved.matrix().max_abs_diff(rho.matrix());
            ensure!(d < 1e-9, "{name}: permutation {perm:?} changes the state by {d:e}");
            count += 1;
        }
        ensure!(count == (1..=n).product::<usize>(), "{name}: wrong permutation count");
    }
    // Within-group swaps keep the state; the cross-group swap does not.
    let swap = |n: usize, a: usize, b: usize| -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.swap(a - 1, b - 1);
        p
    };
    for (name, n, keep, breaks) in [
        (
            "nine_qubit",
            9,
            vec![(1, 4), (4, 7), (2, 5), (5, 8), (3, 6), (6, 9)],
            (1, 6),
        ),
        ("seven_qutrit", 7, vec![(2, 7), (3, 5), (4, 6)], (1, 2)),
    ] {
        let rho = rho_s::<f64>(&group(name)).unwrap();
        for (a, b) in keep {
            let d = rho
                .permute_sites(&swap(n, a, b))
                .unwrap()
                .matrix()
                .max_abs_diff(rho.matrix());
            ensure!(d < 1e-9, "{name}: swap ({a},{b}) changes the state");
        }
        let d = rho
            .permute_sites(&swap(n, breaks.0, breaks.1))
            .unwrap()
            .matrix()
            .max_abs_diff(rho.matrix());
        ensure!(d > 1e-6, "{name}: swap {breaks:?} should change the state");
    }
    Ok(())
}

fn criterion_certification() -> Check {
    let opts = SearchOptions::default();
    let mut certs = Vec::new();
    for name in ["smolin4", "gsmolin:3", "nine_qubit", "seven_qutrit", "mixed_dim"] {
        let g = gens(name);
        let cert = certify_ube(&g, &opts).unwrap();
        ensure!(cert.is_certified(), "{name} not certified: {:?}", cert.verdict);
        ensure!(
            cert.revalidate(&g, 1 << 20).unwrap(),
            "{name}: witnesses do not revalidate"
        );
        certs.push((name, cert));
    }
    let has = |cert: &boundstab::Certificate, p: &Partition, sites: &[usize]| {
        cert.condition2
            .iter()
            .any(|w| &w.partition == p && w.unlock_sites() == sites)
    };

    let smolin: HashSet<String> = certs[0].1.condition2.iter().map(|w| w.partition.to_string()).collect();
    let expected: HashSet<String> = ["1,2|3,4", "1,3|2,4", "1,4|2,3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    ensure!(smolin == expected, "smolin4 condition-2 partitions {smolin:?}");

    let rows = named("nine_qubit", "rows");
    ensure!(
        has(&certs[2].1, &rows, &[0, 1, 2]),
        "nine_qubit lacks {rows} with unlock block 1,2,3"
    );
    ensure!(
        is_separable(&gens("nine_qubit"), &named("nine_qubit", "mixed")).unwrap(),
        "nine_qubit should be separable on 1,6,8|2,4,9|3,5,7"
    );

    let unlock = named("seven_qutrit", "unlock");
    ensure!(
        has(&certs[3].1, &unlock, &[0, 3]),
        "seven_qutrit lacks {unlock} with unlock block 1,4"
    );
    ensure!(
        is_separable(&gens("seven_qutrit"), &named("seven_qutrit", "separable")).unwrap(),
        "seven_qutrit should be separable on 1,2,3|4,5|6,7"
    );

    let mut pairings = 0;
    for p in set_partitions(6) {
        if p.blocks().iter().all(|b| b.len() == 2) {
            pairings += 1;
            for b in p.blocks() {
                ensure!(has(&certs[4].1, &p, b), "mixed_dim lacks {p} with unlock block {b:?}");
            }
        }
    }
    ensure!(pairings == 15, "expected 15 pairings of six parties");
    Ok(())
}

/// Distinct phase-free words generated by `gens`, by breadth-first search
/// on exponent vectors.
fn brute_force_group_size(g: &GeneratorSet) -> usize {
    let dims = g.dims().dims().to_vec();
    let vecs: Vec<Vec<(usize, usize)>> = g.gens().iter().map(|w| w.sites().to_vec()).collect();
    let start = vec![(0usize, 0usize); dims.len()];
    let mut seen = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    while let Some(cur) = frontier.pop() {
        for v in &vecs {
            let next: Vec<(usize, usize)> = cur
                .iter()
                .zip(v)
                .zip(&dims)
                .map(|((a, b), &d)| ((a.0 + b.0) % d, (a.1 + b.1) % d))
                .collect();
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    seen.len()
}

fn criterion_dimensions() -> Check {
    for (name, size, dim, sectors) in [
        ("smolin4", 4, 4, 4),
        ("gsmolin:3", 4, 16, 4),
        ("nine_qubit", 8, 64, 8),
        ("seven_qutrit", 9, 243, 9),
        ("mixed_dim", 144, 16, 144),
    ] {
        let s = group(name);
        ensure!(
            brute_force_group_size(s.generators()) == size,
            "{name}: brute-force |S|"
        );
        ensure!(s.size() == size, "{name}: |S| = {}", s.size());
        ensure!(
            s.subspace_dimension() == dim,
            "{name}: dim V_S = {}",
            s.subspace_dimension()
        );
        let p = projector::<f64>(&s, &SectorLabel::trivial(s.orders().len())).unwrap();
        let tr = p.matrix.trace();
        ensure!(
            (tr.re - dim as f64).abs() < 1e-9 && tr.im.abs() < 1e-9,
            "{name}: numeric trace {tr}"
        );
        let check = verify_sector_decomposition::<f64>(&s, &Tolerances::default()).unwrap();
        ensure!(check.verified, "{name}: sector decomposition {check:?}");
        ensure!(check.sectors == sectors, "{name}: {} sectors", check.sectors);
    }
    Ok(())
}

fn sign_bit(r: &boundstab::RootOfUnity) -> usize {
    usize::from(!r.is_one())
}

fn bell_fidelity(v: &[boundstab::Complex<f64>], a: usize, b: usize) -> f64 {
    let phi = bell(a, b);
    (0..4)
        .map(|i| phi[(i, 0)].conj() * v[i])
        .sum::<num_complex::Complex64>()
        .norm_sqr()
}

fn catalog_protocols() -> Vec<(&'static str, Protocol)> {
    [
        ("smolin4", "pairs"),
        ("gsmolin:3", "pairs"),
        ("nine_qubit", "rows"),
        ("seven_qutrit", "unlock"),
        ("mixed_dim", "unlock"),
    ]
    .into_iter()
    .map(|(name, part)| {
        let pr = Protocol::new(gens(name), named(name, part), 0, 11, 50).unwrap();
        (name, pr)
    })
    .collect()
}

fn criterion_unlock() -> Check {
    // (a) the two unmeasured parties end in the measured Bell state
    let pr = Protocol::new(gens("smolin4"), named("smolin4", "pairs"), 0, 7, 200).unwrap();
    let recs = simulate::<f64>(&pr).unwrap();
    ensure!(recs.len() == 200, "smolin4: {} records", recs.len());
    ensure!(
        unlock::outcome_correlation_check(&recs, CorrelationRule::Equality).unwrap(),
        "smolin4: equality rule fails"
    );
    for r in &recs {
        let l = &r.outcomes[0].labels;
        let (alpha, beta) = (sign_bit(&l[1]), sign_bit(&l[0]));
        let f = bell_fidelity(&r.residual, alpha, beta);
        ensure!(f > 1.0 - 1e-9, "smolin4 shot {:?}: fidelity {f}", r.shot);
    }

    // (b) XOR rule on six qubits
    let pr = Protocol::new(gens("gsmolin:3"), named("gsmolin:3", "pairs"), 0, 7, 200).unwrap();
    let recs = simulate::<f64>(&pr).unwrap();
    ensure!(
        unlock::outcome_correlation_check(&recs, CorrelationRule::Xor).unwrap(),
        "gsmolin:3: XOR rule fails"
    );
    for r in &recs {
        let alpha = r.outcomes.iter().fold(0, |acc, o| acc ^ sign_bit(&o.labels[1]));
        let beta = r.outcomes.iter().fold(0, |acc, o| acc ^ sign_bit(&o.labels[0]));
        let f = bell_fidelity(&r.residual, alpha, beta);
        ensure!(f > 1.0 - 1e-9, "gsmolin:3 shot {:?}: fidelity {f}", r.shot);
    }

    // (c) every catalog protocol, all outcomes
    for (name, pr) in catalog_protocols() {
        let recs = enumerate_outcomes::<f64>(&pr).unwrap();
        let total: f64 = recs.iter().map(|r| r.probability).sum();
        ensure!((total - 1.0).abs() < 1e-9, "{name}: probabilities sum to {total}");
        let restricted = pr.gens.restrict(pr.unlock_sites()).unwrap();
        let mats: Vec<_> = restricted.gens().iter().map(matrix_of::<f64>).collect();
        for r in &recs {
            ensure!(r.purity >= 1.0 - 1e-9, "{name}: purity {}", r.purity);
            ensure!(r.genuine, "{name}: residual not genuinely entangled");
            ensure!(r.label_law_holds(), "{name}: label law fails");
            for (m, lambda) in mats.iter().zip(&r.residual_labels) {
                let gv = m.mul_vec(&r.residual);
                let ang = lambda.angle();
                let l = boundstab::Complex::new(ang.cos(), ang.sin());
                let err = gv
                    .iter()
                    .zip(&r.residual)
                    .map(|(a, b)| (a - l * b).norm())
                    .fold(0.0, f64::max);
                ensure!(err < 1e-9, "{name}: residual is not an eigenvector ({err:e})");
            }
        }
        let sampled = simulate::<f64>(&pr).unwrap();
        ensure!(
            unlock::outcome_correlation_check(&sampled, CorrelationRule::Product).unwrap(),
            "{name}: product rule fails on sampled shots"
        );
    }
    Ok(())
}

fn criterion_recursion() -> Check {
    let rho6 = to_na(rho_s::<f64>(&group("gsmolin:3")).unwrap().matrix());
    let rho4 = stabilizer_state_by_hand(4);
    let s4 = group("smolin4");
    let mut expected = M::zeros(64, 64);
    for (alpha, beta, sigma) in [(0, 0, 'I'), (0, 1, 'Z'), (1, 0, 'X'), (1, 1, 'Y')] {
        let u = kron_all(&[pauli(sigma), pauli('I'), pauli('I'), pauli('I')]);
        let twisted = &u * &rho4 * u.adjoint();
        // the twisted block is the sector with eigenvalues ((-1)^beta, (-1)^alpha)
        let sector = to_na(rho_of::<f64>(&s4, &SectorLabel(vec![beta, alpha])).unwrap().matrix());
        ensure!(
            max_diff(&twisted, &sector) < 1e-9,
            "sigma_{alpha}{beta} block is not a sector state"
        );
        expected += twisted.kronecker(&proj(&bell(alpha as usize, beta as usize))) * c(0.25);
    }
    let d = max_diff(&rho6, &expected);
    ensure!(d < 1e-9, "recursive form differs by {d:e}");

    // fully unrolled: XOR-constrained Bell products
    let mut xor_form = M::zeros(64, 64);
    for labels in (0..6).map(|_| 0..2usize).multi_cartesian_product() {
        let (a, b) = (&labels[..3], &labels[3..]);
        if a[0] ^ a[1] ^ a[2] == 0 && b[0] ^ b[1] ^ b[2] == 0 {
            let v = kron_all(&[bell(a[0], b[0]), bell(a[1], b[1]), bell(a[2], b[2])]);
            xor_form += proj(&v) * c(1.0 / 16.0);
        }
    }
    let d = max_diff(&rho6, &xor_form);
    ensure!(d < 1e-9, "XOR Bell form differs by {d:e}");
    let dev = separable_form_deviation::<f64>(&group("gsmolin:3"), &named("gsmolin:3", "pairs"), 1e-9).unwrap();
    ensure!(dev < 1e-9, "library separable form differs by {dev:e}");
    Ok(())
}

fn criterion_odd_anticommutation() -> Check {
    for m in 2..=6 {
        let dims = boundstab::SystemDims::uniform(2, m).unwrap();
        let x = boundstab::PauliWord::parse(&dims, &vec!["X"; m].join(" ")).unwrap();
        let z = boundstab::PauliWord::parse(&dims, &vec!["Z"; m].join(" ")).unwrap();
        let e = x.commutator_exponent_full(&z).unwrap();
        if m % 2 == 1 {
            ensure!(e != 0, "X^{m} and Z^{m} should anticommute");
            // an anticommuting pair is a sign flip: half the phase modulus
            ensure!(e == dims.phase_modulus() / 2, "exponent {e} is not a sign");
        } else {
            ensure!(e == 0, "X^{m} and Z^{m} should commute, exponent {e}");
        }
    }
    Ok(())
}

fn criterion_separable_bridge() -> Check {
    let tol = Tolerances::<f64>::default();
    for name in ["smolin4", "gsmolin:3", "seven_qutrit", "mixed_dim"] {
        let s = group(name);
        let n = s.dims().len();
        let mut separable = 0;
        for side in bipartition_sides((1u64 << n) - 1) {
            let p = Partition::from_masks(n, &[side, ((1u64 << n) - 1) & !side]).unwrap();
            if is_separable(s.generators(), &p).unwrap() {
                separable += 1;
                ensure!(
                    verify_separable_form(&s, &p, &tol).unwrap(),
                    "{name}: separable form fails on {p}"
                );
            } else {
                ensure!(
                    verify_separable_form(&s, &p, &tol).is_err(),
                    "{name}: {p} accepted without local commutation"
                );
                ensure!(
                    product_state_excluded::<f64>(&s, &p, 1e-9).unwrap(),
                    "{name}: restricted generators on {p} share an eigenvector"
                );
            }
        }
        ensure!(separable > 0, "{name}: no separable bipartition found");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut monotone_checked = 0;
    for _ in 0..1000 {
        let dims = loop {
            let d = random_dims(&mut rng, 8, u64::MAX);
            if d.len() >= 3 {
                break d;
            }
        };
        let g = random_commuting_set(&mut rng, dims, 3);
        monotone_checked += coarsening_case(&mut rng, &g)?;
    }
    ensure!(monotone_checked == 1000, "ran {monotone_checked} coarsening triples");
    Ok(())
}

fn coarsening_case(rng: &mut ChaCha8Rng, g: &GeneratorSet) -> std::result::Result<usize, String> {
    let n = g.n_sites();
    let parts = loop {
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, &l) in labels.iter().enumerate() {
            blocks[l].push(i);
        }
        blocks.retain(|b| !b.is_empty());
        if blocks.len() >= 3 {
            break Partition::new(n, blocks).unwrap();
        }
    };
    let a = rng.gen_range(0..parts.len());
    let b = (a + 1 + rng.gen_range(0..parts.len() - 1)) % parts.len();
    let merged = parts.merged(a, b).unwrap();
    let before = is_separable(g, &parts).unwrap();
    let after = is_separable(g, &merged).unwrap();
    ensure!(!before || after, "merging blocks of {parts} lost separability");
    Ok(1)
}

fn criterion_oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..200 {
        let dims = random_dims(&mut rng, 6, 256);
        let g = random_commuting_set(&mut rng, dims, 3);
        let s = close(&g).unwrap();
        let p = projector::<f64>(&s, &SectorLabel::trivial(g.len())).unwrap();
        let tr = p.matrix.trace();
        let want = s.subspace_dimension() as f64;
        ensure!(
            (tr.re - want).abs() < 1e-9 && tr.im.abs() < 1e-9,
            "case {case}: trace {tr} vs {want} for {g:?}"
        );
        let sq = p.matrix.matmul(&p.matrix);
        ensure!(sq.max_abs_diff(&p.matrix) < 1e-12, "case {case}: P^2 != P");
        ensure!(p.matrix.hermiticity_defect() < 1e-12, "case {case}: P not Hermitian");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Smolin identity and Bell-mixture forms", criterion_smolin_identity),
        ("permutation invariance", criterion_permutation_invariance),
        ("certification fidelity", criterion_certification),
        ("dimension and sector counts", criterion_dimensions),
        ("unlock correlations", criterion_unlock),
        ("generalized Smolin recursion", criterion_recursion),
        ("odd-qubit anticommutation", criterion_odd_anticommutation),
        ("separable form bridge and coarsening", criterion_separable_bridge),
        ("symbolic/numeric oracle equivalence", criterion_oracle_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS criterion {}: {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
