//! End-to-end acceptance criteria. Runs without the libtest harness and prints one line per
//! criterion; exits non-zero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use qudit_magic::covering::{cover_composite, verify_cover, DEFAULT_COVER_BUDGET};
use qudit_magic::dense::{
    mutual_information, mutual_information_pure, random_density, random_state, root_fidelity, schatten_one, DenseOperator,
    DenseState, LogBase, Vector,
};
use qudit_magic::magic::{
    build_dictionary, certify_product_lf, distance_to_hull_lower, distance_to_sps, extensive_rel_entropy_bound, lf_pure,
    magic_report, rel_entropy_magic, sm_distinguishing_pauli, EstimateStatus, Measure, PatchBound,
};
use qudit_magic::pauli::{phase_table, PauliLabel};
use qudit_magic::stabilizer::{
    enumerate_isotropic_subgroups, enumerate_stabilizer_states, find_rephasing_pauli, phase_lifts, StabilizerGroup,
    DEFAULT_ENUMERATION_BUDGET,
};
use qudit_magic::toric::{
    annulus_extreme_points, anyon_string, build_toric, quantization_check, s_matrix_operator, standard_annulus, AnyonType,
    SMatrixLayout,
};
use qudit_magic::witness::{
    logn_lrm_assemble, mi_forbidden_window, mi_stability_check, DecayProfile, Verdict, DEFAULT_WINDOW_TOLERANCE,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {:.1}s, limit {:.0}s", t.as_secs_f64(), limit.as_secs_f64()))
}

fn prime_factors(mut q: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            ps.push(p);
            while q % p == 0 {
                q /= p;
            }
        }
        p += 1;
    }
    if q > 1 {
        ps.push(q);
    }
    ps
}

fn covering_family_size() -> Outcome {
    let start = Instant::now();
    let cases = [(2u64, 1usize), (3, 1), (4, 1), (5, 1), (6, 1), (2, 2), (3, 2), (2, 3)];
    for (q, n) in cases {
        let family = cover_composite(q, n).map_err(|e| format!("q={q} n={n}: {e}"))?;
        let report = verify_cover(&family, DEFAULT_COVER_BUDGET).map_err(|e| e.to_string())?;
        ensure(report.passed, || format!("q={q} n={n}: {report:?}"))?;
        // q^n ∏ (1 + p^{-n}) = ∏ over primes of (q^n/p^n)(p^n + 1), evaluated in integers.
        let mut expected = (q as u128).pow(n as u32);
        for p in prime_factors(q) {
            let pn = (p as u128).pow(n as u32);
            expected = expected / pn * (pn + 1);
        }
        ensure(family.members.len() as u128 == expected, || {
            format!("q={q} n={n}: {} members, expected {expected}", family.members.len())
        })?;
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("{} (q, n) cases", cases.len()))
}

fn close(x: &DMatrix<C>, y: &DMatrix<C>, tol: f64) -> bool {
    (x - y).camax() < tol
}

fn rephasing_pauli() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut pools = Vec::new();
    for n in [1usize, 2] {
        for q in [2u64, 3, 4, 6] {
            pools.push(enumerate_isotropic_subgroups(n, q, DEFAULT_ENUMERATION_BUDGET).map_err(|e| e.to_string())?);
        }
    }
    let (mut tableaux, mut targets) = (0, 0);
    while tableaux < 200 {
        let pool = &pools[rng.gen_range(0..pools.len())];
        let sub = &pool[rng.gen_range(0..pool.len())];
        let lifts = phase_lifts(sub).map_err(|e| e.to_string())?;
        let group = &lifts[rng.gen_range(0..lifts.len())];
        let gens: Vec<PauliLabel> = group.independent_generators().into_iter().map(|(g, _)| g).collect();
        if gens.is_empty() {
            continue;
        }
        tableaux += 1;
        let dense: Vec<DMatrix<C>> = gens.iter().map(|g| g.to_dense().unwrap().mat).collect();
        let orders: Vec<u64> = gens.iter().map(PauliLabel::order).collect();
        let total: u64 = orders.iter().product();
        for idx in 0..total {
            let mut rest = idx;
            let u: Vec<u64> = orders
                .iter()
                .map(|d| {
                    let x = rest % d;
                    rest /= d;
                    x
                })
                .collect();
            let p = find_rephasing_pauli(&gens, &u).map_err(|e| format!("{gens:?} {u:?}: {e}"))?;
            let pm = p.to_dense().unwrap().mat;
            for ((gm, &ui), &d) in dense.iter().zip(&u).zip(&orders) {
                let zeta = C::from_polar(1.0, 2.0 * std::f64::consts::PI * ui as f64 / d as f64);
                ensure(close(&(&pm * gm * pm.adjoint()), &(gm * zeta), 1e-10), || format!("{gens:?} targets {u:?}"))?;
            }
            targets += 1;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{tableaux} tableaux, {targets} targets"))
}

struct Chain {
    q: u64,
    n: usize,
    values: [f64; 5],
    exact: bool,
}

fn chain_samples() -> Result<Vec<Chain>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut out = Vec::new();
    for (q, n, count) in [(2u64, 1usize, 50), (3, 1, 50), (2, 2, 10)] {
        let dict = build_dictionary(n, q).map_err(|e| e.to_string())?;
        for _ in 0..count {
            let psi = random_state(q, n, &mut rng).map_err(|e| e.to_string())?;
            let r = magic_report(&psi.density(), &dict, &Measure::ALL, LogBase::Two).map_err(|e| e.to_string())?;
            let lf = r.lf.ok_or("missing lf")?;
            let lr = r.lr.ok_or("missing lr")?;
            let values = [
                lf.value,
                r.s_rel.ok_or("missing srel")?.value,
                r.s_max_set.ok_or("missing smax")?.value,
                r.lgr.ok_or("missing lgr")?.value,
                lr.value,
            ];
            let exact = lf.status == EstimateStatus::Exact && lr.status == EstimateStatus::Exact;
            out.push(Chain { q, n, values, exact });
        }
    }
    Ok(out)
}

fn monotone_chain(samples: &[Chain], elapsed: Duration) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for s in samples.iter().filter(|s| s.n == 1) {
        ensure(s.exact, || format!("q={}: LF or LR not exact", s.q))?;
        for w in s.values.windows(2) {
            worst = worst.max(w[0] - w[1]);
        }
        checked += 1;
    }
    ensure(worst <= 1e-5, || format!("chain violated by {worst:e}"))?;
    ensure(elapsed < Duration::from_secs(120), || format!("took {:.1}s", elapsed.as_secs_f64()))?;
    Ok(format!("{checked} states, worst step {worst:.1e}"))
}

fn robustness_ceiling(samples: &[Chain]) -> Outcome {
    let mut slack = f64::INFINITY;
    for s in samples {
        let ceiling = (s.n as f64 + 0.5f64.powi(s.n as i32 + 1)) * (s.q as f64).log2();
        let lr = s.values[4];
        ensure(lr <= ceiling + 1e-6, || format!("q={} n={}: LR {lr} above {ceiling}", s.q, s.n))?;
        slack = slack.min(ceiling - lr);
    }
    Ok(format!("{} states, min slack {slack:.3}", samples.len()))
}

fn t_state() -> DenseState {
    let amps = Vector::from_vec(vec![C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0), C::new(0.5, 0.5)]);
    DenseState::new(2, 1, amps).unwrap()
}

fn t_state_scaling() -> Outcome {
    let t = t_state();
    let tt = t.tensor(&t).map_err(|e| e.to_string())?;
    let d1 = build_dictionary(1, 2).map_err(|e| e.to_string())?;
    let d2 = build_dictionary(2, 2).map_err(|e| e.to_string())?;
    let lf1 = lf_pure(&t, &d1, LogBase::Two).map_err(|e| e.to_string())?.lf;
    let lf2 = lf_pure(&tt, &d2, LogBase::Two).map_err(|e| e.to_string())?.lf;
    ensure((lf2 - 2.0 * lf1).abs() < 1e-9, || format!("LF(2) = {lf2}, 2 LF(1) = {}", 2.0 * lf1))?;
    let eps = distance_to_sps(&t.density(), DEFAULT_ENUMERATION_BUDGET).map_err(|e| e.to_string())?.epsilon;
    let cert = certify_product_lf(&vec![PatchBound { epsilon: eps, dimension: 2 }; 2], LogBase::Two).map_err(|e| e.to_string())?;
    ensure(cert <= lf2 + 1e-12, || format!("certificate {cert} exceeds LF {lf2}"))?;
    Ok(format!("LF(1) = {lf1:.6}, LF(2) = {lf2:.6}, certified {cert:.6}"))
}

/// Expected braiding exponent from the crossing of the closed first loop with the second string.
fn crossing_exponent(code: &qudit_magic::toric::ToricCode, layout: &SMatrixLayout, s: AnyonType, t: AnyonType) -> u64 {
    let lat = &code.lattice;
    let vd = anyon_string(lat, s, &layout.v_down).unwrap();
    let vu = anyon_string(lat, s, &layout.v_up).unwrap();
    let wd = anyon_string(lat, t, &layout.w_down).unwrap();
    vu.adjoint().compose(&vd).unwrap().commutation_exponent(&wd).unwrap()
}

fn braiding_quantization() -> Outcome {
    let mut entries = 0;
    for (q, lx, ly) in [(2u64, 2usize, 3usize), (2, 3, 3), (3, 2, 3), (3, 3, 3)] {
        let code = build_toric(q, lx, ly).map_err(|e| e.to_string())?;
        let report = quantization_check(&code, None).map_err(|e| e.to_string())?;
        ensure(report.all_quantized && report.bilinear, || format!("q={q} {lx}x{ly}: not quantized"))?;
        let layout = SMatrixLayout::standard(&code.lattice).map_err(|e| e.to_string())?;
        let omega = phase_table(q);
        let psi = if lx * ly <= 6 { Some(code.ground_state((0, 0), 1 << 20).map_err(|e| e.to_string())?) } else { None };
        for e in &report.entries {
            let z = e.phase.value();
            let mut zq = C::new(1.0, 0.0);
            for _ in 0..q {
                zq *= z;
            }
            ensure((zq - 1.0).norm() < 1e-9, || format!("{e:?} is not a root of unity"))?;
            let k = crossing_exponent(&code, &layout, e.first, e.second);
            ensure((z - omega[(2 * k) as usize]).norm() < 1e-9, || format!("{e:?} differs from crossing count {k}"))?;
            if let Some(psi) = &psi {
                let op = s_matrix_operator(&code.lattice, &layout, e.first, e.second).map_err(|e| e.to_string())?;
                let dense = psi.inner(&op.apply(psi).map_err(|e| e.to_string())?);
                ensure((dense - z).norm() < 1e-9, || format!("{e:?}: dense value {dense}"))?;
            }
            entries += 1;
        }
    }
    Ok(format!("{entries} phases on 4 tori"))
}

fn information_convex() -> Outcome {
    let mut detail = Vec::new();
    for (q, lx, ly) in [(2u64, 4usize, 4usize), (3, 4, 4)] {
        let code = build_toric(q, lx, ly).map_err(|e| e.to_string())?;
        let geom = standard_annulus(&code.lattice).map_err(|e| e.to_string())?;
        let report =
            annulus_extreme_points(&code, &geom.annulus, &geom.thickened, Some(&geom.probe)).map_err(|e| e.to_string())?;
        ensure(report.points.len() as u64 == q * q, || format!("q={q}: {} points", report.points.len()))?;
        ensure(report.max_commutator < 1e-9, || format!("q={q}: commutator {}", report.max_commutator))?;
        ensure(report.rephasing_verified, || format!("q={q}: points not Pauli-connected"))?;
        ensure(report.anyons_match == Some(true), || format!("q={q}: anyon sectors mismatch"))?;

        // Reduce the ground state excited by each probe string and compare with the extreme point.
        let ground = code.ground_group((0, 0)).map_err(|e| e.to_string())?;
        let m = geom.annulus.len();
        let mut worst: f64 = 1.0;
        for point in &report.points {
            let anyon = point.anyon.ok_or("point without anyon label")?;
            let string = anyon_string(&code.lattice, anyon, &geom.probe).map_err(|e| e.to_string())?;
            let excited: Vec<PauliLabel> = ground.generators().iter().map(|g| string.conjugate(g).unwrap()).collect();
            let excited = StabilizerGroup::validate(q, code.lattice.num_edges(), excited).map_err(|e| e.to_string())?;
            let reduced = excited
                .supported_subgroup(&geom.annulus)
                .and_then(|s| s.restrict(&geom.annulus))
                .map_err(|e| e.to_string())?;
            let gens: Vec<PauliLabel> = point.generators.iter().map(|g| g.parse().unwrap()).collect();
            let extreme = StabilizerGroup::validate(q, m, gens).map_err(|e| e.to_string())?;
            let fidelity = if q == 2 {
                let f = root_fidelity(&reduced.sps_dense().unwrap(), &extreme.sps_dense().unwrap()).map_err(|e| e.to_string())?;
                f * f
            } else {
                let same = reduced.order() == extreme.order()
                    && extreme.generators().iter().all(|g| reduced.member(g) == qudit_magic::stabilizer::Membership::PhaseExact);
                if same { 1.0 } else { 0.0 }
            };
            worst = worst.min(fidelity);
        }
        ensure(worst > 1.0 - 1e-9, || format!("q={q}: fidelity {worst}"))?;
        detail.push(format!("q={q}: {} points", report.points.len()));
    }
    Ok(detail.join(", "))
}

/// Spectral projectors of a Pauli normalized to `P^δ = I`.
fn pauli_projectors(p: &PauliLabel) -> Vec<DMatrix<C>> {
    let p = p.with_unit_power();
    let delta = p.order();
    let pm = p.to_dense().unwrap().mat;
    let dim = pm.nrows();
    (0..delta)
        .map(|k| {
            let zeta = C::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / delta as f64);
            let mut acc = DMatrix::<C>::zeros(dim, dim);
            let mut power = DMatrix::<C>::identity(dim, dim);
            let mut phase = C::new(1.0, 0.0);
            for _ in 0..delta {
                acc += &power * phase;
                power = &power * &pm;
                phase *= zeta;
            }
            acc / C::new(delta as f64, 0.0)
        })
        .collect()
}

fn measurement_distinguishability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = f64::INFINITY;
    for i in 0..100 {
        let (q, n) = [(2u64, 1usize), (3, 1), (2, 2), (3, 2)][i % 4];
        let rho = random_density(q, n, &mut rng).map_err(|e| e.to_string())?;
        let sigma = random_density(q, n, &mut rng).map_err(|e| e.to_string())?;
        let (p, reported) = sm_distinguishing_pauli(&rho, &sigma).map_err(|e| e.to_string())?;
        let diff = &rho.mat - &sigma.mat;
        let achieved: f64 = pauli_projectors(&p).iter().map(|pr| (pr * &diff).trace().re.abs()).sum();
        ensure((achieved - reported).abs() < 1e-9, || format!("reported {reported}, recomputed {achieved}"))?;
        let floor = schatten_one(&diff) / rho.dim() as f64;
        ensure(achieved >= floor - 1e-12, || format!("q={q} n={n}: {achieved} < {floor}"))?;
        worst = worst.min(achieved / floor);
    }
    Ok(format!("100 pairs, min ratio {worst:.3}"))
}

fn witness_soundness() -> Outcome {
    let tol = DEFAULT_WINDOW_TOLERANCE;
    let mut states = 0;
    for q in [2u64, 3, 6] {
        let p = prime_factors(q)[0];
        for group in enumerate_stabilizer_states(2, q, DEFAULT_ENUMERATION_BUDGET).map_err(|e| e.to_string())? {
            let rho = group.sps_dense().map_err(|e| e.to_string())?;
            for (a, b) in [([0usize], [1usize]), ([1], [0])] {
                let mi = mutual_information(&rho, &a, &b, LogBase::Two).map_err(|e| e.to_string())?;
                ensure(!(mi > tol && mi < (p as f64).log2() - tol), || format!("q={q}: I = {mi} for {group:?}"))?;
                let verdict = mi_forbidden_window(&rho, &a, &b, tol, LogBase::Two).map_err(|e| e.to_string())?;
                ensure(verdict.verdict == Verdict::Silent, || format!("q={q}: witness fired on {group:?}"))?;
            }
            states += 1;
        }
    }
    // cos θ|00⟩ + sin θ|11⟩ with 2 h(cos²θ) = 1/2 bit.
    let h = |x: f64| if x <= 0.0 || x >= 1.0 { 0.0 } else { -x * x.log2() - (1.0 - x) * (1.0 - x).log2() };
    let (mut lo, mut hi) = (0.0f64, std::f64::consts::FRAC_PI_4);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 2.0 * h(mid.cos().powi(2)) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    let zero = C::new(0.0, 0.0);
    let amps = Vector::from_vec(vec![C::new(theta.cos(), 0.0), zero, zero, C::new(theta.sin(), 0.0)]);
    let psi = DenseState::new(2, 2, amps).map_err(|e| e.to_string())?;
    let verdict = mi_forbidden_window(&psi.density(), &[0], &[1], tol, LogBase::Two).map_err(|e| e.to_string())?;
    ensure((verdict.mutual_information - 0.5).abs() < 1e-9, || format!("tuned I = {}", verdict.mutual_information))?;
    ensure(verdict.verdict == Verdict::Fires, || "witness silent on the tuned state".into())?;
    Ok(format!("{states} stabilizer states silent, tuned state fires"))
}

fn stability_sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (a, b) = ([0usize, 1], [6usize, 7]);
    let mut worst: f64 = 0.0;
    for depth in [1usize, 2] {
        for seed in 0..20u64 {
            let psi = random_state(2, 8, &mut rng).map_err(|e| e.to_string())?;
            let r = mi_stability_check(&psi, depth, &a, &b, seed, LogBase::Two).map_err(|e| e.to_string())?;
            // Recompute the evolved-free sides independently of the report.
            let inner = mutual_information_pure(&psi, &qudit_magic::witness::shrink(&a, depth, 8), &qudit_magic::witness::shrink(&b, depth, 8), LogBase::Two)
                .map_err(|e| e.to_string())?;
            ensure((inner - r.inner).abs() < 1e-10, || "inner side mismatch".into())?;
            ensure(r.evolved >= r.inner - 1e-8 && r.evolved <= r.outer + 1e-8, || format!("depth {depth} seed {seed}: {r:?}"))?;
            worst = worst.max(r.violation);
        }
    }
    Ok(format!("40 circuits, worst violation {worst:.1e}"))
}

fn finite_size_assembly() -> Outcome {
    let profile = DecayProfile { k: 1.0, xi: 1.0, patches: 10, patch_size: 2.0, spacing: 3.0, n: 1024.0 };
    let certs = vec![PatchBound { epsilon: 0.5, dimension: 2 }; 10];
    let out = logn_lrm_assemble(&profile, &certs, LogBase::Two).map_err(|e| e.to_string())?;
    let s = 1.0 * 100.0 * 4.0 * 1024f64.powf(-3.0);
    let delta2 = 1.0 - (-s / 2.0).exp();
    let delta1 = (1.0 - 0.25 / 16.0f64).sqrt().powi(10);
    let expected = -2.0 * (delta1 + (2.0 * delta2).sqrt()).log2();
    ensure((out.lf_lower_bound - expected).abs() < 1e-12, || format!("{} vs {expected}", out.lf_lower_bound))?;
    ensure(expected > 0.0, || "toy bound is vacuous".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let mut certs: Vec<PatchBound> =
            (0..10).map(|_| PatchBound { epsilon: rng.gen_range(0.0..1.9), dimension: rng.gen_range(2..5) }).collect();
        let k = rng.gen_range(1e-6..5.0);
        let base = logn_lrm_assemble(&DecayProfile { k, ..profile.clone() }, &certs, LogBase::Two).unwrap().lf_lower_bound;
        let smaller_k = logn_lrm_assemble(&DecayProfile { k: k * 0.5, ..profile.clone() }, &certs, LogBase::Two).unwrap();
        ensure(smaller_k.lf_lower_bound >= base - 1e-12, || format!("decreasing K lowered the bound at K = {k}"))?;
        let i = rng.gen_range(0..10);
        certs[i].epsilon = (certs[i].epsilon + 0.1).min(2.0);
        let larger_eps = logn_lrm_assemble(&DecayProfile { k, ..profile.clone() }, &certs, LogBase::Two).unwrap();
        ensure(larger_eps.lf_lower_bound >= base - 1e-12, || "increasing ε lowered the bound".into())?;
    }
    Ok(format!("toy bound {:.12}, 200 perturbations monotone", out.lf_lower_bound))
}

fn extensivity_bound() -> Outcome {
    let t = t_state();
    let d1 = build_dictionary(1, 2).map_err(|e| e.to_string())?;
    let d2 = build_dictionary(2, 2).map_err(|e| e.to_string())?;
    let eps = distance_to_hull_lower(&t.density(), &d1, 200).map_err(|e| e.to_string())?.lower;
    let bound = extensive_rel_entropy_bound(&vec![PatchBound { epsilon: eps, dimension: 2 }; 2], LogBase::Two).map_err(|e| e.to_string())?;
    let tt: DenseOperator = t.tensor(&t).map_err(|e| e.to_string())?.density();
    let fw = rel_entropy_magic(&tt, &d2, LogBase::Two).map_err(|e| e.to_string())?;
    ensure(bound <= fw.value + fw.gap, || format!("bound {bound} above {} + {}", fw.value, fw.gap))?;
    Ok(format!("bound {bound:.6} ≤ estimate {:.6} (gap {:.1e})", fw.value, fw.gap))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(e) => Err(e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())),
    }
}

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let names = [
        "covering family size",
        "re-phasing Pauli",
        "monotone chain",
        "robustness ceiling",
        "T-state scaling",
        "braiding quantization",
        "information convex",
        "stabilizer-measurement distinguishability",
        "MI discreteness and witness soundness",
        "MI stability sandwich",
        "finite-size assembly",
        "extensivity bound",
    ];
    // The chain and ceiling criteria share one batch of solver runs.
    let mut samples: Option<(Result<Vec<Chain>, String>, Duration)> = None;
    let (mut ran, mut failures) = (0, 0);
    for (i, name) in names.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let result = match i {
            0 => guarded(covering_family_size),
            1 => guarded(rephasing_pauli),
            2 | 3 => {
                let (batch, elapsed) = samples.get_or_insert_with(|| {
                    let t = Instant::now();
                    let batch = catch_unwind(chain_samples).unwrap_or_else(|_| Err("panic while sampling".into()));
                    (batch, t.elapsed())
                });
                match batch {
                    Err(e) => Err(e.clone()),
                    Ok(s) if i == 2 => guarded(|| monotone_chain(s, *elapsed)),
                    Ok(s) => guarded(|| robustness_ceiling(s)),
                }
            }
            4 => guarded(t_state_scaling),
            5 => guarded(braiding_quantization),
            6 => guarded(information_convex),
            7 => guarded(measurement_distinguishability),
            8 => guarded(witness_soundness),
            9 => guarded(stability_sandwich),
            10 => guarded(finite_size_assembly),
            _ => guarded(extensivity_bound),
        };
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} {name}: FAIL ({why}; {secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
