use proptest::prelude::*;
use qudit_magic::dense::*;
use qudit_magic::stabilizer::enumerate_stabilizer_states;
use qudit_magic::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const B2: LogBase = LogBase::Two;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn state(q: u64, n: usize, amps: &[f64]) -> DenseState {
    DenseState::normalized(q, n, Vector::from_iterator(amps.len(), amps.iter().map(|&a| c(a)))).unwrap()
}

fn binary_entropy(p: f64) -> f64 {
    [p, 1.0 - p].iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Partial trace by explicit digit bookkeeping on the little-endian index.
fn partial_trace_oracle(rho: &DenseOperator, keep: &[usize]) -> Matrix {
    let (q, n) = (rho.q, rho.n);
    let dk = (q as usize).pow(keep.len() as u32);
    let mut out = Matrix::zeros(dk, dk);
    let dim = rho.dim();
    for i in 0..dim {
        for j in 0..dim {
            let (di, dj) = (digits(i, q, n), digits(j, q, n));
            if (0..n).filter(|s| !keep.contains(s)).any(|s| di[s] != dj[s]) {
                continue;
            }
            let fold = |d: &[usize]| keep.iter().rev().fold(0, |acc, &s| acc * q as usize + d[s]);
            out[(fold(&di), fold(&dj))] += rho.mat[(i, j)];
        }
    }
    out
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn partial_trace_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rho = random_density(3, 2, &mut rng).unwrap();
    let scalar = partial_trace(&rho, &[]).unwrap();
    assert_eq!(scalar.dim(), 1);
    assert!((scalar.mat[(0, 0)] - c(1.0)).norm() < 1e-12);

    let bell = state(2, 2, &[1.0, 0.0, 0.0, 1.0]).density();
    for site in [0, 1] {
        let red = partial_trace(&bell, &[site]).unwrap();
        assert!(max_abs(&(&red.mat - Matrix::identity(2, 2).scale(0.5))) < 1e-12);
    }

    let a = random_density(2, 1, &mut rng).unwrap();
    let b = random_density(2, 1, &mut rng).unwrap();
    let ab = a.tensor(&b).unwrap();
    assert!(max_abs(&(&partial_trace(&ab, &[0]).unwrap().mat - &a.mat)) < 1e-12);
    assert!(max_abs(&(&partial_trace(&ab, &[1]).unwrap().mat - &b.mat)) < 1e-12);

    assert!(partial_trace(&ab, &[2]).is_err());
    assert!(partial_trace(&ab, &[0, 0]).is_err());
}

#[test]
fn partial_trace_matches_digit_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (q, n) in [(2u64, 3usize), (3, 2), (2, 4), (3, 3)] {
        let rho = random_density(q, n, &mut rng).unwrap();
        for keep in [vec![0], vec![n - 1], vec![0, n - 1], (1..n).collect::<Vec<_>>()] {
            let got = partial_trace(&rho, &keep).unwrap();
            assert!(max_abs(&(&got.mat - partial_trace_oracle(&rho, &keep))) < 1e-12, "q={q} n={n} keep={keep:?}");
            assert!((got.trace() - c(1.0)).norm() < 1e-12);
        }
        let psi = random_state(q, n, &mut rng).unwrap();
        let keep = vec![0, n - 1];
        let direct = psi.reduced(&keep).unwrap();
        assert!(max_abs(&(&direct.mat - partial_trace_oracle(&psi.density(), &keep))) < 1e-12);
    }
}

#[test]
fn fidelity_examples() {
    let zero = state(2, 1, &[1.0, 0.0]).density();
    let one = state(2, 1, &[0.0, 1.0]).density();
    let plus = state(2, 1, &[1.0, 1.0]).density();
    assert!((fidelity_sq(&zero, &zero).unwrap() - 1.0).abs() < 1e-12);
    assert!(fidelity_sq(&zero, &one).unwrap().abs() < 1e-12);
    assert!((fidelity_sq(&zero, &plus).unwrap() - 0.5).abs() < 1e-12);
    assert!((root_fidelity(&zero, &plus).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);

    let not_psd = DenseOperator::new(2, 1, Matrix::from_diagonal(&Vector::from_vec(vec![c(1.5), c(-0.5)]))).unwrap();
    assert!(matches!(fidelity_sq(&not_psd, &zero), Err(Error::NotPsd(_))));
    let qutrit = DenseOperator::maximally_mixed(3, 1).unwrap();
    assert!(fidelity_sq(&zero, &qutrit).is_err());
}

#[test]
fn trace_distance_uses_the_full_one_norm() {
    let zero = state(2, 1, &[1.0, 0.0]).density();
    let one = state(2, 1, &[0.0, 1.0]).density();
    assert!(trace_distance(&zero, &zero).unwrap().abs() < 1e-12);
    assert!((trace_distance(&zero, &one).unwrap() - 2.0).abs() < 1e-12);
    let mixed = DenseOperator::maximally_mixed(2, 1).unwrap();
    assert!((trace_distance(&zero, &mixed).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn entropy_and_mutual_information_examples() {
    let product = state(3, 2, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).density();
    assert!(mutual_information(&product, &[0], &[1], B2).unwrap().abs() < 1e-12);
    let bell = state(2, 2, &[1.0, 0.0, 0.0, 1.0]);
    assert!((mutual_information(&bell.density(), &[0], &[1], B2).unwrap() - 2.0).abs() < 1e-12);
    assert!((mutual_information(&bell.density(), &[0], &[1], LogBase::E).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-12);
    assert!((mutual_information(&bell.density(), &[0], &[1], LogBase::Ten).unwrap() - 2.0 * 2f64.log10()).abs() < 1e-12);
    assert!(matches!(mutual_information(&bell.density(), &[0], &[0, 1], B2), Err(Error::OverlappingRegions)));

    for theta in [0.0, 0.1, 0.37, 0.6, std::f64::consts::FRAC_PI_4, 1.2] {
        let psi = state(2, 2, &[f64::cos(theta), 0.0, 0.0, f64::sin(theta)]);
        let expect = 2.0 * binary_entropy(theta.cos().powi(2));
        assert!((mutual_information(&psi.density(), &[0], &[1], B2).unwrap() - expect).abs() < 1e-10, "θ={theta}");
        assert!((mutual_information_pure(&psi, &[0], &[1], B2).unwrap() - expect).abs() < 1e-10);
    }
    let mixed = DenseOperator::maximally_mixed(3, 2).unwrap();
    assert!((vn_entropy(&mixed, LogBase::E) - 9f64.ln()).abs() < 1e-12);
}

#[test]
fn relative_entropy_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rho = random_density(2, 2, &mut rng).unwrap();
    assert!(relative_entropy(&rho, &rho, B2).unwrap().abs() < 1e-10);
    assert!(max_relative_entropy(&rho, &rho, B2).unwrap().abs() < 1e-10);

    let zero = state(2, 1, &[1.0, 0.0]).density();
    let one = state(2, 1, &[0.0, 1.0]).density();
    assert_eq!(relative_entropy(&zero, &one, B2).unwrap(), f64::INFINITY);
    assert_eq!(max_relative_entropy(&zero, &one, B2).unwrap(), f64::INFINITY);

    // Pure state against the maximally mixed state: both equal log d.
    let mixed = DenseOperator::maximally_mixed(3, 1).unwrap();
    let pure = random_state(3, 1, &mut rng).unwrap().density();
    assert!((relative_entropy(&pure, &mixed, B2).unwrap() - 3f64.log2()).abs() < 1e-10);
    assert!((max_relative_entropy(&pure, &mixed, B2).unwrap() - 3f64.log2()).abs() < 1e-10);

    // Commuting diagonal pair against closed forms.
    let p = [0.7f64, 0.3];
    let s = [0.4f64, 0.6];
    let diag = |v: [f64; 2]| DenseOperator::new(2, 1, Matrix::from_diagonal(&Vector::from_vec(v.iter().map(|&x| c(x)).collect()))).unwrap();
    let kl: f64 = p.iter().zip(&s).map(|(a, b)| a * (a / b).log2()).sum();
    let dmax = p.iter().zip(&s).map(|(a, b)| (a / b).log2()).fold(f64::NEG_INFINITY, f64::max);
    assert!((relative_entropy(&diag(p), &diag(s), B2).unwrap() - kl).abs() < 1e-12);
    assert!((max_relative_entropy(&diag(p), &diag(s), B2).unwrap() - dmax).abs() < 1e-12);
}

#[test]
fn brickwork_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let psi = random_state(2, 5, &mut rng).unwrap();
    let same = apply_brickwork(&psi, 0, |_, _| unreachable!()).unwrap();
    assert_eq!(same, psi);
    let id = apply_brickwork(&psi, 3, |_, _| Matrix::identity(4, 4)).unwrap();
    assert!((&id.amps - &psi.amps).norm() < 1e-14);

    let bad = apply_brickwork(&psi, 1, |_, _| Matrix::identity(4, 4).scale(1.1));
    assert!(matches!(bad, Err(Error::NotUnitary(_))));
    assert!(apply_brickwork(&psi, 1, |_, _| Matrix::identity(9, 9)).is_err());
}

/// Brickwork oracle: the full unitary as a product of embedded two-site gates.
fn embed(gate: &Matrix, i: usize, q: u64, n: usize) -> Matrix {
    let dim = (q as usize).pow(n as u32);
    let q = q as usize;
    Matrix::from_fn(dim, dim, |r, col| {
        let (dr, dc) = (digits(r, q as u64, n), digits(col, q as u64, n));
        if (0..n).any(|s| s != i && s != i + 1 && dr[s] != dc[s]) {
            return c(0.0);
        }
        gate[(dr[i] + q * dr[i + 1], dc[i] + q * dc[i + 1])]
    })
}

#[test]
fn brickwork_matches_embedded_gate_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (q, n, depth) in [(2u64, 4usize, 3usize), (3, 3, 2), (2, 5, 2)] {
        let psi = random_state(q, n, &mut rng).unwrap();
        let gates: Vec<Vec<Matrix>> = (0..depth).map(|_| (0..n).map(|_| random_unitary((q * q) as usize, &mut rng)).collect()).collect();
        let out = apply_brickwork(&psi, depth, |layer, i| gates[layer][i].clone()).unwrap();
        let mut v = psi.amps.clone();
        for (layer, row) in gates.iter().enumerate() {
            let mut i = layer % 2;
            while i + 1 < n {
                v = embed(&row[i], i, q, n) * v;
                i += 2;
            }
        }
        assert!((&out.amps - &v).norm() < 1e-12, "q={q} n={n}");
        assert!((out.amps.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn state_validation_and_files() {
    assert!(DenseState::new(2, 1, Vector::from_vec(vec![c(1.0), c(1.0)])).is_err());
    assert!(DenseState::new(2, 2, Vector::from_vec(vec![c(1.0), c(0.0)])).is_err());
    assert!(matches!(dimension(10, 5, DEFAULT_DENSE_LIMIT), Err(Error::DenseLimit { .. })));
    assert_eq!(dimension(3, 4, DEFAULT_DENSE_LIMIT).unwrap(), 81);

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let psi = random_state(3, 2, &mut rng).unwrap();
    let text = StateFile::render(&psi);
    let back = StateFile::parse(&text).unwrap();
    assert!((&back.amps - &psi.amps).norm() < 1e-15);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["q"], 3);
    assert_eq!(value["amplitudes"].as_array().unwrap().len(), 9);
    assert!(StateFile::parse(r#"{"q": 2, "n": 1, "amplitudes": [[1, 0], [1, 0]]}"#).is_err());
    assert!(StateFile::parse(r#"{"q": 2, "n": 1}"#).is_err());
    assert!(DenseOperator::new(2, 1, Matrix::identity(3, 3)).is_err());
}

#[test]
fn stabilizer_mutual_information_is_a_multiple_of_log_q() {
    for q in [2u64, 3] {
        for n in 1..=2usize {
            for g in enumerate_stabilizer_states(n, q, 1_000_000).unwrap() {
                let rho = g.sps_dense().unwrap();
                let cuts: Vec<(Vec<usize>, Vec<usize>)> =
                    if n == 1 { vec![(vec![0], vec![])] } else { vec![(vec![0], vec![1]), (vec![0, 1], vec![])] };
                for (a, b) in cuts {
                    let units = mutual_information(&rho, &a, &b, LogBase::E).unwrap() / (q as f64).ln();
                    assert!((units - units.round()).abs() < 1e-9, "q={q} n={n} I/log q = {units}");
                }
            }
        }
    }
}

fn pair(q: u64, n: usize, seed: u64) -> (DenseOperator, DenseOperator) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.3) {
            random_state(q, n, rng).unwrap().density()
        } else {
            random_density(q, n, rng).unwrap()
        }
    };
    let a = draw(&mut rng);
    let b = draw(&mut rng);
    (a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn densities_are_valid(seed in any::<u64>(), q in 2u64..4, n in 1usize..3) {
        let (rho, _) = pair(q, n, seed);
        prop_assert!(rho.hermitian_deviation() < 1e-12);
        prop_assert!((rho.trace() - c(1.0)).norm() < 1e-10);
        prop_assert!(rho.check_psd().is_ok());
    }

    #[test]
    fn fidelity_is_symmetric_and_squared(seed in any::<u64>(), q in 2u64..4) {
        let (rho, sigma) = pair(q, 2, seed);
        let f = fidelity_sq(&rho, &sigma).unwrap();
        prop_assert!((-1e-10..=1.0 + 1e-10).contains(&f));
        prop_assert!((f - fidelity_sq(&sigma, &rho).unwrap()).abs() < 1e-8);
        prop_assert!((f - root_fidelity(&rho, &sigma).unwrap().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn pure_fidelity_is_the_overlap(seed in any::<u64>(), q in 2u64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_state(q, 2, &mut rng).unwrap();
        let phi = random_state(q, 2, &mut rng).unwrap();
        let f = fidelity_sq(&psi.density(), &phi.density()).unwrap();
        prop_assert!((f - psi.inner(&phi).norm_sqr()).abs() < 1e-8);
    }

    #[test]
    fn fuchs_van_de_graaf(seed in any::<u64>(), q in 2u64..4) {
        let (rho, sigma) = pair(q, 2, seed);
        let root = root_fidelity(&rho, &sigma).unwrap();
        let half = trace_distance(&rho, &sigma).unwrap() / 2.0;
        prop_assert!(1.0 - root <= half + 1e-9);
        prop_assert!(half <= (1.0 - root * root).max(0.0).sqrt() + 1e-9);
    }

    #[test]
    fn fidelity_is_monotone_under_partial_trace(seed in any::<u64>(), q in 2u64..4) {
        let (rho, sigma) = pair(q, 2, seed);
        let whole = fidelity_sq(&rho, &sigma).unwrap();
        for keep in [[0usize], [1]] {
            let part = fidelity_sq(&partial_trace(&rho, &keep).unwrap(), &partial_trace(&sigma, &keep).unwrap()).unwrap();
            prop_assert!(whole <= part + 1e-9);
        }
    }

    #[test]
    fn relative_entropy_is_below_max_relative_entropy(seed in any::<u64>(), q in 2u64..4) {
        let (rho, sigma) = pair(q, 2, seed);
        let s = relative_entropy(&rho, &sigma, B2).unwrap();
        let smax = max_relative_entropy(&rho, &sigma, B2).unwrap();
        prop_assert!(s >= -1e-9);
        prop_assert!(s <= smax + 1e-8, "S = {s}, Smax = {smax}");
    }

    #[test]
    fn brickwork_preserves_norm(seed in any::<u64>(), depth in 0usize..4, q in 2u64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_state(q, 4, &mut rng).unwrap();
        let d = (q * q) as usize;
        let out = apply_brickwork(&psi, depth, |_, _| random_unitary(d, &mut rng)).unwrap();
        prop_assert!((out.amps.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_is_nonnegative_and_symmetric(seed in any::<u64>()) {
        let (rho, _) = pair(2, 3, seed);
        let ab = mutual_information(&rho, &[0], &[2], B2).unwrap();
        prop_assert!(ab >= -1e-10);
        prop_assert!((ab - mutual_information(&rho, &[2], &[0], B2).unwrap()).abs() < 1e-10);
    }
}
