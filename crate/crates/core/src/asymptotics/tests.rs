use super::*;
use crate::numeric::{log_sum_exp, rational};
use crate::trees::enumerate_trees;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ds(v: &[u32]) -> DegreeSequence {
    DegreeSequence::new(v.to_vec()).unwrap()
}

fn tds(v: &[u32]) -> TreeDegreeSequence {
    TreeDegreeSequence::new(v.to_vec()).unwrap()
}

fn mixed(n: usize, a: u32, b: u32) -> DegreeSequence {
    DegreeSequence::new((0..n).map(|j| if j % 2 == 0 { a } else { b }).collect()).unwrap()
}

#[test]
fn lambda0_examples() {
    assert_eq!(lambda0(&DegreeSequence::regular(10, 3).unwrap()), rational(1, 1));
    assert_eq!(lambda0(&DegreeSequence::regular(8, 5).unwrap()), rational(2, 1));
    assert_eq!(lambda0(&ds(&[1, 1])), rational(0, 1));
}

#[test]
fn lambda0_identity_on_random_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..300 {
        let n = rng.gen_range(2..40);
        let mut v: Vec<u32> = (0..n).map(|_| rng.gen_range(1..9)).collect();
        if v.iter().sum::<u32>() % 2 == 1 {
            v[0] += 1;
        }
        let d = ds(&v);
        let l0 = lambda0(&d);
        let db = d.mean();
        let r = d.variance();
        let rhs = (&r + &db * &db) * (&r + &db * &db) / (rational(4, 1) * &db * &db) - rational(1, 4);
        assert_eq!(&l0 + &l0 * &l0, rhs, "{d}");
    }
}

#[test]
fn lambda_x_examples() {
    let d = ds(&[3, 3, 3, 3]);
    assert_eq!(lambda_x(&d, &tds(&[2, 2, 1, 1])).unwrap(), rational(1, 3));
    assert_eq!(lambda_x(&d, &tds(&[3, 1, 1, 1])).unwrap(), rational(1, 2));
    let tree_like = ds(&[2, 2, 1, 1]);
    assert_eq!(lambda_x(&tree_like, &tds(&[2, 2, 1, 1])).unwrap(), rational(0, 1));
    assert!(matches!(lambda_x(&ds(&[2, 3, 3, 2]), &tds(&[3, 1, 1, 1])), Err(Error::NotSuitable(_))));
}

#[test]
fn mu_examples() {
    let d = ds(&[3, 3, 3, 3]);
    let path = LabeledTree::from_one_based(4, &[(3, 1), (1, 2), (2, 4)]).unwrap();
    assert_eq!(mu_tree(&d, &path).unwrap(), rational(5, 6));
    let star = LabeledTree::from_one_based(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
    assert_eq!(mu_tree(&d, &star).unwrap(), rational(0, 1));
    assert_eq!(mu_bar(&d, &tds(&[2, 2, 1, 1])).unwrap(), rational(5, 6));
    assert_eq!(mu_bar(&d, &tds(&[3, 1, 1, 1])).unwrap(), rational(0, 1));
    let tree_like = ds(&[3, 2, 1, 1, 1]);
    assert_eq!(mu_bar(&tree_like, &tds(&[3, 2, 1, 1, 1])).unwrap(), rational(0, 1));
}

#[test]
fn mu_bar_is_the_tree_average() {
    for v in [vec![3u32, 3, 3, 3], vec![3, 2, 2, 3, 2, 2], vec![4, 3, 3, 2, 2, 1, 1], vec![3, 3, 3, 3, 3, 3, 2, 2]] {
        let d = ds(&v);
        for x in d.enumerate_suitable().unwrap() {
            let trees: Vec<_> = enumerate_trees(&x).unwrap().collect();
            let sum = trees.iter().fold(BigRational::zero(), |a, t| a + mu_tree(&d, t).unwrap());
            let avg = sum / BigRational::from_integer(BigInt::from(trees.len()));
            assert_eq!(mu_bar(&d, &x).unwrap(), avg, "d = {d}, x = {x}");
        }
    }
}

#[test]
fn f_and_g_examples() {
    let d = ds(&[3, 3, 3, 3]);
    let x = tds(&[2, 2, 1, 1]);
    assert_eq!(f_exact(&d, &x).unwrap(), rational(14, 9));
    assert_eq!(g_exact(&d, &x).unwrap(), rational(13, 18));
    assert!((f_of_x(&d, &x).unwrap() - 14.0 / 9.0).abs() < 1e-15);
    assert!((g_of_x(&d, &x).unwrap() - 13.0 / 18.0).abs() < 1e-15);
    let path = LabeledTree::from_one_based(4, &[(3, 1), (1, 2), (2, 4)]).unwrap();
    let p = tree_parameters(&d, &path).unwrap();
    assert_eq!(p.lambda0, rational(1, 1));
    assert_eq!(p.mu_t, rational(5, 6));
    assert!((p.g - 13.0 / 18.0).abs() < 1e-15);
}

#[test]
fn g_fast_path_matches_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let d = mixed(60, 5, 1);
    for _ in 0..50 {
        let x = d.sample_suitable_x(&mut rng).unwrap();
        let exact = to_f64(&g_exact(&d, &x).unwrap());
        assert!((g_of_x(&d, &x).unwrap() - exact).abs() < 1e-12);
    }
}

#[test]
fn beta_examples_and_sandwich() {
    let d = ds(&[3, 3, 3, 3]);
    assert!((beta_exact(&d, &tds(&[2, 2, 1, 1])).unwrap() - (-5.0f64 / 6.0).exp()).abs() < 1e-15);
    assert_eq!(beta_exact(&d, &tds(&[3, 1, 1, 1])).unwrap(), 1.0);
    for v in [vec![3u32, 3, 3, 3, 2, 2], vec![4, 3, 2, 2, 2, 2, 1]] {
        let d = ds(&v);
        for x in d.enumerate_suitable().unwrap() {
            let b = beta_exact(&d, &x).unwrap();
            let lower = (-to_f64(&mu_bar(&d, &x).unwrap())).exp();
            assert!(lower <= b * (1.0 + 1e-12) && b <= 1.0 + 1e-12, "{x}: {lower} {b}");
        }
    }
}

#[test]
fn beta_approx_reports_smaller_branch() {
    let d = DegreeSequence::regular(100, 3).unwrap();
    let mut x = vec![1u32; 100];
    for v in x.iter_mut().take(98) {
        *v = 2;
    }
    let est = beta_approx(&d, &tds(&x)).unwrap();
    let n = 100f64;
    let want = (81.0 / n).min(27.0 * n.ln() / n).min(3.0 + 9.0 / n);
    assert!((est.error_exponent - want).abs() < 1e-15);
    assert!(beta_approx(&ds(&[2, 2, 2]), &tds(&[2, 1, 1])).is_err());
}

#[test]
fn simple_graph_count_examples() {
    let e = estimate_simple_graph_count(&[1, 1], &SimpleGraph::new(2, []).unwrap()).unwrap();
    assert!(e.log_value.abs() < 1e-14);
    let e = estimate_simple_graph_count(&[2, 2, 2], &SimpleGraph::new(3, []).unwrap()).unwrap();
    assert!((e.log_value - ((15.0f64 / 8.0).ln() - 0.75)).abs() < 1e-13);
    assert!(e.within_band(0.0, 1.0));
    let k4 = estimate_simple_graph_count(&[3, 3, 3, 3], &SimpleGraph::new(4, []).unwrap()).unwrap();
    assert!(k4.within_band(0.0, 1.0));
    assert!(!k4.condition_ok);
    assert!(estimate_simple_graph_count(&[0, 0], &SimpleGraph::new(2, []).unwrap()).is_err());
}

#[test]
fn containment_examples() {
    let d = ds(&[3, 3, 3, 3]);
    let star = LabeledTree::from_one_based(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
    let path = LabeledTree::from_one_based(4, &[(3, 1), (1, 2), (2, 4)]).unwrap();
    for t in [&star, &path] {
        let e = estimate_containment_probability(&d, t).unwrap();
        assert!(e.within_band(0.0, 1.0), "{e:?}");
    }
    // Same x, larger μ(T) gives a smaller estimate.
    let d = ds(&[3, 3, 3, 3, 3, 3]);
    let a = LabeledTree::from_one_based(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]).unwrap();
    let b = LabeledTree::from_one_based(6, &[(1, 3), (3, 2), (2, 4), (4, 5), (5, 6)]).unwrap();
    assert_eq!(a.degree_sequence(), b.degree_sequence());
    let (ma, mb) = (mu_tree(&d, &a).unwrap(), mu_tree(&d, &b).unwrap());
    let (ea, eb) = (
        estimate_containment_probability(&d, &a).unwrap().log_value,
        estimate_containment_probability(&d, &b).unwrap().log_value,
    );
    assert_eq!(ma < mb, ea > eb);
    assert!(estimate_containment_probability(&ds(&[2, 2, 2]), &LabeledTree::new(3, [(0, 1), (1, 2)]).unwrap()).is_err());
}

#[test]
fn h_d_examples() {
    let d = DegreeSequence::regular(4, 3).unwrap();
    let want = 0.5 * 2f64.ln() - 4f64.ln() + 4.0 * (12.0 / 3f64.powf(1.5)).ln();
    assert!((h_d_log(&d).unwrap() - want).abs() < 1e-13);
    // Rational cross-check: H = √2/4 · (12/3^{3/2})^4 = √2/4 · 20736/729.
    let exact = (2f64.sqrt() / 4.0 * 20736.0 / 729.0).ln();
    assert!((h_d_log(&d).unwrap() - exact).abs() < 1e-13);
    assert!(h_d_log(&ds(&[2, 2, 2])).is_err());
    assert!(h_d_log_with_floor(&ds(&[3, 3, 2, 2, 2, 2]), 0.5).is_err());
}

#[test]
fn closed_form_examples() {
    let g3 = expected_g_closed_form(&DegreeSequence::regular(100, 3).unwrap()).unwrap();
    assert!((g3.log_value - 19.0 / 16.0).abs() < 1e-15);
    let g4 = expected_g_closed_form(&DegreeSequence::regular(100, 4).unwrap()).unwrap();
    assert!((g4.log_value - 47.0 / 36.0).abs() < 1e-15);
    // (2d² − 4d + 1) = 7 at d = 3.
    let r4 = expected_g_closed_form(&mixed(100, 5, 1)).unwrap();
    assert!((r4.log_value - (19.0 / 16.0 + 0.25 + 7.0 / 36.0)).abs() < 1e-15);
    assert!((r4.error_exponent - 125.0 / 300.0).abs() < 1e-15);
}

#[test]
fn exact_expected_g_matches_enumeration() {
    for v in [vec![3u32, 3, 3, 3], vec![3, 3, 3, 3, 3, 3], vec![5, 1, 5, 1, 5, 1, 5, 1], vec![4, 3, 3, 2, 2, 2, 1, 1]] {
        let d = ds(&v);
        assert_eq!(expected_g_exact(&d).unwrap(), expected_g_by_enumeration(&d).unwrap(), "{d}");
    }
}

#[test]
fn exact_expected_g_approaches_closed_form() {
    for d in [DegreeSequence::regular(400, 3).unwrap(), mixed(400, 5, 1), DegreeSequence::regular(400, 4).unwrap()] {
        let exact = to_f64(&expected_g_exact(&d).unwrap());
        let cf = expected_g_closed_form(&d).unwrap();
        assert!(cf.within_band(exact, 1.0), "{exact} vs {cf:?}");
    }
}

#[test]
fn strict_mode_refuses() {
    let d = DegreeSequence::regular(20, 3).unwrap();
    assert!(matches!(expected_tau_asymptotic(&d, Mode::Strict), Err(Error::Precondition(_))));
    let e = expected_tau_asymptotic(&d, Mode::Permissive).unwrap();
    assert!(!e.condition_ok && e.log_value.is_finite());
    let big = DegreeSequence::regular(200, 3).unwrap();
    assert!(expected_tau_asymptotic(&big, Mode::Strict).unwrap().condition_ok);
}

#[test]
fn regular_reduction_and_growth() {
    for k in 3..=10u32 {
        let d = DegreeSequence::regular(1000, k).unwrap();
        let e = expected_tau_asymptotic(&d, Mode::Permissive).unwrap();
        let diff = e.log_value - h_d_log(&d).unwrap();
        let kf = k as f64;
        let want = (6.0 * kf * kf - 14.0 * kf + 7.0) / (4.0 * (kf - 1.0).powi(2));
        assert!((diff - want).abs() < 1e-12);
    }
    // With d̄ = 3 the prefactor is √2/n, so (ln H_d + ln n − ½ ln 2)/n is the growth rate.
    let rate = |d: &DegreeSequence| {
        let n = d.n() as f64;
        (h_d_log(d).unwrap() + n.ln() - 0.5 * 2f64.ln()) / n
    };
    let r = rate(&DegreeSequence::regular(4000, 3).unwrap());
    assert!((r - (4.0 / 3f64.sqrt()).ln()).abs() < 1e-12);
    let r = rate(&mixed(4000, 5, 1));
    assert!((r - 0.5 * (80.0f64 / 27.0).ln()).abs() < 1e-12);
}

#[test]
fn per_x_estimates_sum_to_total() {
    for v in [vec![3u32; 8], vec![4, 4, 3, 3, 3, 3, 2, 2], vec![5, 1, 5, 1, 5, 1, 5, 1, 5, 1]] {
        let d = ds(&v);
        let total = expected_tau_asymptotic(&d, Mode::Permissive).unwrap();
        let terms: Vec<f64> = d
            .enumerate_suitable()
            .unwrap()
            .map(|x| expected_tau_for_tree_degrees(&d, &x, Mode::Permissive).unwrap().log_value)
            .collect();
        let sum = log_sum_exp(terms);
        assert!((sum - total.log_value).abs() <= 2.0 * total.error_exponent, "{d}: {sum} vs {total:?}");
    }
}

#[test]
fn per_x_binomial_term() {
    let d = ds(&[3, 3, 3, 3]);
    let x = tds(&[3, 1, 1, 1]);
    let e = expected_tau_for_tree_degrees(&d, &x, Mode::Permissive).unwrap();
    let want = h_d_log(&d).unwrap() - ln_binomial(8, 2) + f_of_x(&d, &x).unwrap();
    assert!((e.log_value - want).abs() < 1e-13);
}

fn near_two_sequence(n: usize, x: usize) -> DegreeSequence {
    DegreeSequence::new((0..n).map(|j| if j < 2 * x { 3 } else { 2 }).collect()).unwrap()
}

#[test]
fn near_two_agrees_with_main_estimate() {
    for (n, x) in [(2000usize, 41usize), (5000, 45), (10_000, 60), (40_000, 150)] {
        let d = near_two_sequence(n, x);
        let a = expected_tau_near_two(&d, x as f64, Mode::Strict).unwrap();
        let b = expected_tau_asymptotic(&d, Mode::Permissive).unwrap();
        assert!(a.condition_ok);
        assert!((a.log_value - b.log_value).abs() <= a.error_exponent + b.error_exponent, "n={n}");
    }
}

#[test]
fn near_two_parameter_checks() {
    let d = near_two_sequence(2000, 41);
    assert!(matches!(expected_tau_near_two(&d, 40.0, Mode::Permissive), Err(Error::Domain(_))));
    let small = near_two_sequence(100, 5);
    assert!(matches!(expected_tau_near_two(&small, 5.0, Mode::Strict), Err(Error::Precondition(_))));
    let e = expected_tau_near_two(&small, 5.0, Mode::Permissive).unwrap();
    assert!(!e.condition_ok);
    assert!((e.error_exponent - (81.0 / 5.0 + 125.0 / 10_000.0)).abs() < 1e-12);
}

#[test]
fn near_two_constant_term() {
    // With R = 0 the quadratic term is (6)(2)/16; isolate it by differencing in R.
    let c = |r: f64| (6.0 + r) * (2.0 + r) / 16.0;
    assert_eq!(c(0.0), 0.75);
    let d = near_two_sequence(2000, 41);
    let r = to_f64(&d.variance());
    let e = expected_tau_near_two(&d, 41.0, Mode::Permissive).unwrap();
    let n = 2000f64;
    let x = 41f64;
    let rest = -n.ln() + x * (1.0 - 2f64.ln()) + (1.5 + x) * (n / (2.0 * x)).ln() + d.sum_ln_degrees() - n * 2f64.ln()
        + 1.5 * x * x / n;
    assert!((e.log_value - rest - c(r)).abs() < 1e-9);
}
