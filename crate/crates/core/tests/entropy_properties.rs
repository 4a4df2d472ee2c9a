use proptest::prelude::*;
use proptest::strategy::ValueTree;
use renyi_core::classical::{
    entropy_type_beta, entropy_type_beta_chain, info_function_beta, order_from_type, renyi_entropy, t1_check,
    type_beta_product_check, type_beta_sandwich_check, BetaOrder, ProbabilityVector,
};
use renyi_core::quantum::{renyi_entropy as quantum_renyi, t3_bound, DensityMatrix};
use renyi_core::verify::{random_density, random_simplex, random_unitary, Seed};
use renyi_core::Units;

fn b(beta: f64) -> BetaOrder {
    BetaOrder::new(beta).unwrap()
}

/// The information-function equation
/// `f(x) + (1−x)^β f(y/(1−x)) = f(y) + (1−y)^β f(x/(1−y))`.
fn equation_residual(x: f64, y: f64, beta: f64) -> f64 {
    let f = |t: f64| info_function_beta(t, b(beta)).unwrap();
    f(x) + (1.0 - x).powf(beta) * f(y / (1.0 - x)) - f(y) - (1.0 - y).powf(beta) * f(x / (1.0 - y))
}

#[test]
fn functional_equation_on_sampled_points() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let point = (0.0..1.0f64, 0.0..1.0f64).prop_filter_map("inside the domain", |(x, y)| {
        let (x, y) = if x + y > 1.0 { (1.0 - x, 1.0 - y) } else { (x, y) };
        (1.0 - x > 1e-6 && 1.0 - y > 1e-6).then_some((x, y))
    });
    for beta in [0.3, 0.5, 2.0, 3.0] {
        for _ in 0..1000 {
            let (x, y) = point.new_tree(&mut runner).unwrap().current();
            assert!(equation_residual(x, y, beta).abs() <= 1e-9, "x={x} y={y} beta={beta}");
        }
    }
}

#[test]
fn chain_form_matches_closed_form() {
    for i in 0..10_000u64 {
        let s = Seed(41).substream(i);
        let n = 1 + (i % 16) as usize;
        let p = random_simplex(n, s, (i / 16 % n as u64) as usize).unwrap();
        let beta = b([0.3, 0.5, 2.0, 3.0][(i % 4) as usize]);
        let closed = entropy_type_beta(&p, beta).unwrap();
        let chain = entropy_type_beta_chain(&p, beta).unwrap();
        assert!((closed - chain).abs() <= 1e-10, "trial {i}: {closed} vs {chain}");
    }
}

#[test]
fn spectral_bound_direction_on_ten_thousand_states() {
    for i in 0..10_000u64 {
        let s = Seed(43).substream(i);
        let dim = 2 + (i % 7) as usize;
        let rank = if i % 2 == 0 { dim } else { 1 + (i / 2 % dim as u64) as usize };
        let rho = random_density(dim, s, Some(rank)).unwrap();
        let alpha = [0.3, 0.5, 2.0, 5.0][(i % 4) as usize];
        let bounds = t3_bound(&rho, alpha, Units::Nats).unwrap();
        assert!(bounds.pass(), "trial {i}: {bounds:?}");
        assert!(bounds.direction.violation <= 1e-9 && bounds.cap.violation <= 1e-9);
    }
}

#[test]
fn entropy_is_continuous_at_order_one() {
    for i in 0..200u64 {
        let rho = random_density(2 + (i % 7) as usize, Seed(44).substream(i), None).unwrap();
        let vn = quantum_renyi(&rho, 1.0, Units::Nats).unwrap().value;
        for alpha in [1.0 - 1e-4, 1.0 + 1e-4] {
            assert!((quantum_renyi(&rho, alpha, Units::Nats).unwrap().value - vn).abs() <= 1e-2);
        }
    }
}

#[test]
fn stated_type_beta_ceiling_fails_off_uniform() {
    // sum p^b >= k (prod p)^(b/k) by AM-GM, so the product form sits below
    // the entropy and the stated ceiling is exceeded whenever p is not uniform
    let p = ProbabilityVector::new(vec![0.9, 0.1]).unwrap();
    let stated = type_beta_sandwich_check(&p, b(0.5)).unwrap();
    assert!(!stated.pass);
    assert!(stated.middle.unwrap() > stated.rhs);
}

fn distribution() -> impl Strategy<Value = ProbabilityVector> {
    (1usize..=12, any::<u64>()).prop_flat_map(|(n, seed)| {
        (0..n).prop_map(move |zeros| random_simplex(n, Seed(seed), zeros).unwrap())
    })
}

proptest! {
    #[test]
    fn t1_direction(p in distribution(), beta in prop::sample::select(vec![0.3, 0.5, 0.9, 1.5, 2.0, 5.0])) {
        let r = t1_check(&p, b(beta)).unwrap();
        prop_assert!(r.violation <= 1e-9, "{:?}", r);
    }

    #[test]
    fn type_beta_entropy_dominates_product_form(p in distribution(), beta in 0.05..0.95f64) {
        let r = type_beta_product_check(&p, b(beta)).unwrap();
        prop_assert!(r.violation <= 1e-9, "{:?}", r);
        prop_assert!(entropy_type_beta(&p, b(beta)).unwrap() >= -1e-12);
    }

    #[test]
    fn order_from_type_round_trip(p in distribution(), beta in prop::sample::select(vec![0.3, 0.5, 2.0, 3.0, 7.0])) {
        let h = entropy_type_beta(&p, b(beta)).unwrap();
        let back = order_from_type(h, b(beta)).unwrap();
        prop_assert!((back - renyi_entropy(&p, b(beta))).abs() <= 1e-10);
    }

    #[test]
    fn entropies_ignore_order(
        values in prop::collection::vec(0.0..1.0f64, 1..10).prop_filter("non-zero", |v| v.iter().sum::<f64>() > 1e-3),
        beta in prop::sample::select(vec![0.3, 0.5, 1.0, 2.0, 3.0]),
    ) {
        let total: f64 = values.iter().sum();
        let p: Vec<f64> = values.iter().map(|v| v / total).collect();
        let mut shuffled = p.clone();
        shuffled.reverse();
        shuffled.rotate_left(p.len() / 2);
        let (p, q) = (ProbabilityVector::new(p).unwrap(), ProbabilityVector::new(shuffled).unwrap());
        prop_assert!((renyi_entropy(&p, b(beta)) - renyi_entropy(&q, b(beta))).abs() <= 1e-12);
        if beta != 1.0 {
            prop_assert!((entropy_type_beta(&p, b(beta)).unwrap() - entropy_type_beta(&q, b(beta)).unwrap()).abs() <= 1e-12);
            prop_assert!((entropy_type_beta_chain(&p, b(beta)).unwrap() - entropy_type_beta(&q, b(beta)).unwrap()).abs() <= 1e-10);
        }
        let (rp, rq) = (DensityMatrix::from_diagonal(p.as_slice()).unwrap(), DensityMatrix::from_diagonal(q.as_slice()).unwrap());
        let hp = quantum_renyi(&rp, beta, Units::Bits).unwrap().value;
        let hq = quantum_renyi(&rq, beta, Units::Bits).unwrap().value;
        prop_assert!((hp - hq).abs() <= 1e-12);
    }

    #[test]
    fn quantum_entropy_is_unitarily_invariant(seed in any::<u64>(), dim in 1usize..=8, alpha in prop::sample::select(vec![0.3, 0.5, 1.0, 2.0, 5.0])) {
        let rho = random_density(dim, Seed(seed), None).unwrap();
        let rotated = rho.conjugate(&random_unitary(dim, Seed(seed).substream(9))).unwrap();
        let h = quantum_renyi(&rho, alpha, Units::Nats).unwrap().value;
        prop_assert!((h - quantum_renyi(&rotated, alpha, Units::Nats).unwrap().value).abs() <= 1e-9);
    }

    #[test]
    fn entropy_below_log_dimension(seed in any::<u64>(), dim in 1usize..=8, alpha in prop::sample::select(vec![0.3, 0.5, 2.0, 5.0])) {
        let rho = random_density(dim, Seed(seed), None).unwrap();
        let h = quantum_renyi(&rho, alpha, Units::Nats).unwrap().value;
        prop_assert!(h - (dim as f64).ln() <= 1e-9);
    }
}
