use ctxgap::algebra::{jacobi_eigen, pslq_find, residual_test, BigReal, PslqSettings};
use ctxgap::alpha::alpha_clique;
use ctxgap::eta::{optimize_eta, EtaSettings};
use ctxgap::graph::named;
use ctxgap::noise::critical_visibility;
use ctxgap::pipeline::{scan, ScanConfig};
use ctxgap::theta::{lovasz_theta, SolveSettings};
use ctxgap::Graph;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                g.add_edge(i, j).unwrap();
            }
            bit += 1;
        }
    }
    g
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>()).prop_map(|(n, m)| graph_from_mask(n, m))
}

fn theta(g: &Graph) -> f64 {
    lovasz_theta(g, &SolveSettings::high_accuracy()).unwrap().theta
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sandwich_holds(g in arb_graph(8)) {
        prop_assert!(alpha_clique(&g).alpha as f64 <= theta(&g) + 1e-7);
        prop_assert!(theta(&g) <= g.n() as f64 + 1e-7);
    }

    #[test]
    fn adding_an_edge_never_raises_theta(g in arb_graph(7), pick in any::<prop::sample::Index>()) {
        let missing: Vec<(usize, usize)> = g.complement().edges();
        prop_assume!(!missing.is_empty());
        let (a, b) = missing[pick.index(missing.len())];
        let mut h = g;
        h.add_edge(a, b).unwrap();
        prop_assert!(theta(&h) <= theta(&g) + 1e-7);
    }

    #[test]
    fn theta_is_additive_over_components(a in arb_graph(6), b in arb_graph(6)) {
        prop_assume!(a.n() + b.n() <= 12);
        let u = a.disjoint_union(&b).unwrap();
        prop_assert!((theta(&u) - theta(&a) - theta(&b)).abs() <= 1e-7);
    }

    #[test]
    fn jacobi_trace_and_determinant(entries in prop::collection::vec(-3.0f64..3.0, 16)) {
        let n = 4;
        let mut a = vec![vec![0.0; n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                a[i][j] = entries[k];
                a[j][i] = entries[k];
                k += 1;
            }
        }
        let e = jacobi_eigen(&DMatrix::from_fn(n, n, |i, j| a[i][j])).unwrap();
        let trace: f64 = (0..n).map(|i| a[i][i]).sum();
        let want = det(&a);
        let sum: f64 = e.values.iter().sum();
        let prod: f64 = e.values.iter().product();
        prop_assert!((sum - trace).abs() <= 1e-10 * trace.abs().max(1.0));
        prop_assert!((prod - want).abs() <= 1e-10 * want.abs().max(1.0));
    }

    #[test]
    fn pslq_recovers_quadratic_irrationals(a in -20i64..20, b in 1i64..20, c in prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 11])) {
        let digits = 50;
        let x = &BigReal::from_i64(a, digits) + &(&BigReal::from_i64(b, digits) * &BigReal::from_i64(c, digits).sqrt().unwrap());
        let p = pslq_find(&x, 4, &PslqSettings::default()).unwrap().expect("a relation exists");
        prop_assert_eq!(p.degree(), 2);
        prop_assert!(p.eval(&x).abs().log10_abs() <= -(digits as f64 - 10.0));
        prop_assert!(residual_test(&p, &x, 10f64.powi(-(digits as i32) + 5)).unwrap() < 1.0);
    }

    #[test]
    fn tolerance_stays_in_unit_interval(n in 3usize..12, d in 2usize..6, lo in 0.0f64..1.0, hi in 0.0f64..3.0) {
        let b = n as f64 / d as f64;
        let alpha = b + lo;
        let eta = alpha + 1e-3 + hi;
        let v = critical_visibility(alpha, eta, n, d).unwrap().v_star();
        prop_assert!(0.0 < v && v < 1.0);
        prop_assert!((0.0..=1.0).contains(&(1.0 - v)));
    }
}

/// Laplace expansion; fine for 4×4.
fn det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    if n == 1 {
        return a[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<f64>> =
                a[1..].iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect()).collect();
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            sign * a[0][c] * det(&minor)
        })
        .sum()
}

#[test]
fn eta_is_monotone_in_d_and_bounded_by_theta() {
    for g in [named::c5(), named::c7(), named::quad_c5(), named::wagner()] {
        let th = theta(&g);
        let mut prev = 0.0;
        for d in 3..=g.n() {
            let r = optimize_eta(&g, &EtaSettings::new(d, 20, 3)).unwrap();
            let l = r.best.lambda_max;
            assert!(l >= prev - 1e-9, "d={d}: {l} < {prev}");
            assert!(l <= th + 1e-6, "d={d}: {l} > θ = {th}");
            prev = l;
        }
        assert!((prev - th).abs() <= 1e-5, "d=n: {prev} vs θ = {th}");
    }
}

#[test]
fn refined_theta_agrees_with_bulk_and_filter_holds() {
    let rep = scan(&ScanConfig::enumerate(7)).unwrap();
    assert!(rep.records.len() == 853);
    for r in &rep.refined {
        assert!((r.record.theta - r.bulk_theta).abs() <= 1e-4, "{}", r.record.g6);
    }
    for k in 1..=rep.records.len() {
        assert!(rep.graph(k).unwrap().is_connected());
    }
    for r in &rep.records {
        assert!(r.delta >= -1e-7 && r.ratio >= 1.0 - 1e-7);
    }
}
