use proptest::prelude::*;
use qwr_core::code::PauliKind;
use qwr_core::f2::kernel_basis;
use qwr_core::metrics::{distance_exact, DEFAULT_BUDGET};
use qwr_core::pipeline::{reduce_full, PipelineConfig, PipelineError};
use qwr_core::robustify::{self, RobustifyError};
use qwr_core::thicken::{self, HeightAssignment};
use qwr_core::{copygauge, CssCode, SparseBitMatrix};

/// Gaussian elimination on dense boolean rows.
fn dense_rank(m: &SparseBitMatrix) -> usize {
    let mut rows: Vec<Vec<bool>> = m
        .rows()
        .map(|r| {
            let mut v = vec![false; m.num_cols()];
            for &c in r {
                v[c] = true;
            }
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..m.num_cols() {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col]) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1).filter(|r| r[col]) {
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x ^= y;
            }
        }
        rank += 1;
    }
    rank
}

fn oracle_k(code: &CssCode) -> usize {
    code.n() - dense_rank(code.hx()) - dense_rank(code.hz())
}

fn commutes(code: &CssCode) -> bool {
    code.hx().rows().all(|x| code.hz().rows().all(|z| x.iter().filter(|q| z.binary_search(q).is_ok()).count() % 2 == 0))
}

/// X-checks with weights up to 5, Z-checks from XORs of the X kernel basis.
fn arb_code(max_n: usize) -> impl Strategy<Value = CssCode> {
    (4usize..=max_n)
        .prop_flat_map(|n| {
            let rows = proptest::collection::vec(proptest::collection::btree_set(0..n, 1..=5usize.min(n)), 1..=n / 2 + 1);
            (Just(n), rows, proptest::collection::vec(1u32.., 1..5))
        })
        .prop_map(|(n, x_rows, picks)| {
            let hx = SparseBitMatrix::new(n, x_rows.into_iter().map(|r| r.into_iter().collect()).collect()).unwrap();
            let basis = kernel_basis(&hx);
            let z_rows = picks
                .iter()
                .map(|&mask| {
                    let mut acc = vec![false; n];
                    for (_, b) in basis.iter().enumerate().filter(|(i, _)| mask >> (i % 32) & 1 == 1) {
                        for &q in b.support() {
                            acc[q] ^= true;
                        }
                    }
                    (0..n).filter(|&q| acc[q]).collect::<Vec<_>>()
                })
                .filter(|r: &Vec<usize>| !r.is_empty())
                .collect();
            CssCode::new(n, hx, SparseBitMatrix::new(n, z_rows).unwrap()).unwrap()
        })
}

fn col_max(m: &SparseBitMatrix) -> usize {
    m.col_weights().into_iter().max().unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn copy_gauge_keeps_k_and_bounds_x_side(code in arb_code(12)) {
        let (out, _, report) = copygauge::x_reduce(&code).unwrap();
        prop_assert!(commutes(&out));
        prop_assert_eq!(oracle_k(&out), oracle_k(&code));
        prop_assert!(out.hx().max_row_weight() <= 3);
        prop_assert!(col_max(out.hx()) <= 3);
        prop_assert_eq!(report.lemma_violations().count(), 0);
    }

    #[test]
    fn thickening_keeps_k(code in arb_code(12), ell in 2usize..5, shift in 0usize..4) {
        let heights = HeightAssignment { heights: (0..code.hz().num_rows()).map(|i| (i + shift) % ell).collect() };
        let (out, report) = thicken::thicken(&code, ell, &heights).unwrap();
        prop_assert!(commutes(&out));
        prop_assert_eq!(oracle_k(&out), oracle_k(&code));
        prop_assert_eq!(out.n(), code.n() * ell + code.hx().num_rows() * (ell - 1));
        prop_assert_eq!(report.lemma_violations().count(), 0);
    }

    #[test]
    fn thickening_scales_x_distance(code in arb_code(8), ell in 2usize..4) {
        prop_assume!(oracle_k(&code) > 0);
        let heights = HeightAssignment::constant(code.hz().num_rows(), 0);
        let out = thicken::thicken_code(&code, ell, &heights).unwrap();
        let d = |c: &CssCode, k: PauliKind| distance_exact(c, k, DEFAULT_BUDGET).unwrap().value.finite().unwrap();
        prop_assert_eq!(d(&out, PauliKind::X), ell * d(&code, PauliKind::X));
        prop_assert_eq!(d(&out, PauliKind::Z), d(&code, PauliKind::Z));
    }

    #[test]
    fn connecting_keeps_k(code in arb_code(14)) {
        let (out, plan, _) = robustify::connect(&code).unwrap();
        prop_assert!(commutes(&out));
        prop_assert_eq!(oracle_k(&out), oracle_k(&code));
        let added: usize = plan.entries.iter().map(|e| e.connecting.len()).sum();
        prop_assert_eq!(out.n(), code.n() + added);
    }

    #[test]
    fn pipeline_keeps_k_or_refuses_unreasonable_codes(code in arb_code(12), seed in any::<u64>()) {
        let cfg = PipelineConfig { copy_gauge: false, thicken: false, ..PipelineConfig::default() };
        let connected_is_reasonable = robustify::connect(&code).unwrap().0.is_reasonable().is_reasonable();
        match reduce_full(&code, &cfg, seed) {
            Ok((out, _)) => {
                prop_assert!(commutes(&out));
                prop_assert_eq!(oracle_k(&out), oracle_k(&code));
            }
            Err(PipelineError::Robustify(RobustifyError::NotReasonable { .. })) => prop_assert!(!connected_is_reasonable),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn full_pipeline_keeps_k(code in arb_code(10), seed in any::<u64>()) {
        match reduce_full(&code, &PipelineConfig::default(), seed) {
            Ok((out, _)) => {
                prop_assert!(commutes(&out));
                prop_assert_eq!(oracle_k(&out), oracle_k(&code));
            }
            Err(PipelineError::Robustify(RobustifyError::NotReasonable { .. })) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}
