use std::collections::BTreeMap;

use niemeier_theta::forms::{decode_binary, decode_ternary, HalfIntegralMatrix};
use niemeier_theta::lattice::{build, quaternary_gram, Label, Lattice};
use niemeier_theta::shortvec::enumerate_short;
use niemeier_theta::theta::{psd_classes, CountOptions, Engine, Ledger, Transitivity};
use niemeier_theta::{Error, Int};
use proptest::prelude::*;

fn engine(lat: Lattice, bound: u32) -> Engine {
    let v = enumerate_short(&lat, bound).unwrap();
    Engine::new(lat, v).unwrap()
}

fn one() -> CountOptions {
    CountOptions::default().with_partitions(1)
}

fn count(e: &Engine, t: &HalfIntegralMatrix) -> Int {
    e.representation_count(t, &one()).unwrap()
}

/// Every pair of integer vectors in a coordinate box, binned by Gram matrix.
fn cartesian_pairs(lat: &Lattice, radius: i64, max_norm: i64) -> BTreeMap<(i64, i64, i64), u64> {
    let n = lat.rank();
    let side = 2 * radius + 1;
    let mut short = Vec::new();
    for idx in 0..side.pow(n as u32) {
        let mut i = idx;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let c = i % side - radius;
                i /= side;
                c
            })
            .collect();
        if lat.gram.norm(&v) <= max_norm {
            short.push(v);
        }
    }
    let mut bins = BTreeMap::new();
    for a in &short {
        for b in &short {
            *bins.entry((lat.gram.norm(a), lat.gram.norm(b), lat.gram.inner(a, b))).or_insert(0) += 1;
        }
    }
    bins
}

#[test]
fn engine_matches_cartesian_enumeration_on_s1() {
    let lat = quaternary_gram(1);
    let bins = cartesian_pairs(&lat, 3, 2);
    assert_eq!(bins, cartesian_pairs(&lat, 4, 2), "coordinate box too small");
    let e = engine(lat, 2);
    for key in psd_classes(2, 1) {
        let t = key.to_matrix();
        let want = bins
            .get(&(2 * t.diag()[0], 2 * t.diag()[1], t.doubled(0, 1)))
            .copied()
            .unwrap_or(0);
        assert_eq!(count(&e, &t), Int::from(want), "{key}");
    }
}

fn unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::array::uniform2(prop::array::uniform2(-2i64..=2)).prop_filter("det ±1", |u| {
        (u[0][0] * u[1][1] - u[0][1] * u[1][0]).abs() == 1
    })
}

fn conjugate(t: &HalfIntegralMatrix, u: &[[i64; 2]; 2]) -> HalfIntegralMatrix {
    let m = t.even_matrix();
    let mut out = vec![vec![0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    out[i][j] += u[a][i] * m[a][b] * u[b][j];
                }
            }
        }
    }
    HalfIntegralMatrix::from_even_matrix(&out).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]
    #[test]
    fn counts_are_invariant_under_unimodular_change(u in unimodular()) {
        let e = engine(quaternary_gram(1), 40);
        for key in psd_classes(2, 1) {
            let t = key.to_matrix();
            let tu = conjugate(&t, &u);
            prop_assert_eq!(count(&e, &t), count(&e, &tu), "T = {}, UᵀTU = {}", key, tu);
        }
    }
}

#[test]
fn sum_rule_over_inner_products() {
    for (lat, diags) in [
        (quaternary_gram(1), vec![(1, 1), (2, 1), (2, 2)]),
        (build(&Label::Psi).unwrap(), vec![(1, 1), (1, 0)]),
    ] {
        let e = engine(lat, 4.min(2 * diags.iter().map(|d| d.0).max().unwrap() as u32));
        for (a, b) in diags {
            let m = (4 * a * b as i64).isqrt();
            let total: Int = (-m..=m)
                .map(|g| HalfIntegralMatrix::new(vec![a, b], vec![g]).unwrap())
                .filter(HalfIntegralMatrix::is_positive_semidefinite)
                .map(|t| count(&e, &t))
                .sum();
            let shells = e.vectors().count(2 * a as u32) * e.vectors().count(2 * b as u32);
            assert_eq!(total, Int::from(shells), "{} diag ({a},{b})", e.lattice().label);
        }
    }
}

#[test]
fn zero_index_counts_once() {
    let e = engine(quaternary_gram(2), 2);
    for n in 0..=4 {
        assert_eq!(count(&e, &HalfIntegralMatrix::zero(n)), Int::from(1));
    }
}

#[test]
fn degree_two_tables() {
    let ts = [decode_binary(0, 0, 0), decode_binary(1, 0, 0), decode_binary(1, 1, 1), decode_binary(1, 0, 1)];
    let cases: [(Label, [u64; 4]); 5] = [
        (Label::S1, [1, 4, 0, 8]),
        (Label::Alpha, [1, 1104, 97152, 1022304]),
        (Label::S2, [1, 6, 12, 0]),
        (Label::Delta, [1, 600, 27600, 303600]),
        (Label::S3, [1, 0, 0, 0]),
    ];
    for (label, want) in cases {
        let e = engine(build(&label).unwrap(), 2);
        for (t, w) in ts.iter().zip(want) {
            assert_eq!(count(&e, t), Int::from(w), "{label} at {t}");
        }
    }
}

#[test]
fn degree_three_tables() {
    let ts = [decode_ternary(1, 1, 1, 1, 1, 1), decode_ternary(1, 1, 1, 0, 0, 1), decode_ternary(1, 1, 1, 0, 0, 0)];
    let cases: [(Label, [u64; 3]); 5] = [
        (Label::S1, [0, 0, 0]),
        (Label::Alpha, [4177536, 81607680, 781393536]),
        (Label::S2, [0, 0, 0]),
        (Label::Delta, [607200, 12751200, 127512000]),
        (Label::S3, [0, 0, 0]),
    ];
    for (label, want) in cases {
        let e = engine(build(&label).unwrap(), 2);
        for (t, w) in ts.iter().zip(want) {
            let (c, _) = e.count(t, &CountOptions::default()).unwrap();
            assert_eq!(c, Int::from(w), "{label} at {t}");
        }
    }
}

#[test]
fn orbit_factoring_agrees_with_direct_count() {
    let e = engine(quaternary_gram(1), 4).with_transitivity(Transitivity { shells: vec![2], pair_shells: vec![] });
    for key in psd_classes(2, 2).into_iter().filter(|k| k.diag().contains(&1)) {
        let t = key.to_matrix();
        assert_eq!(e.orbit_factored_count(&t, 2, &one()).unwrap(), count(&e, &t), "{key}");
    }
    let psi = engine(build(&Label::Psi).unwrap(), 2);
    for key in psd_classes(3, 1).into_iter().filter(|k| k.diag()[0] == 1) {
        let t = key.to_matrix();
        assert_eq!(psi.orbit_factored_count(&t, 2, &one()).unwrap(), count(&psi, &t), "{key}");
    }
}

#[test]
fn undeclared_transitivity_is_rejected() {
    let e = engine(quaternary_gram(1), 2);
    let err = e.orbit_factored_count(&decode_binary(1, 0, 1), 2, &one()).unwrap_err();
    assert!(matches!(err, Error::AssertionUnverified(_)));
}

#[test]
fn partitioning_does_not_change_counts_or_ledger() {
    let lat = build(&Label::Chi).unwrap();
    let v = enumerate_short(&lat, 2).unwrap();
    let e = Engine::new(lat, v).unwrap().with_transitivity(Transitivity::none());
    let mut ledgers = Vec::new();
    for parts in [1, 2, 7] {
        let ledger = Ledger::in_memory();
        let opts = CountOptions::default().with_partitions(parts);
        e.theta_block(3, 1, &opts, &ledger).unwrap();
        let strip: Vec<(String, String, String, String, String)> = ledger
            .records()
            .into_iter()
            .map(|r| (r.lattice, r.key, r.coeff, r.d_t, r.method))
            .collect();
        ledgers.push(strip);
    }
    assert_eq!(ledgers[0], ledgers[1]);
    assert_eq!(ledgers[0], ledgers[2]);
}

#[test]
fn budget_stops_and_checkpoint_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let e = engine(build(&Label::Delta).unwrap(), 2);
    let t = decode_ternary(1, 1, 1, 0, 0, 1);
    let mut opts = CountOptions::default().with_partitions(8);
    opts.checkpoint_dir = Some(dir.path().to_path_buf());
    opts.node_budget = Some(4_000_000);
    let err = e.representation_count(&t, &opts).unwrap_err();
    assert!(matches!(err, Error::BudgetExceeded(_)), "{err}");
    opts.node_budget = None;
    assert_eq!(e.representation_count(&t, &opts).unwrap(), Int::from(12751200u64));
}

#[test]
fn leech_unit_diagonals_vanish() {
    let e = engine(build(&Label::Omega).unwrap(), 2);
    for key in psd_classes(3, 1).into_iter().filter(|k| k.diag()[0] == 1) {
        assert_eq!(count(&e, &key.to_matrix()), Int::from(0), "{key}");
    }
}

#[test]
fn missing_shell_is_reported() {
    let e = engine(quaternary_gram(1), 2);
    let err = e.representation_count(&decode_binary(2, 0, 1), &one()).unwrap_err();
    assert!(matches!(err, Error::ShellMissing { norm: 4, bound: 2 }));
}
