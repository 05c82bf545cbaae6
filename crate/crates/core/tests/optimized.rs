// SPDX-License-Identifier: Apache-2.0

use std::collections::HashSet;

use gf2rev::naive::EuclideanPairs;
use gf2rev::optimized::{
    check_quotient_bound, opt_layout, qubit_budget, round, run_synchronized, trace_synchronized,
    unround, OptParams, OptState, ROUND,
};
use gf2rev::{BinaryPolynomial, FieldSpec};

fn oracle_boundaries(c: &BinaryPolynomial, field: &FieldSpec) -> Vec<EuclideanPairs> {
    let mut out = Vec::new();
    let mut pairs = EuclideanPairs::initial(c, field);
    while !pairs.big_a.is_one() {
        out.push(pairs.clone());
        pairs = pairs.step().unwrap();
    }
    out
}

#[test]
fn exhaustive_small_fields() {
    for m in 2..=8 {
        let field = FieldSpec::standard(m).unwrap();
        let pr = OptParams::with_default_cycles(m).unwrap();
        let layout = opt_layout(&pr);
        let mut finals = HashSet::new();
        let mut schedule: Option<Vec<_>> = None;
        for c in field.nonzero_elements() {
            let t = trace_synchronized(&c, &field, pr.cycles).unwrap();
            let o = &t.outcome;
            assert!(!o.fidelity_loss, "m={m} C={c}");
            assert_eq!(
                o.inverse.as_ref(),
                Some(&field.invert(&c).unwrap()),
                "m={m} C={c}"
            );

            let expected = oracle_boundaries(&c, &field);
            let got: Vec<_> = t.boundaries.iter().map(|b| b.pairs.clone()).collect();
            assert_eq!(got, expected, "m={m} C={c}");
            for b in &t.boundaries {
                b.pairs.check_invariants(m).unwrap();
                assert_eq!(b.q, 0);
                assert!(b.gaps_clear);
                let deg = |p: &BinaryPolynomial| p.checked_degree().map_or(0, |d| d);
                assert!(deg(&b.pairs.a) + deg(&b.pairs.big_a) <= m);
                assert!(deg(&b.pairs.b) + deg(&b.pairs.big_b) <= m);
            }

            let ops: Vec<_> = t.slots.iter().map(|s| (s.round, s.op)).collect();
            assert_eq!(ops.len(), pr.cycles * ROUND.len());
            match &schedule {
                None => schedule = Some(ops),
                Some(s) => assert_eq!(s, &ops),
            }

            let fin = o.final_state.unwrap();
            assert!(
                finals.insert(fin.to_basis(&layout, &pr)),
                "m={m}: final state collision"
            );

            let mut back = fin;
            for _ in 0..pr.cycles {
                unround(&mut back, &pr).unwrap();
            }
            assert_eq!(back, OptState::initial(&c, &field, &pr).unwrap());
        }
    }
}

#[test]
fn rounds_invert_step_by_step() {
    let field = FieldSpec::standard(6).unwrap();
    let pr = OptParams::with_default_cycles(6).unwrap();
    for c in field.nonzero_elements().step_by(5) {
        let mut st = OptState::initial(&c, &field, &pr).unwrap();
        for _ in 0..40 {
            let before = st;
            round(&mut st, &pr).unwrap();
            let mut back = st;
            unround(&mut back, &pr).unwrap();
            assert_eq!(back, before);
        }
    }
}

#[test]
fn different_inputs_share_schedule_but_not_trajectories() {
    let field = FieldSpec::standard(4).unwrap();
    let cycles = OptParams::default_cycles(4);
    let t1 = trace_synchronized(&"10".parse().unwrap(), &field, cycles).unwrap();
    let t2 = trace_synchronized(&"111".parse().unwrap(), &field, cycles).unwrap();
    let ops = |t: &gf2rev::optimized::SyncTrace| t.slots.iter().map(|s| s.op).collect::<Vec<_>>();
    assert_eq!(ops(&t1), ops(&t2));
    let traj = |t: &gf2rev::optimized::SyncTrace| {
        t.slots
            .iter()
            .map(|s| (s.fired, s.f, s.c, s.h))
            .collect::<Vec<_>>()
    };
    assert_ne!(traj(&t1), traj(&t2));
    assert_ne!(t1.outcome.h, t2.outcome.h);
}

#[test]
fn all_gf16_inputs_in_one_run() {
    let field = FieldSpec::standard(4).unwrap();
    let inputs: Vec<_> = field.nonzero_elements().collect();
    let report = run_synchronized(&inputs, &field, OptParams::default_cycles(4)).unwrap();
    assert_eq!(report.outcomes.len(), 15);
    assert_eq!(report.schedule_len, OptParams::default_cycles(4) * 4);
    for o in &report.outcomes {
        assert_eq!(
            o.inverse.as_ref().unwrap(),
            &field.invert(&o.input).unwrap()
        );
        assert!(o.h >= 1 && o.h as usize <= report.cycles);
    }
}

#[test]
fn larger_fields_sampled() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(16);
    for m in [16usize, 24] {
        let field = FieldSpec::standard(m).unwrap();
        let inputs: Vec<_> = (0..200)
            .map(|_| field.from_u64(rng.gen_range(1..1u64 << m)))
            .collect();
        let report = run_synchronized(&inputs, &field, OptParams::default_cycles(m)).unwrap();
        let mut kept = 0;
        for o in &report.outcomes {
            if !o.fidelity_loss {
                kept += 1;
                assert_eq!(
                    o.inverse.as_ref().unwrap(),
                    &field.invert(&o.input).unwrap()
                );
            }
        }
        assert!(kept > 150);
    }
}

#[test]
fn quotient_bound_gf65536_exhaustive() {
    let field = FieldSpec::standard(16).unwrap();
    let qb = check_quotient_bound(&field, None).unwrap();
    assert_eq!(qb.inputs, 65535);
    assert_eq!(qb.q_bits, 12);
    assert!(qb.flagged > 0);
    assert!(qb.fraction <= 12.0 / 16.0, "fraction {}", qb.fraction);
}

#[test]
fn budget_audit() {
    for m in [4, 8, 16] {
        let pr = OptParams::with_default_cycles(m).unwrap();
        assert_eq!(opt_layout(&pr).width(), qubit_budget(m, pr.h_width));
    }
    assert_eq!(qubit_budget(16, 0), 67);
    assert_eq!(qubit_budget(4, 0), 29);
}

proptest::proptest! {
    #[test]
    fn random_inputs_invert_and_clear_q(m in 9usize..=20, seed in proptest::prelude::any::<u64>()) {
        let field = FieldSpec::standard(m).unwrap();
        let c = field.from_u64(seed % ((1u64 << m) - 1) + 1);
        let t = trace_synchronized(&c, &field, OptParams::default_cycles(m)).unwrap();
        if !t.outcome.fidelity_loss {
            proptest::prop_assert_eq!(t.outcome.inverse, Some(field.invert(&c).unwrap()));
            for b in &t.boundaries {
                proptest::prop_assert_eq!(b.q, 0);
                b.pairs.check_invariants(m).unwrap();
            }
        }
    }
}
