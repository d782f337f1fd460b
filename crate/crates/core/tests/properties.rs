use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shorkit::circuit::{parse, serialize, unitary, Circuit, GateKind};
use shorkit::estimate::{depth_bound, estimate_for, estimate_order_finding};
use shorkit::shor::{factor_with, OrderFinder, ShorConfig};
use shorkit::sim::{
    order_finding_distribution, simulate_dense, DenseConfig, ReversibleProgram, StateVector,
};
use shorkit::templates::{build, order_finding, BuildOptions, TemplateName, TemplateParams};
use shorkit::transpile::{NativeGate, NativeProgram};

fn closed_set_gate(rng: &mut ChaCha8Rng, width: usize) -> (GateKind, Vec<usize>) {
    let max_arity = width.min(3);
    let kind = loop {
        let k = match rng.gen_range(0..12) {
            0 => GateKind::X,
            1 => GateKind::H,
            2 => GateKind::Cnot,
            3 => GateKind::Swap,
            4 => GateKind::Toffoli,
            5 => GateKind::Fredkin,
            6 => GateKind::CRk(rng.gen_range(1..8)),
            7 => GateKind::CRkInv(rng.gen_range(1..8)),
            8 => GateKind::CV,
            9 => GateKind::CVInv,
            10 => GateKind::R {
                theta: rng.gen_range(-7.0..7.0),
                phi: rng.gen_range(-7.0..7.0),
            },
            _ => GateKind::XX {
                chi: rng.gen_range(-2.0..2.0),
            },
        };
        if k.arity() <= max_arity {
            break k;
        }
    };
    let mut w: Vec<usize> = (0..width).collect();
    for i in 0..kind.arity() {
        let j = rng.gen_range(i..width);
        w.swap(i, j);
    }
    w.truncate(kind.arity());
    (kind, w)
}

fn random_circuit(seed: u64, width: usize, len: usize) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(width);
    for _ in 0..len {
        let (k, w) = closed_set_gate(&mut rng, width);
        c.push(k, &w).unwrap();
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuit_unitaries_are_unitary(seed in any::<u64>(), width in 1usize..=6, len in 0usize..30) {
        let c = random_circuit(seed, width, len);
        prop_assert!(unitary(&c).unitarity_error() <= 1e-10);
    }

    #[test]
    fn double_inverse_is_identity(seed in any::<u64>(), width in 1usize..=8, len in 0usize..40) {
        let c = random_circuit(seed, width, len);
        prop_assert_eq!(c.inverse().inverse(), c);
    }

    #[test]
    fn text_round_trip(seed in any::<u64>(), width in 1usize..=10, len in 0usize..40) {
        let c = random_circuit(seed, width, len);
        prop_assert_eq!(parse(&serialize(&c)).unwrap(), c);
    }

    #[test]
    fn dense_runs_preserve_norm(seed in any::<u64>(), width in 1usize..=8, len in 0usize..40) {
        let c = random_circuit(seed, width, len);
        let s = simulate_dense(&c, StateVector::zero(width), &DenseConfig::default()).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn depth_of_concatenation(seed in any::<u64>(), width in 2usize..=12, l1 in 0usize..40, l2 in 0usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gen = |len: usize| NativeProgram {
            width,
            gates: (0..len)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        NativeGate::R { wire: rng.gen_range(0..width), theta: 1.0, phi: 0.5 }
                    } else {
                        let a = rng.gen_range(0..width);
                        let b = (a + rng.gen_range(1..width)) % width;
                        NativeGate::XX { w1: a, w2: b, chi: 0.3 }
                    }
                })
                .collect(),
            global_phase: 0.0,
        };
        let (p, q) = (gen(l1), gen(l2));
        let mut joined = p.clone();
        joined.gates.extend(q.gates.iter().copied());
        prop_assert!(depth_bound(&joined) <= depth_bound(&p) + depth_bound(&q) + 3);
        prop_assert_eq!(depth_bound(&joined) % 3, 0);
    }
}

#[test]
fn templates_use_only_the_elementary_set() {
    let p = TemplateParams::for_order_finding(5, 3, 3);
    for name in TemplateName::ALL {
        let c = build(name, &p, &BuildOptions::default()).unwrap();
        for g in c.gates() {
            assert!(
                matches!(
                    g.kind,
                    GateKind::X
                        | GateKind::H
                        | GateKind::Cnot
                        | GateKind::Swap
                        | GateKind::Toffoli
                        | GateKind::Fredkin
                        | GateKind::CRk(_)
                        | GateKind::CRkInv(_)
                ),
                "{name}: {}",
                g.kind.name()
            );
        }
        let classical = !matches!(
            name,
            TemplateName::CrK
                | TemplateName::CrKInv
                | TemplateName::Qft
                | TemplateName::QftInv
                | TemplateName::OrderFinding
        );
        if classical {
            ReversibleProgram::compile(&c).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}

#[test]
fn width_grows_linearly() {
    for n in 2..=8usize {
        let modulus = (1u64 << n) - 1;
        let c = order_finding(&TemplateParams::for_order_finding(modulus, 2, n)).unwrap();
        assert_eq!(c.width(), (2 * n + 2) + 5 * n + 2);
    }
}

/// Template followed by its `_inv` template is the identity on every basis
/// state (used where the dense unitary would be too wide).
#[test]
fn modular_inverse_templates_undo_forward_ones() {
    let p = TemplateParams {
        modulus: 3,
        y: 2,
        n: 2,
        n_x: 6,
        m: 2,
    };
    let opts = BuildOptions::default();
    for (fwd, inv) in [
        (TemplateName::AdderMod, TemplateName::AdderModInv),
        (TemplateName::CtrlMultMod, TemplateName::CtrlMultModInv),
    ] {
        let mut c = build(fwd, &p, &opts).unwrap();
        c.append(&build(inv, &p, &opts).unwrap()).unwrap();
        let prog = ReversibleProgram::compile(&c).unwrap();
        for s in 0..1u128 << c.width() {
            assert_eq!(prog.run(s), s, "{fwd} then {inv} on {s:b}");
        }
    }
}

#[test]
fn peaks_sit_on_multiples_when_order_divides_register() {
    for (y, r) in [(2u64, 4u64), (4, 2), (7, 4), (11, 2), (14, 2)] {
        for n_x in [8usize, 10] {
            let d = order_finding_distribution(15, y, n_x).unwrap();
            let step = (1u64 << n_x) / r;
            let expected: Vec<u64> = (0..r).map(|s| s * step).collect();
            assert_eq!(d.support(), expected, "y={y} n_x={n_x}");
            for k in expected {
                assert!((d.prob(k) - 1.0 / r as f64).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn counts_are_deterministic_and_flat_in_n() {
    let a = estimate_order_finding(3, 8).unwrap();
    let b = estimate_order_finding(3, 8).unwrap();
    assert_eq!(a, b);
    for (n, n1, n2) in [(3usize, 5u64, 7u64), (4, 11, 13)] {
        let x = estimate_for(n1, 2, n, 2 * n + 2).unwrap();
        let y = estimate_for(n2, 2, n, 2 * n + 2).unwrap();
        for (p, q) in [(x.total_native, y.total_native), (x.two_qubit, y.two_qubit)] {
            let rel = (p as f64 - q as f64).abs() / p.max(q) as f64;
            assert!(rel < 0.2, "N={n1} vs N={n2}: {p} vs {q}");
        }
    }
}

#[test]
fn factoring_success_rates() {
    let cfg = ShorConfig::default();
    for modulus in [15u64, 21, 33] {
        let mut finder = OrderFinder::new();
        let (mut trials, mut good) = (0, 0);
        for seed in 0..50 {
            let o = factor_with(modulus, seed, &cfg, &mut finder).unwrap();
            if let Some(f) = o.factor {
                assert!(f > 1 && f < modulus && modulus % f == 0);
            }
            trials += o.trial_count;
            good += o.successful_trials();
        }
        let rate = good as f64 / trials as f64;
        assert!(rate >= 0.5, "N={modulus}: per-trial {rate}");
    }
}
