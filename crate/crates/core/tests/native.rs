mod common;

use common::*;
use hermtile::native::{
    apply_diagonal_phase, apply_hadamard, apply_pauli_x, apply_pauli_y, apply_permutation,
};
use hermtile::{
    apply, apply_generic, native_gate, random_hermitian, ActiveQubits, DenseHermitian, Error, Format, MatrixHandle,
    PermutationGate,
};

fn projector(n: usize, basis: usize, format: Format, m: u32) -> MatrixHandle {
    let d = DenseHermitian::from_lower_fn(n, |i, j| if i == basis && j == basis { c(1.0, 0.0) } else { c(0.0, 0.0) })
        .unwrap();
    MatrixHandle::from(d).convert(format, m).unwrap()
}

fn for_each_layout(n: usize, seed: u64, mut f: impl FnMut(MatrixHandle)) {
    for (format, m) in LAYOUTS {
        f(random_hermitian(n, seed, format, m).unwrap());
    }
    for m in 1..n as u32 {
        f(random_hermitian(n, seed, Format::Tiled, m).unwrap());
    }
}

#[test]
fn pauli_x_examples() {
    for (format, m) in LAYOUTS {
        let mut h = projector(1, 0, format, m);
        apply_pauli_x(&mut h, 0).unwrap();
        assert_eq!(h, projector(1, 1, format, m));
    }
    for_each_layout(5, 3, |h0| {
        for a in 0..5 {
            let mut h = h0.clone();
            apply_pauli_x(&mut h, a).unwrap();
            apply_pauli_x(&mut h, a).unwrap();
            assert_eq!(h, h0);
        }
    });
}

#[test]
fn pauli_y_examples() {
    for (format, m) in LAYOUTS {
        let mut h = projector(1, 0, format, m);
        apply_pauli_y(&mut h, 0).unwrap();
        assert_eq!(h, projector(1, 1, format, m));
    }
    for_each_layout(5, 4, |h0| {
        for a in 0..5 {
            let reference = oracle(&h0, &native_gate("y", &[]).unwrap(), &[a]);
            let mut h = h0.clone();
            apply_pauli_y(&mut h, a).unwrap();
            assert!(rel_err(&h, &reference) <= 1e-15);
            apply_pauli_y(&mut h, a).unwrap();
            assert_eq!(h, h0);
        }
    });
}

#[test]
fn diagonal_phase_examples() {
    let z = [c(1.0, 0.0), c(-1.0, 0.0)];
    let s = [c(1.0, 0.0), c(0.0, 1.0)];
    let theta: f64 = 0.7;
    let rz = [c((theta / 2.0).cos(), -(theta / 2.0).sin()), c((theta / 2.0).cos(), (theta / 2.0).sin())];
    for_each_layout(5, 6, |h0| {
        for a in 0..5 {
            let mut h = h0.clone();
            apply_diagonal_phase(&mut h, a, z).unwrap();
            for i in 0..32 {
                let (before, after) = (h0.get(i, i).unwrap(), h.get(i, i).unwrap());
                assert_eq!(before.re.to_bits(), after.re.to_bits());
                assert_eq!(before.im.to_bits(), after.im.to_bits());
            }

            let mut h = h0.clone();
            for _ in 0..4 {
                apply_diagonal_phase(&mut h, a, s).unwrap();
            }
            assert!(rel_err(&h, &h0.to_dense().unwrap()) <= 1e-14);

            let reference = oracle(&h0, &native_gate("rz", &[theta]).unwrap(), &[a]);
            let mut h = h0.clone();
            apply_diagonal_phase(&mut h, a, rz).unwrap();
            assert!(rel_err(&h, &reference) <= 1e-14);
        }
    });
    let mut h = random_hermitian(2, 0, Format::Tiled, 1).unwrap();
    let r = apply_diagonal_phase(&mut h, 0, [c(1.0, 0.0), c(1.1, 0.0)]);
    assert!(matches!(r, Err(Error::NonUnitPhase(_))));
}

#[test]
fn hadamard_examples() {
    for (format, m) in LAYOUTS {
        let mut h = projector(1, 0, format, m);
        apply_hadamard(&mut h, 0).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((h.get(i, j).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }
    for_each_layout(6, 7, |h0| {
        for a in 0..6 {
            let reference = oracle(&h0, &native_gate("h", &[]).unwrap(), &[a]);
            let mut h = h0.clone();
            apply_hadamard(&mut h, a).unwrap();
            assert!(rel_err(&h, &reference) <= 1e-13);
            apply_hadamard(&mut h, a).unwrap();
            assert!(rel_err(&h, &h0.to_dense().unwrap()) <= 1e-13);
        }
    });
}

#[test]
fn permutation_examples() {
    let cnot = native_gate("cnot", &[]).unwrap();
    for (format, m) in LAYOUTS {
        // |q1 q0> = |10>: control qubit 1 set, target qubit 0.
        let mut h = projector(2, 0b10, format, m);
        apply(&mut h, &cnot, &[1, 0]).unwrap();
        assert_eq!(h, projector(2, 0b11, format, m));
    }

    let swap = native_gate("swap", &[]).unwrap();
    for_each_layout(4, 8, |h0| {
        for targets in ordered_targets(4, 2) {
            let mut h = h0.clone();
            apply(&mut h, &swap, &targets).unwrap();
            apply(&mut h, &swap, &targets).unwrap();
            assert_eq!(h, h0);
        }
    });

    let toffoli = native_gate("toffoli", &[]).unwrap();
    for_each_layout(5, 9, |h0| {
        for targets in ordered_targets(5, 3) {
            let reference = oracle(&h0, &toffoli, &targets);
            let mut h = h0.clone();
            apply(&mut h, &toffoli, &targets).unwrap();
            for i in 0..32 {
                for j in 0..=i {
                    assert_eq!(h.get(i, j).unwrap(), reference.row(i)[j], "{targets:?}");
                }
            }
        }
    });
}

#[test]
fn permutation_gate_validation() {
    assert!(matches!(PermutationGate::new(1, vec![0, 0]), Err(Error::NotAPermutation(0))));
    assert!(matches!(PermutationGate::new(1, vec![0, 2]), Err(Error::NotAPermutation(2))));
    assert!(PermutationGate::new(2, vec![0, 1]).is_err());
    assert!(PermutationGate::new(4, (0..16).collect()).is_err());
    let g = PermutationGate::new(2, vec![0, 1, 3, 2]).unwrap();
    let u = g.unitary();
    assert_eq!(u.get(3, 2), c(1.0, 0.0));
    assert_eq!(u.get(2, 3), c(1.0, 0.0));
    assert_eq!(u.get(2, 2), c(0.0, 0.0));

    let mut h = random_hermitian(3, 0, Format::Dense, 0).unwrap();
    let r = apply_permutation(&mut h, &g, &ActiveQubits::new(&[0]).unwrap());
    assert!(matches!(r, Err(Error::ArityMismatch { expected: 2, actual: 1 })));
    let r = apply_permutation(&mut h, &g, &ActiveQubits::new(&[0, 3]).unwrap());
    assert!(matches!(r, Err(Error::InvalidTargets { .. })));
    assert!(apply_pauli_x(&mut h, 3).is_err());
}

#[test]
fn native_paths_agree_with_generic_transfer_path() {
    let exact = ["x", "y", "cnot", "swap", "toffoli"];
    for n in 1..=6 {
        for name in ["x", "y", "z", "s", "t", "rz", "h", "cnot", "swap", "toffoli"] {
            let params: &[f64] = if name == "rz" { &[0.7] } else { &[] };
            let gate = native_gate(name, params).unwrap();
            if gate.locality() > n {
                continue;
            }
            for_each_layout(n, 30 + n as u64, |h0| {
                for targets in ordered_targets(n, gate.locality()) {
                    let mut native = h0.clone();
                    let mut generic = h0.clone();
                    assert!(apply(&mut native, &gate, &targets).unwrap().native);
                    apply_generic(&mut generic, &gate, &targets).unwrap();
                    if exact.contains(&name) {
                        assert!(logically_equal(&native, &generic), "{name} {targets:?} {:?}", h0.format());
                        assert_eq!(native.hermiticity_residual(), 0.0);
                    } else {
                        assert!(rel_err(&native, &generic.to_dense().unwrap()) <= 1e-13);
                    }
                }
            });
        }
    }
}
