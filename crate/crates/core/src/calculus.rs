//! The covariant q-difference calculus on mode functions.
//!
//! The scaling automorphisms act per circle; the analytic continuation
//! f(q^s·q^m z) — scale the argument by q^m, then continue the circle
//! rotation s steps — is diagonal on modes: coefficient (k, l) of the result
//! is q^{ls}·f_{k+m, l}. The four difference-quotient operators are realized
//! twice: as exact mode recurrences and as the pointwise continuation
//! quotient built from `shift` and division by the coordinate. The two
//! routes agree identically and are kept as mutual checks.

use num_complex::Complex64;

use crate::modes::ModeFunction;

/// Coordinate multiplication: by z or by z̄.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordOp {
    Z,
    ZBar,
}

/// The four q-difference operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOp {
    /// Right derivative in z: [f(q⁻¹·q⁻¹z) − f(z)] / ((q⁻²−1)z).
    Rz,
    /// Left derivative in z: [f(z) − f(q·qz)] / ((1−q²)z).
    Lz,
    /// Right derivative in z̄: [f(z) − f(q⁻¹·qz)] / ((1−q²)z̄).
    RzBar,
    /// Left derivative in z̄: [f(q·q⁻¹z) − f(z)] / ((q⁻²−1)z̄).
    LzBar,
}

/// Closed tag set naming every operator of the calculus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorId {
    Rz,
    Lz,
    RzBar,
    LzBar,
    Z,
    ZBar,
    Sigma(f64),
    Shift(i32, i32),
}

impl OperatorId {
    pub fn apply(&self, f: &ModeFunction) -> ModeFunction {
        match *self {
            OperatorId::Rz => q_diff(f, DiffOp::Rz),
            OperatorId::Lz => q_diff(f, DiffOp::Lz),
            OperatorId::RzBar => q_diff(f, DiffOp::RzBar),
            OperatorId::LzBar => q_diff(f, DiffOp::LzBar),
            OperatorId::Z => mult_coord(f, CoordOp::Z),
            OperatorId::ZBar => mult_coord(f, CoordOp::ZBar),
            OperatorId::Sigma(t) => sigma(f, t),
            OperatorId::Shift(m, s) => shift(f, m, s),
        }
    }
}

/// f(q^s·q^m z): radial relocation by m circles together with s steps of the
/// per-circle continuation. On coefficients: out_{k,l} = q^{ls}·f_{k+m,l}.
///
/// Special cases: (1, 0) is the dilation θ, (0, ±1) the continuations σ_{±i}.
pub fn shift(f: &ModeFunction, m: i32, s: i32) -> ModeFunction {
    let q = f.lattice().q();
    let mut out = ModeFunction::zero(f.lattice());
    for (k, l, c) in f.iter() {
        out.accumulate(k - m, l, c * q.powi(l * s));
    }
    out
}

/// The rotation automorphism (σ_t f)(z) = f(q^{−it}z): mode l picks up the
/// phase e^{−i·l·t·ln q}.
pub fn sigma(f: &ModeFunction, t: f64) -> ModeFunction {
    let ln_q = f.lattice().ln_q();
    let mut out = ModeFunction::zero(f.lattice());
    for (k, l, c) in f.iter() {
        out.accumulate(
            k,
            l,
            c * Complex64::from_polar(1.0, -f64::from(l) * t * ln_q),
        );
    }
    out
}

/// Multiplication by the coordinate z (raises l) or z̄ (lowers l); on circle
/// k the factor is q^k.
pub fn mult_coord(f: &ModeFunction, which: CoordOp) -> ModeFunction {
    let q = f.lattice().q();
    let mut out = ModeFunction::zero(f.lattice());
    for (k, l, c) in f.iter() {
        match which {
            CoordOp::Z => out.accumulate(k, l + 1, c * q.powi(k)),
            CoordOp::ZBar => out.accumulate(k, l - 1, c * q.powi(k)),
        }
    }
    out
}

/// Division by the coordinate; total because 0 ∉ Γ is never a sample point.
pub fn div_coord(f: &ModeFunction, which: CoordOp) -> ModeFunction {
    let q = f.lattice().q();
    let mut out = ModeFunction::zero(f.lattice());
    for (k, l, c) in f.iter() {
        match which {
            CoordOp::Z => out.accumulate(k, l - 1, c * q.powi(-k)),
            CoordOp::ZBar => out.accumulate(k, l + 1, c * q.powi(-k)),
        }
    }
    out
}

/// Exact mode recurrences for the four q-difference operators. Support grows
/// by at most one circle and one angular mode; nothing is clipped.
///
/// On a basis element the images are
///   Rz:    (q⁻²−1)⁻¹ (q^{−l−(k+1)} g_{k+1,l−1} − q^{−k} g_{k,l−1})
///   Lz:    (1−q²)⁻¹ (q^{−k} g_{k,l−1} − q^{l−(k−1)} g_{k−1,l−1})
///   RzBar: (1−q²)⁻¹ (q^{−k} g_{k,l+1} − q^{−l−(k−1)} g_{k−1,l+1})
///   LzBar: (q⁻²−1)⁻¹ (q^{l−(k+1)} g_{k+1,l+1} − q^{−k} g_{k,l+1})
pub fn q_diff(f: &ModeFunction, which: DiffOp) -> ModeFunction {
    let q = f.lattice().q();
    let c_inv = 1.0 / (q.powi(-2) - 1.0);
    let c_one = 1.0 / (1.0 - q * q);
    let mut out = ModeFunction::zero(f.lattice());
    for (k, l, c) in f.iter() {
        match which {
            DiffOp::Rz => {
                out.accumulate(k + 1, l - 1, c * (c_inv * q.powi(-l - (k + 1))));
                out.accumulate(k, l - 1, c * (-c_inv * q.powi(-k)));
            }
            DiffOp::Lz => {
                out.accumulate(k, l - 1, c * (c_one * q.powi(-k)));
                out.accumulate(k - 1, l - 1, c * (-c_one * q.powi(l - (k - 1))));
            }
            DiffOp::RzBar => {
                out.accumulate(k, l + 1, c * (c_one * q.powi(-k)));
                out.accumulate(k - 1, l + 1, c * (-c_one * q.powi(-l - (k - 1))));
            }
            DiffOp::LzBar => {
                out.accumulate(k + 1, l + 1, c * (c_inv * q.powi(l - (k + 1))));
                out.accumulate(k, l + 1, c * (-c_inv * q.powi(-k)));
            }
        }
    }
    out
}

/// The same operators built from their defining difference quotients: a
/// `shift`, a subtraction and a coordinate division. Independent route used
/// to cross-check `q_diff`.
pub fn q_diff_continuation(f: &ModeFunction, which: DiffOp) -> ModeFunction {
    let q = f.lattice().q();
    let c_inv = Complex64::new(1.0 / (q.powi(-2) - 1.0), 0.0);
    let c_one = Complex64::new(1.0 / (1.0 - q * q), 0.0);
    match which {
        DiffOp::Rz => div_coord(&shift(f, -1, -1).sub(f), CoordOp::Z).scale(c_inv),
        DiffOp::Lz => div_coord(&f.sub(&shift(f, 1, 1)), CoordOp::Z).scale(c_one),
        DiffOp::RzBar => div_coord(&f.sub(&shift(f, 1, -1)), CoordOp::ZBar).scale(c_one),
        DiffOp::LzBar => div_coord(&shift(f, -1, 1).sub(f), CoordOp::ZBar).scale(c_inv),
    }
}

/// Adjoint pairs among the closed operators: (Rz)* = −q²·RzBar and the
/// left pair ⟨f, LzBar g⟩ = −q²⟨Lz f, g⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjointPair {
    RzRzBar,
    LzBarLz,
}

/// ⟨f, A g⟩ − c·⟨B f, g⟩ for the claimed adjoint pair; vanishes when the
/// adjoint identity holds.
pub fn adjoint_residual(pair: AdjointPair, f: &ModeFunction, g: &ModeFunction) -> Complex64 {
    let q = f.lattice().q();
    let c = Complex64::new(-q * q, 0.0);
    let (a_of_g, b_of_f) = match pair {
        AdjointPair::RzRzBar => (q_diff(g, DiffOp::Rz), q_diff(f, DiffOp::RzBar)),
        AdjointPair::LzBarLz => (q_diff(g, DiffOp::LzBar), q_diff(f, DiffOp::Lz)),
    };
    f.inner_product(&a_of_g) - c * b_of_f.inner_product(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::QLattice;

    fn lat() -> QLattice {
        QLattice::new(0.5).unwrap()
    }

    fn rand_fn(lattice: QLattice, seed: u64, n: usize, kw: i32, lw: i32) -> ModeFunction {
        let mut st = seed.wrapping_mul(0x2545f4914f6cdd1d).wrapping_add(11);
        let mut next = move || {
            st ^= st << 13;
            st ^= st >> 7;
            st ^= st << 17;
            (st >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut coeffs = Vec::new();
        for _ in 0..n {
            let k = (next() * (2 * kw + 1) as f64) as i32 - kw;
            let l = (next() * (2 * lw + 1) as f64) as i32 - lw;
            coeffs.push(((k, l), Complex64::new(next() - 0.5, next() - 0.5)));
        }
        ModeFunction::from_coeffs(lattice, coeffs).unwrap()
    }

    fn rel_diff(a: &ModeFunction, b: &ModeFunction) -> f64 {
        let scale = a.max_coeff().max(b.max_coeff()).max(1.0);
        a.sub(b).max_coeff() / scale
    }

    #[test]
    fn shift_relocates_circles() {
        let l = lat();
        let b = ModeFunction::basis(l, 3, 2);
        assert_eq!(shift(&b, 1, 0), ModeFunction::basis(l, 2, 2));
        assert_eq!(shift(&b, 0, 0), b);
    }

    #[test]
    fn shift_continuation_is_diagonal() {
        let l = lat();
        let b = ModeFunction::basis(l, 3, 2);
        let up = shift(&b, 0, 1);
        assert!((up.coeff(3, 2) - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        let f = rand_fn(l, 5, 8, 3, 4);
        assert_eq!(shift(&shift(&f, 2, -1), -2, 1), f);
    }

    #[test]
    fn sigma_is_a_group_and_matches_continuation() {
        let l = lat();
        let f = rand_fn(l, 9, 10, 3, 4);
        let a = sigma(&sigma(&f, 0.7), -1.9);
        let b = sigma(&f, -1.2);
        assert!(rel_diff(&a, &b) < 1e-13);
        assert_eq!(sigma(&f, 0.0), f);
        // σ_t on a single mode is the phase e^{−it·ln q}
        let b1 = ModeFunction::basis(l, 2, 1);
        let got = sigma(&b1, 0.3).coeff(2, 1);
        let expect = Complex64::from_polar(1.0, -0.3 * l.ln_q());
        assert!((got - expect).norm() < 1e-15);
    }

    #[test]
    fn coordinate_multiplication_on_basis() {
        let l = lat();
        let b = ModeFunction::basis(l, 2, -1);
        let z = mult_coord(&b, CoordOp::Z);
        assert!((z.coeff(2, 0) - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        let zb = mult_coord(&b, CoordOp::ZBar);
        assert!((zb.coeff(2, -2) - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        // z and z̄ multiplications commute
        let f = rand_fn(l, 3, 8, 3, 3);
        let ab = mult_coord(&mult_coord(&f, CoordOp::Z), CoordOp::ZBar);
        let ba = mult_coord(&mult_coord(&f, CoordOp::ZBar), CoordOp::Z);
        assert!(rel_diff(&ab, &ba) < 1e-15);
    }

    #[test]
    fn div_coord_inverts_mult_coord() {
        let l = lat();
        let f = rand_fn(l, 17, 8, 4, 4);
        assert!(rel_diff(&div_coord(&mult_coord(&f, CoordOp::Z), CoordOp::Z), &f) < 1e-15);
        assert!(rel_diff(&div_coord(&mult_coord(&f, CoordOp::ZBar), CoordOp::ZBar), &f) < 1e-15);
    }

    #[test]
    fn generator_action_on_basis_rz() {
        let l = lat();
        let q: f64 = 0.5;
        let c_inv = 1.0 / (q.powi(-2) - 1.0);
        for (k, li) in [(0, 0), (2, -3), (-1, 4), (3, 1)] {
            let out = q_diff(&ModeFunction::basis(l, k, li), DiffOp::Rz);
            let want_hi = c_inv * q.powi(-li - (k + 1));
            let want_lo = -c_inv * q.powi(-k);
            assert!((out.coeff(k + 1, li - 1).re - want_hi).abs() < 1e-14 * want_hi.abs());
            assert!((out.coeff(k, li - 1).re - want_lo).abs() < 1e-14 * want_lo.abs());
            assert_eq!(out.len(), 2);
        }
    }

    #[test]
    fn generator_action_on_basis_lzbar() {
        let l = lat();
        let q: f64 = 0.5;
        let c_inv = 1.0 / (q.powi(-2) - 1.0);
        for (k, li) in [(0, 0), (1, 2), (-2, -1)] {
            let out = q_diff(&ModeFunction::basis(l, k, li), DiffOp::LzBar);
            let want_hi = c_inv * q.powi(li - (k + 1));
            let want_lo = -c_inv * q.powi(-k);
            assert!((out.coeff(k + 1, li + 1).re - want_hi).abs() < 1e-14 * want_hi.abs());
            assert!((out.coeff(k, li + 1).re - want_lo).abs() < 1e-14 * want_lo.abs());
        }
    }

    #[test]
    fn two_route_equivalence() {
        let l = lat();
        for seed in 0..6u64 {
            let f = rand_fn(l, seed + 100, 14, 4, 5);
            for op in [DiffOp::Rz, DiffOp::Lz, DiffOp::RzBar, DiffOp::LzBar] {
                let a = q_diff(&f, op);
                let b = q_diff_continuation(&f, op);
                assert!(rel_diff(&a, &b) < 1e-12, "op {op:?}");
            }
        }
    }

    #[test]
    fn left_right_relation() {
        // Rz f = (Lz f)(q⁻¹·q⁻¹z) and RzBar f = (LzBar f)(q⁻¹·qz)
        let l = lat();
        let f = rand_fn(l, 21, 14, 4, 5);
        let a = q_diff(&f, DiffOp::Rz);
        let b = shift(&q_diff(&f, DiffOp::Lz), -1, -1);
        assert!(rel_diff(&a, &b) < 1e-13);
        let c = q_diff(&f, DiffOp::RzBar);
        let d = shift(&q_diff(&f, DiffOp::LzBar), 1, -1);
        assert!(rel_diff(&c, &d) < 1e-13);
    }

    #[test]
    fn star_relation() {
        let l = lat();
        let f = rand_fn(l, 33, 12, 3, 4);
        let a = q_diff(&f.conjugate(), DiffOp::Lz);
        let b = q_diff(&f, DiffOp::RzBar).conjugate();
        assert!(rel_diff(&a, &b) < 1e-13);
        let c = q_diff(&f.conjugate(), DiffOp::LzBar);
        let d = q_diff(&f, DiffOp::Rz).conjugate();
        assert!(rel_diff(&c, &d) < 1e-13);
    }

    #[test]
    fn leibniz_rules() {
        let l = lat();
        let f = rand_fn(l, 41, 8, 3, 3);
        let g = rand_fn(l, 42, 8, 3, 3);

        // Rz(fg) = Rz f · g(q⁻¹·q⁻¹z) + f · Rz g
        let lhs = q_diff(&f.multiply(&g), DiffOp::Rz);
        let rhs = q_diff(&f, DiffOp::Rz)
            .multiply(&shift(&g, -1, -1))
            .add(&f.multiply(&q_diff(&g, DiffOp::Rz)));
        assert!(rel_diff(&lhs, &rhs) < 1e-12);

        // LzBar(fg) = LzBar f · g + f(q·q⁻¹z) · LzBar g
        let lhs = q_diff(&f.multiply(&g), DiffOp::LzBar);
        let rhs = q_diff(&f, DiffOp::LzBar)
            .multiply(&g)
            .add(&shift(&f, -1, 1).multiply(&q_diff(&g, DiffOp::LzBar)));
        assert!(rel_diff(&lhs, &rhs) < 1e-12);

        // Lz(fg) = Lz f · g + f(q·qz) · Lz g
        let lhs = q_diff(&f.multiply(&g), DiffOp::Lz);
        let rhs = q_diff(&f, DiffOp::Lz)
            .multiply(&g)
            .add(&shift(&f, 1, 1).multiply(&q_diff(&g, DiffOp::Lz)));
        assert!(rel_diff(&lhs, &rhs) < 1e-12);

        // RzBar(fg) = RzBar f · g(q⁻¹·qz) + f · RzBar g
        let lhs = q_diff(&f.multiply(&g), DiffOp::RzBar);
        let rhs = q_diff(&f, DiffOp::RzBar)
            .multiply(&shift(&g, 1, -1))
            .add(&f.multiply(&q_diff(&g, DiffOp::RzBar)));
        assert!(rel_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn stokes_vanishing() {
        let l = lat();
        for seed in 0..5u64 {
            let f = rand_fn(l, 60 + seed, 16, 5, 6);
            for op in [DiffOp::Rz, DiffOp::Lz, DiffOp::RzBar, DiffOp::LzBar] {
                let df = q_diff(&f, op);
                let v = df.integrate_mu();
                let scale = df.max_coeff().max(1.0);
                assert!(v.norm() / scale < 1e-13, "op {op:?}: {v}");
            }
        }
    }

    #[test]
    fn measure_scaling_under_dilation() {
        let l = lat();
        let f = rand_fn(l, 71, 12, 4, 4);
        let lhs = shift(&f, 1, 0).integrate_mu();
        let rhs = f.integrate_mu() * 4.0;
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn adjoint_identities() {
        let l = lat();
        let f = rand_fn(l, 81, 12, 4, 4);
        let g = rand_fn(l, 82, 12, 4, 4);
        let r1 = adjoint_residual(AdjointPair::RzRzBar, &f, &g);
        assert!(r1.norm() < 1e-12 * f.max_coeff().max(g.max_coeff()).max(1.0));
        let r2 = adjoint_residual(AdjointPair::LzBarLz, &f, &g);
        assert!(r2.norm() < 1e-12 * f.max_coeff().max(g.max_coeff()).max(1.0));
        let zero = ModeFunction::zero(l);
        assert_eq!(
            adjoint_residual(AdjointPair::RzRzBar, &zero, &zero),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn normality_and_left_right_commutation() {
        // the commuting pairs: each operator with its adjoint partner, and
        // the left/right derivatives of opposite variables
        let l = lat();
        let f = rand_fn(l, 91, 12, 4, 4);
        let pairs = [
            (DiffOp::Rz, DiffOp::RzBar),
            (DiffOp::Lz, DiffOp::LzBar),
            (DiffOp::Lz, DiffOp::RzBar),
            (DiffOp::LzBar, DiffOp::Rz),
        ];
        for (a, b) in pairs {
            let ab = q_diff(&q_diff(&f, b), a);
            let ba = q_diff(&q_diff(&f, a), b);
            assert!(rel_diff(&ab, &ba) < 1e-12, "pair {a:?} {b:?}");
        }
        // same-variable left/right pairs do not commute
        let ab = q_diff(&q_diff(&f, DiffOp::Rz), DiffOp::Lz);
        let ba = q_diff(&q_diff(&f, DiffOp::Lz), DiffOp::Rz);
        assert!(rel_diff(&ab, &ba) > 1e-3);
    }

    #[test]
    fn operator_id_dispatch() {
        let l = lat();
        let f = rand_fn(l, 97, 8, 3, 3);
        assert_eq!(OperatorId::Rz.apply(&f), q_diff(&f, DiffOp::Rz));
        assert_eq!(OperatorId::Shift(1, 0).apply(&f), shift(&f, 1, 0));
        assert_eq!(OperatorId::Sigma(0.4).apply(&f), sigma(&f, 0.4));
        assert_eq!(OperatorId::Z.apply(&f), mult_coord(&f, CoordOp::Z));
    }
}
