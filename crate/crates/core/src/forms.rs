//! First- and second-order differential forms over the mode algebra.
//!
//! Ω¹ is the bimodule spanned by dz and dz̄; coefficients are stored on the
//! left. Moving a function through dz or dz̄ costs a `shift`:
//!     c·dz = dz·c(q⁻¹·q⁻¹z),    c·dz̄ = dz̄·c(q⁻¹·qz).
//! Ω² is one-dimensional over the algebra with generator dz∧dz̄ and the
//! relations dz∧dz = dz̄∧dz̄ = 0, dz∧dz̄ = −dz̄∧dz already applied. There
//! are no forms of higher degree.

use crate::calculus::{div_coord, mult_coord, q_diff, shift, CoordOp, DiffOp};
use crate::lattice::QLattice;
use crate::modes::ModeFunction;

/// A 1-form α·dz + β·dz̄ with left coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Form1 {
    pub alpha: ModeFunction,
    pub beta: ModeFunction,
}

/// A 2-form γ·dz∧dz̄.
#[derive(Debug, Clone, PartialEq)]
pub struct Form2 {
    pub gamma: ModeFunction,
}

/// Which generator a coefficient is moved through (left to right).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PastDirection {
    PastDz,
    PastDzBar,
}

impl Form1 {
    pub fn zero(lattice: QLattice) -> Self {
        Form1 {
            alpha: ModeFunction::zero(lattice),
            beta: ModeFunction::zero(lattice),
        }
    }

    pub fn lattice(&self) -> QLattice {
        self.alpha.lattice()
    }

    pub fn add(&self, other: &Form1) -> Form1 {
        Form1 {
            alpha: self.alpha.add(&other.alpha),
            beta: self.beta.add(&other.beta),
        }
    }

    pub fn sub(&self, other: &Form1) -> Form1 {
        Form1 {
            alpha: self.alpha.sub(&other.alpha),
            beta: self.beta.sub(&other.beta),
        }
    }

    /// Left module action f·w.
    pub fn left_mul(&self, f: &ModeFunction) -> Form1 {
        Form1 {
            alpha: f.multiply(&self.alpha),
            beta: f.multiply(&self.beta),
        }
    }

    /// Right module action w·g, moving g through the generators.
    pub fn right_mul(&self, g: &ModeFunction) -> Form1 {
        Form1 {
            alpha: self.alpha.multiply(&shift(g, 1, 1)),
            beta: self.beta.multiply(&shift(g, -1, 1)),
        }
    }

    /// The involution determined by (dz)* = dz̄ and (x·y)* = y*·x*.
    pub fn star(&self) -> Form1 {
        Form1 {
            alpha: shift(&self.beta.conjugate(), 1, 1),
            beta: shift(&self.alpha.conjugate(), -1, 1),
        }
    }

    pub fn max_coeff(&self) -> f64 {
        self.alpha.max_coeff().max(self.beta.max_coeff())
    }
}

impl Form2 {
    pub fn zero(lattice: QLattice) -> Self {
        Form2 {
            gamma: ModeFunction::zero(lattice),
        }
    }

    pub fn sub(&self, other: &Form2) -> Form2 {
        Form2 {
            gamma: self.gamma.sub(&other.gamma),
        }
    }

    pub fn left_mul(&self, f: &ModeFunction) -> Form2 {
        Form2 {
            gamma: f.multiply(&self.gamma),
        }
    }

    pub fn max_coeff(&self) -> f64 {
        self.gamma.max_coeff()
    }
}

/// Exterior derivative on functions: df = Lz f·dz + LzBar f·dz̄.
pub fn d0(f: &ModeFunction) -> Form1 {
    Form1 {
        alpha: q_diff(f, DiffOp::Lz),
        beta: q_diff(f, DiffOp::LzBar),
    }
}

/// Move a coefficient through a generator: returns c′ with c·dz = dz·c′
/// (resp. c·dz̄ = dz̄·c′).
pub fn commute_through(c: &ModeFunction, direction: PastDirection) -> ModeFunction {
    match direction {
        PastDirection::PastDz => shift(c, -1, -1),
        PastDirection::PastDzBar => shift(c, 1, -1),
    }
}

/// Exterior derivative on 1-forms, the graded commutator with the frame
/// generators reduced to coefficients: d(α dz + β dz̄) = (Lz β − LzBar α)·dz∧dz̄.
pub fn d1(w: &Form1) -> Form2 {
    Form2 {
        gamma: q_diff(&w.beta, DiffOp::Lz).sub(&q_diff(&w.alpha, DiffOp::LzBar)),
    }
}

/// Wedge product Ω¹×Ω¹ → Ω², with both coefficients brought to the left.
pub fn wedge(a: &Form1, b: &Form1) -> Form2 {
    let first = a.alpha.multiply(&shift(&b.beta, 1, 1));
    let second = a.beta.multiply(&shift(&b.alpha, -1, 1));
    Form2 {
        gamma: first.sub(&second),
    }
}

/// Left coefficients in the (ω, ω̄) frame: dz = (q²−1)z·ω and
/// dz̄ = (q²−1)q⁻²·z̄·ω̄ once ω̄ is written with its coefficient on the left.
pub fn to_omega_frame(w: &Form1) -> (ModeFunction, ModeFunction) {
    let q = w.lattice().q();
    let s = q * q - 1.0;
    let omega = mult_coord(&w.alpha, CoordOp::Z).scale(s.into());
    let omega_bar = mult_coord(&w.beta, CoordOp::ZBar).scale((s / (q * q)).into());
    (omega, omega_bar)
}

/// Inverse of [`to_omega_frame`].
pub fn from_omega_frame(omega: &ModeFunction, omega_bar: &ModeFunction) -> Form1 {
    let q = omega.lattice().q();
    let s = q * q - 1.0;
    Form1 {
        alpha: div_coord(omega, CoordOp::Z).scale((1.0 / s).into()),
        beta: div_coord(omega_bar, CoordOp::ZBar).scale((q * q / s).into()),
    }
}

/// The four equivalent expansions of df, each converted to left
/// coefficients. All entries agree with `d0(f)` by the left/right relation.
pub fn df_expansions(f: &ModeFunction) -> [Form1; 4] {
    let lz = q_diff(f, DiffOp::Lz);
    let lzbar = q_diff(f, DiffOp::LzBar);
    let rz = q_diff(f, DiffOp::Rz);
    let rzbar = q_diff(f, DiffOp::RzBar);
    // right coefficients move to the left with the inverse bimodule shifts
    let rz_left = shift(&rz, 1, 1);
    let rzbar_left = shift(&rzbar, -1, 1);
    [
        Form1 {
            alpha: lz.clone(),
            beta: rzbar_left.clone(),
        },
        Form1 {
            alpha: rz_left.clone(),
            beta: rzbar_left,
        },
        Form1 {
            alpha: rz_left,
            beta: lzbar.clone(),
        },
        Form1 {
            alpha: lz,
            beta: lzbar,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn lat() -> QLattice {
        QLattice::new(0.5).unwrap()
    }

    fn rand_fn(lattice: QLattice, seed: u64, n: usize) -> ModeFunction {
        let mut st = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(5);
        let mut next = move || {
            st ^= st << 13;
            st ^= st >> 7;
            st ^= st << 17;
            (st >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut coeffs = Vec::new();
        for _ in 0..n {
            let k = (next() * 7.0) as i32 - 3;
            let l = (next() * 9.0) as i32 - 4;
            coeffs.push(((k, l), Complex64::new(next() - 0.5, next() - 0.5)));
        }
        ModeFunction::from_coeffs(lattice, coeffs).unwrap()
    }

    fn rel1(a: &Form1, b: &Form1) -> f64 {
        let scale = a.max_coeff().max(b.max_coeff()).max(1.0);
        a.sub(b).max_coeff() / scale
    }

    #[test]
    fn d0_of_zero_and_constants() {
        let l = lat();
        assert_eq!(d0(&ModeFunction::zero(l)), Form1::zero(l));
        // the image of g_{0,0} follows the generator actions at k = l = 0
        let q: f64 = 0.5;
        let b = ModeFunction::basis(l, 0, 0);
        let w = d0(&b);
        let c_one = 1.0 / (1.0 - q * q);
        assert!((w.alpha.coeff(0, -1).re - c_one).abs() < 1e-14);
        assert!((w.alpha.coeff(-1, -1).re + c_one * q).abs() < 1e-14);
        let c_inv = 1.0 / (q.powi(-2) - 1.0);
        assert!((w.beta.coeff(1, 1).re - c_inv * q.powi(-1)).abs() < 1e-14);
        assert!((w.beta.coeff(0, 1).re + c_inv).abs() < 1e-14);
    }

    #[test]
    fn d1_after_d0_vanishes() {
        let l = lat();
        for seed in 0..6u64 {
            let f = rand_fn(l, seed, 12);
            let dd = d1(&d0(&f));
            let scale = d0(&f).max_coeff().max(1.0);
            assert!(dd.max_coeff() / scale < 1e-12);
        }
    }

    #[test]
    fn d1_single_term() {
        let l = lat();
        let f = rand_fn(l, 31, 8);
        let w = Form1 {
            alpha: f.clone(),
            beta: ModeFunction::zero(l),
        };
        let got = d1(&w);
        let want = q_diff(&f, DiffOp::LzBar).scale(Complex64::new(-1.0, 0.0));
        assert!(got.gamma.sub(&want).max_coeff() < 1e-14 * want.max_coeff().max(1.0));
        assert_eq!(d1(&Form1::zero(l)), Form2::zero(l));
    }

    #[test]
    fn leibniz_for_d0() {
        // d(fg) = df·g + f·dg with the right action moving g through the frame
        let l = lat();
        let f = rand_fn(l, 51, 8);
        let g = rand_fn(l, 52, 8);
        let lhs = d0(&f.multiply(&g));
        let rhs = d0(&f).right_mul(&g).add(&d0(&g).left_mul(&f));
        assert!(rel1(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn graded_leibniz_for_d1() {
        let l = lat();
        let f = rand_fn(l, 61, 8);
        let w = Form1 {
            alpha: rand_fn(l, 62, 8),
            beta: rand_fn(l, 63, 8),
        };
        let lhs = d1(&w.left_mul(&f));
        let rhs = wedge(&d0(&f), &w).gamma.add(&f.multiply(&d1(&w).gamma));
        let scale = lhs.max_coeff().max(rhs.max_coeff()).max(1.0);
        assert!(lhs.gamma.sub(&rhs).max_coeff() / scale < 1e-12);
    }

    #[test]
    fn commute_through_on_basis() {
        let l = lat();
        // past dz: single mode picks up q^{−l} and moves one circle out
        let b = ModeFunction::basis(l, 2, 3);
        let moved = commute_through(&b, PastDirection::PastDz);
        assert!((moved.coeff(3, 3) - Complex64::new(8.0, 0.0)).norm() < 1e-12);
        // l = 0 modes only relocate
        let c = ModeFunction::basis(l, 1, 0);
        let moved = commute_through(&c, PastDirection::PastDz);
        assert_eq!(moved, ModeFunction::basis(l, 2, 0));
    }

    #[test]
    fn commute_through_roundtrip() {
        let l = lat();
        let f = rand_fn(l, 71, 10);
        let back = shift(&commute_through(&f, PastDirection::PastDz), 1, 1);
        assert!(rel1(
            &Form1 { alpha: back, beta: ModeFunction::zero(l) },
            &Form1 { alpha: f.clone(), beta: ModeFunction::zero(l) }
        ) < 1e-14);
        let back2 = shift(&commute_through(&f, PastDirection::PastDzBar), -1, 1);
        assert!(back2.sub(&f).max_coeff() < 1e-14 * f.max_coeff().max(1.0));
    }

    #[test]
    fn star_compatible_with_d0() {
        let l = lat();
        let f = rand_fn(l, 81, 10);
        let a = d0(&f).star();
        let b = d0(&f.conjugate());
        assert!(rel1(&a, &b) < 1e-12);
        // involution
        let w = Form1 {
            alpha: rand_fn(l, 82, 8),
            beta: rand_fn(l, 83, 8),
        };
        assert!(rel1(&w.star().star(), &w) < 1e-14);
    }

    #[test]
    fn omega_frame_roundtrip() {
        let l = lat();
        let w = Form1 {
            alpha: rand_fn(l, 91, 10),
            beta: rand_fn(l, 92, 10),
        };
        let (om, omb) = to_omega_frame(&w);
        let back = from_omega_frame(&om, &omb);
        assert!(rel1(&back, &w) < 1e-13);
        let (zo, zob) = to_omega_frame(&Form1::zero(l));
        assert!(zo.is_empty() && zob.is_empty());
    }

    #[test]
    fn omega_frame_of_coordinate_differential() {
        // w = d(z restricted to circle k): the ω coefficient is
        // (q²−1)·z·Lz(q^k g_{k,1})
        let l = lat();
        let q: f64 = 0.5;
        let k = 1;
        let zk = ModeFunction::basis(l, k, 1).scale(Complex64::new(q.powi(k), 0.0));
        let w = d0(&zk);
        let (om, _) = to_omega_frame(&w);
        let want = mult_coord(&q_diff(&zk, DiffOp::Lz), CoordOp::Z)
            .scale(Complex64::new(q * q - 1.0, 0.0));
        assert!(om.sub(&want).max_coeff() < 1e-14 * want.max_coeff().max(1.0));
    }

    #[test]
    fn df_expansions_agree() {
        let l = lat();
        let f = rand_fn(l, 101, 12);
        let expansions = df_expansions(&f);
        let canonical = d0(&f);
        for (i, e) in expansions.iter().enumerate() {
            assert!(rel1(e, &canonical) < 1e-13, "expansion {i}");
        }
    }
}
