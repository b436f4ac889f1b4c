//! The quantum exponential
//!     F(z) = Π_{j≥0} (1 + q^{2j} z̄) / (1 + q^{2j} z),
//! a unimodular function on Γ̄ with poles at z = −q^{−2j}, together with its
//! two-argument extension G(u, v) = Π (1 + q^{2j} v)/(1 + q^{2j} u), so that
//! F(z) = G(z, z̄). The extension is what the per-circle continuation acts
//! on: scaling u and v independently realizes f(q^s·w) for f = F(ζ·).
//!
//! On the singular circles (even k ≤ 0, angle π) the offending factor has
//! |q^{2j}z| = 1; along the circle it equals e^{−iu} away from u = π, and
//! that value is used everywhere, making F smooth on every circle and the
//! per-circle Fourier analysis spectrally accurate.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

use crate::error::QexpError;
use crate::lattice::{CirclePoint, QLattice};

pub const DEFAULT_TOL: f64 = 1e-12;

/// Evaluator with a fixed truncation tolerance.
#[derive(Debug, Clone, Copy)]
pub struct FqEvaluator {
    lattice: QLattice,
    tol: f64,
}

impl FqEvaluator {
    /// Tolerance must lie in (0, 1e-6].
    pub fn new(lattice: QLattice, tol: f64) -> Result<Self, QexpError> {
        if !(tol > 0.0 && tol <= 1e-6) {
            return Err(QexpError::InvalidTol(tol));
        }
        Ok(FqEvaluator { lattice, tol })
    }

    pub fn with_default_tol(lattice: QLattice) -> Self {
        FqEvaluator {
            lattice,
            tol: DEFAULT_TOL,
        }
    }

    pub fn lattice(&self) -> QLattice {
        self.lattice
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Number of retained factors for arguments of modulus up to `max_abs`.
    ///
    /// For j ≥ N with q^{2N}·max_abs ≤ 1/2 each tail factor satisfies
    /// |factor − 1| ≤ 2 q^{2j} max_abs / (1 − q^{2j} max_abs) ≤ 4 q^{2j} max_abs,
    /// so the summed tail is at most 4·max_abs·q^{2N}/(1−q²) and the
    /// multiplicative tail error at most twice that. N is the smallest index
    /// making this bound ≤ tol.
    pub fn truncation_index(&self, max_abs: f64) -> usize {
        if max_abs == 0.0 {
            return 1;
        }
        let q = self.lattice.q();
        let half_life = 2.0 * (1.0 / q).ln();
        let n_small = ((2.0 * max_abs).ln() / half_life).ceil().max(0.0);
        let n_tol = ((8.0 * max_abs / (self.tol * (1.0 - q * q))).ln() / half_life)
            .ceil()
            .max(0.0);
        n_small.max(n_tol) as usize + 1
    }

    /// F at a lattice point, with the along-circle value substituted for the
    /// singular factor. Total on the lattice; exactly 1 on the positive real
    /// axis.
    pub fn fq_point(&self, p: &CirclePoint) -> Complex64 {
        let q = self.lattice.q();
        let k = p.k();
        let theta = p.theta();
        let n = self.truncation_index(self.lattice.radius(k));
        let mut out = Complex64::new(1.0, 0.0);
        for j in 0..n as i32 {
            if 2 * j + k == 0 {
                // |q^{2j} z| = 1: the factor equals e^{−iθ} along the circle
                out *= Complex64::from_polar(1.0, -theta);
            } else {
                let w = Complex64::from_polar(q.powi(2 * j + k), theta);
                out *= (Complex64::new(1.0, 0.0) + w.conj()) / (Complex64::new(1.0, 0.0) + w);
            }
        }
        out
    }

    /// The extended product G(u, v). Errors when some denominator factor
    /// 1 + q^{2j}u vanishes exactly.
    pub fn fq_extended(&self, u: Complex64, v: Complex64) -> Result<Complex64, QexpError> {
        let q = self.lattice.q();
        let n = self.truncation_index(u.norm().max(v.norm()));
        let mut out = Complex64::new(1.0, 0.0);
        for j in 0..n {
            let s = q.powi(2 * j as i32);
            let den = Complex64::new(1.0, 0.0) + u * s;
            if den == Complex64::new(0.0, 0.0) {
                return Err(QexpError::Pole(j));
            }
            out *= (Complex64::new(1.0, 0.0) + v * s) / den;
        }
        Ok(out)
    }

    fn circle_spectrum(&self, n: i32, n_theta: usize) -> Vec<Complex64> {
        let mut samples: Vec<Complex64> = (0..n_theta)
            .map(|j| self.fq_point(&CirclePoint::new(n, TAU * j as f64 / n_theta as f64)))
            .collect();
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(n_theta).process(&mut samples);
        for v in samples.iter_mut() {
            *v /= n_theta as f64;
        }
        samples
    }

    /// Angular coefficients a_{n,l} = (1/2π)∫ F(q^n e^{iu}) e^{ilu} du for
    /// l ∈ [l_min, l_max], by the discrete transform on `n_theta` uniform
    /// samples. Requires `n_theta` a power of two, at least four times the
    /// window width and above the Nyquist index of the window.
    pub fn fq_circle_coeffs(
        &self,
        n: i32,
        l_min: i32,
        l_max: i32,
        n_theta: usize,
    ) -> Result<Vec<Complex64>, QexpError> {
        if l_min > l_max {
            return Err(QexpError::EmptyLWindow(l_min, l_max));
        }
        let width = (l_max - l_min + 1) as usize;
        let max_abs_l = l_min.abs().max(l_max.abs()) as usize;
        let min_needed = (4 * width).max(2 * max_abs_l + 1);
        if !n_theta.is_power_of_two() || n_theta < min_needed {
            return Err(QexpError::BadNTheta {
                got: n_theta,
                min: min_needed,
            });
        }
        let spectrum = self.circle_spectrum(n, n_theta);
        let m = n_theta as i32;
        Ok((l_min..=l_max)
            .map(|l| spectrum[(-l).rem_euclid(m) as usize])
            .collect())
    }

    /// |Σ_l |a_{n,l}|² − 1| over the full discrete spectrum of circle `n`.
    pub fn fq_circle_parseval_defect(&self, n: i32, n_theta: usize) -> Result<f64, QexpError> {
        if !n_theta.is_power_of_two() || n_theta < 4 {
            return Err(QexpError::BadNTheta {
                got: n_theta,
                min: 4,
            });
        }
        let spectrum = self.circle_spectrum(n, n_theta);
        let sum: f64 = spectrum.iter().map(|c| c.norm_sqr()).sum();
        Ok((sum - 1.0).abs())
    }

    /// Pointwise residual of the two derivative identities for F(ζ·) at z:
    /// the left difference quotients, built from the extended product, must
    /// reproduce −ζ/(1−q²)·F(ζz) and ζ̄/(1−q²)·F(ζz). Returns the larger of
    /// the two absolute residuals. Singular evaluation points propagate as
    /// errors so callers can skip and report them.
    pub fn fq_diff_identity_residual(
        &self,
        zeta: &CirclePoint,
        z: &CirclePoint,
    ) -> Result<f64, QexpError> {
        let q = self.lattice.q();
        let q2 = q * q;
        let zc = self.lattice.point(z);
        let zetac = self.lattice.point(zeta);
        let u = zetac * zc;
        let v = u.conj();
        let base = self.fq_extended(u, v)?;

        // Lz: f(q·qz) scales u by q², leaves v fixed
        let lhs_z = (base - self.fq_extended(u * q2, v)?) / ((1.0 - q2) * zc);
        let rhs_z = -zetac / (1.0 - q2) * base;

        // LzBar: f(q·q⁻¹z) scales v by q⁻², leaves u fixed
        let lhs_zbar =
            (self.fq_extended(u, v / q2)? - base) / ((q.powi(-2) - 1.0) * zc.conj());
        let rhs_zbar = zetac.conj() / (1.0 - q2) * base;

        Ok((lhs_z - rhs_z).norm().max((lhs_zbar - rhs_zbar).norm()))
    }
}
