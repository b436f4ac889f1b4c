//! The multiplicative lattice Γ = {z : |z| ∈ q^ℤ} ≅ ℤ×𝕋, its closure
//! Γ̄ = Γ ∪ {0}, the pairing χ and the two natural measures.
//!
//! Points are stored as (k, θ) with |z| = q^k and θ the standard argument in
//! [0, 2π). The origin is not representable; it carries no mass under any
//! measure used here and every operation treats it as a limit.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::ModeError;

/// The deformation parameter and the lattice geometry derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QLattice {
    q: f64,
}

impl QLattice {
    /// A lattice with parameter `q`, required to satisfy 0 < q < 1 strictly.
    pub fn new(q: f64) -> Result<Self, ModeError> {
        if !(q > 0.0 && q < 1.0) || !q.is_finite() {
            return Err(ModeError::InvalidQ(q));
        }
        Ok(QLattice { q })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn ln_q(&self) -> f64 {
        self.q.ln()
    }

    /// q^k, the radius of circle `k`.
    pub fn radius(&self, k: i32) -> f64 {
        self.q.powi(k)
    }

    /// Integer power q^e.
    pub fn qpow(&self, e: i32) -> f64 {
        self.q.powi(e)
    }

    /// Weight q^{2k} attached to circle `k` by the covariant measure μ.
    pub fn mu_weight(&self, k: i32) -> f64 {
        self.q.powi(2 * k)
    }

    /// The complex number q^k·e^{iθ}.
    pub fn point(&self, p: &CirclePoint) -> Complex64 {
        Complex64::from_polar(self.radius(p.k()), p.theta())
    }
}

/// A point of Γ: circle index `k` (modulus q^k) and angle θ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint {
    k: i32,
    theta: f64,
}

fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

impl CirclePoint {
    pub fn new(k: i32, theta: f64) -> Self {
        CirclePoint {
            k,
            theta: normalize_angle(theta),
        }
    }

    pub fn k(&self) -> i32 {
        self.k
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Group product: moduli multiply (indices add), angles add mod 2π.
    pub fn product(&self, other: &CirclePoint) -> CirclePoint {
        CirclePoint::new(self.k + other.k, self.theta + other.theta)
    }
}

/// The bicharacter pairing of two lattice points, e^{i(θ₁k₂ + θ₂k₁)}.
///
/// Unit modulus by construction; symmetric and multiplicative in each slot.
pub fn chi(g1: &CirclePoint, g2: &CirclePoint) -> Complex64 {
    Complex64::from_polar(
        1.0,
        g1.theta() * f64::from(g2.k()) + g2.theta() * f64::from(g1.k()),
    )
}

/// Haar integral over Γ of a function given by uniform angular samples on a
/// finite block of circles: each circle contributes the mean of its samples
/// with weight one.
///
/// Exact for integrands band-limited below the sample count. Errors on an
/// empty window.
pub fn integrate_haar_gamma(rows: &[Vec<Complex64>]) -> Result<Complex64, ModeError> {
    if rows.is_empty() {
        return Err(ModeError::EmptyWindow(0, -1));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for row in rows {
        if row.is_empty() {
            return Err(ModeError::BadSampleCount(0));
        }
        let sum: Complex64 = row.iter().sum();
        total += sum / row.len() as f64;
    }
    Ok(total)
}
