//! Functions on Γ̄ as finite combinations of the orthogonal basis g_{k,l},
//! where g_{k,l}(q^k e^{iθ}) = e^{ilθ} on the circle of radius q^k and zero
//! elsewhere.
//!
//! The span of finitely many g_{k,l} is dense in L²(Γ̄) and is preserved by
//! every operator in this library, so all identities are verified on it.
//! Coefficients are held sparsely; operators grow support instead of
//! clipping, which keeps algebraic identities exact.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::error::ModeError;
use crate::lattice::{integrate_haar_gamma, CirclePoint, QLattice};

pub mod io;

/// A finitely supported coefficient table over the basis g_{k,l}.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeFunction {
    lattice: QLattice,
    coeffs: BTreeMap<(i32, i32), Complex64>,
}

impl ModeFunction {
    pub fn zero(lattice: QLattice) -> Self {
        ModeFunction {
            lattice,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis element g_{k,l}.
    pub fn basis(lattice: QLattice, k: i32, l: i32) -> Self {
        let mut f = ModeFunction::zero(lattice);
        f.coeffs.insert((k, l), Complex64::new(1.0, 0.0));
        f
    }

    pub fn from_coeffs<I>(lattice: QLattice, coeffs: I) -> Result<Self, ModeError>
    where
        I: IntoIterator<Item = ((i32, i32), Complex64)>,
    {
        let mut f = ModeFunction::zero(lattice);
        for ((k, l), c) in coeffs {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(ModeError::NonFinite(k, l));
            }
            f.accumulate(k, l, c);
        }
        Ok(f)
    }

    pub fn lattice(&self) -> QLattice {
        self.lattice
    }

    pub fn q(&self) -> f64 {
        self.lattice.q()
    }

    /// Coefficient at (k, l), zero when absent.
    pub fn coeff(&self, k: i32, l: i32) -> Complex64 {
        self.coeffs
            .get(&(k, l))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, i32, Complex64)> + '_ {
        self.coeffs.iter().map(|(&(k, l), &c)| (k, l, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn accumulate(&mut self, k: i32, l: i32, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.coeffs.entry((k, l)) {
            Entry::Vacant(e) => {
                if c != Complex64::new(0.0, 0.0) {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v == Complex64::new(0.0, 0.0) {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    /// Radial support range, `None` for the zero function.
    pub fn support_k(&self) -> Option<(i32, i32)> {
        let lo = self.coeffs.keys().map(|&(k, _)| k).min()?;
        let hi = self.coeffs.keys().map(|&(k, _)| k).max()?;
        Some((lo, hi))
    }

    /// Angular support range, `None` for the zero function.
    pub fn support_l(&self) -> Option<(i32, i32)> {
        let lo = self.coeffs.keys().map(|&(_, l)| l).min()?;
        let hi = self.coeffs.keys().map(|&(_, l)| l).max()?;
        Some((lo, hi))
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Pointwise value at a lattice point: Σ_l c_{k,l} e^{ilθ} on circle k.
    pub fn eval(&self, p: &CirclePoint) -> Complex64 {
        let k = p.k();
        let range = self.coeffs.range((k, i32::MIN)..=(k, i32::MAX));
        let mut v = Complex64::new(0.0, 0.0);
        for (&(_, l), &c) in range {
            v += c * Complex64::from_polar(1.0, f64::from(l) * p.theta());
        }
        v
    }

    pub fn scale(&self, s: Complex64) -> ModeFunction {
        let mut out = ModeFunction::zero(self.lattice);
        for (k, l, c) in self.iter() {
            out.accumulate(k, l, s * c);
        }
        out
    }

    pub fn add(&self, other: &ModeFunction) -> ModeFunction {
        let mut out = self.clone();
        for (k, l, c) in other.iter() {
            out.accumulate(k, l, c);
        }
        out
    }

    pub fn sub(&self, other: &ModeFunction) -> ModeFunction {
        let mut out = self.clone();
        for (k, l, c) in other.iter() {
            out.accumulate(k, l, -c);
        }
        out
    }

    /// Pointwise product, computed exactly as per-circle convolution in l.
    pub fn multiply(&self, other: &ModeFunction) -> ModeFunction {
        let mut out = ModeFunction::zero(self.lattice);
        let (Some((k_lo, k_hi)), Some(_)) = (self.support_k(), other.support_k()) else {
            return out;
        };
        for k in k_lo..=k_hi {
            let row1: Vec<(i32, Complex64)> = self
                .coeffs
                .range((k, i32::MIN)..=(k, i32::MAX))
                .map(|(&(_, l), &c)| (l, c))
                .collect();
            if row1.is_empty() {
                continue;
            }
            let row2: Vec<(i32, Complex64)> = other
                .coeffs
                .range((k, i32::MIN)..=(k, i32::MAX))
                .map(|(&(_, l), &c)| (l, c))
                .collect();
            if row2.is_empty() {
                continue;
            }
            // dense convolution of the two angular rows
            let lo = row1[0].0 + row2[0].0;
            let hi = row1[row1.len() - 1].0 + row2[row2.len() - 1].0;
            let mut dense = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
            for &(l1, c1) in &row1 {
                for &(l2, c2) in &row2 {
                    dense[(l1 + l2 - lo) as usize] += c1 * c2;
                }
            }
            for (i, c) in dense.into_iter().enumerate() {
                if c != Complex64::new(0.0, 0.0) {
                    out.accumulate(k, lo + i as i32, c);
                }
            }
        }
        out
    }

    /// Complex conjugate function: coefficient (k, l) ↦ conj of (k, −l).
    pub fn conjugate(&self) -> ModeFunction {
        let mut out = ModeFunction::zero(self.lattice);
        for (k, l, c) in self.iter() {
            out.accumulate(k, -l, c.conj());
        }
        out
    }

    /// ∫ f dμ = Σ_k q^{2k} c_{k,0}: only the angular means survive.
    pub fn integrate_mu(&self) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (k, l, c) in self.iter() {
            if l == 0 {
                total += c * self.lattice.mu_weight(k);
            }
        }
        total
    }

    /// ⟨f, g⟩ = Σ q^{2k} conj(f_{k,l}) g_{k,l}, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &ModeFunction) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (k, l, c) in self.iter() {
            let d = other.coeff(k, l);
            if d != Complex64::new(0.0, 0.0) {
                total += c.conj() * d * self.lattice.mu_weight(k);
            }
        }
        total
    }

    /// L²(Γ̄) norm.
    pub fn norm_mu(&self) -> f64 {
        self.inner_product(self).re.max(0.0).sqrt()
    }

    /// Restriction to circles k ∈ [lo, hi].
    pub fn restrict_k(&self, lo: i32, hi: i32) -> ModeFunction {
        let mut out = ModeFunction::zero(self.lattice);
        for (k, l, c) in self.iter() {
            if k >= lo && k <= hi {
                out.accumulate(k, l, c);
            }
        }
        out
    }

    /// Uniform angular samples on circles [k_min, k_max]. Requires the strict
    /// band limit n_theta > 2·max|l|.
    pub fn to_samples(
        &self,
        k_min: i32,
        k_max: i32,
        n_theta: usize,
    ) -> Result<SampledFunction, ModeError> {
        if k_min > k_max {
            return Err(ModeError::EmptyWindow(k_min, k_max));
        }
        if n_theta == 0 || n_theta % 2 != 0 {
            return Err(ModeError::BadSampleCount(n_theta));
        }
        let max_abs_l = self
            .support_l()
            .map(|(lo, hi)| lo.abs().max(hi.abs()))
            .unwrap_or(0);
        if n_theta <= 2 * max_abs_l as usize {
            return Err(ModeError::BandLimit { n_theta, max_abs_l });
        }
        let values = (k_min..=k_max)
            .map(|k| {
                (0..n_theta)
                    .map(|j| self.eval(&CirclePoint::new(k, TAU * j as f64 / n_theta as f64)))
                    .collect()
            })
            .collect();
        Ok(SampledFunction {
            lattice: self.lattice,
            k_min,
            k_max,
            n_theta,
            values,
        })
    }
}

/// A function held as uniform angular samples on a block of circles.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    lattice: QLattice,
    k_min: i32,
    k_max: i32,
    n_theta: usize,
    values: Vec<Vec<Complex64>>,
}

impl SampledFunction {
    pub fn from_fn<F>(
        lattice: QLattice,
        k_min: i32,
        k_max: i32,
        n_theta: usize,
        f: F,
    ) -> Result<Self, ModeError>
    where
        F: Fn(&CirclePoint) -> Complex64,
    {
        if k_min > k_max {
            return Err(ModeError::EmptyWindow(k_min, k_max));
        }
        if n_theta == 0 || n_theta % 2 != 0 {
            return Err(ModeError::BadSampleCount(n_theta));
        }
        let values = (k_min..=k_max)
            .map(|k| {
                (0..n_theta)
                    .map(|j| f(&CirclePoint::new(k, TAU * j as f64 / n_theta as f64)))
                    .collect()
            })
            .collect();
        Ok(SampledFunction {
            lattice,
            k_min,
            k_max,
            n_theta,
            values,
        })
    }

    pub fn lattice(&self) -> QLattice {
        self.lattice
    }

    pub fn k_window(&self) -> (i32, i32) {
        (self.k_min, self.k_max)
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn value(&self, k: i32, j: usize) -> Complex64 {
        self.values[(k - self.k_min) as usize][j]
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.values
    }

    /// Map each sample through `f` (used for pointwise sample-domain oracles).
    pub fn map<F>(&self, f: F) -> SampledFunction
    where
        F: Fn(i32, usize, Complex64) -> Complex64,
    {
        let mut out = self.clone();
        for (ki, row) in out.values.iter_mut().enumerate() {
            let k = self.k_min + ki as i32;
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(k, j, *v);
            }
        }
        out
    }

    /// Quadrature for ∫·dμ: weighted circle means, exact below the band limit.
    pub fn integrate_mu_quadrature(&self) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (ki, row) in self.values.iter().enumerate() {
            let k = self.k_min + ki as i32;
            let sum: Complex64 = row.iter().sum();
            total += sum * (self.lattice.mu_weight(k) / row.len() as f64);
        }
        total
    }

    /// Haar integral over Γ restricted to the sampled window.
    pub fn integrate_haar(&self) -> Result<Complex64, ModeError> {
        integrate_haar_gamma(&self.values)
    }

    /// Per-circle discrete angular Fourier analysis back to mode
    /// coefficients for l ∈ [l_min, l_max]. The requested window must sit
    /// strictly below the Nyquist index.
    pub fn to_modes(&self, l_min: i32, l_max: i32) -> Result<ModeFunction, ModeError> {
        if l_min > l_max {
            return Err(ModeError::EmptyWindow(l_min, l_max));
        }
        let max_abs_l = l_min.abs().max(l_max.abs());
        if self.n_theta <= 2 * max_abs_l as usize {
            return Err(ModeError::BandLimit {
                n_theta: self.n_theta,
                max_abs_l,
            });
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(self.n_theta);
        let mut out = ModeFunction::zero(self.lattice);
        let m = self.n_theta as i32;
        for (ki, row) in self.values.iter().enumerate() {
            let k = self.k_min + ki as i32;
            let mut buf = row.clone();
            fft.process(&mut buf);
            for l in l_min..=l_max {
                let idx = l.rem_euclid(m) as usize;
                let c = buf[idx] / self.n_theta as f64;
                out.accumulate(k, l, c);
            }
        }
        Ok(out)
    }
}
