//! Model parameters and the per-mode coefficient bundle.
//!
//! The dispersion relation and damping of the linearised equation are
//!
//! ```text
//! λ_k = -(kx/L) / (K + |k_L|²)          (Rossby frequency)
//! γ_k = (κ|k_L|⁴ + |k_L|²) / (K + |k_L|²)
//! b_k = d_k / (K + |k_L|²)
//! ```
//!
//! with `K` the Froude number and `d_k` the force amplitudes. Resonance
//! decisions need `L²` and `K` exactly, so `ModelParams` optionally carries a
//! rational view of the pair alongside the floating one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::float::Real;
use crate::lattice::{Lattice, WaveVector};

/// Exactly represented `(L², K)` for resonance arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalParams {
    pub l_sq: BigRational,
    pub k: BigRational,
}

impl RationalParams {
    pub fn new(l_sq: BigRational, k: BigRational) -> Self {
        assert!(l_sq.is_positive(), "L² must be positive");
        assert!(!k.is_negative(), "Froude number K must be nonnegative");
        RationalParams { l_sq, k }
    }

    pub fn from_ints(l_sq: i64, k: i64) -> Self {
        Self::new(
            BigRational::from_integer(BigInt::from(l_sq)),
            BigRational::from_integer(BigInt::from(k)),
        )
    }

    pub fn l_f64(&self) -> f64 {
        self.l_sq.to_f64().expect("L² out of f64 range").sqrt()
    }

    pub fn k_f64(&self) -> f64 {
        self.k.to_f64().expect("K out of f64 range")
    }

    /// `D_m(L²) = m_x² + L²(K + m_y²)`, the (positive) denominator of
    /// `-λ_m / (m_x L)` after clearing `L` from the frequency.
    pub fn denom(&self, m: WaveVector) -> BigRational {
        let mx2 = BigRational::from_integer(BigInt::from(m.kx * m.kx));
        let my2 = BigRational::from_integer(BigInt::from(m.ky * m.ky));
        mx2 + &self.l_sq * (&self.k + my2)
    }

    /// The resonance defect `λ_j + λ_n - λ_k` with the common factor `-L`
    /// cleared: `jx/D_j + nx/D_n - kx/D_k`. Exactly zero iff the triple is
    /// resonant.
    pub fn cleared_defect(&self, j: WaveVector, n: WaveVector, k: WaveVector) -> BigRational {
        let dj = self.denom(j);
        let dn = self.denom(n);
        let dk = self.denom(k);
        BigRational::from_integer(BigInt::from(j.kx)) / dj
            + BigRational::from_integer(BigInt::from(n.kx)) / dn
            - BigRational::from_integer(BigInt::from(k.kx)) / dk
    }

    /// The actual frequency defect `λ_j + λ_n - λ_k = -L · cleared_defect`,
    /// as a float.
    pub fn defect_f64(&self, j: WaveVector, n: WaveVector, k: WaveVector) -> f64 {
        -self.l_f64() * self.cleared_defect(j, n, k).to_f64().unwrap_or(f64::NAN)
    }
}

/// Force-amplitude law `d_k = c·(1 + |k_L|)^{-q}`. The decay exponent keeps
/// every `B_r` with `r ≤ (q-1)` finite even without truncation; `q = 4`
/// covers `B_2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseLaw {
    pub c: f64,
    pub q: f64,
}

impl Default for NoiseLaw {
    fn default() -> Self {
        NoiseLaw { c: 1.0, q: 4.0 }
    }
}

impl NoiseLaw {
    pub fn amplitude(&self, k: WaveVector, l: f64) -> f64 {
        self.c * (1.0 + k.norm_sq_scaled(l).sqrt()).powf(-self.q)
    }
}

/// The full physical/numerical parameter bundle.
#[derive(Clone, Debug)]
pub struct ModelParams {
    pub l: f64,
    pub k_froude: f64,
    pub beta: f64,
    pub rho: f64,
    pub kappa: f64,
    pub cutoff_n: f64,
    pub noise: NoiseLaw,
    /// Exact `(L², K)` when the parameters were given rationally; enables the
    /// exact resonance path. Absent for user-supplied irrational `L`.
    pub exact: Option<RationalParams>,
}

impl ModelParams {
    pub fn from_rational(
        rational: RationalParams,
        beta: f64,
        rho: f64,
        kappa: f64,
        cutoff_n: f64,
        noise: NoiseLaw,
    ) -> Self {
        let p = ModelParams {
            l: rational.l_f64(),
            k_froude: rational.k_f64(),
            beta,
            rho,
            kappa,
            cutoff_n,
            noise,
            exact: Some(rational),
        };
        p.validate();
        p
    }

    pub fn from_float(
        l: f64,
        k_froude: f64,
        beta: f64,
        rho: f64,
        kappa: f64,
        cutoff_n: f64,
        noise: NoiseLaw,
    ) -> Self {
        let p = ModelParams { l, k_froude, beta, rho, kappa, cutoff_n, noise, exact: None };
        p.validate();
        p
    }

    fn validate(&self) {
        assert!(self.l > 0.0, "L must be positive");
        assert!(self.k_froude >= 0.0, "K must be nonnegative");
        assert!(self.beta > 0.0, "beta must be positive");
        assert!(self.rho > 0.0, "rho must be positive");
        assert!(
            (0.0..=1.0).contains(&self.kappa),
            "kappa must lie in [0,1] (0 admissible only for the effective equation)"
        );
        assert!(self.cutoff_n > 0.0, "cutoff must be positive");
    }

    pub fn lattice(&self) -> std::sync::Arc<Lattice> {
        Lattice::new(self.l, self.cutoff_n)
    }

    /// `B_r = 2·Σ |k_L|^{2r} b_k²` over the truncated lattice. The stored
    /// modes cover half the sum, hence the factor 4.
    pub fn b_r(&self, lattice: &Lattice, r: f64) -> f64 {
        4.0 * lattice
            .modes()
            .iter()
            .map(|&k| {
                let nsq = k.norm_sq_scaled(self.l);
                let b = self.noise.amplitude(k, self.l) / (self.k_froude + nsq);
                nsq.powf(r) * b * b
            })
            .sum::<f64>()
    }
}

/// Rossby dispersion frequency `λ_k`.
pub fn dispersion<T: Real>(k: WaveVector, params: &ModelParams) -> T {
    let l = T::from_f64_lossy(params.l);
    let kf = T::from_f64_lossy(params.k_froude);
    let kx_over_l = T::from_f64_lossy(k.kx as f64) / l;
    -kx_over_l / (kf + k.norm_sq_scaled(l))
}

/// Damping coefficient `γ_k > 0`.
pub fn damping<T: Real>(k: WaveVector, params: &ModelParams) -> T {
    let l = T::from_f64_lossy(params.l);
    let kf = T::from_f64_lossy(params.k_froude);
    let kappa = T::from_f64_lossy(params.kappa);
    let nsq = k.norm_sq_scaled(l);
    (kappa * nsq * nsq + nsq) / (kf + nsq)
}

/// Noise coefficient `b_k = d_k/(K + |k_L|²)`.
pub fn noise_coefficient<T: Real>(k: WaveVector, params: &ModelParams) -> T {
    let nsq = k.norm_sq_scaled(params.l);
    T::from_f64_lossy(params.noise.amplitude(k, params.l) / (params.k_froude + nsq))
}

/// Per-mode coefficients cached over the half-lattice (index-aligned with
/// `Lattice::modes`).
#[derive(Clone, Debug)]
pub struct Coefficients<T: Real> {
    pub lambda: Vec<T>,
    pub gamma: Vec<T>,
    pub b: Vec<T>,
}

impl<T: Real> Coefficients<T> {
    pub fn compute(lattice: &Lattice, params: &ModelParams) -> Self {
        let mut lambda = Vec::with_capacity(lattice.len());
        let mut gamma = Vec::with_capacity(lattice.len());
        let mut b = Vec::with_capacity(lattice.len());
        for &k in lattice.modes() {
            lambda.push(dispersion(k, params));
            gamma.push(damping(k, params));
            b.push(noise_coefficient(k, params));
        }
        Coefficients { lambda, gamma, b }
    }
}
