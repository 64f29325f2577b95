//! The quadratic convolution nonlinearity and its resonant/nonresonant split.
//!
//! In spectral variables the advection term is
//!
//! ```text
//! P_k(v) = ρ/(L(K+|k_L|²)) · Σ_{j+n=k} |n_L|² (j×n) v_j v_n
//! ```
//!
//! with triadic Galerkin truncation: a triad contributes only when all three
//! of `|j_L|, |n_L|, |k_L|` lie inside the cutoff, which keeps the quadratic
//! energy/enstrophy identities exact for the truncated system. The resonant
//! part `R_k` keeps triads with `λ_j + λ_n = λ_k`; the rest enters the
//! interaction-representation drift with the oscillating phase
//! `exp(-iβt(λ_j+λ_n-λ_k))`.

use num_complex::Complex;
use num_traits::Zero;

use crate::float::{Real, C};
use crate::lattice::{Lattice, WaveVector};
use crate::params::{dispersion, ModelParams};
use crate::state::SpectralState;

/// Default relative tolerance for floating-point resonance decisions, used
/// only when exact rational parameters are unavailable.
pub const DEFAULT_RESONANCE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
struct TriadEntry<T> {
    j_idx: u32,
    j_conj: bool,
    n_idx: u32,
    n_conj: bool,
    /// Full coefficient `ρ/(L(K+|k_L|²)) · |n_L|² · (j×n)`.
    w: T,
    /// Frequency defect `λ_j + λ_n - λ_k`.
    delta: T,
    resonant: bool,
}

/// Precomputed triads for every half-lattice output mode.
pub struct TriadTable<T: Real> {
    lattice: std::sync::Arc<Lattice>,
    entries: Vec<TriadEntry<T>>,
    offsets: Vec<u32>,
    n_resonant: usize,
}

impl<T: Real> TriadTable<T> {
    pub fn build(lattice: &std::sync::Arc<Lattice>, params: &ModelParams) -> Self {
        Self::build_with_tol(lattice, params, DEFAULT_RESONANCE_TOL)
    }

    /// `tol` only matters for the floating resonance path; the exact path is
    /// taken whenever `params.exact` is present.
    pub fn build_with_tol(
        lattice: &std::sync::Arc<Lattice>,
        params: &ModelParams,
        tol: f64,
    ) -> Self {
        let l = params.l;
        let modes = lattice.modes();
        let full: Vec<WaveVector> = lattice.full_modes().collect();
        let lambda_scale = full
            .iter()
            .map(|&k| dispersion::<f64>(k, params).abs())
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);

        let mut entries = Vec::new();
        let mut offsets = Vec::with_capacity(modes.len() + 1);
        offsets.push(0u32);
        let mut n_resonant = 0usize;
        for &k in modes {
            let pref = params.rho / (l * (params.k_froude + k.norm_sq_scaled(l)));
            let lam_k = dispersion::<f64>(k, params);
            for &j in &full {
                let n = match k.checked_add(j.neg()) {
                    Some(n) => n,
                    None => continue,
                };
                if !lattice.contains(n) {
                    continue;
                }
                let cross = j.cross(n);
                let w = pref * n.norm_sq_scaled(l) * cross as f64;
                let delta =
                    dispersion::<f64>(j, params) + dispersion::<f64>(n, params) - lam_k;
                let resonant = match &params.exact {
                    Some(rp) => rp.cleared_defect(j, n, k).is_zero(),
                    None => delta.abs() <= tol * lambda_scale,
                };
                if resonant {
                    n_resonant += 1;
                }
                let (j_rep, j_conj) = j.canonical();
                let (n_rep, n_conj) = n.canonical();
                entries.push(TriadEntry {
                    j_idx: lattice.index_of(j_rep).unwrap() as u32,
                    j_conj,
                    n_idx: lattice.index_of(n_rep).unwrap() as u32,
                    n_conj,
                    w: T::from_f64_lossy(w),
                    delta: T::from_f64_lossy(delta),
                    resonant,
                });
            }
            offsets.push(entries.len() as u32);
        }
        TriadTable { lattice: lattice.clone(), entries, offsets, n_resonant }
    }

    pub fn lattice(&self) -> &std::sync::Arc<Lattice> {
        &self.lattice
    }

    pub fn n_triads(&self) -> usize {
        self.entries.len()
    }

    pub fn n_resonant(&self) -> usize {
        self.n_resonant
    }

    fn check_state(&self, v: &SpectralState<T>) {
        assert!(
            std::sync::Arc::ptr_eq(v.lattice(), &self.lattice),
            "state support does not match the triad table's truncation"
        );
    }

    fn sum_mode(&self, v: &SpectralState<T>, k_idx: usize, filter: Filter, tau: T) -> C<T> {
        let lo = self.offsets[k_idx] as usize;
        let hi = self.offsets[k_idx + 1] as usize;
        let mut acc = Complex::new(T::zero(), T::zero());
        for e in &self.entries[lo..hi] {
            match filter {
                Filter::All => {}
                Filter::Resonant => {
                    if !e.resonant {
                        continue;
                    }
                }
                Filter::NonResonant | Filter::NonResonantPhase => {
                    if e.resonant {
                        continue;
                    }
                }
            }
            let vj = v.get_indexed(e.j_idx as usize, e.j_conj);
            let vn = v.get_indexed(e.n_idx as usize, e.n_conj);
            let mut term = vj * vn * e.w;
            if matches!(filter, Filter::NonResonantPhase) {
                let phase = Complex::from_polar(T::one(), -tau * e.delta);
                term = term * phase;
            }
            acc += term;
        }
        acc
    }

    fn map(&self, v: &SpectralState<T>, filter: Filter, tau: T) -> SpectralState<T> {
        self.check_state(v);
        let mut out = SpectralState::zero(self.lattice.clone());
        for k_idx in 0..self.lattice.len() {
            out.amplitudes_mut()[k_idx] = self.sum_mode(v, k_idx, filter, tau);
        }
        out
    }

    /// Full convolution `P(v)`.
    pub fn full(&self, v: &SpectralState<T>) -> SpectralState<T> {
        self.map(v, Filter::All, T::zero())
    }

    /// Resonant projection `R(v)`: triads with exactly vanishing defect.
    pub fn resonant(&self, v: &SpectralState<T>) -> SpectralState<T> {
        self.map(v, Filter::Resonant, T::zero())
    }

    /// Nonresonant remainder `R^nr(v) = P(v) - R(v)` evaluated directly.
    pub fn nonresonant(&self, v: &SpectralState<T>) -> SpectralState<T> {
        self.map(v, Filter::NonResonant, T::zero())
    }

    /// The oscillatory drift of the interaction representation,
    /// `𝓡(a, τ)` with `τ = βt`: nonresonant triads carrying the phase
    /// `exp(-iτ·(λ_j+λ_n-λ_k))`.
    pub fn nonresonant_oscillatory(&self, a: &SpectralState<T>, tau: T) -> SpectralState<T> {
        self.map(a, Filter::NonResonantPhase, tau)
    }

    /// Coefficient/defect pairs `(w·a_j·a_n, Δ)` of the nonresonant triads
    /// feeding one output mode, for closed-form time integration.
    pub fn oscillatory_terms(&self, a: &SpectralState<T>, k: WaveVector) -> Vec<(C<T>, T)> {
        self.check_state(a);
        let (rep, conj) = k.canonical();
        let k_idx = self
            .lattice
            .index_of(rep)
            .expect("target mode outside the truncation");
        let lo = self.offsets[k_idx] as usize;
        let hi = self.offsets[k_idx + 1] as usize;
        let mut terms = Vec::new();
        for e in &self.entries[lo..hi] {
            if e.resonant {
                continue;
            }
            let aj = a.get_indexed(e.j_idx as usize, e.j_conj);
            let an = a.get_indexed(e.n_idx as usize, e.n_conj);
            let c = aj * an * e.w;
            // Requesting the negative-half mode conjugates both the
            // coefficient and the phase sign.
            if conj {
                terms.push((c.conj(), -e.delta));
            } else {
                terms.push((c, e.delta));
            }
        }
        terms
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Filter {
    All,
    Resonant,
    NonResonant,
    NonResonantPhase,
}

/// Full convolution through a freshly built table; the table should be reused
/// when stepping.
pub fn full_nonlinearity<T: Real>(
    v: &SpectralState<T>,
    params: &ModelParams,
) -> SpectralState<T> {
    TriadTable::build(v.lattice(), params).full(v)
}

/// `sup_{0≤t≤t_max} |∫_0^t 𝓡_k(a, βs) ds|` for a frozen state, via exact
/// term-wise integration of the phases:
///
/// ```text
/// ∫_0^t c·e^{-iβsΔ} ds = c·(1 - e^{-iβtΔ})/(iβΔ)
/// ```
///
/// The supremum is taken over a grid fine enough to resolve the fastest
/// oscillation present.
pub fn oscillatory_sup_integral(
    a: &SpectralState<f64>,
    k: WaveVector,
    table: &TriadTable<f64>,
    beta: f64,
    t_max: f64,
) -> f64 {
    let terms = table.oscillatory_terms(a, k);
    if terms.is_empty() {
        return 0.0;
    }
    let max_delta = terms.iter().map(|&(_, d)| d.abs()).fold(0.0f64, f64::max);
    let periods = beta * max_delta * t_max / (2.0 * std::f64::consts::PI);
    let n_grid = ((periods * 16.0).ceil() as usize).clamp(2_000, 2_000_000);
    let mut sup = 0.0f64;
    for i in 0..=n_grid {
        let t = t_max * i as f64 / n_grid as f64;
        let mut f = Complex::<f64>::zero();
        for &(c, delta) in &terms {
            let z = Complex::new(0.0, -beta * t * delta).exp();
            f += c * (Complex::new(1.0, 0.0) - z) / Complex::new(0.0, beta * delta);
        }
        sup = sup.max(f.norm());
    }
    sup
}

/// Least-squares slope of `log sup-integral` against `log β`; the averaged
/// oscillatory drift should vanish like `1/β` (slope ≈ -1).
pub fn oscillatory_decay_slope(
    a: &SpectralState<f64>,
    k: WaveVector,
    table: &TriadTable<f64>,
    betas: &[f64],
    t_max: f64,
) -> f64 {
    assert!(betas.len() >= 2);
    let pts: Vec<(f64, f64)> = betas
        .iter()
        .map(|&b| (b.ln(), oscillatory_sup_integral(a, k, table, b, t_max).ln()))
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::float::c;
    use crate::params::{NoiseLaw, RationalParams};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    fn params(cutoff: f64) -> ModelParams {
        ModelParams::from_rational(
            RationalParams::from_ints(1, 0),
            1.0,
            1.0,
            1.0,
            cutoff,
            NoiseLaw::default(),
        )
    }

    fn random_state(lat: Arc<Lattice>, seed: u64) -> SpectralState<f64> {
        let mut rng = StdRng::seed_from_u64(seed);
        SpectralState::from_fn(lat, |_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    /// Independent direct-summation oracle: loops over the raw integer
    /// ranges, no triad table involved.
    fn brute_force_p(v: &SpectralState<f64>, params: &ModelParams) -> SpectralState<f64> {
        let lat = v.lattice().clone();
        let l = params.l;
        let r = (params.cutoff_n * params.l).ceil() as i64 + 1;
        let ry = params.cutoff_n.ceil() as i64 + 1;
        SpectralState::from_fn(lat.clone(), |k| {
            let mut acc = c(0.0, 0.0);
            for jx in -r..=r {
                for jy in -ry..=ry {
                    if jx == 0 && jy == 0 {
                        continue;
                    }
                    let j = WaveVector::new(jx, jy);
                    let n = match k.checked_add(j.neg()) {
                        Some(n) => n,
                        None => continue,
                    };
                    if !lat.contains(j) || !lat.contains(n) {
                        continue;
                    }
                    let coef = n.norm_sq_scaled(l) * j.cross(n) as f64;
                    acc += v.get(j) * v.get(n) * coef;
                }
            }
            acc * (params.rho / (l * (params.k_froude + k.norm_sq_scaled(l))))
        })
    }

    #[test]
    fn matches_brute_force_oracle() {
        for cutoff in [2.0, 3.0, 4.0] {
            let p = params(cutoff);
            let lat = p.lattice();
            let v = random_state(lat.clone(), 42 + cutoff as u64);
            let fast = full_nonlinearity(&v, &p);
            let slow = brute_force_p(&v, &p);
            for i in 0..lat.len() {
                let d = (fast.amplitudes()[i] - slow.amplitudes()[i]).norm();
                assert!(d < 1e-12, "triad table deviates from direct sum: {d}");
            }
        }
    }

    #[test]
    fn single_pair_gives_zero() {
        // Support on {k, -k} only: j×n = 0 for every admissible triad.
        let p = params(4.0);
        let lat = p.lattice();
        let mut v = SpectralState::zero(lat.clone());
        v.set(WaveVector::new(1, 1), c(0.7, -0.3));
        let out = full_nonlinearity(&v, &p);
        for a in out.amplitudes() {
            assert_eq!(*a, c(0.0, 0.0));
        }
    }

    #[test]
    fn quadratic_homogeneity() {
        let p = params(4.0);
        let lat = p.lattice();
        let v = random_state(lat.clone(), 5);
        let mut v2 = v.clone();
        v2.scale(3.0);
        let p1 = full_nonlinearity(&v, &p);
        let p2 = full_nonlinearity(&v2, &p);
        for i in 0..lat.len() {
            assert!((p2.amplitudes()[i] - p1.amplitudes()[i] * 9.0).norm() < 1e-10);
        }
    }

    #[test]
    fn output_respects_reality() {
        let p = params(4.0);
        let lat = p.lattice();
        let v = random_state(lat, 6);
        assert!(full_nonlinearity(&v, &p).reality_holds());
    }

    fn weighted_pairing(v: &SpectralState<f64>, pv: &SpectralState<f64>, power: i32) -> f64 {
        // Re Σ_k (K+|k_L|²)^power conj(v_k)·P_k over the full lattice.
        let p = params(v.lattice().cutoff());
        let mut sum = 0.0;
        for k in v.lattice().full_modes() {
            let w = (p.k_froude + k.norm_sq_scaled(p.l)).powi(power);
            sum += (v.get(k).conj() * pv.get(k)).re * w;
        }
        sum
    }

    #[test]
    fn energy_and_enstrophy_orthogonality() {
        for cutoff in [2.0, 3.0, 4.0, 5.0, 6.0] {
            let p = params(cutoff);
            let lat = p.lattice();
            let v = random_state(lat.clone(), 100 + cutoff as u64);
            let pv = full_nonlinearity(&v, &p);
            let scale: f64 = lat
                .full_modes()
                .map(|k| {
                    let w = p.k_froude + k.norm_sq_scaled(p.l);
                    w * v.get(k).norm() * pv.get(k).norm()
                })
                .sum::<f64>()
                .max(1e-300);
            assert!(weighted_pairing(&v, &pv, 1).abs() / scale < 1e-10);
            assert!(weighted_pairing(&v, &pv, 2).abs() / (scale * cutoff * cutoff) < 1e-10);
        }
    }

    #[test]
    fn resonant_part_vanishes_on_zonal_modes() {
        // kx = 0: the surviving pairs j = (jx, ky/2), n = (-jx, ky/2) cancel
        // by odd symmetry in jx.
        let p = params(4.0);
        let lat = p.lattice();
        let v = random_state(lat.clone(), 8);
        let table = TriadTable::build(&lat, &p);
        let res = table.resonant(&v);
        for (i, &k) in lat.modes().iter().enumerate() {
            if k.kx == 0 {
                assert!(
                    res.amplitudes()[i].norm() < 1e-13,
                    "resonant part at zonal mode {k} should cancel"
                );
            }
        }
    }

    #[test]
    fn split_reconstructs_full() {
        let p = params(4.0);
        let lat = p.lattice();
        let v = random_state(lat.clone(), 9);
        let table = TriadTable::build(&lat, &p);
        let full = table.full(&v);
        let res = table.resonant(&v);
        let non = table.nonresonant(&v);
        for i in 0..lat.len() {
            let d = (full.amplitudes()[i] - res.amplitudes()[i] - non.amplitudes()[i]).norm();
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn oscillatory_part_at_zero_time_is_nonresonant_part() {
        let p = params(3.0);
        let lat = p.lattice();
        let a = random_state(lat.clone(), 10);
        let table = TriadTable::build(&lat, &p);
        let osc = table.nonresonant_oscillatory(&a, 0.0);
        let non = table.nonresonant(&a);
        for i in 0..lat.len() {
            assert!((osc.amplitudes()[i] - non.amplitudes()[i]).norm() < 1e-14);
        }
    }

    #[test]
    #[should_panic(expected = "support does not match")]
    fn rejects_state_on_wrong_lattice() {
        let p = params(3.0);
        let table = TriadTable::build(&p.lattice(), &p);
        let other = SpectralState::<f64>::zero(Lattice::new(1.0, 5.0));
        let _ = table.full(&other);
    }
}
