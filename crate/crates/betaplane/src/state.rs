//! Spectral states, Sobolev norms and actions.
//!
//! A state is the coefficient vector `{v_k}` of a real field, so it obeys
//! `v_{-k} = conj(v_k)`. Amplitudes are stored for the positive half-lattice
//! only; reads at negative modes synthesise the conjugate and reads outside
//! the truncation return zero.

use std::sync::Arc;

use num_complex::Complex;

use crate::float::{Real, C};
use crate::lattice::{Lattice, WaveVector};

#[derive(Clone, Debug)]
pub struct SpectralState<T: Real> {
    lattice: Arc<Lattice>,
    amp: Vec<C<T>>,
}

impl<T: Real> SpectralState<T> {
    pub fn zero(lattice: Arc<Lattice>) -> Self {
        let amp = vec![Complex::new(T::zero(), T::zero()); lattice.len()];
        SpectralState { lattice, amp }
    }

    /// Build a state from a function on the half-lattice.
    pub fn from_fn(lattice: Arc<Lattice>, mut f: impl FnMut(WaveVector) -> C<T>) -> Self {
        let amp = lattice.modes().iter().map(|&k| f(k)).collect();
        SpectralState { lattice, amp }
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    /// Stored amplitudes, index-aligned with `lattice().modes()`.
    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amp
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C<T>] {
        &mut self.amp
    }

    /// Amplitude at any `k ∈ Z²∗`: stored value, conjugate, or zero outside
    /// the truncation.
    pub fn get(&self, k: WaveVector) -> C<T> {
        let (rep, conj) = k.canonical();
        match self.lattice.index_of(rep) {
            Some(i) => {
                if conj {
                    self.amp[i].conj()
                } else {
                    self.amp[i]
                }
            }
            None => Complex::new(T::zero(), T::zero()),
        }
    }

    /// Stored amplitude by half-lattice index with optional conjugation.
    #[inline]
    pub fn get_indexed(&self, idx: usize, conj: bool) -> C<T> {
        let v = self.amp[idx];
        if conj {
            v.conj()
        } else {
            v
        }
    }

    pub fn set(&mut self, k: WaveVector, value: C<T>) {
        let (rep, conj) = k.canonical();
        let i = self
            .lattice
            .index_of(rep)
            .expect("mode outside the truncated lattice");
        self.amp[i] = if conj { value.conj() } else { value };
    }

    /// `|v|²_{h^m} = Σ_{k∈Z²∗} |v_k|² |k_L|^{2m}` (both half-lattices).
    pub fn sobolev_norm_sq(&self, m: T) -> T {
        let l = T::from_f64_lossy(self.lattice.l());
        let two = T::one() + T::one();
        let mut sum = T::zero();
        for (i, &k) in self.lattice.modes().iter().enumerate() {
            let w = k.norm_sq_scaled(l).powf(m);
            sum += two * self.amp[i].norm_sqr() * w;
        }
        sum
    }

    pub fn sobolev_norm(&self, m: T) -> T {
        self.sobolev_norm_sq(m).sqrt()
    }

    /// Actions `I_k = |v_k|²/2` on the half-lattice (`I_{-k} = I_k`).
    pub fn actions(&self, time: T) -> ActionSample<T> {
        let half = T::from_f64_lossy(0.5);
        let actions = self.amp.iter().map(|v| v.norm_sqr() * half).collect();
        ActionSample { lattice: self.lattice.clone(), actions, time }
    }

    /// Largest modulus over stored modes.
    pub fn max_abs(&self) -> T {
        self.amp
            .iter()
            .map(|v| v.norm_sqr())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
            .sqrt()
    }

    pub fn scale(&mut self, c: T) {
        for v in &mut self.amp {
            *v = *v * c;
        }
    }

    /// Verify conjugate symmetry of the synthesised full state. True by
    /// construction; used as a structural assertion in tests.
    pub fn reality_holds(&self) -> bool {
        self.lattice
            .modes()
            .iter()
            .all(|&k| self.get(k.neg()) == self.get(k).conj())
    }
}

/// The action vector at one time.
#[derive(Clone, Debug)]
pub struct ActionSample<T: Real> {
    lattice: Arc<Lattice>,
    actions: Vec<T>,
    pub time: T,
}

impl<T: Real> ActionSample<T> {
    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    /// Actions aligned with `lattice().modes()`.
    pub fn values(&self) -> &[T] {
        &self.actions
    }

    pub fn get(&self, k: WaveVector) -> T {
        let (rep, _) = k.canonical();
        self.lattice
            .index_of(rep)
            .map(|i| self.actions[i])
            .unwrap_or_else(T::zero)
    }
}
