//! Wave-vector lattice Z² \ {0}.
//!
//! Modes are integer vectors `k = (kx, ky)`; the anisotropic metric used for
//! cutoffs and norms is the scaled vector `k_L = (kx/L, ky)`. Only the positive
//! half-lattice Z²₊ = {kx > 0, or kx = 0 and ky > 0} is ever stored: the
//! amplitude at `-k` is the conjugate of the amplitude at `k`, so the reality
//! constraint cannot be violated by construction.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::float::Real;

/// A nonzero integer wave vector.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct WaveVector {
    pub kx: i64,
    pub ky: i64,
}

impl WaveVector {
    /// Construct a lattice vector. Panics on (0, 0), which is not in Z²∗.
    pub fn new(kx: i64, ky: i64) -> Self {
        assert!(kx != 0 || ky != 0, "(0,0) is not a lattice mode");
        WaveVector { kx, ky }
    }

    /// `-k`.
    pub fn neg(self) -> Self {
        WaveVector { kx: -self.kx, ky: -self.ky }
    }

    /// The mirrored vector `k̄ = (kx, -ky)`.
    pub fn mirror(self) -> Self {
        WaveVector { kx: self.kx, ky: -self.ky }
    }

    /// Componentwise sum; `None` if it lands on the origin.
    pub fn checked_add(self, other: Self) -> Option<Self> {
        let kx = self.kx + other.kx;
        let ky = self.ky + other.ky;
        if kx == 0 && ky == 0 {
            None
        } else {
            Some(WaveVector { kx, ky })
        }
    }

    /// Cross product `j × n = jx·ny − jy·nx`.
    pub fn cross(self, other: Self) -> i64 {
        self.kx * other.ky - self.ky * other.kx
    }

    /// True if `k` lies in the positive half-lattice Z²₊.
    pub fn is_positive_half(self) -> bool {
        self.kx > 0 || (self.kx == 0 && self.ky > 0)
    }

    /// Half-lattice representative and whether conjugation is needed to
    /// recover the amplitude at `self`.
    pub fn canonical(self) -> (Self, bool) {
        if self.is_positive_half() {
            (self, false)
        } else {
            (self.neg(), true)
        }
    }

    /// The scaled vector `k_L = (kx/L, ky)`.
    pub fn scaled<T: Real>(self, l: T) -> (T, T) {
        (T::from_f64_lossy(self.kx as f64) / l, T::from_f64_lossy(self.ky as f64))
    }

    /// `|k_L|² = (kx/L)² + ky²`.
    pub fn norm_sq_scaled<T: Real>(self, l: T) -> T {
        let (ax, ay) = self.scaled(l);
        ax * ax + ay * ay
    }
}

impl std::fmt::Display for WaveVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.kx, self.ky)
    }
}

/// Galerkin-truncated lattice: all modes with `|k_L| ≤ cutoff`, indexed over
/// the positive half-lattice in lexicographic `(kx, ky)` order.
#[derive(Debug)]
pub struct Lattice {
    l: f64,
    cutoff: f64,
    modes: Vec<WaveVector>,
    index: HashMap<WaveVector, u32>,
}

/// Cutoff membership uses a tiny relative slack so that modes sitting exactly
/// on the circle `|k_L| = N` are kept despite rounding in `kx/L`.
const CUTOFF_SLACK: f64 = 1e-9;

impl Lattice {
    pub fn new(l: f64, cutoff: f64) -> Arc<Self> {
        assert!(l > 0.0, "period ratio L must be positive");
        assert!(cutoff > 0.0, "cutoff must be positive");
        let mut modes = Vec::new();
        let kx_max = (cutoff * l).floor() as i64 + 1;
        let ky_max = cutoff.floor() as i64 + 1;
        for kx in 0..=kx_max {
            for ky in -ky_max..=ky_max {
                if kx == 0 && ky <= 0 {
                    continue;
                }
                let k = WaveVector { kx, ky };
                if Self::inside(l, cutoff, k) {
                    modes.push(k);
                }
            }
        }
        modes.sort();
        let index = modes
            .iter()
            .enumerate()
            .map(|(i, &k)| (k, i as u32))
            .collect();
        Arc::new(Lattice { l, cutoff, modes, index })
    }

    fn inside(l: f64, cutoff: f64, k: WaveVector) -> bool {
        k.norm_sq_scaled(l) <= cutoff * cutoff * (1.0 + CUTOFF_SLACK)
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Number of stored (half-lattice) modes.
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Half-lattice modes in lexicographic order.
    pub fn modes(&self) -> &[WaveVector] {
        &self.modes
    }

    /// Index of a half-lattice mode, if stored.
    pub fn index_of(&self, k: WaveVector) -> Option<usize> {
        self.index.get(&k).map(|&i| i as usize)
    }

    /// True if `k` (either half) is inside the truncation.
    pub fn contains(&self, k: WaveVector) -> bool {
        let (rep, _) = k.canonical();
        self.index.contains_key(&rep)
    }

    /// Iterate over the full truncated lattice (both halves).
    pub fn full_modes(&self) -> impl Iterator<Item = WaveVector> + '_ {
        self.modes.iter().copied().flat_map(|k| [k, k.neg()])
    }
}
