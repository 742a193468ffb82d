//! Closed-form amplitudes for the lossless dynamics.
//!
//! These are the reference solutions the numerical propagators are checked
//! against. They assume `lambda_b = √2·lambda`, equal couplings for both
//! polarizations and the initial state `|e>_A |0,0,0> |g>_B`.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DVector;

use crate::basis::DIM;
use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::C64;

/// Amplitudes `d1..d9` of the exact model. Sinks carry no amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactAmplitudes {
    d: [C64; 9],
}

impl ExactAmplitudes {
    /// Amplitude `d_k` with the 1-based index used in the CSV labels.
    pub fn d(&self, k: usize) -> C64 {
        self.d[k - 1]
    }

    pub fn as_array(&self) -> [C64; 9] {
        self.d
    }

    /// `|d1|² + 2(|d2|² + |d3|² + |d4|² + |d5|²) - 1`.
    pub fn normalization_residual(&self) -> f64 {
        let tail: f64 = (1..5).map(|k| self.d[k].norm_sqr()).sum();
        self.d[0].norm_sqr() + 2.0 * tail - 1.0
    }

    /// Embeds the amplitudes into the 11-state basis.
    pub fn to_state(&self) -> StateVector {
        let mut v = DVector::zeros(DIM);
        for (k, d) in self.d.iter().enumerate() {
            v[k] = *d;
        }
        StateVector::from_raw(v)
    }
}

/// Amplitudes `d̃1..d̃5` of the normal-mode model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveAmplitudes {
    d: [C64; 5],
}

impl EffectiveAmplitudes {
    /// Amplitude `d̃_k`, 1-based.
    pub fn d(&self, k: usize) -> C64 {
        self.d[k - 1]
    }

    pub fn as_array(&self) -> [C64; 5] {
        self.d
    }

    /// `|d̃1|² + 2|d̃2|² + 2|d̃4|² - 1`.
    pub fn normalization_residual(&self) -> f64 {
        self.d[0].norm_sqr() + 2.0 * self.d[1].norm_sqr() + 2.0 * self.d[3].norm_sqr() - 1.0
    }

    pub fn to_state(&self) -> StateVector {
        StateVector::from_raw(DVector::from_column_slice(&self.d))
    }
}

/// Closed-form amplitudes of the exact model at time `t`.
pub fn exact_amplitudes(lambda: f64, nu: f64, t: f64) -> ExactAmplitudes {
    let l2 = lambda * lambda;
    let sum = l2 + nu * nu;
    let slow = SQRT_2 * lambda * t;
    let fast = (1.0 + nu * nu / l2).sqrt() * SQRT_2 * lambda * t;
    let (cs, ss) = (slow.cos(), slow.sin());
    let (cf, sf) = (fast.cos(), fast.sin());
    let ratio = lambda / sum.sqrt();

    let d1 = 0.5 * (cs + 1.0) + l2 / (2.0 * sum) * (cf - 1.0);
    let d2 = -(ss + ratio * sf) / (2.0 * SQRT_2);
    let d3 = lambda * nu / (2.0 * sum) * (cf - 1.0);
    let d4 = (ss - ratio * sf) / (2.0 * SQRT_2);
    let d5 = (nu * nu + l2 * cf - sum * cs) / (2.0 * SQRT_2 * sum);

    let d1 = C64::new(d1, 0.0);
    let d2 = C64::new(0.0, d2);
    let d3 = C64::new(d3, 0.0);
    let d4 = C64::new(0.0, d4);
    let d5 = C64::new(d5, 0.0);
    ExactAmplitudes {
        d: [d1, d2, d3, d4, d5, d2, d3, d4, d5],
    }
}

/// Closed-form amplitudes of the normal-mode model at time `t`.
pub fn effective_amplitudes(lambda: f64, t: f64) -> EffectiveAmplitudes {
    let phase = SQRT_2 * lambda * t;
    let d1 = C64::new((1.0 + phase.cos()) / 2.0, 0.0);
    let d2 = C64::new(0.0, -phase.sin() / 2.0);
    let d4 = C64::new((1.0 - phase.cos()) / (2.0 * SQRT_2), 0.0);
    EffectiveAmplitudes {
        d: [d1, d2, d2, d4, d4],
    }
}

/// `mπ/(√2 λ)` for odd positive `m`: the times at which the atoms reach the
/// target entangled state.
pub fn entanglement_time(lambda: f64, m: i64) -> Result<f64> {
    if m <= 0 || m % 2 == 0 {
        return Err(Error::InvalidArgument(format!("m must be odd and positive, got {m}")));
    }
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::InvalidArgument(format!("lambda must be > 0, got {lambda}")));
    }
    Ok(m as f64 * PI / (SQRT_2 * lambda))
}

/// `ν/λ = √(n² - 1)` for even positive `n`, where the fast and slow
/// oscillations realign so the fibre is empty at every entanglement time.
pub fn resonance_ratio(n: i64) -> Result<f64> {
    if n <= 0 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!("n must be even and positive, got {n}")));
    }
    Ok(((n * n - 1) as f64).sqrt())
}

/// The Bohr frequencies that drive the dynamics out of `|e>_A`: `0`,
/// `±√2λ` and `±√2λ·√(1 + ν²/λ²)`.
pub fn driven_frequencies(lambda: f64, nu: f64) -> [f64; 5] {
    let slow = SQRT_2 * lambda;
    let fast = slow * (1.0 + nu * nu / (lambda * lambda)).sqrt();
    [-fast, -slow, 0.0, slow, fast]
}
