//! Frequency indices, Fourier fields on the square |n|_∞ ≤ R, projectors and the linear flow.

use std::io::{Read, Write};
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::fft::{fft_size, transform_2d};
use crate::error::{Error, Result};

/// A lattice frequency n ∈ Z².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreqIndex(pub i32, pub i32);

impl FreqIndex {
    pub const ZERO: FreqIndex = FreqIndex(0, 0);

    pub fn norm_sq(self) -> i64 {
        let (a, b) = (self.0 as i64, self.1 as i64);
        a * a + b * b
    }

    pub fn linf(self) -> u32 {
        self.0.unsigned_abs().max(self.1.unsigned_abs())
    }

    /// ⟨n⟩ = (1 + |n|²)^{1/2}.
    pub fn bracket(self) -> f64 {
        bracket_sq(self.norm_sq()).sqrt()
    }

    pub fn dot(self, other: FreqIndex) -> i64 {
        self.0 as i64 * other.0 as i64 + self.1 as i64 * other.1 as i64
    }
}

impl Add for FreqIndex {
    type Output = FreqIndex;
    fn add(self, o: FreqIndex) -> FreqIndex {
        FreqIndex(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for FreqIndex {
    type Output = FreqIndex;
    fn sub(self, o: FreqIndex) -> FreqIndex {
        FreqIndex(self.0 - o.0, self.1 - o.1)
    }
}

pub fn bracket_sq(norm_sq: i64) -> f64 {
    1.0 + norm_sq as f64
}

pub fn is_dyadic(n: u32) -> bool {
    n >= 1 && n.is_power_of_two()
}

/// Membership of |n|² in the dyadic block Q_N: |n| ≤ 1 for N = 1, N/2 < |n| ≤ N otherwise.
pub fn in_dyadic_block(norm_sq: i64, big_n: u32) -> bool {
    let nn = big_n as i64 * big_n as i64;
    if big_n == 1 {
        norm_sq <= 1
    } else {
        4 * norm_sq > nn && norm_sq <= nn
    }
}

/// All lattice points of the dyadic block Q_N in lexicographic order.
pub fn dyadic_block_points(big_n: u32) -> Vec<FreqIndex> {
    let r = big_n as i32;
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            let n = FreqIndex(a, b);
            if in_dyadic_block(n.norm_sq(), big_n) {
                out.push(n);
            }
        }
    }
    out
}

/// Spectral coefficients û(n) for |n|_∞ ≤ radius, stored row-major in (n.0, n.1).
#[derive(Clone, Debug, PartialEq)]
pub struct FourierField {
    radius: usize,
    coeffs: Vec<C64>,
}

impl FourierField {
    pub fn zeros(radius: usize) -> Self {
        let side = 2 * radius + 1;
        Self { radius, coeffs: vec![C64::new(0.0, 0.0); side * side] }
    }

    pub fn from_fn(radius: usize, mut f: impl FnMut(FreqIndex) -> C64) -> Self {
        let mut out = Self::zeros(radius);
        for (k, n) in Self::modes(radius).enumerate() {
            out.coeffs[k] = f(n);
        }
        out
    }

    /// c·e_n on a field of the given radius.
    pub fn single_mode(radius: usize, n: FreqIndex, c: C64) -> Self {
        let mut out = Self::zeros(radius);
        out.set(n, c);
        out
    }

    pub fn from_coeffs(radius: usize, coeffs: Vec<C64>) -> Result<Self> {
        let side = 2 * radius + 1;
        if coeffs.len() != side * side {
            return Err(Error::Invalid {
                field: "coeffs",
                reason: format!("expected {} values, got {}", side * side, coeffs.len()),
            });
        }
        Ok(Self { radius, coeffs })
    }

    /// Frequencies of a field with this radius, in storage order.
    pub fn modes(radius: usize) -> impl Iterator<Item = FreqIndex> {
        let r = radius as i32;
        (-r..=r).flat_map(move |a| (-r..=r).map(move |b| FreqIndex(a, b)))
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [C64] {
        &mut self.coeffs
    }

    pub fn contains(&self, n: FreqIndex) -> bool {
        n.linf() as usize <= self.radius
    }

    pub fn index(&self, n: FreqIndex) -> usize {
        let r = self.radius as i32;
        ((n.0 + r) as usize) * self.side() + (n.1 + r) as usize
    }

    /// Coefficient at n, zero outside the stored square.
    pub fn get(&self, n: FreqIndex) -> C64 {
        if self.contains(n) {
            self.coeffs[self.index(n)]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn set(&mut self, n: FreqIndex, c: C64) {
        assert!(self.contains(n), "frequency {n:?} outside radius {}", self.radius);
        let k = self.index(n);
        self.coeffs[k] = c;
    }

    pub fn iter(&self) -> impl Iterator<Item = (FreqIndex, C64)> + '_ {
        Self::modes(self.radius).zip(self.coeffs.iter().copied())
    }

    pub fn map(&self, mut f: impl FnMut(FreqIndex, C64) -> C64) -> Self {
        let coeffs = self.iter().map(|(n, c)| f(n, c)).collect();
        Self { radius: self.radius, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Σ|û(n)|², which is ∫|u|² under the normalized measure.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// ‖u‖_{H^s} = ‖⟨n⟩^s û‖_{ℓ²}.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.iter()
            .map(|(n, c)| bracket_sq(n.norm_sq()).powf(s) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ½∫|∇u|² = ½ Σ |n|²|û(n)|².
    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.iter().map(|(n, c)| n.norm_sq() as f64 * c.norm_sqr()).sum::<f64>()
    }

    pub fn scale(&self, a: C64) -> Self {
        self.map(|_, c| c * a)
    }

    pub fn conj(&self) -> Self {
        self.map(|_, c| c.conj())
    }

    /// Same coefficients on a field of a different radius (truncating or zero-extending).
    pub fn with_radius(&self, radius: usize) -> Self {
        Self::from_fn(radius, |n| self.get(n))
    }

    fn check_radius(&self, other: &Self) -> Result<()> {
        if self.radius != other.radius {
            Err(Error::RadiusMismatch(self.radius, other.radius))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_radius(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { radius: self.radius, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_radius(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { radius: self.radius, coeffs })
    }

    /// Samples u(x) at x = 2πj/m on an `m × m` grid, row-major; requires m ≥ 2R + 1.
    pub fn to_physical(&self, m: usize) -> Vec<C64> {
        assert!(m > 2 * self.radius, "grid {m} aliases radius {}", self.radius);
        let mut data = vec![C64::new(0.0, 0.0); m * m];
        for (n, c) in self.iter() {
            if c.re != 0.0 || c.im != 0.0 {
                data[wrap(n.0, m) * m + wrap(n.1, m)] = c;
            }
        }
        transform_2d(&mut data, m, true);
        data
    }

    /// Inverse of [`to_physical`](Self::to_physical), keeping modes |n|_∞ ≤ radius.
    pub fn from_physical(mut data: Vec<C64>, m: usize, radius: usize) -> Self {
        assert!(m > 2 * radius, "grid {m} aliases radius {radius}");
        transform_2d(&mut data, m, false);
        let norm = 1.0 / (m * m) as f64;
        Self::from_fn(radius, |n| data[wrap(n.0, m) * m + wrap(n.1, m)] * norm)
    }

    /// Grid size used for products of up to `degree` copies of this field.
    pub fn product_grid(&self, degree: usize) -> usize {
        fft_size(degree * self.radius + 1).max(2 * self.radius + 1)
    }

    /// Little-endian snapshot: u32 radius, then row-major (re, im) f32 pairs.
    pub fn write_snapshot(&self, mut w: impl Write) -> Result<()> {
        w.write_all(&(self.radius as u32).to_le_bytes())?;
        for c in &self.coeffs {
            w.write_all(&(c.re as f32).to_le_bytes())?;
            w.write_all(&(c.im as f32).to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_snapshot(mut r: impl Read) -> Result<Self> {
        let mut word = [0u8; 4];
        r.read_exact(&mut word)?;
        let radius = u32::from_le_bytes(word) as usize;
        let side = 2 * radius + 1;
        let mut coeffs = Vec::with_capacity(side * side);
        for _ in 0..side * side {
            r.read_exact(&mut word)?;
            let re = f32::from_le_bytes(word) as f64;
            r.read_exact(&mut word)?;
            let im = f32::from_le_bytes(word) as f64;
            coeffs.push(C64::new(re, im));
        }
        Ok(Self { radius, coeffs })
    }
}

impl Mul<f64> for &FourierField {
    type Output = FourierField;
    fn mul(self, a: f64) -> FourierField {
        self.map(|_, c| c * a)
    }
}

pub(crate) fn wrap(k: i32, m: usize) -> usize {
    k.rem_euclid(m as i32) as usize
}

/// Frequency selection for [`project`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Projection {
    /// P_N: |n| ≤ N.
    Leq,
    /// Q_N: the dyadic block.
    Dyadic,
    /// S_N = Σ_{M ≤ N} Q_M.
    LeqDyadic,
    /// S_N^⊥ f = f − S_N f.
    Complement,
}

pub fn project(f: &FourierField, mode: Projection, big_n: u32) -> Result<FourierField> {
    if big_n == 0 {
        return Err(Error::Invalid { field: "N", reason: "must be at least 1".into() });
    }
    if mode != Projection::Leq && !is_dyadic(big_n) {
        return Err(Error::NotDyadic(big_n));
    }
    if mode != Projection::Complement && big_n as usize > f.radius() {
        return Err(Error::BlockOutOfRange { n: big_n, radius: f.radius() });
    }
    let nn = big_n as i64 * big_n as i64;
    let keep: Box<dyn Fn(i64) -> bool> = match mode {
        Projection::Leq | Projection::LeqDyadic => Box::new(move |q| q <= nn),
        Projection::Dyadic => Box::new(move |q| in_dyadic_block(q, big_n)),
        Projection::Complement => Box::new(move |q| q > nn),
    };
    Ok(f.map(|n, c| if keep(n.norm_sq()) { c } else { C64::new(0.0, 0.0) }))
}

/// P_N without range checks: zero every |n| > N.
pub fn low_pass(f: &FourierField, big_n: u32) -> FourierField {
    let nn = big_n as i64 * big_n as i64;
    f.map(|n, c| if n.norm_sq() <= nn { c } else { C64::new(0.0, 0.0) })
}

/// e^{itΔ}: multiplies û(n) by e^{−it|n|²}.
pub fn linear_flow(f: &FourierField, t: f64) -> FourierField {
    f.map(|n, c| c * C64::from_polar(1.0, -t * n.norm_sq() as f64))
}
